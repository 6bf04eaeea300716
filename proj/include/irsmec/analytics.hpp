#ifndef IRSMEC_ANALYTICS_HPP
#define IRSMEC_ANALYTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "irsmec/channel.hpp"

// Closed-form ergodic secrecy rates via Gamma moment matching plus Monte
// Carlo estimators used as cross-checks.
namespace irsmec {

// Shape/scale pair approximating a composite channel-gain distribution.
struct GammaApprox {
  double shape;  // mu
  double scale;  // nu
};

struct RateEstimate {
  double value;            // bit/s/Hz
  double std_error;        // 0 for closed-form results
  std::uint64_t trials;    // 0 for closed-form results
};

enum class LegitVariant { corrected, paper_as_printed };

// Ergodic-mean clamp (default) versus per-realization clamp, which estimates
// the upper bound E[(Cm - Cw)^+] instead of [E(Cm) - E(Cw)]^+.
enum class ClampMode { mean, per_realization };

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Substream seed for one MC trial; identical regardless of worker count.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return splitmix64(master ^ (0xD1B54A32D192ED03ULL * (trial + 1)));
}

// (1/Gamma(mu)) * integral_0^inf f(t) t^(mu-1) e^(-t) dt via a
// double-exponential transform t = exp(u - exp(-u)), trapezoid in u.
// The Gamma weight is evaluated in log space so large shapes stay finite.
template <typename F>
double gamma_expectation(double mu, F&& f, double step = 0.02) {
  const double lg = std::lgamma(mu);
  const double u_lo = -4.0, u_hi = 7.5;
  const int n_steps = static_cast<int>((u_hi - u_lo) / step);
  double acc = 0.0;
  for (int i = 0; i <= n_steps; ++i) {
    const double u = u_lo + i * step;
    const double e = std::exp(-u);
    const double ln_t = u - e;
    const double t = std::exp(ln_t);
    const double ln_w = mu * ln_t - t - lg;  // t^(mu-1) e^(-t) * dt/du / (1+e^-u) factor below
    if (ln_w < -745.0) continue;
    acc += std::exp(ln_w) * (1.0 + e) * f(t);
  }
  return acc * step;
}

}  // namespace detail

// Gamma fit of the aligned legitimate amplitude |l| + sum |a_n||h_n|.
// The corrected variant moment-matches exactly:
//   mean = sqrt(pi)/2 + N*pi/4,  var = (1 - pi/4) + N(1 - pi^2/16).
// The paper_as_printed variant keeps the published constants verbatim
// (kappa = (4 - pi^2/4)*pi and no factor N in nu1's numerator), which breaks
// the mean identity for N >= 2; it exists only for comparison.
inline GammaApprox legit_gamma_params(int N, LegitVariant variant = LegitVariant::corrected) {
  if (N < 1) throw std::invalid_argument("legit_gamma_params: N must be >= 1");
  const double pi = 3.14159265358979323846;
  const double eta = pi * pi / (16.0 - pi * pi);
  if (variant == LegitVariant::corrected) {
    const double kappa = (4.0 - pi * pi / 4.0) / pi;
    const double mu1 = std::pow(std::sqrt(pi) + 2.0 * eta * kappa * N, 2) /
                       (4.0 + 4.0 * eta * kappa * kappa * N - pi);
    const double nu1 = (4.0 + 4.0 * eta * kappa * kappa * N - pi) /
                       (2.0 * (std::sqrt(pi) + 2.0 * eta * kappa * N));
    return {mu1, nu1};
  }
  const double kappa = (4.0 - pi * pi / 4.0) * pi;
  const double mu1 = std::pow(std::sqrt(pi) + 2.0 * eta * kappa * N, 2) /
                     (4.0 + 4.0 * eta * kappa * kappa * N - pi);
  const double nu1 = (4.0 + 4.0 * eta * kappa * kappa - pi) /
                     (2.0 * (std::sqrt(pi) + 2.0 * eta * kappa * N));
  return {mu1, nu1};
}

// Gamma fit of the eavesdropper power |g + z^H Phi* h|^2:
// mean 1+N, variance (1+N)^2 + 2N.
inline GammaApprox eve_gamma_params(int N) {
  if (N < 1) throw std::invalid_argument("eve_gamma_params: N must be >= 1");
  const double n = static_cast<double>(N);
  const double mu2 = (1.0 + n) * (1.0 + n) / ((1.0 + n) * (1.0 + n) + 2.0 * n);
  const double nu2 = 1.0 + n + 2.0 * n / (1.0 + n);
  return {mu2, nu2};
}

// E[log2(1 + rho*X)], X ~ Gamma(shape, scale)
inline double ergodic_capacity_power(double rho, const GammaApprox& gamma, double step = 0.02) {
  if (rho < 0) throw std::invalid_argument("ergodic_capacity_power: rho must be >= 0");
  if (rho == 0) return 0.0;
  const double c = rho * gamma.scale;
  return detail::gamma_expectation(
      gamma.shape, [c](double t) { return std::log2(1.0 + c * t); }, step);
}

// E[log2(1 + rho*Y^2)], Y ~ Gamma(shape, scale)
inline double ergodic_capacity_amplitude(double rho, const GammaApprox& gamma, double step = 0.02) {
  if (rho < 0) throw std::invalid_argument("ergodic_capacity_amplitude: rho must be >= 0");
  if (rho == 0) return 0.0;
  const double c = rho * gamma.scale * gamma.scale;
  return detail::gamma_expectation(
      gamma.shape, [c](double t) { return std::log2(1.0 + c * t * t); }, step);
}

// [E(Cm|Phi*) - E(Cw|Phi*)]^+ from the Gamma fits.
inline double ergodic_secrecy_rate(int N, double alpha, double alpha_e, double P, double sigma2,
                                   double sigma2_e,
                                   LegitVariant variant = LegitVariant::corrected) {
  if (alpha <= 0 || alpha_e <= 0 || P <= 0 || sigma2 <= 0 || sigma2_e <= 0)
    throw std::invalid_argument("ergodic_secrecy_rate: all parameters must be positive");
  const double rho_m = alpha * alpha * P / sigma2;
  const double rho_w = alpha_e * alpha_e * P / sigma2_e;
  const double cm = ergodic_capacity_amplitude(rho_m, legit_gamma_params(N, variant));
  const double cw = ergodic_capacity_power(rho_w, eve_gamma_params(N));
  return std::max(0.0, cm - cw);
}

namespace detail {

// Runs one trial-value generator across [0, trials) on `threads` workers,
// storing into a per-trial buffer so the final reduction has a fixed order.
template <typename F>
RateEstimate reduce_trials(std::uint64_t trials, unsigned threads, ClampMode clamp, F&& per_trial) {
  if (trials < 1) throw std::invalid_argument("mc estimate: trials must be >= 1");
  std::vector<double> vals(trials);
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < trials; ++i) vals[i] = per_trial(i);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::uint64_t lo = w * chunk, hi = std::min<std::uint64_t>(trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&vals, lo, hi, &per_trial] {
        for (std::uint64_t i = lo; i < hi; ++i) vals[i] = per_trial(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  double sum = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    double v = (clamp == ClampMode::per_realization) ? std::max(0.0, vals[i]) : vals[i];
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  const double var = std::max(0.0, sum2 / n - mean * mean);
  double se = (trials > 1) ? std::sqrt(var / (n - 1.0)) : 0.0;
  double value = (clamp == ClampMode::mean) ? std::max(0.0, mean) : mean;
  return {value, se, trials};
}

}  // namespace detail

// Monte Carlo estimate of the ergodic secrecy rate with the per-realization
// optimal phase. The mean of the signed summand is clamped at zero; the
// standard error reported is that of the unclamped mean.
inline RateEstimate mc_ergodic_secrecy_rate(std::uint64_t seed, std::uint64_t trials, int N,
                                            double alpha, double alpha_e, double P, double sigma2,
                                            double sigma2_e, unsigned threads = 1,
                                            ClampMode clamp = ClampMode::mean) {
  if (N < 1) throw std::invalid_argument("mc_ergodic_secrecy_rate: N must be >= 1");
  auto per_trial = [=](std::uint64_t i) {
    std::mt19937_64 rng(detail::trial_seed(seed, i));
    ChannelRealization c = sample_channel(rng, N);
    PhaseShift phi = optimal_phase(c.l, c.aH, c.h);
    double cm = instantaneous_capacity(effective_gain(c.l, c.aH, c.h, phi), alpha, P, sigma2);
    double cw = instantaneous_capacity(effective_gain(c.g, c.zH, c.h, phi), alpha_e, P, sigma2_e);
    return instantaneous_secrecy_rate(cm, cw);
  };
  return detail::reduce_trials(trials, threads, clamp, per_trial);
}

// Simplified maximum-ratio beamforming baseline with N_t antennas: the
// legitimate side collects the full combining gain ||w||^2, the eavesdropper
// sees a single-dimensional projection of an independent channel.
inline RateEstimate mc_beamforming_secrecy_rate(std::uint64_t seed, std::uint64_t trials, int N_t,
                                                double alpha, double alpha_e, double P,
                                                double sigma2, double sigma2_e,
                                                unsigned threads = 1,
                                                ClampMode clamp = ClampMode::mean) {
  if (N_t < 1) throw std::invalid_argument("mc_beamforming_secrecy_rate: N_t must be >= 1");
  auto per_trial = [=](std::uint64_t i) {
    std::mt19937_64 rng(detail::trial_seed(seed, i));
    Eigen::VectorXcd w(N_t), e(N_t);
    for (int n = 0; n < N_t; ++n) w[n] = sample_cn(rng);
    for (int n = 0; n < N_t; ++n) e[n] = sample_cn(rng);
    const double w2 = w.squaredNorm();
    const std::complex<double> proj = (w.adjoint() * e)(0) / std::sqrt(w2);
    double cm = std::log2(1.0 + alpha * alpha * P * w2 / sigma2);
    double cw = std::log2(1.0 + alpha_e * alpha_e * P * std::norm(proj) / sigma2_e);
    return cm - cw;
  };
  return detail::reduce_trials(trials, threads, clamp, per_trial);
}

}  // namespace irsmec

#endif  // IRSMEC_ANALYTICS_HPP
