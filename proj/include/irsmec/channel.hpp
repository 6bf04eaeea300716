#ifndef IRSMEC_CHANNEL_HPP
#define IRSMEC_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

// Rayleigh channel sampling, free-space path loss, IRS phase alignment and
// instantaneous capacities for the uplink model with a passive eavesdropper.
namespace irsmec {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// One draw of all fading coefficients for one sensor's transmission slot.
// Every entry is circularly-symmetric complex normal with unit variance.
struct ChannelRealization {
  std::complex<double> l;   // direct sensor->SBS link
  Eigen::VectorXcd h;       // sensor->IRS
  Eigen::VectorXcd aH;      // IRS->SBS
  std::complex<double> g;   // sensor->Eve
  Eigen::VectorXcd zH;      // IRS->Eve
};

struct LinkGeometry {
  double d;         // sensor->SBS distance [m]
  double d_e;       // sensor->Eve distance [m]
  double f_c;       // carrier frequency [Hz]
  double sigma2;    // SBS noise floor [W]
  double sigma2_e;  // Eve noise floor [W]
  double P;         // transmit power [W]

  void validate() const {
    if (d <= 0 || d_e <= 0 || f_c <= 0 || sigma2 <= 0 || sigma2_e <= 0 || P <= 0)
      throw std::invalid_argument("LinkGeometry: all fields must be strictly positive");
  }
};

// Per-element IRS phase angles, each in [0, 2*pi).
struct PhaseShift {
  Eigen::VectorXd theta;
};

inline double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

inline std::complex<double> sample_cn(std::mt19937_64& rng) {
  // unit total variance: real and imaginary parts each N(0, 1/2)
  static constexpr double kHalfStd = 0.70710678118654752440;
  std::normal_distribution<double> n(0.0, kHalfStd);
  double re = n(rng);
  double im = n(rng);
  return {re, im};
}

inline ChannelRealization sample_channel(std::mt19937_64& rng, int N) {
  if (N < 1) throw std::invalid_argument("sample_channel: N must be >= 1");
  ChannelRealization c;
  c.l = sample_cn(rng);
  c.h.resize(N);
  for (int n = 0; n < N; ++n) c.h[n] = sample_cn(rng);
  c.aH.resize(N);
  for (int n = 0; n < N; ++n) c.aH[n] = sample_cn(rng);
  c.g = sample_cn(rng);
  c.zH.resize(N);
  for (int n = 0; n < N; ++n) c.zH[n] = sample_cn(rng);
  return c;
}

// alpha = c / (2*pi*f_c*d), amplitude path-loss factor
inline double path_loss(double d, double f_c) {
  if (d <= 0 || f_c <= 0)
    throw std::invalid_argument("path_loss: d and f_c must be strictly positive");
  return kSpeedOfLight / (kTwoPi * f_c * d);
}

// theta*_n = arg(l) - arg(aH_n) - arg(h_n); aligns every reflected term with
// the direct link so |l + aH diag(e^{j theta}) h| = |l| + sum |a_n||h_n|.
inline PhaseShift optimal_phase(std::complex<double> l, const Eigen::VectorXcd& aH,
                                const Eigen::VectorXcd& h) {
  if (aH.size() != h.size())
    throw std::invalid_argument("optimal_phase: aH and h must have equal length");
  if (aH.size() < 1) throw std::invalid_argument("optimal_phase: N must be >= 1");
  // arg(0) taken as 0: the relative alignment of the IRS terms is what matters
  double theta_l = (l == std::complex<double>{0.0, 0.0}) ? 0.0 : std::arg(l);
  PhaseShift p;
  p.theta.resize(aH.size());
  for (Eigen::Index n = 0; n < aH.size(); ++n)
    p.theta[n] = wrap_angle(theta_l - std::arg(aH[n]) - std::arg(h[n]));
  return p;
}

// l + sum_n aH_n * e^{j theta_n} * h_n
inline std::complex<double> effective_gain(std::complex<double> l, const Eigen::VectorXcd& aH,
                                           const Eigen::VectorXcd& h, const PhaseShift& phase) {
  if (aH.size() != h.size() || aH.size() != phase.theta.size())
    throw std::invalid_argument("effective_gain: length mismatch");
  if (aH.size() < 1) throw std::invalid_argument("effective_gain: N must be >= 1");
  std::complex<double> acc = l;
  for (Eigen::Index n = 0; n < aH.size(); ++n)
    acc += aH[n] * std::polar(1.0, phase.theta[n]) * h[n];
  return acc;
}

// log2(1 + alpha^2 * P * |gain|^2 / sigma2), spectral efficiency in bit/s/Hz
inline double instantaneous_capacity(std::complex<double> gain, double alpha, double P,
                                     double sigma2) {
  if (alpha <= 0 || P <= 0 || sigma2 <= 0)
    throw std::invalid_argument("instantaneous_capacity: alpha, P, sigma2 must be positive");
  return std::log2(1.0 + alpha * alpha * P * std::norm(gain) / sigma2);
}

// Signed per-realization summand; the positive-part clamp belongs to the
// ergodic mean, not to individual realizations.
inline double instantaneous_secrecy_rate(double cm, double cw) { return cm - cw; }

}  // namespace irsmec

#endif  // IRSMEC_CHANNEL_HPP
