#ifndef IRSMEC_OFFLOAD_HPP
#define IRSMEC_OFFLOAD_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

// Energy model, satisfaction metric, Gas-oriented grouping, minimum-cost
// matching and the baseline allocators (ECM, bidding).
namespace irsmec {

struct SensorProfile {
  int id;
  double D;  // task size [bit]
  double P;  // transmit power [W]
  double V;  // offered Gas
  double d;  // distance to SBS [m]
};

struct MecProfile {
  int id;
  double f;    // CPU cycles per second
  double c;    // cycles per bit
  double eta;  // energy coefficient [J*s^2/cycle^3]
};

// One-to-one sensor->server matching; each index appears at most once.
struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (sensor index, server index)
};

struct GroupPlan {
  std::vector<std::vector<int>> sensor_groups;  // indices, descending Gas
  std::vector<std::vector<int>> mec_groups;     // indices, descending f/c
  int epsilon = 0;
  int T = 0;
};

class InfeasibleAssignment : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Q = eta*D*c*f^2 + D*P/(R*B). A non-positive rate means the link carries no
// secret bits; the pair gets infinite cost rather than a crash.
inline double energy(const SensorProfile& s, const MecProfile& m, double R, double B) {
  if (B <= 0) throw std::invalid_argument("energy: B must be positive");
  const double compute = m.eta * s.D * m.c * m.f * m.f;
  if (R <= 0) return std::numeric_limits<double>::infinity();
  return compute + s.D * s.P / (R * B);
}

// 1-based descending ranks; ties broken by lower original index.
inline std::vector<int> rank_descending(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("rank_descending: empty input");
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  std::vector<int> ranks(values.size());
  for (int r = 0; r < static_cast<int>(order.size()); ++r) ranks[order[r]] = r + 1;
  return ranks;
}

// O_i = W_{i,k} [r(v_i) - r(f_k/c_k)], signed.
inline int unsatisfaction(int sensor_gas_rank, int server_power_rank, bool assigned) {
  if (sensor_gas_rank < 1 || server_power_rank < 1)
    throw std::invalid_argument("unsatisfaction: ranks are 1-based");
  return assigned ? sensor_gas_rank - server_power_rank : 0;
}

// Sensors sorted by descending Gas, the kept N_I strongest servers by
// descending f/c, both cut into T = ceil(N_I/(eps+1)) groups of eps+1
// members (last group possibly smaller).
inline GroupPlan group(const std::vector<SensorProfile>& sensors,
                       const std::vector<MecProfile>& servers, int epsilon) {
  if (sensors.empty()) throw std::invalid_argument("group: need at least one sensor");
  if (servers.size() < sensors.size())
    throw std::invalid_argument("group: fewer servers than sensors (need N_K >= N_I)");
  if (epsilon < 0) throw std::invalid_argument("group: epsilon must be >= 0");

  const int n_i = static_cast<int>(sensors.size());
  std::vector<int> s_order(n_i);
  std::iota(s_order.begin(), s_order.end(), 0);
  std::stable_sort(s_order.begin(), s_order.end(),
                   [&](int a, int b) { return sensors[a].V > sensors[b].V; });

  std::vector<int> m_order(servers.size());
  std::iota(m_order.begin(), m_order.end(), 0);
  std::stable_sort(m_order.begin(), m_order.end(), [&](int a, int b) {
    return servers[a].f / servers[a].c > servers[b].f / servers[b].c;
  });
  m_order.resize(n_i);  // drop the N_K - N_I weakest

  GroupPlan plan;
  plan.epsilon = epsilon;
  plan.T = (n_i + epsilon) / (epsilon + 1);
  for (int t = 0; t < plan.T; ++t) {
    const int lo = t * (epsilon + 1);
    const int hi = std::min(n_i, lo + epsilon + 1);
    plan.sensor_groups.emplace_back(s_order.begin() + lo, s_order.begin() + hi);
    plan.mec_groups.emplace_back(m_order.begin() + lo, m_order.begin() + hi);
  }
  return plan;
}

// Minimum-cost one-to-one matching of rows into columns (n <= m), shortest
// augmenting paths with dual potentials. Infinite entries mark forbidden
// pairs; if no finite perfect matching exists an InfeasibleAssignment is
// thrown. Returned pairs are 0-based (row, column), ordered by row.
inline Assignment km_assign(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n < 1 || m < n) throw std::invalid_argument("km_assign: need 1 <= rows <= cols");
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);  // p[j]: row matched to column j
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (!(delta < inf)) throw InfeasibleAssignment("km_assign: no finite perfect matching");
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    while (j0 != 0) {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    }
  }

  Assignment a;
  a.pairs.resize(n);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) a.pairs[p[j] - 1] = {p[j] - 1, j - 1};
  return a;
}

namespace detail {

inline Eigen::MatrixXd energy_matrix(const std::vector<SensorProfile>& sensors,
                                     const std::vector<MecProfile>& servers,
                                     const std::vector<int>& s_idx, const std::vector<int>& m_idx,
                                     const std::vector<double>& rates, double B) {
  Eigen::MatrixXd q(s_idx.size(), m_idx.size());
  for (std::size_t i = 0; i < s_idx.size(); ++i)
    for (std::size_t k = 0; k < m_idx.size(); ++k)
      q(i, k) = energy(sensors[s_idx[i]], servers[m_idx[k]], rates[s_idx[i]], B);
  return q;
}

inline void sort_by_sensor(Assignment& a) {
  std::sort(a.pairs.begin(), a.pairs.end());
}

}  // namespace detail

// Per-group KM over the energy-cost matrix; union of group matchings.
// Every assigned pair ends with |rank difference| <= epsilon.
inline Assignment allocate_gas_oriented(const std::vector<SensorProfile>& sensors,
                                        const std::vector<MecProfile>& servers, int epsilon,
                                        const std::vector<double>& rates, double B) {
  GroupPlan plan = group(sensors, servers, epsilon);
  Assignment out;
  for (int t = 0; t < plan.T; ++t) {
    const auto& s_idx = plan.sensor_groups[t];
    const auto& m_idx = plan.mec_groups[t];
    Assignment local = km_assign(detail::energy_matrix(sensors, servers, s_idx, m_idx, rates, B));
    for (const auto& [i, k] : local.pairs) out.pairs.emplace_back(s_idx[i], m_idx[k]);
  }
  detail::sort_by_sensor(out);
  return out;
}

// Global minimum-energy matching over the full N_I x N_K cost matrix.
inline Assignment allocate_ecm(const std::vector<SensorProfile>& sensors,
                               const std::vector<MecProfile>& servers,
                               const std::vector<double>& rates, double B) {
  if (servers.size() < sensors.size())
    throw std::invalid_argument("allocate_ecm: need N_K >= N_I");
  std::vector<int> s_idx(sensors.size()), m_idx(servers.size());
  std::iota(s_idx.begin(), s_idx.end(), 0);
  std::iota(m_idx.begin(), m_idx.end(), 0);
  Assignment a = km_assign(detail::energy_matrix(sensors, servers, s_idx, m_idx, rates, B));
  detail::sort_by_sensor(a);
  return a;
}

// Highest bidder obtains: gas rank i gets the server with power rank i.
inline Assignment allocate_bidding(const std::vector<SensorProfile>& sensors,
                                   const std::vector<MecProfile>& servers) {
  GroupPlan plan = group(sensors, servers, 0);  // singleton groups are rank matching
  Assignment a;
  for (int t = 0; t < plan.T; ++t) a.pairs.emplace_back(plan.sensor_groups[t][0], plan.mec_groups[t][0]);
  detail::sort_by_sensor(a);
  return a;
}

struct EvalSummary {
  double total_energy = 0.0;
  std::vector<int> sensor_index;   // assigned sensors, ascending
  std::vector<int> O;              // unsatisfactory degree per assigned sensor
  std::vector<bool> satisfied;     // O_i <= epsilon
};

inline EvalSummary evaluate(const Assignment& assignment, const std::vector<SensorProfile>& sensors,
                            const std::vector<MecProfile>& servers,
                            const std::vector<double>& rates, double B, int epsilon) {
  std::vector<double> gas(sensors.size()), power(servers.size());
  for (std::size_t i = 0; i < sensors.size(); ++i) gas[i] = sensors[i].V;
  for (std::size_t k = 0; k < servers.size(); ++k) power[k] = servers[k].f / servers[k].c;
  EvalSummary sum;
  if (assignment.pairs.empty()) return sum;
  const std::vector<int> gas_rank = rank_descending(gas);
  const std::vector<int> power_rank = rank_descending(power);
  std::vector<char> seen_s(sensors.size(), 0), seen_m(servers.size(), 0);
  for (const auto& [i, k] : assignment.pairs) {
    if (i < 0 || k < 0 || i >= static_cast<int>(sensors.size()) ||
        k >= static_cast<int>(servers.size()) || seen_s[i] || seen_m[k])
      throw std::invalid_argument("evaluate: invalid or duplicated assignment pair");
    seen_s[i] = seen_m[k] = 1;
    sum.total_energy += energy(sensors[i], servers[k], rates[i], B);
    const int o = unsatisfaction(gas_rank[i], power_rank[k], true);
    sum.sensor_index.push_back(i);
    sum.O.push_back(o);
    sum.satisfied.push_back(o <= epsilon);
  }
  return sum;
}

}  // namespace irsmec

#endif  // IRSMEC_OFFLOAD_HPP
