#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "irsmec/offload.hpp"

using namespace irsmec;

namespace {

// Exhaustive minimum-cost matching of all rows into columns (n <= m).
double brute_force_min(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows()), m = static_cast<int>(cost.cols());
  std::vector<int> cols(m);
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += cost(i, cols[i]);
    best = std::min(best, total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

double assignment_cost(const Assignment& a, const Eigen::MatrixXd& cost) {
  double total = 0.0;
  for (const auto& [i, k] : a.pairs) total += cost(i, k);
  return total;
}

std::vector<SensorProfile> random_sensors(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u_d(30, 50), u_D(4.88e6, 1.44e7), u_V(1.5e6, 2e6);
  std::vector<SensorProfile> out;
  for (int i = 0; i < n; ++i) out.push_back({i, u_D(rng), 0.01, u_V(rng), u_d(rng)});
  return out;
}

std::vector<MecProfile> random_servers(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u_f(40e9, 80e9);
  std::vector<MecProfile> out;
  for (int i = 0; i < k; ++i) out.push_back({i, u_f(rng), 10.0, 1e-27});
  return out;
}

std::vector<double> random_rates(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(1.0, 8.0);
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(u(rng));
  return out;
}

void check_one_to_one(const Assignment& a) {
  std::vector<int> s, m;
  for (const auto& [i, k] : a.pairs) {
    s.push_back(i);
    m.push_back(k);
  }
  std::sort(s.begin(), s.end());
  std::sort(m.begin(), m.end());
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  CHECK(std::adjacent_find(m.begin(), m.end()) == m.end());
}

}  // namespace

TEST_CASE("energy hand value and term structure") {
  SensorProfile s{0, 8e6, 0.01, 0, 40};
  MecProfile m{0, 6e10, 10, 1e-27};
  CHECK(energy(s, m, 4.0, 1e6) == doctest::Approx(288.02).epsilon(1e-12));
  // doubling B halves only the transmission term
  CHECK(energy(s, m, 4.0, 2e6) == doctest::Approx(288.01).epsilon(1e-12));
  // f -> 2f quadruples only the compute term
  MecProfile m2{0, 1.2e11, 10, 1e-27};
  CHECK(energy(s, m2, 4.0, 1e6) == doctest::Approx(4 * 288.0 + 0.02).epsilon(1e-12));
  // zero-secrecy link gets sentinel infinite cost
  CHECK(energy(s, m, 0.0, 1e6) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(energy(s, m, 4.0, 0.0), std::invalid_argument);
}

TEST_CASE("rank_descending") {
  CHECK(rank_descending({5, 9, 1}) == std::vector<int>{2, 1, 3});
  CHECK(rank_descending({7, 7}) == std::vector<int>{1, 2});
  CHECK(rank_descending({3}) == std::vector<int>{1});
  CHECK_THROWS_AS(rank_descending({}), std::invalid_argument);
}

TEST_CASE("unsatisfaction") {
  CHECK(unsatisfaction(1, 1, true) == 0);
  CHECK(unsatisfaction(1, 3, true) == -2);
  CHECK(unsatisfaction(4, 1, true) == 3);
  CHECK(unsatisfaction(4, 1, false) == 0);
  CHECK_THROWS_AS(unsatisfaction(0, 1, true), std::invalid_argument);
}

TEST_CASE("group sizes per the ceiling formula") {
  std::mt19937_64 rng(1);
  auto sensors = random_sensors(rng, 5);
  auto servers = random_servers(rng, 5);
  auto plan = group(sensors, servers, 1);
  CHECK(plan.T == 3);
  REQUIRE(plan.sensor_groups.size() == 3);
  CHECK(plan.sensor_groups[0].size() == 2);
  CHECK(plan.sensor_groups[1].size() == 2);
  CHECK(plan.sensor_groups[2].size() == 1);

  auto s40 = random_sensors(rng, 40);
  auto m40 = random_servers(rng, 40);
  auto p40 = group(s40, m40, 9);
  CHECK(p40.T == 4);
  for (const auto& g : p40.sensor_groups) CHECK(g.size() == 10);

  auto p0 = group(sensors, servers, 0);
  CHECK(p0.T == 5);
  for (const auto& g : p0.sensor_groups) CHECK(g.size() == 1);

  CHECK_THROWS_AS(group(random_sensors(rng, 6), servers, 1), std::invalid_argument);
}

TEST_CASE("group ordering: descending gas, descending f/c, weakest servers dropped") {
  std::mt19937_64 rng(2);
  auto sensors = random_sensors(rng, 8);
  auto servers = random_servers(rng, 12);
  auto plan = group(sensors, servers, 2);
  double prev_gas = std::numeric_limits<double>::infinity();
  for (const auto& g : plan.sensor_groups)
    for (int i : g) {
      CHECK(sensors[i].V <= prev_gas);
      prev_gas = sensors[i].V;
    }
  std::vector<int> kept;
  double prev_p = std::numeric_limits<double>::infinity();
  for (const auto& g : plan.mec_groups)
    for (int k : g) {
      CHECK(servers[k].f / servers[k].c <= prev_p);
      prev_p = servers[k].f / servers[k].c;
      kept.push_back(k);
    }
  CHECK(kept.size() == 8);
  // every dropped server is weaker than every kept one
  for (int k = 0; k < 12; ++k) {
    if (std::find(kept.begin(), kept.end(), k) != kept.end()) continue;
    CHECK(servers[k].f / servers[k].c <= prev_p);
  }
}

TEST_CASE("km_assign 3x3 hand instance") {
  Eigen::MatrixXd cost(3, 3);
  cost << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  auto a = km_assign(cost);
  CHECK(assignment_cost(a, cost) == doctest::Approx(5.0));
  CHECK(a.pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {2, 2}});
}

TEST_CASE("km_assign diagonal-dominant zero diagonal") {
  Eigen::MatrixXd cost = Eigen::MatrixXd::Constant(4, 4, 9.0);
  cost.diagonal().setZero();
  auto a = km_assign(cost);
  CHECK(assignment_cost(a, cost) == doctest::Approx(0.0));
}

TEST_CASE("km_assign equals brute force on random instances, sizes 3..7") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int n = 3; n <= 7; ++n)
    for (int rep = 0; rep < 30; ++rep) {
      Eigen::MatrixXd cost(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cost(i, j) = u(rng);
      CHECK(assignment_cost(km_assign(cost), cost) ==
            doctest::Approx(brute_force_min(cost)).epsilon(1e-12));
    }
}

TEST_CASE("km_assign rectangular and infeasible cases") {
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Eigen::MatrixXd cost(3, 5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j) cost(i, j) = u(rng);
  CHECK(assignment_cost(km_assign(cost), cost) ==
        doctest::Approx(brute_force_min(cost)).epsilon(1e-12));

  const double inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd blocked(2, 2);
  blocked << inf, 1.0, inf, 2.0;  // both rows need column 1
  CHECK_THROWS_AS(km_assign(blocked), InfeasibleAssignment);
  CHECK_THROWS_AS(km_assign(Eigen::MatrixXd(3, 2)), std::invalid_argument);
}

TEST_CASE("gas-oriented allocation: per-group optimality and satisfaction") {
  std::mt19937_64 rng(42);
  auto sensors = random_sensors(rng, 12);
  auto servers = random_servers(rng, 12);
  auto rates = random_rates(rng, 12);
  const double B = 1e6;
  auto a = allocate_gas_oriented(sensors, servers, 2, rates, B);
  check_one_to_one(a);
  CHECK(a.pairs.size() == 12);

  auto plan = group(sensors, servers, 2);
  for (int t = 0; t < plan.T; ++t) {
    Eigen::MatrixXd cost(plan.sensor_groups[t].size(), plan.mec_groups[t].size());
    for (std::size_t i = 0; i < plan.sensor_groups[t].size(); ++i)
      for (std::size_t k = 0; k < plan.mec_groups[t].size(); ++k)
        cost(i, k) = energy(sensors[plan.sensor_groups[t][i]], servers[plan.mec_groups[t][k]],
                            rates[plan.sensor_groups[t][i]], B);
    double group_total = 0.0;
    for (const auto& [i, k] : a.pairs) {
      auto si = std::find(plan.sensor_groups[t].begin(), plan.sensor_groups[t].end(), i);
      if (si == plan.sensor_groups[t].end()) continue;
      group_total += energy(sensors[i], servers[k], rates[i], B);
    }
    CHECK(group_total == doctest::Approx(brute_force_min(cost)).epsilon(1e-12));
  }

  auto ev = evaluate(a, sensors, servers, rates, B, 2);
  for (bool s : ev.satisfied) CHECK(s);
}

TEST_CASE("energy ordering ECM <= gas-oriented <= bidding over random scenarios") {
  std::mt19937_64 rng(11);
  const double B = 1e6;
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 6 + static_cast<int>(rng() % 10);
    const int extra = static_cast<int>(rng() % 4);
    auto sensors = random_sensors(rng, n);
    auto servers = random_servers(rng, n + extra);
    auto rates = random_rates(rng, n);
    const int eps = static_cast<int>(rng() % n);
    auto gas = allocate_gas_oriented(sensors, servers, eps, rates, B);
    auto ecm = allocate_ecm(sensors, servers, rates, B);
    auto bid = allocate_bidding(sensors, servers);
    check_one_to_one(gas);
    check_one_to_one(ecm);
    check_one_to_one(bid);
    const double e_gas = evaluate(gas, sensors, servers, rates, B, eps).total_energy;
    const double e_ecm = evaluate(ecm, sensors, servers, rates, B, eps).total_energy;
    const double e_bid = evaluate(bid, sensors, servers, rates, B, eps).total_energy;
    CHECK(e_ecm <= e_gas + 1e-9);
    CHECK(e_gas <= e_bid + 1e-9);
    // satisfaction guarantee for gas-oriented and bidding
    for (bool s : evaluate(gas, sensors, servers, rates, B, eps).satisfied) CHECK(s);
    auto ev_bid = evaluate(bid, sensors, servers, rates, B, eps);
    for (int o : ev_bid.O) CHECK(o == 0);
  }
}

TEST_CASE("degenerate equivalences") {
  std::mt19937_64 rng(21);
  const double B = 1e6;
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 6);
    auto sensors = random_sensors(rng, n);
    auto servers = random_servers(rng, n + static_cast<int>(rng() % 3));
    auto rates = random_rates(rng, n);

    // epsilon = 0: singleton groups force rank matching
    auto g0 = allocate_gas_oriented(sensors, servers, 0, rates, B);
    auto bid = allocate_bidding(sensors, servers);
    CHECK(g0.pairs == bid.pairs);

    // epsilon = N_I - 1: one group, global matching over the kept servers
    auto gmax = allocate_gas_oriented(sensors, servers, n - 1, rates, B);
    auto plan = group(sensors, servers, n - 1);
    std::vector<MecProfile> kept;
    for (int k : plan.mec_groups[0]) kept.push_back(servers[k]);
    auto ecm_kept = allocate_ecm(sensors, kept, rates, B);
    // map kept-relative server indices back to the original ids
    Assignment mapped;
    for (const auto& [i, k] : ecm_kept.pairs) mapped.pairs.emplace_back(i, kept[k].id);
    CHECK(gmax.pairs == mapped.pairs);
  }
}

TEST_CASE("ecm matches brute force on a 6-sensor instance") {
  std::mt19937_64 rng(31);
  auto sensors = random_sensors(rng, 6);
  auto servers = random_servers(rng, 7);
  auto rates = random_rates(rng, 6);
  const double B = 1e6;
  Eigen::MatrixXd cost(6, 7);
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 7; ++k) cost(i, k) = energy(sensors[i], servers[k], rates[i], B);
  auto ecm = allocate_ecm(sensors, servers, rates, B);
  CHECK(evaluate(ecm, sensors, servers, rates, B, 5).total_energy ==
        doctest::Approx(brute_force_min(cost)).epsilon(1e-12));
}

TEST_CASE("evaluate: empty assignment and invalid pairs") {
  std::mt19937_64 rng(41);
  auto sensors = random_sensors(rng, 3);
  auto servers = random_servers(rng, 3);
  auto rates = random_rates(rng, 3);
  auto ev = evaluate(Assignment{}, sensors, servers, rates, 1e6, 1);
  CHECK(ev.total_energy == doctest::Approx(0.0));
  CHECK(ev.O.empty());
  Assignment dup;
  dup.pairs = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(evaluate(dup, sensors, servers, rates, 1e6, 1), std::invalid_argument);
}

TEST_CASE("zero rates propagate infeasibility when no finite matching exists") {
  std::mt19937_64 rng(51);
  auto sensors = random_sensors(rng, 3);
  auto servers = random_servers(rng, 3);
  std::vector<double> rates = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(allocate_ecm(sensors, servers, rates, 1e6), InfeasibleAssignment);
}
