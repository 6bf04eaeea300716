#ifndef IRSMEC_SCENARIO_HPP
#define IRSMEC_SCENARIO_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

// Experiment configuration. Files are INI-style key-value text with
// [section] headers; unspecified fields keep the documented defaults.
namespace irsmec {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct Scenario {
  // [network]
  int n_sensors = 40;        // N_I
  int n_servers = 40;        // N_K
  int epsilon = 9;

  // [irs]
  std::vector<int> elements = {4, 8, 16, 32, 64, 128};  // N sweep
  int elements_default = 32;                            // N used by non-sweep runs

  // [radio]
  double carrier_hz = 2.4e9;
  double noise_dbm = -53.0;
  double eve_noise_dbm = -53.0;
  double power_dbm = 10.0;
  std::array<double, 2> distance_m = {30.0, 50.0};
  std::array<double, 2> eve_distance_m = {30.0, 50.0};
  double secrecy_d = 40.0;    // fixed geometry for the secrecy sweep
  double secrecy_d_e = 40.0;

  // [compute]
  double cycles_per_bit = 10.0;
  double energy_coeff = 1e-27;
  std::array<double, 2> f_hz = {40e9, 80e9};
  std::array<double, 2> task_bits = {4.88e6, 1.44e7};  // 610 KB .. 1.8 MB
  std::array<double, 2> gas = {1.5e6, 2e6};

  // [run]
  std::vector<double> bandwidth_hz;  // defaulted to 10 log-spaced points in [1e5, 1e7]
  std::uint64_t trials = 100000;
  int draws = 50;             // scenario draws for energy/satisfaction averages
  std::uint64_t seed = 1;
  unsigned threads = 1;

  Scenario();  // fills the bandwidth sweep default

  double sigma2() const { return dbm_to_watts(noise_dbm); }
  double sigma2_e() const { return dbm_to_watts(eve_noise_dbm); }
  double power_w() const { return dbm_to_watts(power_dbm); }

  void validate() const;  // throws std::invalid_argument naming the field
};

Scenario load_scenario(const std::string& path);

}  // namespace irsmec

#endif  // IRSMEC_SCENARIO_HPP
