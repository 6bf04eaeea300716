#ifndef IRSMEC_HARNESS_HPP
#define IRSMEC_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "irsmec/analytics.hpp"
#include "irsmec/offload.hpp"
#include "irsmec/scenario.hpp"

// Experiment runners and CSV emission for the three figure reproductions,
// the theory validation report and the end-to-end workflow demo.
namespace irsmec::harness {

struct SweepRow {
  double swept = 0.0;       // N or bandwidth, 0 when not applicable
  std::string scheme;
  std::string label;        // sensor label for satisfaction rows, else empty
  double value = 0.0;
  double std_err = 0.0;
};

using SweepResult = std::vector<SweepRow>;

// One random draw of sensor/server populations plus per-sensor closed-form
// ergodic secrecy rates.
struct Instance {
  std::vector<SensorProfile> sensors;
  std::vector<MecProfile> servers;
  std::vector<double> rates;  // bit/s/Hz per sensor
};

Instance draw_instance(const Scenario& scn, std::uint64_t draw_index);

// Ergodic secrecy rate versus IRS element count: closed form, MC estimate
// and the simplified beamforming baseline at N_t = N + 1.
SweepResult run_secrecy_sweep(const Scenario& scn, const std::vector<int>& n_values);

// Sum energy of all sensors versus bandwidth under the three allocators,
// averaged over seeded scenario draws.
SweepResult run_energy_sweep(const Scenario& scn, const std::vector<double>& b_values);

// P(O_i <= epsilon) per tracked gas rank and over the whole population.
SweepResult run_satisfaction(const Scenario& scn);

struct DemoResult {
  std::string ledger_path;
  std::string report_path;
  Assignment assignment;
  bool chain_ok = false;
};

// Full six-step workflow: sample, publish, mine, allocate, record, mine,
// verify; writes the ledger file and a human-readable report into out_dir.
DemoResult run_offload_demo(const Scenario& scn, const std::string& out_dir);

struct TheoryCheck {
  std::string name;
  double value = 0.0;      // relative error or identity residual
  double tolerance = 0.0;
  bool pass = false;
  bool expect_fail = false;  // checks that demonstrate the printed-variant typo
};

std::vector<TheoryCheck> validate_theory(const Scenario& scn);

// Fixed column sets per subcommand; header row first.
void write_secrecy_csv(const SweepResult& rows, const std::string& path);
void write_energy_csv(const SweepResult& rows, const std::string& path);
void write_satisfaction_csv(const SweepResult& rows, const std::string& path);
void write_validate_report(const std::vector<TheoryCheck>& checks, const std::string& path);

}  // namespace irsmec::harness

#endif  // IRSMEC_HARNESS_HPP
