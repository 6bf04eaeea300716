// Command-line front end: reproduces the three experiment figures as CSV,
// runs the theory-vs-MC validation and the end-to-end ledger demo.
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "irsmec/harness.hpp"
#include "irsmec/scenario.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> threads;
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config, "scenario file (INI-style key-value text)");
  cmd->add_option("--seed", o.seed, "master seed override");
  cmd->add_option("--trials", o.trials, "Monte Carlo trial count override");
  cmd->add_option("--threads", o.threads, "worker thread count");
  cmd->add_option("--out", o.out, "output directory");
}

irsmec::Scenario make_scenario(const CommonOpts& o) {
  irsmec::Scenario scn = o.config.empty() ? irsmec::Scenario{} : irsmec::load_scenario(o.config);
  if (o.seed) scn.seed = *o.seed;
  if (o.trials) scn.trials = *o.trials;
  if (o.threads) scn.threads = *o.threads;
  scn.validate();
  return scn;
}

std::string out_path(const CommonOpts& o, const std::string& file) {
  std::filesystem::create_directories(o.out);
  return (std::filesystem::path(o.out) / file).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted secure computation-offloading simulator"};
  app.require_subcommand(1);

  CommonOpts sec_o, en_o, sat_o, demo_o, val_o;
  auto* sec = app.add_subcommand("secrecy-sweep", "ergodic secrecy rate vs IRS element count");
  add_common(sec, sec_o);
  auto* en = app.add_subcommand("energy-sweep", "sum energy vs bandwidth under all allocators");
  add_common(en, en_o);
  auto* sat = app.add_subcommand("satisfaction", "P(O_i <= epsilon) per scheme");
  add_common(sat, sat_o);
  auto* demo = app.add_subcommand("offload-demo", "six-step workflow demo with ledger export");
  add_common(demo, demo_o);
  auto* val = app.add_subcommand("validate", "theory-vs-MC and moment-matching checks");
  add_common(val, val_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sec->parsed()) {
      auto scn = make_scenario(sec_o);
      auto rows = irsmec::harness::run_secrecy_sweep(scn, scn.elements);
      const std::string path = out_path(sec_o, "secrecy_sweep.csv");
      irsmec::harness::write_secrecy_csv(rows, path);
      std::cout << "wrote " << path << "\n";
    } else if (en->parsed()) {
      auto scn = make_scenario(en_o);
      auto rows = irsmec::harness::run_energy_sweep(scn, scn.bandwidth_hz);
      const std::string path = out_path(en_o, "energy_sweep.csv");
      irsmec::harness::write_energy_csv(rows, path);
      std::cout << "wrote " << path << "\n";
    } else if (sat->parsed()) {
      auto scn = make_scenario(sat_o);
      auto rows = irsmec::harness::run_satisfaction(scn);
      const std::string path = out_path(sat_o, "satisfaction.csv");
      irsmec::harness::write_satisfaction_csv(rows, path);
      std::cout << "wrote " << path << "\n";
    } else if (demo->parsed()) {
      auto scn = make_scenario(demo_o);
      auto res = irsmec::harness::run_offload_demo(scn, demo_o.out);
      std::cout << "wrote " << res.ledger_path << "\nwrote " << res.report_path << "\n";
    } else if (val->parsed()) {
      auto scn = make_scenario(val_o);
      auto checks = irsmec::harness::validate_theory(scn);
      const std::string path = out_path(val_o, "validate.csv");
      irsmec::harness::write_validate_report(checks, path);
      bool all_ok = true;
      for (const auto& c : checks) {
        std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " (value " << c.value
                  << ", tol " << c.tolerance << ")\n";
        all_ok = all_ok && c.pass;
      }
      std::cout << "wrote " << path << "\n";
      return all_ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
