#include "irsmec/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace irsmec {

Scenario::Scenario() {
  // 10 log-spaced bandwidth points over [0.1, 10] MHz
  for (int i = 0; i < 10; ++i) bandwidth_hz.push_back(std::pow(10.0, 5.0 + 2.0 * i / 9.0));
}

void Scenario::validate() const {
  auto bad = [](const std::string& field, const std::string& why) {
    throw std::invalid_argument("scenario: " + field + " " + why);
  };
  if (n_sensors < 1) bad("network.sensors", "must be >= 1");
  if (n_servers < n_sensors) bad("network.servers", "must be >= network.sensors");
  if (epsilon < 0 || epsilon > n_sensors - 1)
    bad("network.epsilon", "must lie in [0, sensors-1]");
  if (elements.empty()) bad("irs.elements", "must be non-empty");
  for (int n : elements)
    if (n < 1) bad("irs.elements", "entries must be >= 1");
  if (elements_default < 1) bad("irs.elements_default", "must be >= 1");
  if (carrier_hz <= 0) bad("radio.carrier_hz", "must be positive");
  if (power_w() <= 0) bad("radio.power_dbm", "must convert to positive watts");
  auto range_ok = [&bad](const std::array<double, 2>& r, const std::string& name) {
    if (!(r[0] > 0) || r[0] > r[1]) bad(name, "must satisfy 0 < min <= max");
  };
  range_ok(distance_m, "radio.distance_m");
  range_ok(eve_distance_m, "radio.eve_distance_m");
  if (secrecy_d <= 0 || secrecy_d_e <= 0) bad("radio.secrecy_d", "must be positive");
  if (cycles_per_bit <= 0) bad("compute.cycles_per_bit", "must be positive");
  if (energy_coeff <= 0) bad("compute.energy_coeff", "must be positive");
  range_ok(f_hz, "compute.f_hz");
  range_ok(task_bits, "compute.task_bits");
  if (gas[0] < 0 || gas[0] > gas[1]) bad("compute.gas", "must satisfy 0 <= min <= max");
  if (bandwidth_hz.empty()) bad("run.bandwidth_hz", "must be non-empty");
  for (double b : bandwidth_hz)
    if (b <= 0) bad("run.bandwidth_hz", "entries must be positive");
  if (trials < 1) bad("run.trials", "must be >= 1");
  if (draws < 1) bad("run.draws", "must be >= 1");
  if (threads < 1) bad("run.threads", "must be >= 1");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& value, const std::string& key) {
  std::vector<double> out;
  std::string v = value;
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream is(v);
  double x;
  while (is >> x) out.push_back(x);
  if (out.empty() || !is.eof())
    throw std::invalid_argument("scenario: cannot parse numeric value for " + key);
  return out;
}

double parse_one(const std::string& value, const std::string& key) {
  auto v = parse_numbers(value, key);
  if (v.size() != 1) throw std::invalid_argument("scenario: " + key + " expects one value");
  return v[0];
}

std::array<double, 2> parse_range(const std::string& value, const std::string& key) {
  auto v = parse_numbers(value, key);
  if (v.size() != 2) throw std::invalid_argument("scenario: " + key + " expects two values");
  return {v[0], v[1]};
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("scenario: cannot open " + path);

  Scenario s;
  bool bandwidth_set = false;
  std::string section, line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("scenario: parse error at line " + std::to_string(lineno));
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "network.sensors") s.n_sensors = static_cast<int>(parse_one(value, key));
    else if (key == "network.servers") s.n_servers = static_cast<int>(parse_one(value, key));
    else if (key == "network.epsilon") s.epsilon = static_cast<int>(parse_one(value, key));
    else if (key == "irs.elements") {
      s.elements.clear();
      for (double x : parse_numbers(value, key)) s.elements.push_back(static_cast<int>(x));
    } else if (key == "irs.elements_default")
      s.elements_default = static_cast<int>(parse_one(value, key));
    else if (key == "radio.carrier_hz") s.carrier_hz = parse_one(value, key);
    else if (key == "radio.noise_dbm") s.noise_dbm = parse_one(value, key);
    else if (key == "radio.eve_noise_dbm") s.eve_noise_dbm = parse_one(value, key);
    else if (key == "radio.power_dbm") s.power_dbm = parse_one(value, key);
    else if (key == "radio.distance_m") s.distance_m = parse_range(value, key);
    else if (key == "radio.eve_distance_m") s.eve_distance_m = parse_range(value, key);
    else if (key == "radio.secrecy_d") s.secrecy_d = parse_one(value, key);
    else if (key == "radio.secrecy_d_e") s.secrecy_d_e = parse_one(value, key);
    else if (key == "compute.cycles_per_bit") s.cycles_per_bit = parse_one(value, key);
    else if (key == "compute.energy_coeff") s.energy_coeff = parse_one(value, key);
    else if (key == "compute.f_hz") s.f_hz = parse_range(value, key);
    else if (key == "compute.task_bits") s.task_bits = parse_range(value, key);
    else if (key == "compute.gas") s.gas = parse_range(value, key);
    else if (key == "run.bandwidth_hz") {
      s.bandwidth_hz = parse_numbers(value, key);
      bandwidth_set = true;
    } else if (key == "run.trials")
      s.trials = static_cast<std::uint64_t>(parse_one(value, key));
    else if (key == "run.draws") s.draws = static_cast<int>(parse_one(value, key));
    else if (key == "run.seed") s.seed = static_cast<std::uint64_t>(parse_one(value, key));
    else if (key == "run.threads") s.threads = static_cast<unsigned>(parse_one(value, key));
    else
      throw std::invalid_argument("scenario: unknown key " + key + " at line " +
                                  std::to_string(lineno));
  }
  (void)bandwidth_set;
  s.validate();
  return s;
}

}  // namespace irsmec
