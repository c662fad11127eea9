#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qperc/device.hpp"
#include "qperc/pulse.hpp"

// JSON run configuration. File units are GHz/MHz/us; everything is converted
// to angular rad/s (and seconds) exactly once here. Unknown keys are
// rejected so typos fail loudly instead of silently using defaults.
struct SweepSpec {
  double start = 0.0;  // file units of `quantity`
  double stop = 0.0;
  int points = 0;
  std::string quantity;
};

struct ToolConfig {
  qperc::DeviceParams device;        // rad/s
  qperc::PulseParams pulse;          // relative template, omega_f = 0
  bool pulse_family_set = false;     // user picked a family explicitly
  std::vector<double> weights;       // rad/s
  double bias = 0.0;                 // rad/s
  std::optional<SweepSpec> sweep;

  std::vector<double> t_list;        // seconds, activation T values
  std::vector<std::string> inputs;   // activation input strings
  std::vector<double> bias_list;     // rad/s, weight-sweep bias values
  std::optional<std::array<double, 2>> t1;  // seconds
  std::vector<double> tphi;          // seconds, optional dephasing
  std::vector<double> thetas;        // rad, decompose target angles

  std::string out_path = "out.csv";
  std::string format = "csv";
};

ToolConfig load_config(const std::string& path);  // "" -> all defaults
ToolConfig default_config();

// Grid in file units plus the same grid converted to rad/s.
struct ResolvedSweep {
  SweepSpec spec;
  std::vector<double> file_values;
  std::vector<double> rad_values;
};

// Applies the per-command default when no sweep block is configured and
// enforces the expected quantity otherwise.
ResolvedSweep resolve_sweep(const ToolConfig& cfg, const std::string& quantity,
                            double def_start, double def_stop, int def_points);

// Full resolved configuration as a single-line JSON string (the
// reproducibility stamp put in every output file).
std::string config_stamp(const ToolConfig& cfg, const std::string& command,
                         const ResolvedSweep* sweep);

constexpr double kGHz = qperc::two_pi * 1e9;
constexpr double kMHz = qperc::two_pi * 1e6;
constexpr double kUs = 1e-6;
