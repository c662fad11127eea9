#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qperc/errors.hpp"

using nlohmann::json;
using qperc::IoError;
using qperc::ValidationError;

namespace {

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ValidationError("config: unknown key '" + it.key() + "' in " +
                            where);
  }
}

double num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number())
    throw ValidationError(std::string("config: '") + key +
                          "' must be a number");
  return v.get<double>();
}

std::vector<double> num_list(const json& v, const std::string& key) {
  if (!v.is_array())
    throw ValidationError("config: '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number())
      throw ValidationError("config: '" + key +
                            "' must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void parse_device(const json& d, qperc::DeviceParams& p) {
  check_keys(d, "device",
             {"omega1_GHz", "omega2_GHz", "omega_c_GHz", "alpha1_MHz",
              "alpha2_MHz", "alpha_c_MHz", "g1c_MHz", "g2c_MHz", "truncation"});
  p.omega1 = num(d, "omega1_GHz", p.omega1 / kGHz) * kGHz;
  p.omega2 = num(d, "omega2_GHz", p.omega2 / kGHz) * kGHz;
  p.omega_c = num(d, "omega_c_GHz", p.omega_c / kGHz) * kGHz;
  p.alpha1 = num(d, "alpha1_MHz", p.alpha1 / kMHz) * kMHz;
  p.alpha2 = num(d, "alpha2_MHz", p.alpha2 / kMHz) * kMHz;
  p.alpha_c = num(d, "alpha_c_MHz", p.alpha_c / kMHz) * kMHz;
  p.g1c = num(d, "g1c_MHz", p.g1c / kMHz) * kMHz;
  p.g2c = num(d, "g2c_MHz", p.g2c / kMHz) * kMHz;
  p.truncation = static_cast<int>(num(d, "truncation", p.truncation));
}

void parse_pulse(const json& d, qperc::PulseParams& p, bool& family_set) {
  check_keys(d, "pulse",
             {"T_us", "omega0_MHz", "span_MHz", "family", "sech_window"});
  p.duration_T = num(d, "T_us", p.duration_T / kUs) * kUs;
  p.omega0 = num(d, "omega0_MHz", p.omega0 / kMHz) * kMHz;
  const double span = num(d, "span_MHz", -p.omega_i / kMHz) * kMHz;
  p.omega_f = 0.0;
  p.omega_i = -span;
  if (d.contains("family")) {
    const std::string f = d.at("family").get<std::string>();
    if (f == "chirp")
      p.family = qperc::PulseFamily::chirp;
    else if (f == "sech_printed")
      p.family = qperc::PulseFamily::sech_printed;
    else if (f == "sech_monotonic")
      p.family = qperc::PulseFamily::sech_monotonic;
    else
      throw ValidationError("config: unknown pulse family '" + f + "'");
    family_set = true;
  }
  p.sech_window = num(d, "sech_window", p.sech_window);
}

SweepSpec parse_sweep(const json& d) {
  check_keys(d, "sweep", {"start", "stop", "points", "quantity"});
  SweepSpec s;
  if (!d.contains("start") || !d.contains("stop") || !d.contains("points") ||
      !d.contains("quantity"))
    throw ValidationError("config: sweep needs start, stop, points, quantity");
  s.start = d.at("start").get<double>();
  s.stop = d.at("stop").get<double>();
  s.points = d.at("points").get<int>();
  s.quantity = d.at("quantity").get<std::string>();
  if (s.points < 2) throw ValidationError("config: sweep points must be >= 2");
  if (!(s.start < s.stop))
    throw ValidationError("config: sweep start must be < stop");
  return s;
}

}  // namespace

ToolConfig default_config() {
  ToolConfig cfg;
  cfg.device = qperc::DeviceParams{};
  cfg.pulse = qperc::default_pulse_params();
  cfg.weights = {-5.2 * kMHz};
  cfg.bias = 0.0;
  cfg.t_list = {0.42 * kUs, 0.83 * kUs, 1.67 * kUs, 3.33 * kUs};
  cfg.inputs = {"0"};
  cfg.bias_list = {0.8 * kMHz, 4.0 * kMHz};
  cfg.thetas = {0.0, qperc::two_pi / 2.0};
  return cfg;
}

ToolConfig load_config(const std::string& path) {
  ToolConfig cfg = default_config();
  if (path.empty()) return cfg;

  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open '" + path + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("config: JSON parse failure in '" + path + "': " + e.what());
  }
  if (!root.is_object()) throw ValidationError("config: root must be object");
  check_keys(root, "config root",
             {"device", "pulse", "perceptron", "sweep", "activation",
              "weight_sweep", "negativity", "decompose", "output"});

  if (root.contains("device")) parse_device(root.at("device"), cfg.device);
  if (root.contains("pulse"))
    parse_pulse(root.at("pulse"), cfg.pulse, cfg.pulse_family_set);

  if (root.contains("perceptron")) {
    const json& p = root.at("perceptron");
    check_keys(p, "perceptron", {"weights_MHz", "bias_MHz"});
    if (p.contains("weights_MHz")) {
      cfg.weights.clear();
      for (double w : num_list(p.at("weights_MHz"), "weights_MHz"))
        cfg.weights.push_back(w * kMHz);
    }
    cfg.bias = num(p, "bias_MHz", cfg.bias / kMHz) * kMHz;
  }

  if (root.contains("sweep")) cfg.sweep = parse_sweep(root.at("sweep"));

  if (root.contains("activation")) {
    const json& a = root.at("activation");
    check_keys(a, "activation", {"T_list_us", "inputs"});
    if (a.contains("T_list_us")) {
      cfg.t_list.clear();
      for (double t : num_list(a.at("T_list_us"), "T_list_us"))
        cfg.t_list.push_back(t * kUs);
    }
    if (a.contains("inputs")) {
      cfg.inputs.clear();
      for (const json& s : a.at("inputs")) {
        if (!s.is_string())
          throw ValidationError("config: activation inputs must be strings");
        cfg.inputs.push_back(s.get<std::string>());
      }
    }
  }

  if (root.contains("weight_sweep")) {
    const json& w = root.at("weight_sweep");
    check_keys(w, "weight_sweep", {"bias_list_MHz"});
    if (w.contains("bias_list_MHz")) {
      cfg.bias_list.clear();
      for (double b : num_list(w.at("bias_list_MHz"), "bias_list_MHz"))
        cfg.bias_list.push_back(b * kMHz);
    }
  }

  if (root.contains("negativity")) {
    const json& n = root.at("negativity");
    check_keys(n, "negativity", {"t1_us", "tphi_us"});
    if (n.contains("t1_us") && !n.at("t1_us").is_null()) {
      const auto t1 = num_list(n.at("t1_us"), "t1_us");
      if (t1.size() != 2)
        throw ValidationError("config: t1_us needs exactly 2 entries");
      cfg.t1 = {t1[0] * kUs, t1[1] * kUs};
    }
    if (n.contains("tphi_us")) {
      for (double t : num_list(n.at("tphi_us"), "tphi_us"))
        cfg.tphi.push_back(t * kUs);
    }
  }

  if (root.contains("decompose")) {
    const json& d = root.at("decompose");
    check_keys(d, "decompose", {"thetas_rad"});
    if (d.contains("thetas_rad"))
      cfg.thetas = num_list(d.at("thetas_rad"), "thetas_rad");
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, "output", {"path", "format"});
    if (o.contains("path")) cfg.out_path = o.at("path").get<std::string>();
    if (o.contains("format")) cfg.format = o.at("format").get<std::string>();
  }
  return cfg;
}

ResolvedSweep resolve_sweep(const ToolConfig& cfg, const std::string& quantity,
                            double def_start, double def_stop,
                            int def_points) {
  ResolvedSweep r;
  if (cfg.sweep) {
    if (cfg.sweep->quantity != quantity)
      throw ValidationError("config: this command sweeps '" + quantity +
                            "', got '" + cfg.sweep->quantity + "'");
    r.spec = *cfg.sweep;
  } else {
    r.spec = {def_start, def_stop, def_points, quantity};
  }
  const double unit = quantity.ends_with("GHz") ? kGHz : kMHz;
  for (int i = 0; i < r.spec.points; ++i) {
    const double v = r.spec.start + (r.spec.stop - r.spec.start) * i /
                                        (r.spec.points - 1);
    r.file_values.push_back(v);
    r.rad_values.push_back(v * unit);
  }
  return r;
}

namespace {

// Unit conversion leaves round-trip noise (116.00000000000001); snapping the
// stamp to 1e-9 prints the intended value and parses back to the same run.
double snap(double v) { return std::round(v * 1e9) / 1e9; }

}  // namespace

std::string config_stamp(const ToolConfig& cfg, const std::string& command,
                         const ResolvedSweep* sweep) {
  json j;
  j["command"] = command;
  j["device"] = {{"omega1_GHz", snap(cfg.device.omega1 / kGHz)},
                 {"omega2_GHz", snap(cfg.device.omega2 / kGHz)},
                 {"omega_c_GHz", snap(cfg.device.omega_c / kGHz)},
                 {"alpha1_MHz", snap(cfg.device.alpha1 / kMHz)},
                 {"alpha2_MHz", snap(cfg.device.alpha2 / kMHz)},
                 {"alpha_c_MHz", snap(cfg.device.alpha_c / kMHz)},
                 {"g1c_MHz", snap(cfg.device.g1c / kMHz)},
                 {"g2c_MHz", snap(cfg.device.g2c / kMHz)},
                 {"truncation", cfg.device.truncation}};
  const char* fam = cfg.pulse.family == qperc::PulseFamily::chirp
                        ? "chirp"
                        : (cfg.pulse.family == qperc::PulseFamily::sech_printed
                               ? "sech_printed"
                               : "sech_monotonic");
  j["pulse"] = {{"T_us", snap(cfg.pulse.duration_T / kUs)},
                {"omega0_MHz", snap(cfg.pulse.omega0 / kMHz)},
                {"span_MHz", snap((cfg.pulse.omega_f - cfg.pulse.omega_i) / kMHz)},
                {"family", fam},
                {"sech_window", cfg.pulse.sech_window}};
  json w = json::array();
  for (double x : cfg.weights) w.push_back(snap(x / kMHz));
  j["perceptron"] = {{"weights_MHz", w}, {"bias_MHz", snap(cfg.bias / kMHz)}};
  if (sweep) {
    j["sweep"] = {{"start", sweep->spec.start},
                  {"stop", sweep->spec.stop},
                  {"points", sweep->spec.points},
                  {"quantity", sweep->spec.quantity}};
  }
  if (command == "activation") {
    json t = json::array();
    for (double x : cfg.t_list) t.push_back(snap(x / kUs));
    j["activation"] = {{"T_list_us", t}, {"inputs", cfg.inputs}};
  } else if (command == "weight-sweep") {
    json b = json::array();
    for (double x : cfg.bias_list) b.push_back(snap(x / kMHz));
    j["weight_sweep"] = {{"bias_list_MHz", b}};
  } else if (command == "negativity") {
    json n;
    if (cfg.t1) n["t1_us"] = {snap((*cfg.t1)[0] / kUs), snap((*cfg.t1)[1] / kUs)};
    json tp = json::array();
    for (double x : cfg.tphi) tp.push_back(snap(x / kUs));
    n["tphi_us"] = tp;
    j["negativity"] = n;
  } else if (command == "decompose") {
    j["decompose"] = {{"thetas_rad", cfg.thetas}};
  }
  return j.dump();
}
