#include "snailbudget/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace snailbudget {

double to_angular(double f_hz) { return 2.0 * std::numbers::pi * f_hz; }

double gate_theta(GateKind kind) {
  return kind == GateKind::ISWAP ? std::numbers::pi / 2 : std::numbers::pi / 4;
}

std::string gate_kind_name(GateKind kind) {
  return kind == GateKind::ISWAP ? "iswap" : "sqrt_iswap";
}

std::string spectator_model_name(SpectatorModel model) {
  switch (model) {
    case SpectatorModel::ANGLE_MATCHED: return "angle_matched";
    case SpectatorModel::LITERAL: return "literal";
    case SpectatorModel::OFF: return "off";
  }
  return "angle_matched";
}

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_number(const std::string& key, const std::string& raw) {
  std::string v = lower(trim(raw));
  if (v == "inf" || v == "infinity")
    return std::numeric_limits<double>::infinity();
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "': not a number: '" + raw + "'");
  }
  if (pos != v.size())
    throw ConfigError("config: key '" + key + "': trailing junk in '" + raw +
                      "'");
  return x;
}

std::vector<double> parse_number_list(const std::string& key,
                                      const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  if (out.empty()) throw ConfigError("config: key '" + key + "': empty list");
  return out;
}

std::string format_number(double x) {
  if (std::isinf(x)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class KvDoc {
 public:
  explicit KvDoc(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      size_t hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config: line " + std::to_string(lineno) +
                          ": expected 'key = value'");
      std::string key = trim(line.substr(0, eq));
      std::string val = trim(line.substr(eq + 1));
      if (key.empty() || val.empty())
        throw ConfigError("config: line " + std::to_string(lineno) +
                          ": empty key or value");
      if (!kv_.emplace(key, val).second)
        throw ConfigError("config: duplicate key '" + key + "'");
    }
  }

  std::string require(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end())
      throw ConfigError("config: missing required key '" + key + "'");
    seen_.insert(key);
    return it->second;
  }

  std::optional<std::string> get(const std::string& key) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return std::nullopt;
    seen_.insert(key);
    return it->second;
  }

  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (!seen_.count(k)) throw ConfigError("config: unknown key '" + k + "'");
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> seen_;
};

}  // namespace

Config parse_config(const std::string& text) {
  KvDoc doc(text);
  Config c;

  double nq = parse_number("n_qubits", doc.require("n_qubits"));
  if (nq < 2 || nq != std::floor(nq))
    throw ConfigError("config: n_qubits must be an integer >= 2");
  c.device.n_qubits = static_cast<int>(nq);

  c.device.g3_over_2pi_hz =
      parse_number("g3_over_2pi_hz", doc.require("g3_over_2pi_hz"));
  if (c.device.g3_over_2pi_hz <= 0)
    throw ConfigError("config: g3_over_2pi_hz must be > 0");

  c.device.lambda = parse_number("lambda", doc.require("lambda"));
  if (!(c.device.lambda > 0 && c.device.lambda < 1))
    throw ConfigError("config: lambda out of range (0,1)");

  c.device.t1_per_qubit = parse_number_list("t1_s", doc.require("t1_s"));
  if (c.device.t1_per_qubit.size() == 1)
    c.device.t1_per_qubit.assign(c.device.n_qubits,
                                 c.device.t1_per_qubit.front());
  if (static_cast<int>(c.device.t1_per_qubit.size()) != c.device.n_qubits)
    throw ConfigError("config: t1_s must be scalar or one value per qubit");
  for (double t1 : c.device.t1_per_qubit)
    if (!(t1 > 0)) throw ConfigError("config: t1_s values must be > 0");

  c.device.bandwidth.lo_hz = parse_number("band_lo_hz", doc.require("band_lo_hz"));
  c.device.bandwidth.hi_hz = parse_number("band_hi_hz", doc.require("band_hi_hz"));
  if (!(c.device.bandwidth.lo_hz < c.device.bandwidth.hi_hz))
    throw ConfigError("config: bandwidth inverted (band_lo_hz >= band_hi_hz)");

  if (auto a = doc.get("alpha_over_2pi_hz"))
    c.device.alpha_over_2pi_hz = parse_number("alpha_over_2pi_hz", *a);
  if (auto s = doc.get("snail_freq_hz")) {
    double f = parse_number("snail_freq_hz", *s);
    if (f <= 0) throw ConfigError("config: snail_freq_hz must be > 0");
    c.device.snail_freq_hz = f;
  }

  std::string gate = lower(doc.require("gate"));
  if (gate == "iswap")
    c.gate.kind = GateKind::ISWAP;
  else if (gate == "sqrt_iswap" || gate == "sqrt-iswap")
    c.gate.kind = GateKind::SQRT_ISWAP;
  else
    throw ConfigError("config: gate must be 'iswap' or 'sqrt_iswap'");
  c.gate.theta = gate_theta(c.gate.kind);

  c.gate.target_fidelity =
      parse_number("target_fidelity", doc.require("target_fidelity"));
  if (!(c.gate.target_fidelity > 0 && c.gate.target_fidelity <= 1))
    throw ConfigError("config: target_fidelity out of range (0,1]");

  c.separations.delta_q_hz = parse_number("delta_q_hz", doc.require("delta_q_hz"));
  c.separations.delta2_q_hz =
      parse_number("delta2_q_hz", doc.require("delta2_q_hz"));
  if (c.separations.delta_q_hz <= 0 || c.separations.delta2_q_hz <= 0)
    throw ConfigError("config: separations must be > 0");

  auto optional_sep = [&](const char* key) -> std::optional<double> {
    if (auto v = doc.get(key)) {
      double x = parse_number(key, *v);
      if (x <= 0)
        throw ConfigError(std::string("config: ") + key + " must be > 0");
      return x;
    }
    return std::nullopt;
  };
  c.separations.delta_s_hz = optional_sep("delta_s_hz");
  c.separations.delta_s_conv_hz = optional_sep("delta_s_conv_hz");
  c.separations.delta4_q_hz = optional_sep("delta4_q_hz");

  if (auto m = doc.get("spectator_model")) {
    std::string v = lower(*m);
    if (v == "angle_matched")
      c.spectator_model = SpectatorModel::ANGLE_MATCHED;
    else if (v == "literal")
      c.spectator_model = SpectatorModel::LITERAL;
    else if (v == "off")
      c.spectator_model = SpectatorModel::OFF;
    else
      throw ConfigError(
          "config: spectator_model must be angle_matched, literal, or off");
  }

  doc.reject_unknown();
  return c;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize(const Config& c) {
  std::ostringstream out;
  out << "# frequencies in Hz (linear), times in seconds\n";
  out << "n_qubits = " << c.device.n_qubits << "\n";
  out << "g3_over_2pi_hz = " << format_number(c.device.g3_over_2pi_hz) << "\n";
  out << "lambda = " << format_number(c.device.lambda) << "\n";
  out << "t1_s = ";
  for (size_t i = 0; i < c.device.t1_per_qubit.size(); ++i) {
    if (i) out << ",";
    out << format_number(c.device.t1_per_qubit[i]);
  }
  out << "\n";
  out << "band_lo_hz = " << format_number(c.device.bandwidth.lo_hz) << "\n";
  out << "band_hi_hz = " << format_number(c.device.bandwidth.hi_hz) << "\n";
  if (c.device.alpha_over_2pi_hz != 0.0)
    out << "alpha_over_2pi_hz = " << format_number(c.device.alpha_over_2pi_hz)
        << "\n";
  if (c.device.snail_freq_hz)
    out << "snail_freq_hz = " << format_number(*c.device.snail_freq_hz) << "\n";
  out << "gate = " << gate_kind_name(c.gate.kind) << "\n";
  out << "target_fidelity = " << format_number(c.gate.target_fidelity) << "\n";
  out << "delta_q_hz = " << format_number(c.separations.delta_q_hz) << "\n";
  out << "delta2_q_hz = " << format_number(c.separations.delta2_q_hz) << "\n";
  if (c.separations.delta_s_hz)
    out << "delta_s_hz = " << format_number(*c.separations.delta_s_hz) << "\n";
  if (c.separations.delta_s_conv_hz)
    out << "delta_s_conv_hz = " << format_number(*c.separations.delta_s_conv_hz)
        << "\n";
  if (c.separations.delta4_q_hz)
    out << "delta4_q_hz = " << format_number(*c.separations.delta4_q_hz) << "\n";
  out << "spectator_model = " << spectator_model_name(c.spectator_model) << "\n";
  return out.str();
}

}  // namespace snailbudget
