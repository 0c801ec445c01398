#include "apkin/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "apkin/tableau.hpp"

namespace apkin {

namespace {

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Simulate: return "simulate";
    default: return "converge";
  }
}

std::string to_string(OperatorKind k) {
  return k == OperatorKind::Bgk ? "bgk" : "boltzmann";
}

std::string to_string(InitialData i) {
  return i == InitialData::Equilibrium ? "eq" : "noneq";
}

std::string to_string(ReferenceKind r) {
  return r == ReferenceKind::SelfFinest ? "self" : "rk4";
}

std::vector<std::size_t> parse_nx_list(const std::string& key, const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty entry in '" + key + "' list");
    out.push_back(static_cast<std::size_t>(parse_uint(key, item)));
  }
  if (out.empty()) throw ConfigError("config: '" + key + "' list is empty");
  return out;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "command") {
    if (value == "analyze") cfg.command = Command::Analyze;
    else if (value == "simulate") cfg.command = Command::Simulate;
    else if (value == "converge") cfg.command = Command::Converge;
    else throw ConfigError("config: unknown command: " + value);
  } else if (key == "scheme") {
    cfg.scheme = value;
  } else if (key == "eps") {
    cfg.eps = parse_double(key, value);
  } else if (key == "nx") {
    cfg.nx = parse_nx_list(key, value);
  } else if (key == "nv") {
    cfg.nv = static_cast<std::size_t>(parse_uint(key, value));
  } else if (key == "vmax") {
    cfg.vmax = parse_double(key, value);
  } else if (key == "t_final") {
    cfg.t_final = parse_double(key, value);
  } else if (key == "cfl") {
    cfg.cfl = parse_double(key, value);
  } else if (key == "operator") {
    if (value == "bgk") cfg.op = OperatorKind::Bgk;
    else if (value == "boltzmann") cfg.op = OperatorKind::Boltzmann;
    else throw ConfigError("config: unknown operator: " + value);
  } else if (key == "penalized") {
    cfg.penalized = parse_bool(key, value);
  } else if (key == "init") {
    if (value == "eq") cfg.init = InitialData::Equilibrium;
    else if (value == "noneq") cfg.init = InitialData::NonEquilibrium;
    else throw ConfigError("config: unknown init: " + value);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "seed") {
    cfg.seed = parse_uint(key, value);
  } else if (key == "reference") {
    if (value == "self") cfg.reference = ReferenceKind::SelfFinest;
    else if (value == "rk4") cfg.reference = ReferenceKind::Rk4;
    else throw ConfigError("config: unknown reference: " + value);
  } else {
    throw ConfigError("config: unknown key: " + key);
  }
}

RunConfig parse_run_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file: " + path);
  return parse_run_config(in, std::move(base));
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "command = " << to_string(cfg.command) << "\n";
  out << "scheme = " << cfg.scheme << "\n";
  out << "eps = " << fmt_double(cfg.eps) << "\n";
  out << "nx = ";
  for (std::size_t i = 0; i < cfg.nx.size(); ++i) out << (i ? "," : "") << cfg.nx[i];
  out << "\n";
  out << "nv = " << cfg.nv << "\n";
  out << "vmax = " << fmt_double(cfg.vmax) << "\n";
  out << "t_final = " << fmt_double(cfg.t_final) << "\n";
  out << "cfl = " << fmt_double(cfg.cfl) << "\n";
  out << "operator = " << to_string(cfg.op) << "\n";
  out << "penalized = " << (cfg.penalized ? "true" : "false") << "\n";
  out << "init = " << to_string(cfg.init) << "\n";
  out << "out = " << cfg.out << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "reference = " << to_string(cfg.reference) << "\n";
  return out.str();
}

void validate_run_config(const RunConfig& cfg) {
  if (cfg.eps <= 0.0) throw ConfigError("config: eps must be positive");
  if (cfg.vmax <= 0.0) throw ConfigError("config: vmax must be positive");
  if (cfg.t_final <= 0.0) throw ConfigError("config: t_final must be positive");
  if (cfg.cfl <= 0.0) throw ConfigError("config: cfl must be positive");
  if (cfg.nv < 8) throw ConfigError("config: nv must be >= 8");
  if (cfg.nx.empty()) throw ConfigError("config: nx list is empty");
  for (std::size_t n : cfg.nx)
    if (n < 5) throw ConfigError("config: nx entries must be >= 5");
  if (cfg.command == Command::Converge) {
    if (cfg.nx.size() < 3) throw ConfigError("config: converge needs an nx list of length >= 3");
    for (std::size_t i = 1; i < cfg.nx.size(); ++i)
      if (cfg.nx[i] <= cfg.nx[i - 1])
        throw ConfigError("config: nx list must be strictly increasing for converge");
  } else if (cfg.nx.size() != 1) {
    throw ConfigError("config: " + to_string(cfg.command) + " takes a single nx");
  }
  if (cfg.scheme != "all") {
    if (registry().find(cfg.scheme) == registry().end())
      throw ConfigError("config: unknown scheme: " + cfg.scheme);
  } else if (cfg.command != Command::Analyze) {
    throw ConfigError("config: " + to_string(cfg.command) + " needs a single --scheme");
  }
  if (cfg.penalized && cfg.op != OperatorKind::Boltzmann)
    throw ConfigError("config: penalized runs require operator = boltzmann");
  if (cfg.op == OperatorKind::Boltzmann && !cfg.penalized && cfg.command != Command::Analyze)
    throw ConfigError("config: boltzmann runs require penalized = true (no implicit "
                      "Boltzmann solve is provided)");
}

}  // namespace apkin
