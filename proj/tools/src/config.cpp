#include <sdwave/experiments.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace sdwave::experiments {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& allowed_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"name", "tag", "description", "task"}},
      {"profile",
       {"family", "value", "m", "p", "q", "r", "chi", "chi_offset", "chi_amplitude", "eta", "alpha", "beta",
        "kappa", "amplitude", "theta_scale", "theta_power", "theta_log_power", "xi_scale", "xi_power",
        "xi_log_power", "lambda", "lambda_scale", "lambda_power", "lambda_log_power"}},
      {"data", {"kind", "dim", "u0", "u1", "width", "m0", "rho", "kappa", "truncation", "file"}},
      {"solver", {"tol", "horizon", "grid", "per_decade"}},
      {"certificate", {"kind", "modes", "m", "n_start", "n_cap", "hypothesis_horizon", "log_slack"}},
      {"gevrey", {"sequence", "nu", "b", "sigma", "n_grid", "threshold", "rho", "moment_order"}},
      {"hypotheses", {"horizon"}},
      {"expect",
       {"conservation", "gate", "hold", "fail", "eigen_residual", "u_finite"}},
  };
  return keys;
}

double parse_double(const std::string& section, const std::string& key, const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError(fmt::format("[{}] {} = '{}' is not a number", section, key, text));
  }
  return x;
}

int parse_int(const std::string& section, const std::string& key, const std::string& text) {
  int x = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError(fmt::format("[{}] {} = '{}' is not an integer", section, key, text));
  }
  return x;
}

const Section& section_or_empty(const Config& c, const std::string& name) {
  static const Section empty;
  auto it = c.sections.find(name);
  return it == c.sections.end() ? empty : it->second;
}

double number(const Config& c, const std::string& s, const std::string& k, double fallback) {
  const Section& sec = section_or_empty(c, s);
  auto it = sec.find(k);
  return it == sec.end() ? fallback : parse_double(s, k, it->second);
}

int integer(const Config& c, const std::string& s, const std::string& k, int fallback) {
  const Section& sec = section_or_empty(c, s);
  auto it = sec.find(k);
  return it == sec.end() ? fallback : parse_int(s, k, it->second);
}

std::string text(const Config& c, const std::string& s, const std::string& k, const std::string& fallback = {}) {
  const Section& sec = section_or_empty(c, s);
  auto it = sec.find(k);
  return it == sec.end() ? fallback : it->second;
}

Task parse_task(const std::string& t) {
  if (t == "simulate") return Task::simulate;
  if (t == "certify-gec") return Task::certify_gec;
  if (t == "certify-lambda") return Task::certify_lambda;
  if (t == "gevrey-gate") return Task::gevrey_gate;
  if (t == "hypotheses") return Task::hypotheses;
  throw ValidationError("unknown task '" + t + "'");
}

DataKind parse_data_kind(const std::string& k) {
  if (k.empty() || k == "none") return DataKind::none;
  if (k == "delta") return DataKind::delta;
  if (k == "box") return DataKind::box;
  if (k == "gevrey36") return DataKind::gevrey36;
  if (k == "gevrey37") return DataKind::gevrey37;
  if (k == "csv") return DataKind::csv;
  throw ValidationError("unknown data kind '" + k + "'");
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

std::string Config::canonical() const {
  std::string out;
  for (const auto& [name, sec] : sections) {
    out += "[" + name + "]\n";
    for (const auto& [k, v] : sec) out += k + " = " + v + "\n";
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  sections[section][key] = value;
}

Config parse_config(std::string_view source, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  std::istringstream in{std::string(source)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("line {}: {}", e.line(), e.message()));
  }
  Config c;
  c.base_dir = base_dir;
  for (const auto& [name, node] : tree) {
    if (node.empty()) throw ConfigError("key '" + name + "' outside of any section");
    Section& sec = c.sections[name];
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError("nested key '" + name + "." + key + "'");
      sec[key] = leaf.data();
    }
  }
  return c;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

std::string to_string(Task task) {
  switch (task) {
    case Task::simulate: return "simulate";
    case Task::certify_gec: return "certify-gec";
    case Task::certify_lambda: return "certify-lambda";
    case Task::gevrey_gate: return "gevrey-gate";
    case Task::hypotheses: return "hypotheses";
  }
  return "?";
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) { return fmt::format("{:016x}", hash); }

Scenario make_scenario(const Config& config) {
  for (const auto& [name, sec] : config.sections) {
    auto allowed = allowed_keys().find(name);
    if (allowed == allowed_keys().end()) throw ValidationError("unknown section [" + name + "]");
    for (const auto& [key, value] : sec) {
      if (!allowed->second.contains(key)) throw ValidationError("unknown key [" + name + "] " + key);
    }
  }

  Scenario s;
  s.name = text(config, "scenario", "name");
  if (s.name.empty()) throw ValidationError("[scenario] name is required");
  for (char ch : s.name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) {
      throw ValidationError("scenario name '" + s.name + "' may only use [A-Za-z0-9._-]");
    }
  }
  s.tag = text(config, "scenario", "tag");
  s.description = text(config, "scenario", "description");
  s.task = parse_task(text(config, "scenario", "task"));

  s.profile_params = section_or_empty(config, "profile");
  if (s.profile_params.empty()) throw ValidationError("[profile] section is required");
  try {
    s.profile = profile_from_params(s.profile_params);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("[profile] ") + e.what());
  }

  DataSpec& d = s.data;
  d.kind = parse_data_kind(text(config, "data", "kind"));
  d.dim = integer(config, "data", "dim", 1);
  d.u0_amplitude = number(config, "data", "u0", 0.0);
  d.u1_amplitude = number(config, "data", "u1", 1.0);
  d.width = integer(config, "data", "width", 2);
  d.m0 = number(config, "data", "m0", 8.0);
  d.rho = number(config, "data", "rho", 1.0);
  d.kappa = number(config, "data", "kappa", 2.0);
  d.truncation = integer(config, "data", "truncation", 128);
  if (d.dim < 1 || d.dim > kMaxDim) throw ValidationError("[data] dim must be in 1..3");
  if (d.width < 0) throw ValidationError("[data] width must be >= 0");
  if ((d.kind == DataKind::gevrey36 || d.kind == DataKind::gevrey37) && d.dim != 1) {
    throw ValidationError("gevrey data are one-dimensional");
  }
  if (d.truncation < 1) throw ValidationError("[data] truncation must be positive");

  std::string extra;
  if (d.kind == DataKind::csv) {
    const std::string file = text(config, "data", "file");
    if (file.empty()) throw ValidationError("[data] kind = csv needs file");
    d.csv_path = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : config.base_dir / file;
    std::ifstream in(d.csv_path, std::ios::binary);
    if (!in) throw ValidationError("cannot read data file '" + d.csv_path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    d.csv_contents = buf.str();
    extra = "[data-file]\n" + d.csv_contents;
  }

  SolverSpec& sv = s.solver;
  sv.tol = number(config, "solver", "tol", sv.tol);
  sv.horizon = number(config, "solver", "horizon", sv.horizon);
  sv.grid = integer(config, "solver", "grid", sv.grid);
  sv.per_decade = integer(config, "solver", "per_decade", sv.per_decade);
  if (!(sv.horizon > 0.0) || !std::isfinite(sv.horizon)) throw ValidationError("[solver] horizon must be > 0");
  if (!(sv.tol > 0.0) || sv.tol >= 1.0) throw ValidationError("[solver] tol must lie in (0, 1)");
  if (!is_power_of_two(sv.grid)) throw ValidationError("[solver] grid must be a power of two");
  if (sv.per_decade < 1) throw ValidationError("[solver] per_decade must be positive");

  s.certificate = section_or_empty(config, "certificate");
  s.gevrey = section_or_empty(config, "gevrey");
  s.hypotheses = section_or_empty(config, "hypotheses");
  s.expect = section_or_empty(config, "expect");

  if (s.task == Task::simulate && (d.kind == DataKind::none)) {
    throw ValidationError("task simulate needs [data] kind");
  }
  if (s.task == Task::gevrey_gate && !s.gevrey.contains("sequence")) {
    throw ValidationError("task gevrey-gate needs [gevrey] sequence");
  }

  s.hash = fnv1a(extra, fnv1a(config.canonical(), fnv1a(fmt::format("sdwave format={}\n", kFormatVersion))));
  return s;
}

Config resolve_config(const std::string& reference) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(reference, ec)) return load_config(reference);
  if (auto builtin = builtin_config(reference)) return *builtin;
  throw ConfigError("'" + reference + "' is neither a readable config file nor a built-in scenario");
}

}  // namespace sdwave::experiments
