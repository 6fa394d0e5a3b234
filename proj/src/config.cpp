#include "fracpc/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fracpc/kernels.hpp"

namespace fracpc {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Drops a trailing comment outside double quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && line[i] == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

const std::set<std::string, std::less<>>& known_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "system",       "sigma",         "f",           "omega",        "a",
      "b",            "lambda",        "dim",         "orders",       "init",
      "init_rate",    "horizon",       "steps",       "precision",    "workers",
      "mode",         "inner",         "kernel",      "out",          "stride",
      "seeds",        "f_start",       "f_end",       "f_count",      "transient_frac",
      "strobe_period", "strobe_phase", "theta",       "stats_out",    "bench_steps",
      "bench_workers", "repeats",      "speedup_out", "threshold",    "verify_alpha",
      "verify_levels", "verify_min_order"};
  return keys;
}

bool is_rhs_key(std::string_view key) {
  if (key.size() < 4 || key.substr(0, 3) != "rhs") return false;
  return std::all_of(key.begin() + 3, key.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

double to_double(const std::string& field, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v)) {
    throw ValidationError(field + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::size_t to_size(const std::string& field, std::string_view text) {
  text = trim(text);
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    // accept integral scientific notation such as 2e5
    double d = 0.0;
    const auto [dend, dec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (dec == std::errc() && dend == text.data() + text.size() && d >= 0.0 && d == std::floor(d) &&
        d < 1e15) {
      return static_cast<std::size_t>(d);
    }
    throw ValidationError(field + ": expected a non-negative integer, got '" + std::string(text) +
                          "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = text.find(sep, start);
    parts.push_back(trim(text.substr(start, at == std::string_view::npos ? at : at - start)));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return parts;
}

std::vector<double> to_doubles(const std::string& field, std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto part : split(text, ',')) out.push_back(to_double(field, part));
  return out;
}

std::vector<std::size_t> to_sizes(const std::string& field, std::string_view text) {
  std::vector<std::size_t> out;
  if (trim(text).empty()) return out;
  for (const auto part : split(text, ',')) out.push_back(to_size(field, part));
  return out;
}

// Shortest text that reads back to the same double.
std::string shortest(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, end) : std::to_string(v);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + shortest(v[i]);
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

}  // namespace

ConfigSections parse_config_text(std::string_view text, const std::string& source) {
  ConfigSections sections;
  sections[""];
  std::string current;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    line = trim(strip_comment(line));
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigParseError(source, line_no, "unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (current.empty()) throw ConfigParseError(source, line_no, "empty section name");
      sections[current];
    } else {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw ConfigParseError(source, line_no, "expected 'key = value'");
      }
      const std::string key(trim(line.substr(0, eq)));
      std::string_view value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigParseError(source, line_no, "missing key before '='");
      if (!value.empty() && value.front() == '"') {
        if (value.size() < 2 || value.back() != '"') {
          throw ConfigParseError(source, line_no, "unterminated quoted value");
        }
        value = value.substr(1, value.size() - 2);
      }
      sections[current][key] = std::string(value);
    }
    if (end == text.size()) break;
  }
  return sections;
}

ConfigSections read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError(path.string(), 0, "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.string());
}

std::size_t RunConfig::dim() const {
  if (system == "lcr") return 2;
  if (system == "linear") return linear_dim;
  return rhs.size();
}

System RunConfig::make_system() const {
  if (system == "lcr") return System::lcr(lcr);
  if (system == "linear") return System::linear(lambda, linear_dim);
  if (rhs.empty()) throw ValidationError("rhs1: expression system needs rhs1..rhsd");
  try {
    return System::expression(parse_rhs(rhs));
  } catch (const ExprError& e) {
    throw ValidationError(std::string("rhs: ") + e.what());
  }
}

ProblemSpec RunConfig::problem() const {
  ProblemSpec spec;
  spec.system = make_system();
  const std::size_t d = spec.system.dim();

  if (orders.size() == 1) {
    spec.orders.assign(d, orders.front());
  } else if (orders.size() == d) {
    spec.orders = orders;
  } else {
    throw ValidationError("orders: expected 1 or " + std::to_string(d) + " values, got " +
                          std::to_string(orders.size()));
  }

  std::vector<double> y0 = init;
  if (y0.empty()) y0.assign(d, 0.0);
  if (y0.size() != d) {
    throw ValidationError("init: expected " + std::to_string(d) + " values, got " +
                          std::to_string(y0.size()));
  }
  const bool needs_rate = std::any_of(spec.orders.begin(), spec.orders.end(),
                                      [](double a) { return a > 1.0; });
  if (needs_rate && init_rate.size() != d) {
    throw ValidationError("init_rate: orders above 1 need " + std::to_string(d) +
                          " initial first derivatives");
  }
  for (std::size_t i = 0; i < d; ++i) {
    std::vector<double> comp{y0[i]};
    if (spec.orders[i] > 1.0) comp.push_back(init_rate[i]);
    spec.init.push_back(std::move(comp));
  }

  if (!(horizon > 0.0)) throw ValidationError("horizon: required, must be > 0");
  if (steps == 0) throw ValidationError("steps: required, must be >= 1");
  spec.horizon = horizon;
  spec.steps = steps;
  (void)spec.instantiate<double>();
  return spec;
}

PartitionPlan RunConfig::plan() const { return PartitionPlan(workers, mode, inner); }

std::vector<double> RunConfig::f_values() const {
  std::vector<double> out;
  if (f_count == 1) return {f_start};
  for (std::size_t i = 0; i < f_count; ++i) {
    out.push_back(f_start + (f_end - f_start) * static_cast<double>(i) /
                                static_cast<double>(f_count - 1));
  }
  return out;
}

std::string RunConfig::describe() const {
  std::ostringstream os;
  os << "subcommand = " << subcommand << '\n';
  os << "system = " << system << '\n';
  if (system == "lcr") {
    os << "sigma = " << shortest(lcr.sigma) << "\nf = " << shortest(lcr.f) << "\nomega = " << shortest(lcr.omega)
       << "\na = " << shortest(lcr.a) << "\nb = " << shortest(lcr.b) << '\n';
  } else if (system == "linear") {
    os << "lambda = " << shortest(lambda) << "\ndim = " << linear_dim << '\n';
  } else {
    for (std::size_t i = 0; i < rhs.size(); ++i) os << "rhs" << i + 1 << " = \"" << rhs[i] << "\"\n";
  }
  os << "orders = " << join(orders) << "\ninit = " << join(init) << '\n';
  if (!init_rate.empty()) os << "init_rate = " << join(init_rate) << '\n';
  os << "horizon = " << shortest(horizon) << "\nsteps = " << steps << '\n';
  os << "precision = " << to_string(precision) << "\nworkers = " << workers
     << "\nmode = " << to_string(mode) << "\ninner = " << inner << '\n';
  if (!kernel.empty()) os << "kernel = " << kernel << '\n';
  os << "out = " << out << "\nstride = " << stride << '\n';
  if (subcommand == "bifurcate") {
    os << "f_start = " << shortest(f_start) << "\nf_end = " << shortest(f_end) << "\nf_count = " << f_count
       << "\ntransient_frac = " << shortest(transient_frac) << "\nstrobe_phase = " << shortest(strobe_phase)
       << "\ntheta = " << shortest(theta) << '\n';
    if (strobe_period) os << "strobe_period = " << shortest(*strobe_period) << '\n';
    os << "seeds = ";
    for (std::size_t i = 0; i < seeds.size(); ++i) os << (i ? "; " : "") << join(seeds[i]);
    os << "\nstats_out = " << stats_out << '\n';
  }
  if (subcommand == "bench") {
    os << "bench_steps = " << join(bench_steps) << "\nbench_workers = " << join(bench_workers)
       << "\nrepeats = " << repeats << "\nspeedup_out = " << speedup_out << '\n';
  }
  if (subcommand == "precision") os << "threshold = " << shortest(threshold) << '\n';
  if (subcommand == "verify") {
    os << "verify_alpha = " << shortest(verify_alpha) << "\nverify_levels = " << join(verify_levels)
       << "\nverify_min_order = " << shortest(verify_min_order) << '\n';
  }
  return os.str();
}

RunConfig resolve_config(const ConfigSections& sections, std::string_view subcommand,
                         const KeyValues& overrides) {
  KeyValues merged;
  if (const auto it = sections.find(""); it != sections.end()) merged = it->second;
  if (const auto it = sections.find(std::string(subcommand)); it != sections.end()) {
    for (const auto& [k, v] : it->second) merged[k] = v;
  }
  for (const auto& [k, v] : overrides) merged[k] = v;

  RunConfig c;
  c.subcommand = std::string(subcommand);
  std::map<std::size_t, std::string> rhs_by_index;
  for (const auto& [key, value] : merged) {
    if (is_rhs_key(key)) {
      const std::size_t index = to_size(key, std::string_view(key).substr(3));
      if (index == 0) throw ValidationError(key + ": expressions are numbered from rhs1");
      rhs_by_index[index] = value;
      continue;
    }
    if (!known_keys().contains(key)) throw ValidationError(key + ": unknown configuration key");

    if (key == "system") {
      if (value != "lcr" && value != "linear" && value != "expr") {
        throw ValidationError("system: expected lcr|linear|expr, got '" + value + "'");
      }
      c.system = value;
    } else if (key == "sigma") {
      c.lcr.sigma = to_double(key, value);
    } else if (key == "f") {
      c.lcr.f = to_double(key, value);
    } else if (key == "omega") {
      c.lcr.omega = to_double(key, value);
    } else if (key == "a") {
      c.lcr.a = to_double(key, value);
    } else if (key == "b") {
      c.lcr.b = to_double(key, value);
    } else if (key == "lambda") {
      c.lambda = to_double(key, value);
    } else if (key == "dim") {
      c.linear_dim = to_size(key, value);
    } else if (key == "orders") {
      c.orders = to_doubles(key, value);
    } else if (key == "init") {
      c.init = to_doubles(key, value);
    } else if (key == "init_rate") {
      c.init_rate = to_doubles(key, value);
    } else if (key == "horizon") {
      c.horizon = to_double(key, value);
    } else if (key == "steps") {
      c.steps = to_size(key, value);
    } else if (key == "precision") {
      c.precision = parse_precision(value);
    } else if (key == "workers") {
      c.workers = to_size(key, value);
    } else if (key == "mode") {
      c.mode = parse_partition_mode(value);
    } else if (key == "inner") {
      c.inner = to_size(key, value);
    } else if (key == "kernel") {
      try {
        (void)kernels::parse_isa(value);
      } catch (const std::invalid_argument&) {
        throw ValidationError("kernel: expected scalar|avx2|neon, got '" + value + "'");
      }
      c.kernel = value;
    } else if (key == "out") {
      c.out = value;
    } else if (key == "stride") {
      c.stride = to_size(key, value);
    } else if (key == "seeds") {
      c.seeds.clear();
      for (const auto point : split(value, ';')) {
        if (!point.empty()) c.seeds.push_back(to_doubles(key, point));
      }
    } else if (key == "f_start") {
      c.f_start = to_double(key, value);
    } else if (key == "f_end") {
      c.f_end = to_double(key, value);
    } else if (key == "f_count") {
      c.f_count = to_size(key, value);
    } else if (key == "transient_frac") {
      c.transient_frac = to_double(key, value);
    } else if (key == "strobe_period") {
      c.strobe_period = to_double(key, value);
    } else if (key == "strobe_phase") {
      c.strobe_phase = to_double(key, value);
    } else if (key == "theta") {
      c.theta = to_double(key, value);
    } else if (key == "stats_out") {
      c.stats_out = value;
    } else if (key == "bench_steps") {
      c.bench_steps = to_sizes(key, value);
    } else if (key == "bench_workers") {
      c.bench_workers = to_sizes(key, value);
    } else if (key == "repeats") {
      c.repeats = to_size(key, value);
    } else if (key == "speedup_out") {
      c.speedup_out = value;
    } else if (key == "threshold") {
      c.threshold = to_double(key, value);
    } else if (key == "verify_alpha") {
      c.verify_alpha = to_double(key, value);
    } else if (key == "verify_levels") {
      c.verify_levels = to_sizes(key, value);
    } else if (key == "verify_min_order") {
      c.verify_min_order = to_double(key, value);
    }
  }

  std::size_t expected = 1;
  for (const auto& [index, source] : rhs_by_index) {
    if (index != expected++) {
      throw ValidationError("rhs" + std::to_string(expected - 1) + ": missing expression");
    }
    c.rhs.push_back(source);
  }
  if (c.orders.empty()) c.orders = {0.9};

  // Field-level checks that do not need a full problem.
  if (c.workers == 0) throw ValidationError("workers: must be >= 1");
  if (c.inner == 0) throw ValidationError("inner: must be >= 1");
  if (c.stride == 0) throw ValidationError("stride: must be >= 1");
  if (c.repeats == 0) throw ValidationError("repeats: must be >= 1");
  if (c.f_count == 0) throw ValidationError("f_count: must be >= 1");
  if (c.f_count > 1 && !(c.f_end > c.f_start)) {
    throw ValidationError("f_end: must exceed f_start when f_count > 1");
  }
  if (!(c.transient_frac >= 0.0 && c.transient_frac < 1.0)) {
    throw ValidationError("transient_frac: must lie in [0, 1)");
  }
  if (!(c.theta > 0.0)) throw ValidationError("theta: must be > 0");
  if (c.strobe_period && !(*c.strobe_period > 0.0)) {
    throw ValidationError("strobe_period: must be > 0");
  }
  if (!(c.strobe_phase >= 0.0)) throw ValidationError("strobe_phase: must be >= 0");
  if (!(c.threshold > 0.0)) throw ValidationError("threshold: must be > 0");
  if (c.verify_levels.size() < 2) throw ValidationError("verify_levels: need at least two levels");
  for (const std::size_t level : c.verify_levels) {
    if (level == 0 || level > 24) throw ValidationError("verify_levels: levels must lie in [1, 24]");
  }
  if (c.subcommand != "verify") (void)c.problem();
  if (c.subcommand == "verify" && !(c.verify_alpha > 0.0 && c.verify_alpha <= 1.0)) {
    throw ValidationError("verify_alpha: must lie in (0, 1]");
  }
  return c;
}

RunConfig load_config(const std::optional<std::filesystem::path>& path,
                      std::string_view subcommand, const KeyValues& overrides) {
  const ConfigSections sections = path ? read_config_file(*path) : ConfigSections{{"", {}}};
  return resolve_config(sections, subcommand, overrides);
}

}  // namespace fracpc
