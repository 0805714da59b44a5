#include "heq/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace heq {

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  const double a = 0.01, b = 0.1;
  const int k = 10;
  for (int i = 0; i < k; ++i) grid.push_back(3.0 * (a + i * (b - a) / (k - 1)));
  return grid;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::Config, "config line " + std::to_string(line) + ": " + msg);
}

double to_double(std::size_t line, const std::string& s) {
  const std::string t = trim(s);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + t + "'");
  }
  if (used != t.size()) fail(line, "expected a number, got '" + t + "'");
  return v;
}

std::int64_t to_int(std::size_t line, const std::string& s) {
  const std::string t = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) fail(line, "expected an integer, got '" + t + "'");
  return v;
}

std::uint64_t to_u64(std::size_t line, const std::string& s) {
  const std::string t = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) fail(line, "expected an unsigned integer, got '" + t + "'");
  return v;
}

std::size_t to_count(std::size_t line, const std::string& s) {
  const std::int64_t v = to_int(line, s);
  if (v < 0) fail(line, "expected a non-negative count");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

std::vector<double> to_doubles(std::size_t line, const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(line, item));
  return out;
}

// `linspace(a, b, k)` or `s*linspace(a, b, k)`, else a comma list.
std::vector<double> to_grid(std::size_t line, const std::string& s) {
  const auto pos = s.find("linspace(");
  if (pos == std::string::npos) return to_doubles(line, s);
  double scale = 1.0;
  const std::string prefix = trim(s.substr(0, pos));
  if (!prefix.empty()) {
    if (prefix.back() != '*') fail(line, "expected `scale*linspace(a, b, k)`");
    scale = to_double(line, prefix.substr(0, prefix.size() - 1));
  }
  const auto close = s.find(')', pos);
  if (close == std::string::npos || !trim(s.substr(close + 1)).empty()) fail(line, "malformed linspace(...)");
  const auto args = split_list(s.substr(pos + 9, close - pos - 9));
  if (args.size() != 3) fail(line, "linspace takes (a, b, k)");
  const double a = to_double(line, args[0]);
  const double b = to_double(line, args[1]);
  const std::size_t k = to_count(line, args[2]);
  if (k < 1) fail(line, "linspace needs k >= 1");
  std::vector<double> grid;
  for (std::size_t i = 0; i < k; ++i) {
    const double t = k == 1 ? b : a + static_cast<double>(i) * (b - a) / static_cast<double>(k - 1);
    grid.push_back(scale * t);
  }
  return grid;
}

BifunctionKind to_kind(std::size_t line, const std::string& s) {
  if (s == "example51") return BifunctionKind::Example51;
  if (s == "example52") return BifunctionKind::Example52;
  if (s == "matrix") return BifunctionKind::Matrix;
  fail(line, "bifunction must be example51 | example52 | matrix");
}

}  // namespace

BenchConfig parse_config(std::istream& in) {
  BenchConfig cfg;
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  bool dimension_set = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"problem", "solver", "init", "bench", "verify"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
        fail(line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) fail(line_no, "key '" + key + "' appears before any [section]");
    const std::string full = section + "." + key;

    if (full == "problem.bifunction") {
      cfg.example = to_kind(line_no, value);
    } else if (full == "problem.dimension") {
      cfg.dimension = to_count(line_no, value);
      dimension_set = true;
    } else if (full == "problem.matrix") {
      cfg.matrix = to_doubles(line_no, value);
    } else if (full == "solver.methods" || full == "solver.method") {
      cfg.methods.clear();
      if (value == "both") {
        cfg.methods = {Method::Remb, Method::Remd};
      } else {
        try {
          for (const auto& m : split_list(value)) cfg.methods.push_back(parse_method(m));
        } catch (const Error& e) {
          fail(line_no, e.what());
        }
      }
    } else if (full == "solver.variant") {
      try {
        cfg.variant = parse_variant(value);
      } catch (const Error& e) {
        fail(line_no, e.what());
      }
    } else if (full == "solver.lambda_grid") {
      cfg.lambda_grid = to_grid(line_no, value);
    } else if (full == "solver.tol") {
      cfg.tol = to_double(line_no, value);
    } else if (full == "solver.max_iter") {
      cfg.max_iter = to_count(line_no, value);
    } else if (full == "solver.stall_factor") {
      cfg.stall_factor = to_double(line_no, value);
    } else if (full == "init.mode") {
      if (value == "random_int_box") {
        cfg.init.mode = InitSpec::Mode::RandomIntBox;
      } else if (value == "fixed") {
        cfg.init.mode = InitSpec::Mode::Fixed;
      } else {
        fail(line_no, "init mode must be random_int_box | fixed");
      }
    } else if (full == "init.lo") {
      cfg.init.lo = to_int(line_no, value);
    } else if (full == "init.hi") {
      cfg.init.hi = to_int(line_no, value);
    } else if (full == "init.point") {
      cfg.init.point = to_doubles(line_no, value);
    } else if (full == "bench.trials") {
      cfg.trials = to_count(line_no, value);
    } else if (full == "bench.seed") {
      cfg.seed = to_u64(line_no, value);
    } else if (full == "bench.threads") {
      cfg.threads = to_count(line_no, value);
    } else if (full == "verify.samples") {
      cfg.verify_samples = to_count(line_no, value);
    } else {
      fail(line_no, "unknown key '" + key + "' in [" + section + "]");
    }
  }
  if (!dimension_set) {
    if (cfg.example == BifunctionKind::Example51) {
      cfg.dimension = 3;
    } else if (cfg.example == BifunctionKind::Matrix && !cfg.matrix.empty()) {
      std::size_t n = 1;
      while (n * n < cfg.matrix.size()) ++n;
      cfg.dimension = n;
    }
  }
  cfg.validate();
  return cfg;
}

BenchConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
  return parse_config(in);
}

void BenchConfig::validate() const {
  auto bad = [](const std::string& msg) { throw Error(ErrorCode::Config, msg); };
  if (dimension == 0) bad("dimension must be >= 1");
  if (example == BifunctionKind::Example51 && dimension != 3) bad("example51 is defined for dimension 3");
  if (example == BifunctionKind::Matrix && matrix.size() != dimension * dimension) {
    bad("matrix bifunction needs dimension^2 = " + std::to_string(dimension * dimension) + " values");
  }
  if (variant == ResolventVariant::PaperLiteralEx51 && example != BifunctionKind::Example51) {
    bad("variant paper-literal requires bifunction = example51");
  }
  if (methods.empty()) bad("at least one method is required");
  if (lambda_grid.empty()) bad("lambda_grid is empty");
  for (double l : lambda_grid) {
    if (!(l > 0.0)) bad("lambda_grid values must be positive");
  }
  if (!(tol > 0.0)) bad("tol must be positive");
  if (max_iter == 0) bad("max_iter must be >= 1");
  if (!(stall_factor >= 0.0)) bad("stall_factor must be >= 0");
  if (trials == 0) bad("trials must be >= 1");
  if (init.mode == InitSpec::Mode::RandomIntBox) {
    if (!(init.lo < init.hi)) bad("init needs lo < hi");
    if (init.lo < 1) bad("init lo must be >= 1 on the positive orthant");
  } else {
    if (init.point.size() != dimension) bad("init point length must equal dimension");
    for (double v : init.point) {
      if (!(v > kMinCoordinate && v < kMaxCoordinate)) bad("init point coordinates must be positive");
    }
  }
}

Manifold BenchConfig::manifold() const { return Manifold::log_orthant(dimension); }

LogAffineBifunction BenchConfig::make_bifunction() const {
  switch (example) {
    case BifunctionKind::Example51: return LogAffineBifunction::example51();
    case BifunctionKind::Example52: return LogAffineBifunction::example52(dimension);
    case BifunctionKind::Matrix: break;
  }
  return LogAffineBifunction::from_row_major(dimension, matrix);
}

SolverConfig BenchConfig::solver_config(bool record_trace) const {
  SolverConfig s;
  s.tol = tol;
  s.max_iter = max_iter;
  s.variant = variant;
  s.record_trace = record_trace;
  s.stall_factor = stall_factor;
  return s;
}

}  // namespace heq
