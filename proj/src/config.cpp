#include "glancing/config.hpp"

#include "glancing/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace glancing {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double plain_number(const std::string &s) {
  const std::string t = trim(s);
  if (t.empty())
    throw ConfigError("empty number");
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception &) {
    throw ConfigError("not a number: '" + t + "'");
  }
  if (used != t.size())
    throw ConfigError("not a number: '" + t + "'");
  return v;
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fmt_axis(const AxisSpec &a) {
  if (!a.set)
    return "";
  if (a.hi == a.lo)
    return fmt(a.lo);
  return fmt(a.lo) + ":" + fmt(a.hi) + ":" + fmt(a.step);
}

std::string fmt_list(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? " " : "") + fmt(v[i]);
  return s;
}

std::string fmt_rows(const std::vector<double> &v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i)
      s += "; ";
    for (int j = 0; j < n; ++j)
      s += (j ? " " : "") + fmt(v[i * n + j]);
  }
  return s;
}

int to_int(const std::string &key, const std::string &s) {
  const double v = parse_real(s);
  if (v != std::floor(v) || std::abs(v) > 2e9)
    throw ConfigError(key + ": integer expected");
  return static_cast<int>(v);
}

bool to_bool(const std::string &key, const std::string &s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes")
    return true;
  if (t == "false" || t == "0" || t == "no")
    return false;
  throw ConfigError(key + ": boolean expected");
}

std::string one_of(const std::string &key, const std::string &s,
                   std::initializer_list<const char *> allowed) {
  const std::string t = trim(s);
  for (const char *a : allowed)
    if (t == a)
      return t;
  throw ConfigError(key + ": unrecognised value '" + t + "'");
}

} // namespace

double parse_real(const std::string &s) {
  const std::string t = trim(s);
  if (const auto c = t.find('^'); c != std::string::npos)
    return std::pow(plain_number(t.substr(0, c)), plain_number(t.substr(c + 1)));
  if (const auto c = t.find('/'); c != std::string::npos) {
    const double den = plain_number(t.substr(c + 1));
    if (den == 0)
      throw ConfigError("division by zero in '" + t + "'");
    return plain_number(t.substr(0, c)) / den;
  }
  return plain_number(t);
}

std::vector<double> parse_rows(const std::string &s) {
  std::vector<double> out;
  std::size_t width = 0;
  std::stringstream rows(s);
  std::string row;
  int nrows = 0;
  while (std::getline(rows, row, ';')) {
    std::istringstream is(row);
    std::string tok;
    std::size_t w = 0;
    while (is >> tok) {
      out.push_back(parse_real(tok));
      ++w;
    }
    if (w == 0)
      throw ConfigError("matrix: empty row");
    if (nrows && w != width)
      throw ConfigError("matrix: ragged rows");
    width = w;
    ++nrows;
  }
  if (nrows == 0 || static_cast<std::size_t>(nrows) != width)
    throw ConfigError("matrix: must be square");
  return out;
}

AxisSpec parse_axis(const std::string &s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string p;
  while (std::getline(ss, p, ':'))
    parts.push_back(trim(p));
  AxisSpec a;
  a.set = true;
  if (parts.size() == 1) {
    a.lo = a.hi = parse_real(parts[0]);
  } else if (parts.size() == 2 || parts.size() == 3) {
    a.lo = parse_real(parts[0]);
    a.hi = parse_real(parts[1]);
    if (parts.size() == 3 && parts[2] != "auto")
      a.step = parse_real(parts[2]);
    if (!(a.hi >= a.lo))
      throw ConfigError("axis: need lo <= hi in '" + s + "'");
    if (a.step < 0)
      throw ConfigError("axis: negative step in '" + s + "'");
  } else {
    throw ConfigError("axis: expected lo:hi[:step] in '" + s + "'");
  }
  return a;
}

Grid RunConfig::resolved_grid() const {
  const double nyq = params.h / 8;
  auto axis = [&](const AxisSpec &a, double fallback) {
    if (!a.set)
      return std::vector<double>{fallback};
    if (a.hi == a.lo)
      return std::vector<double>{a.lo};
    return Grid::span(a.lo, a.hi, a.step > 0 ? a.step : nyq);
  };
  Grid g;
  g.t = axis(grid.t, 0.5);
  g.x = axis(grid.x, params.a);
  g.y = axis(grid.y, 0.0);
  g.y2 = params.d == 3 ? axis(grid.y2, 0.0) : std::vector<double>{0.0};
  return g;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  // Auto steps are written out resolved.
  auto resolved = [&](AxisSpec a) {
    if (a.auto_step())
      a.step = params.h / 8;
    return fmt_axis(a);
  };
  const int n = params.d - 1;
  std::vector<std::pair<std::string, std::string>> e = {
      {"run.command", command},
      {"run.seed", std::to_string(seed)},
      {"run.workers", std::to_string(workers)},
      {"params.d", std::to_string(params.d)},
      {"params.h", fmt(params.h)},
      {"params.a", fmt(params.a)},
      {"params.delta", fmt(params.delta)},
      {"params.qform", fmt_rows(params.qform, n)},
      {"grid.t", resolved(grid.t)},
      {"grid.x", resolved(grid.x)},
      {"grid.y", resolved(grid.y)},
      {"grid.y2", resolved(grid.y2)},
      {"grid.method", method},
      {"truncation.K_max", std::to_string(truncation.K_max)},
      {"truncation.N_max", std::to_string(truncation.N_max)},
      {"truncation.N_lo", std::to_string(truncation.N_lo)},
      {"truncation.N_hi", std::to_string(truncation.N_hi)},
      {"truncation.tol", fmt(truncation.tol)},
      {"truncation.stop_ratio", fmt(truncation.stop_ratio)},
      {"truncation.N_cap", std::to_string(truncation.N_cap)},
      {"airy.K", std::to_string(airy.K)},
      {"caustics.N_lo", std::to_string(caustics.N_lo)},
      {"caustics.N_hi", std::to_string(caustics.N_hi)},
      {"caustics.omega_angle", fmt(caustics.omega_angle)},
      {"caustics.check_range", caustics.check_range ? "true" : "false"},
      {"decay.mode", decay.mode},
      {"decay.t_lo", fmt(decay.t_lo)},
      {"decay.t_hi", fmt(decay.t_hi)},
      {"decay.samples", std::to_string(decay.samples)},
      {"decay.method", decay.method},
      {"decay.N_lo", std::to_string(decay.N_lo)},
      {"decay.N_hi", std::to_string(decay.N_hi)},
      {"decay.synthetic_exponent", fmt(decay.synthetic_exponent)},
      {"decay.synthetic_amplitude", fmt(decay.synthetic_amplitude)},
      {"phase.metric", phase.metric},
      {"phase.omega", fmt_list(phase.omegas)},
      {"phase.Y_max", fmt(phase.Y_max)},
      {"phase.cells", std::to_string(phase.cells)},
      {"phase.samples", std::to_string(phase.samples)},
      {"phase.gamma_scale", fmt(phase.gamma_scale)},
      {"output.dir", out_dir},
  };
  std::vector<std::pair<std::string, std::string>> kept;
  for (auto &kv : e)
    if (!kv.second.empty())
      kept.push_back(std::move(kv));
  return kept;
}

std::string RunConfig::to_ini() const {
  std::ostringstream os;
  std::string section;
  for (const auto &[k, v] : echo()) {
    const auto dot = k.find('.');
    const std::string s = k.substr(0, dot);
    if (s != section) {
      os << (section.empty() ? "" : "\n") << "[" << s << "]\n";
      section = s;
    }
    os << k.substr(dot + 1) << " = " << v << "\n";
  }
  return os.str();
}

RunConfig parse_config(const std::string &text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  RunConfig c;
  std::map<std::string, std::string> kv;
  for (const auto &[sec, body] : tree) {
    if (body.empty())
      throw ConfigError("config: key '" + sec + "' outside a section");
    for (const auto &[key, val] : body)
      kv[sec + "." + key] = trim(val.data());
  }
  std::set<std::string> used;
  auto get = [&](const std::string &k) -> const std::string * {
    auto it = kv.find(k);
    if (it == kv.end())
      return nullptr;
    used.insert(k);
    return &it->second;
  };
  auto real = [&](const std::string &k, double &dst) {
    if (auto v = get(k)) {
      try {
        dst = parse_real(*v);
      } catch (const ConfigError &e) {
        throw ConfigError(k + ": " + e.what());
      }
    }
  };
  auto integer = [&](const std::string &k, int &dst) {
    if (auto v = get(k))
      dst = to_int(k, *v);
  };
  auto axis = [&](const std::string &k, AxisSpec &dst) {
    if (auto v = get(k)) {
      try {
        dst = parse_axis(*v);
      } catch (const ConfigError &e) {
        throw ConfigError(k + ": " + e.what());
      }
    }
  };

  if (auto v = get("run.command"))
    c.command = one_of("run.command", *v,
                       {"airy-table", "green", "compare", "caustics", "decay", "phase"});
  if (auto v = get("run.seed")) {
    const double s = parse_real(*v);
    if (s < 0 || s != std::floor(s) || s > 9.007199254740992e15)
      throw ConfigError("run.seed: non-negative integer expected");
    c.seed = static_cast<std::uint64_t>(s);
  }
  integer("run.workers", c.workers);

  integer("params.d", c.params.d);
  real("params.h", c.params.h);
  real("params.a", c.params.a);
  real("params.delta", c.params.delta);
  if (auto v = get("params.qform"))
    c.params.qform = parse_rows(*v);
  else if (c.params.d == 3)
    c.params.qform = {1, 0, 0, 1};

  axis("grid.t", c.grid.t);
  axis("grid.x", c.grid.x);
  axis("grid.y", c.grid.y);
  axis("grid.y2", c.grid.y2);
  if (auto v = get("grid.method"))
    c.method = one_of("grid.method", *v, {"spectral", "images"});

  integer("truncation.K_max", c.truncation.K_max);
  integer("truncation.N_max", c.truncation.N_max);
  integer("truncation.N_lo", c.truncation.N_lo);
  integer("truncation.N_hi", c.truncation.N_hi);
  real("truncation.tol", c.truncation.tol);
  real("truncation.stop_ratio", c.truncation.stop_ratio);
  integer("truncation.N_cap", c.truncation.N_cap);

  integer("airy.K", c.airy.K);

  integer("caustics.N_lo", c.caustics.N_lo);
  integer("caustics.N_hi", c.caustics.N_hi);
  real("caustics.omega_angle", c.caustics.omega_angle);
  if (auto v = get("caustics.check_range"))
    c.caustics.check_range = to_bool("caustics.check_range", *v);

  if (auto v = get("decay.mode"))
    c.decay.mode = one_of("decay.mode", *v, {"free", "caustics", "synthetic"});
  real("decay.t_lo", c.decay.t_lo);
  real("decay.t_hi", c.decay.t_hi);
  integer("decay.samples", c.decay.samples);
  if (auto v = get("decay.method"))
    c.decay.method = one_of("decay.method", *v, {"spectral", "images"});
  integer("decay.N_lo", c.decay.N_lo);
  integer("decay.N_hi", c.decay.N_hi);
  real("decay.synthetic_exponent", c.decay.synthetic_exponent);
  real("decay.synthetic_amplitude", c.decay.synthetic_amplitude);

  if (auto v = get("phase.metric"))
    c.phase.metric = trim(*v);
  if (auto v = get("phase.omega")) {
    c.phase.omegas.clear();
    std::istringstream is(*v);
    std::string tok;
    while (is >> tok) {
      const double w = parse_real(tok);
      if (w != 1 && w != -1)
        throw ConfigError("phase.omega: entries must be 1 or -1");
      c.phase.omegas.push_back(w);
    }
    if (c.phase.omegas.empty())
      throw ConfigError("phase.omega: empty list");
  }
  real("phase.Y_max", c.phase.Y_max);
  integer("phase.cells", c.phase.cells);
  integer("phase.samples", c.phase.samples);
  real("phase.gamma_scale", c.phase.gamma_scale);

  if (auto v = get("output.dir"))
    c.out_dir = *v;

  for (const auto &[k, v] : kv)
    if (!used.count(k))
      throw ConfigError("config: unknown key '" + k + "'");

  if (c.params.d != 2 && c.params.d != 3)
    throw ConfigError("params.d must be 2 or 3");
  if (static_cast<int>(c.params.qform.size()) != (c.params.d - 1) * (c.params.d - 1))
    throw ConfigError("params.qform: size does not match d");
  if (c.workers < 0)
    throw ConfigError("run.workers must be >= 0");
  if (c.airy.K < 1)
    throw ConfigError("airy.K must be >= 1");
  if (c.decay.samples < 2 || !(c.decay.t_hi > c.decay.t_lo) || !(c.decay.t_lo > 0))
    throw ConfigError("decay: need 0 < t_lo < t_hi and samples >= 2");
  if (c.phase.cells < 2 || c.phase.cells % 2 || c.phase.samples < 1)
    throw ConfigError("phase: cells must be even and >= 2, samples >= 1");
  return c;
}

RunConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace glancing
