// Command-line front end. One command per run; the result goes to --output
// (written atomically), a one-line summary to stdout, diagnostics to stderr.
// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "landau/landau.hpp"

using json = nlohmann::ordered_json;
using namespace landau;

namespace {

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- parameter registry: CLI flags, config-file keys and resolved values ----

template <class T>
T parse_value(const std::string& key, const std::string& text);

template <>
std::string parse_value<std::string>(const std::string&, const std::string& text) {
  return text;
}

template <>
double parse_value<double>(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw config_error("key '" + key + "': expected a number, got '" + text + "'");
  return v;
}

template <>
int parse_value<int>(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size()) throw config_error("key '" + key + "': expected an integer, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

template <>
std::vector<double> parse_value<std::vector<double>>(const std::string& key, const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split_list(text)) v.push_back(parse_value<double>(key, s));
  return v;
}

template <>
std::vector<std::string> parse_value<std::vector<std::string>>(const std::string&, const std::string& text) {
  return split_list(text);
}

json to_json_value(const std::string& v) { return v; }
json to_json_value(double v) { return v; }
json to_json_value(int v) { return v; }
json to_json_value(const std::vector<double>& v) { return v; }
json to_json_value(const std::vector<std::string>& v) { return v; }

struct Param {
  std::string key;
  CLI::Option* option = nullptr;
  std::function<void(const std::string&)> assign;
  std::function<json()> value;
};

class Params {
 public:
  template <class T>
  void add(CLI::App* app, const std::string& key, T& ref, const std::string& help) {
    auto* opt = app->add_option("--" + key, ref, help);
    if constexpr (std::is_same_v<T, std::vector<double>> || std::is_same_v<T, std::vector<std::string>>) {
      opt->delimiter(',');
    }
    params_.push_back({key, opt, [&ref, key](const std::string& s) { ref = parse_value<T>(key, s); },
                       [&ref] { return to_json_value(ref); }});
  }

  const Param* find(const std::string& key) const {
    for (const auto& p : params_)
      if (p.key == key) return &p;
    return nullptr;
  }

  json resolved() const {
    json j = json::object();
    for (const auto& p : params_) j[p.key] = p.value();
    return j;
  }

 private:
  std::vector<Param> params_;
};

// flat "key = value" lines; '#' starts a comment
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error(fmt::format("{}:{}: expected 'key = value'", path, lineno));
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw config_error(fmt::format("{}:{}: empty key", path, lineno));
    out.emplace_back(key, value);
  }
  return out;
}

// ---- output ----

struct Result {
  json data = json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string summary;
};

std::string num(double v) { return fmt::format("{}", v); }

std::string mp_string(const mp_real& v, unsigned bits) { return to_decimal_string(v, bits_to_digits10(bits) + 2); }

void flatten(const json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), rows);
  } else if (j.is_string()) {
    rows.push_back({prefix, j.get<std::string>()});
  } else {
    rows.push_back({prefix, j.dump()});
  }
}

std::string render(const Result& r, const std::string& format, const json& config) {
  if (format == "json") {
    json doc = json::object();
    doc["config"] = config;
    for (const auto& [k, v] : r.data.items()) doc[k] = v;
    return doc.dump(2) + "\n";
  }
  std::vector<std::string> header = r.header;
  std::vector<std::vector<std::string>> rows = r.rows;
  if (header.empty()) {
    header = {"key", "value"};
    flatten(r.data, "", rows);
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
  return os.str();
}

void write_atomically(const std::string& path, const std::string& content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw config_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw config_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw config_error("cannot move output into place: " + ec.message());
  }
}

// ---- shared argument helpers ----

Vec2 parse_point(const std::string& key, const std::vector<double>& v) {
  if (v.size() != 2) throw config_error("key '" + key + "': expected two coordinates 'x,y'");
  return {v[0], v[1]};
}

// "circle[:R]", "ellipse:A:B", "flower[:AMP[:K]]" or a curve file
SmoothCurve load_curve_spec(const std::string& spec, int n) {
  if (spec.empty()) throw config_error("key 'curve': a curve file or builtin shape is required");
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  const int nodes = n > 0 ? n : 128;
  auto arg = [&](std::size_t i, double dflt) { return parts.size() > i ? parse_value<double>("curve", parts[i]) : dflt; };
  if (parts[0] == "circle") return circle(nodes, arg(1, 1.0));
  if (parts[0] == "ellipse") return ellipse(nodes, arg(1, 2.0), arg(2, 1.0));
  if (parts[0] == "flower") return flower(nodes, arg(1, 0.2), static_cast<int>(arg(2, 3)));
  const auto c = load_curve(spec);
  return n > 0 ? c.resampled(n) : c;
}

std::vector<cplx> density_from_spec(const std::string& spec, const SmoothCurve& c) {
  std::vector<cplx> u(c.size());
  if (spec.rfind("mode:", 0) == 0) {
    const int k = parse_value<int>("density", spec.substr(5));
    for (int i = 0; i < c.size(); ++i) u[i] = std::polar(1.0, k * c.parameter(i));
    return u;
  }
  const double v = parse_value<double>("density", spec);
  std::fill(u.begin(), u.end(), cplx(v));
  return u;
}

Side side_from(const std::string& s) {
  if (s == "interior") return Side::interior;
  if (s == "exterior") return Side::exterior;
  throw config_error("key 'side': expected 'interior' or 'exterior'");
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

// ---- commands ----

struct Settings {
  // globals
  std::string output, format, config;
  // common numeric parameters
  double b = 1, R = 1, R2 = 0, tau = 0, threshold = 1e8, eps_min = -1, eps_max = 1;
  int d = 1, q = 1, n = 0, N = 6, precision = 256, mmax = 40, jmax = 40, kmin = 10, kmax = 40, node = 0,
      eps_count = 101;
  std::string curve, kind = "A", density = "1", side = "exterior";
  std::vector<double> z{0, 0}, w{0, 0}, source;
  std::vector<std::string> s{"1e-2", "1e-3", "1e-4"}, eps;
};

Result cmd_level(const Settings& st) {
  const MagneticSetup setup(st.b, st.d);
  const double level = landau_level(setup, LandauIndex(st.q));
  Result r;
  r.data["level"] = level;
  r.header = {"b", "d", "q", "level"};
  r.rows.push_back({num(st.b), std::to_string(st.d), std::to_string(st.q), num(level)});
  r.summary = num(level);
  return r;
}

Result cmd_projection(const Settings& st) {
  const MagneticSetup setup(st.b, 1);
  const Vec2 z = parse_point("z", st.z), w = parse_point("w", st.w);
  const cplx k = projection_kernel(setup, LandauIndex(st.q), cplx(z.x(), z.y()), cplx(w.x(), w.y()));
  Result r;
  r.data["kernel"] = cjson(k);
  r.header = {"re", "im"};
  r.rows.push_back({num(k.real()), num(k.imag())});
  r.summary = fmt::format("P_{}(z, w) = {} + {}i", st.q, k.real(), k.imag());
  return r;
}

Result cmd_green(const Settings& st) {
  if (st.precision < 24) throw config_error("key 'precision': at least 24 bits required");
  const unsigned bits = static_cast<unsigned>(st.precision);
  PrecisionScope scope(bits);
  const auto coeffs = expansion_coeffs<mp_real>(st.d, st.N);
  Result r;
  r.header = {"s", "I", "I0", "Iinf", "expansion", "residual"};
  json rows = json::array();
  double worst = 0;
  for (const auto& text : st.s) {
    mp_real s;
    try {
      s = mp_real(text);
    } catch (const std::exception&) {
      throw config_error("key 's': '" + text + "' is not a number");
    }
    const mp_real i0 = eval_I0(s, st.d), iinf = eval_Iinf(s, st.d);
    const mp_real total = i0 + iinf;
    const mp_real ex = eval_I0_expansion(s, st.d, coeffs);
    const mp_real res = ex - i0;
    std::vector<std::string> cells{text, mp_string(total, bits), mp_string(i0, bits), mp_string(iinf, bits),
                                   mp_string(ex, bits), mp_string(res, bits)};
    rows.push_back({{"s", cells[0]}, {"I", cells[1]}, {"I0", cells[2]}, {"Iinf", cells[3]},
                    {"expansion", cells[4]}, {"residual", cells[5]}});
    r.rows.push_back(std::move(cells));
    worst = std::max(worst, static_cast<double>(abs(res)));
  }
  r.data["rows"] = rows;
  r.summary = fmt::format("green d={} N={}: {} points, max |residual| {:.3e}", st.d, st.N, st.s.size(), worst);
  return r;
}

Result cmd_capacity(const Settings& st) {
  const auto c = load_curve_spec(st.curve, st.n);
  const auto m = solve_equilibrium(c);
  const double cap = std::exp(-m.robin_constant);
  Result r;
  r.data["capacity"] = cap;
  r.data["robin_constant"] = m.robin_constant;
  r.data["n"] = c.size();
  r.data["residual"] = m.residual;
  r.data["total_mass"] = m.total_mass;
  r.data["nonnegative_density"] = m.nonnegative;
  r.data["rescaled"] = m.rescaled;
  r.header = {"capacity", "robin_constant", "n", "residual"};
  r.rows.push_back({num(cap), num(m.robin_constant), std::to_string(c.size()), num(m.residual)});
  r.summary = fmt::format("capacity {} (n = {})", cap, c.size());
  return r;
}

ToeplitzSpectrum spectrum_for(const Settings& st, int m_max) {
  if (st.precision < 24) throw config_error("key 'precision': at least 24 bits required");
  const unsigned bits = static_cast<unsigned>(st.precision);
  if (st.d == 2) return tensor_spectrum_d2(st.q, st.b, st.R, st.R2 > 0 ? st.R2 : st.R, m_max, bits);
  if (st.d != 1) throw config_error("key 'd': toeplitz supports d = 1 and the d = 2 product of disks");
  if (!st.curve.empty()) return galerkin_spectrum(st.q, st.b, load_curve_spec(st.curve, st.n), m_max);
  return radial_spectrum(st.q, st.b, st.R, m_max, bits);
}

json spectrum_meta(const ToeplitzSpectrum& sp) {
  PrecisionScope scope(sp.precision_bits);
  json m;
  m["q"] = sp.q;
  m["d"] = sp.d;
  m["b"] = sp.b;
  m["domain"] = sp.domain;
  m["precision_bits"] = sp.precision_bits;
  m["truncation_error"] = sp.truncation_error;
  m["reliable_floor"] = mp_string(sp.reliable_floor, sp.precision_bits);
  return m;
}

Result spectrum_table(const ToeplitzSpectrum& sp, int count) {
  const auto seq = limit_sequence(sp, count);
  PrecisionScope scope(sp.precision_bits);
  Result r;
  r.data["spectrum"] = spectrum_meta(sp);
  r.header = {"j", "s_j", "limit"};
  json rows = json::array();
  for (int j = 1; j <= count; ++j) {
    std::vector<std::string> cells{std::to_string(j), mp_string(sp.eigenvalues[j - 1], sp.precision_bits),
                                   mp_string(seq[j - 1].value, sp.precision_bits)};
    rows.push_back({{"j", j}, {"s_j", cells[1]}, {"limit", cells[2]}});
    r.rows.push_back(std::move(cells));
  }
  r.data["rows"] = rows;
  return r;
}

Result cmd_toeplitz_spectrum(const Settings& st) {
  const auto sp = spectrum_for(st, st.mmax);
  int count = 0;
  {
    PrecisionScope scope(sp.precision_bits);
    for (const auto& v : sp.eigenvalues)
      if (v > 0) ++count;
      else break;
  }
  Result r = spectrum_table(sp, count);
  r.summary = fmt::format("toeplitz spectrum q={} {}: {} eigenvalues", st.q, sp.domain, count);
  return r;
}

Result cmd_toeplitz_limit(const Settings& st) {
  if (st.jmax < 1) throw config_error("key 'jmax': must be >= 1");
  const auto sp = spectrum_for(st, st.jmax + st.q + 8);
  Result r = spectrum_table(sp, st.jmax);
  r.summary = fmt::format("toeplitz limit q={} j={}: {:.10g}", st.q, st.jmax, std::stod(r.rows.back()[2]));
  return r;
}

Result cmd_toeplitz_counting(const Settings& st) {
  std::vector<std::string> eps = st.eps;
  if (eps.empty())
    for (int k = st.kmin; k <= st.kmax; ++k) eps.push_back("1e-" + std::to_string(k));
  const auto sp = spectrum_for(st, st.mmax);
  PrecisionScope scope(sp.precision_bits);
  Result r;
  r.data["spectrum"] = spectrum_meta(sp);
  r.header = {"epsilon", "count", "predictor", "ratio", "reliable"};
  json rows = json::array();
  int unreliable = 0;
  for (const auto& text : eps) {
    mp_real e;
    try {
      e = mp_real(text);
    } catch (const std::exception&) {
      throw config_error("key 'eps': '" + text + "' is not a number");
    }
    const auto c = counting(sp, e);
    const double pred = counting_predictor(static_cast<double>(e), sp.q, sp.d);
    const double ratio = c.count / pred;
    if (!c.reliable) ++unreliable;
    rows.push_back({{"epsilon", text}, {"count", c.count}, {"predictor", pred}, {"ratio", ratio}, {"reliable", c.reliable}});
    r.rows.push_back({text, std::to_string(c.count), num(pred), num(ratio), c.reliable ? "true" : "false"});
  }
  r.data["rows"] = rows;
  if (unreliable) std::cerr << "warning: " << unreliable << " thresholds lie below the reliable floor of the spectrum\n";
  r.summary = fmt::format("toeplitz counting q={} d={}: {} thresholds, {} unreliable", sp.q, sp.d, eps.size(), unreliable);
  return r;
}

AssemblyOptions assembly(const Settings&) { return {}; }

Result cmd_bie_assemble(const Settings& st) {
  const auto c = load_curve_spec(st.curve, st.n);
  OperatorKind kind;
  if (st.kind == "A") kind = OperatorKind::A;
  else if (st.kind == "B") kind = OperatorKind::B;
  else throw config_error("key 'kind': expected 'A' or 'B'");
  const auto m = assemble_operator(kind, c, st.b, assembly(st));
  const int n = static_cast<int>(m.matrix.rows());
  Result r;
  r.data["kind"] = to_string(kind);
  r.data["n"] = n;
  r.data["b"] = st.b;
  r.data["hermitian_defect"] = m.hermitian_defect();
  json rows = json::array();
  for (int i = 0; i < n; ++i) {
    json row = json::array();
    std::vector<std::string> cells;
    for (int j = 0; j < n; ++j) {
      row.push_back(cjson(m.matrix(i, j)));
      cells.push_back(num(m.matrix(i, j).real()));
      cells.push_back(num(m.matrix(i, j).imag()));
    }
    rows.push_back(row);
    r.rows.push_back(std::move(cells));
  }
  r.data["matrix"] = rows;
  for (int j = 0; j < n; ++j) {
    r.header.push_back(fmt::format("c{}_re", j));
    r.header.push_back(fmt::format("c{}_im", j));
  }
  r.summary = fmt::format("assembled {} ({}x{}), Hermitian defect {:.3e}", to_string(kind), n, n, m.hermitian_defect());
  return r;
}

json limits_json(const OneSidedLimits& l) {
  return {{"interior", cjson(l.interior)}, {"exterior", cjson(l.exterior)},
          {"interior_error", l.interior_error}, {"exterior_error", l.exterior_error}};
}

Result cmd_bie_jump(const Settings& st) {
  const auto c = load_curve_spec(st.curve, st.n);
  const auto u = density_from_spec(st.density, c);
  const auto rep = jump_test(c, st.b, u, st.node);
  Result r;
  r.data["node"] = rep.node;
  r.data["point"] = {rep.point.x(), rep.point.y()};
  r.data["density"] = cjson(rep.density);
  r.data["A_u"] = cjson(rep.A_u);
  r.data["B_u"] = cjson(rep.B_u);
  r.data["single_layer"] = limits_json(rep.single);
  r.data["double_layer"] = limits_json(rep.double_layer);
  r.data["normal_derivative"] = limits_json(rep.normal_derivative);
  r.data["jumps"] = {{"single_layer_ext_minus_int", cjson(rep.single_jump())},
                     {"double_layer_int_minus_ext", cjson(rep.double_jump())},
                     {"normal_derivative_ext_minus_int", cjson(rep.normal_derivative_jump())}};
  const double dev = std::max({std::abs(rep.single_jump()), std::abs(rep.double_jump() - rep.density),
                               std::abs(rep.normal_derivative_jump() - rep.density)});
  r.data["max_jump_deviation"] = dev;
  r.summary = fmt::format("jump test at node {}: max deviation from (0, u, u) {:.3e}", rep.node, dev);
  return r;
}

Result cmd_bie_dtr(const Settings& st) {
  const auto c = load_curve_spec(st.curve, st.n);
  const auto maps = dtr_maps(c, st.b, RobinCoefficient::constant(c.size(), st.tau), assembly(st));
  Result r;
  r.data["n"] = c.size();
  r.data["a_rcond"] = maps.a_rcond;
  r.data["interior_residual"] = maps.interior_residual;
  r.data["exterior_residual"] = maps.exterior_residual;
  if (!st.source.empty()) {
    const Vec2 y0 = parse_point("source", st.source);
    const Side side = c.contains(y0) ? Side::exterior : Side::interior;
    const auto m = dtr_manufactured_check(maps, y0, side);
    r.data["manufactured"] = {{"side", to_string(side)}, {"max_residual", m.max_residual}, {"max_robin", m.max_robin}};
  }
  r.summary = fmt::format("DtR maps n={}: algebra residuals {:.3e} / {:.3e}", c.size(), maps.interior_residual,
                          maps.exterior_residual);
  return r;
}

Result cmd_bie_generic(const Settings& st) {
  if (st.eps_count < 2) throw config_error("key 'eps_count': must be >= 2");
  const auto c = load_curve_spec(st.curve, st.n);
  std::vector<double> eps;
  for (int k = 0; k < st.eps_count; ++k) eps.push_back(st.eps_min + (st.eps_max - st.eps_min) * k / (st.eps_count - 1));
  const auto rep = generic_sweep(c, st.b, RobinCoefficient::constant(c.size(), st.tau), eps, assembly(st), st.threshold);
  Result r;
  r.data["n"] = rep.n;
  r.data["threshold"] = rep.threshold;
  r.data["singular_count"] = rep.singular_count();
  r.data["singular_epsilons"] = rep.singular_epsilons();
  json rows = json::array();
  r.header = {"epsilon", "cond_plus", "cond_minus", "singular"};
  for (const auto& e : rep.entries) {
    rows.push_back({{"epsilon", e.epsilon}, {"cond_plus", e.cond_plus}, {"cond_minus", e.cond_minus}, {"singular", e.singular}});
    r.rows.push_back({num(e.epsilon), num(e.cond_plus), num(e.cond_minus), e.singular ? "true" : "false"});
  }
  r.data["rows"] = rows;
  r.summary = fmt::format("genericity sweep n={}: {} of {} shifts ill-conditioned", rep.n, rep.singular_count(), eps.size());
  return r;
}

Result cmd_bie_represent(const Settings& st) {
  const auto c = load_curve_spec(st.curve, st.n);
  if (st.source.empty()) throw config_error("key 'source': a source point 'x,y' is required");
  const Vec2 y0 = parse_point("source", st.source);
  const auto rep = representation_check(c, st.b, y0, side_from(st.side));
  Result r;
  r.data["side"] = to_string(rep.side);
  r.data["points"] = rep.points;
  r.data["max_residual"] = rep.max_residual;
  r.data["max_value"] = rep.max_value;
  r.summary = fmt::format("representation ({}) at {} points: max residual {:.3e}", to_string(rep.side), rep.points,
                          rep.max_residual);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Magnetic Green kernels, capacity, Toeplitz spectra and boundary operators"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings st;
  Params globals;
  globals.add(&app, "output", st.output, "output file (written atomically); omitted: summary only");
  globals.add(&app, "format", st.format, "csv or json (default: from the output extension, else json)");
  app.add_option("--config", st.config, "flat 'key = value' file; flags override it");

  struct Command {
    CLI::App* app;
    Params params;
    std::function<Result(const Settings&)> run;
  };
  std::vector<std::unique_ptr<Command>> commands;
  auto command = [&](CLI::App* parent, const std::string& name, const std::string& help,
                     std::function<Result(const Settings&)> run) -> Command& {
    commands.push_back(std::make_unique<Command>(Command{parent->add_subcommand(name, help), {}, std::move(run)}));
    return *commands.back();
  };

  auto* landau_cmd = app.add_subcommand("landau", "Landau levels and projection kernels");
  landau_cmd->require_subcommand(1);
  {
    auto& c = command(landau_cmd, "level", "Landau level Λ_q = b(2q - 2 + d)", cmd_level);
    c.params.add(c.app, "b", st.b, "field strength");
    c.params.add(c.app, "d", st.d, "complex dimension");
    c.params.add(c.app, "q", st.q, "level index, q >= 1");
  }
  {
    auto& c = command(landau_cmd, "projection", "projection kernel P_q(z, w), d = 1", cmd_projection);
    c.params.add(c.app, "b", st.b, "field strength");
    c.params.add(c.app, "q", st.q, "level index");
    c.params.add(c.app, "z", st.z, "first point x,y");
    c.params.add(c.app, "w", st.w, "second point x,y");
  }
  {
    auto& c = command(&app, "green", "I(s), its split and the small-s expansion of I0", cmd_green);
    c.params.add(c.app, "d", st.d, "complex dimension");
    c.params.add(c.app, "N", st.N, "expansion order");
    c.params.add(c.app, "s", st.s, "comma-separated s values (decimal strings)");
    c.params.add(c.app, "precision", st.precision, "working precision in bits");
  }
  {
    auto& c = command(&app, "capacity", "logarithmic capacity of the set bounded by a curve", cmd_capacity);
    c.params.add(c.app, "curve", st.curve, "curve file, or circle[:R], ellipse:A:B, flower[:AMP[:K]]");
    c.params.add(c.app, "n", st.n, "resample to n nodes (builtin shapes default to 128)");
  }
  auto* toeplitz_cmd = app.add_subcommand("toeplitz", "Toeplitz operators on Landau levels");
  toeplitz_cmd->require_subcommand(1);
  auto toeplitz_params = [&](Command& c) {
    c.params.add(c.app, "q", st.q, "level index");
    c.params.add(c.app, "b", st.b, "field strength");
    c.params.add(c.app, "R", st.R, "disk radius");
    c.params.add(c.app, "R2", st.R2, "second disk radius for d = 2 (default R)");
    c.params.add(c.app, "d", st.d, "1, or 2 for the product of disks");
    c.params.add(c.app, "precision", st.precision, "working precision in bits");
    c.params.add(c.app, "curve", st.curve, "star-shaped domain (Galerkin path, double precision)");
    c.params.add(c.app, "n", st.n, "curve nodes");
  };
  {
    auto& c = command(toeplitz_cmd, "spectrum", "decreasing eigenvalues s_j", cmd_toeplitz_spectrum);
    toeplitz_params(c);
    c.params.add(c.app, "mmax", st.mmax, "largest index m (basis size for curves)");
  }
  {
    auto& c = command(toeplitz_cmd, "counting", "n(ε) = #{s_j > ε} against the predictor", cmd_toeplitz_counting);
    toeplitz_params(c);
    c.params.add(c.app, "mmax", st.mmax, "largest index m per factor");
    c.params.add(c.app, "kmin", st.kmin, "ε = 10^-k from k = kmin");
    c.params.add(c.app, "kmax", st.kmax, "to k = kmax");
    c.params.add(c.app, "eps", st.eps, "explicit comma-separated thresholds (overrides kmin/kmax)");
  }
  {
    auto& c = command(toeplitz_cmd, "limit", "(j! s_j)^(1/j) for j = 1..jmax", cmd_toeplitz_limit);
    toeplitz_params(c);
    c.params.add(c.app, "jmax", st.jmax, "last index");
  }
  auto* bie_cmd = app.add_subcommand("bie", "boundary operators for d = 1");
  bie_cmd->require_subcommand(1);
  auto bie_params = [&](Command& c) {
    c.params.add(c.app, "curve", st.curve, "curve file, or circle[:R], ellipse:A:B, flower[:AMP[:K]]");
    c.params.add(c.app, "n", st.n, "nodes (builtin shapes default to 128)");
    c.params.add(c.app, "b", st.b, "field strength");
  };
  {
    auto& c = command(bie_cmd, "assemble", "Nyström matrix of A or B", cmd_bie_assemble);
    bie_params(c);
    c.params.add(c.app, "kind", st.kind, "A or B");
  }
  {
    auto& c = command(bie_cmd, "jump", "one-sided limits of the layer potentials at a node", cmd_bie_jump);
    bie_params(c);
    c.params.add(c.app, "node", st.node, "node index");
    c.params.add(c.app, "density", st.density, "constant value or mode:k");
  }
  {
    auto& c = command(bie_cmd, "dtr", "Dirichlet-to-Robin maps and their residuals", cmd_bie_dtr);
    bie_params(c);
    c.params.add(c.app, "tau", st.tau, "constant Robin coefficient");
    c.params.add(c.app, "source", st.source, "optional source x,y for a manufactured-solution check");
  }
  {
    auto& c = command(bie_cmd, "generic", "condition numbers of T_(±, τ+ε) over ε", cmd_bie_generic);
    bie_params(c);
    c.params.add(c.app, "tau", st.tau, "constant Robin coefficient");
    c.params.add(c.app, "eps_count", st.eps_count, "number of ε values");
    c.params.add(c.app, "eps_min", st.eps_min, "first ε");
    c.params.add(c.app, "eps_max", st.eps_max, "last ε");
    c.params.add(c.app, "threshold", st.threshold, "condition number flagged as singular");
  }
  {
    auto& c = command(bie_cmd, "represent", "Green representation formula check", cmd_bie_represent);
    bie_params(c);
    c.params.add(c.app, "source", st.source, "source point x,y on the opposite side");
    c.params.add(c.app, "side", st.side, "interior or exterior");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Command* active = nullptr;
  for (auto& c : commands)
    if (c->app->parsed()) active = c.get();
  if (!active) {
    std::cerr << "error: no command given\n";
    return 2;
  }

  try {
    if (!st.config.empty()) {
      for (const auto& [key, value] : read_config(st.config)) {
        const Param* p = active->params.find(key);
        if (!p) p = globals.find(key);
        if (!p) throw config_error("unknown config key '" + key + "' for this command");
        if (p->option->count() == 0) p->assign(value);
      }
    }
    if (st.format.empty()) {
      const auto ext = std::filesystem::path(st.output).extension();
      st.format = ext == ".csv" ? "csv" : "json";
    }
    if (st.format != "csv" && st.format != "json") throw config_error("key 'format': expected csv or json");

    json config = json::object();
    std::string name;
    for (auto* a = active->app; a && a != &app; a = a->get_parent()) name = a->get_name() + (name.empty() ? "" : " " + name);
    config["command"] = name;
    config["format"] = st.format;
    const json resolved = active->params.resolved();
    for (const auto& [k, v] : resolved.items()) config[k] = v;

    const Result result = active->run(st);
    if (!st.output.empty()) write_atomically(st.output, render(result, st.format, config));
    std::cout << result.summary << "\n";
    return 0;
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const curve_parse_error& e) {
    std::cerr << "error: curve file " << e.what() << "\n";
    return 2;
  } catch (const landau::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure in " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
