#include "specmod/runner.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "specmod/inequalities.hpp"
#include "specmod/moduli.hpp"
#include "specmod/report.hpp"

namespace specmod {
namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in, nullptr, true, /*allow comments*/ true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// Field lookup with defaults-block fallback and a context-rich error.
const json* find_field(const json& check, const json& defaults,
                 const std::string& key) {
  if (check.contains(key)) return &check.at(key);
  if (defaults.contains(key)) return &defaults.at(key);
  return nullptr;
}

template <typename T>
T need(const json& check, const json& defaults, const std::string& key,
       const std::string& ctx) {
  const json* v = find_field(check, defaults, key);
  if (!v) throw ConfigError(ctx + ": missing field '" + key + "'");
  try {
    return v->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + ".'" + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& check, const json& defaults, const std::string& key,
         const std::string& ctx, T fallback) {
  const json* v = find_field(check, defaults, key);
  if (!v) return fallback;
  try {
    return v->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + ".'" + key + "': " + e.what());
  }
}

std::uint64_t need_seed(const json& check, const json& defaults,
                        const std::string& ctx) {
  const json* v = find_field(check, defaults, "seed");
  if (!v)
    throw ConfigError(ctx +
                      ": randomized campaigns require an explicit 'seed' "
                      "(in the check or in 'defaults')");
  try {
    return v->get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError(ctx + ".'seed': " + e.what());
  }
}

// Step fields accept a JSON number or a pi-expression string.
double delta_field(const json& check, const json& defaults,
                   const std::string& key, const std::string& ctx,
                   std::optional<double> sigma,
                   std::optional<std::string> fallback = std::nullopt) {
  const json* v = find_field(check, defaults, key);
  if (!v) {
    if (fallback) return parse_delta(*fallback, sigma);
    throw ConfigError(ctx + ": missing field '" + key + "'");
  }
  if (v->is_number()) {
    double d = v->get<double>();
    if (!(d > 0)) throw ConfigError(ctx + ".'" + key + "' must be positive");
    return d;
  }
  if (v->is_string()) return parse_delta(v->get<std::string>(), sigma);
  throw ConfigError(ctx + ".'" + key + "': expected number or pi-string");
}

// Accepts a number or the strings "inf"/"sup" for the uniform modulus.
double parse_p(const json& v, const std::string& ctx) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "sup") return p_infinity;
  }
  throw ConfigError(ctx + ": p must be a number or \"inf\"");
}

std::vector<std::pair<double, double>> read_two_columns(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table file: " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double a, b;
    if (row >> a >> b) rows.push_back({a, b});
  }
  return rows;
}

LinearMethod method_from(const json& check, const json& defaults,
                         double sigma, const std::string& ctx) {
  std::string kind =
      get_or<std::string>(check, defaults, "method", ctx, "projection");
  if (kind == "projection") return projection_method(sigma);
  if (kind == "plateau") {
    double eps = get_or<double>(check, defaults, "epsilon", ctx, sigma / 4.0);
    if (!(eps > 0 && eps < sigma))
      throw ConfigError(ctx + ": plateau needs 0 < epsilon < sigma");
    return plateau_method(sigma, eps);
  }
  throw ConfigError(ctx + ": method must be \"projection\" or \"plateau\"");
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

// --- individual check runners ---------------------------------------------

std::vector<InequalityReport> run_operator(const json& c, const json& d,
                                           const std::string& ctx) {
  int dim = get_or<int>(c, d, "dim", ctx, 8);
  int trials = need<int>(c, d, "trials", ctx);
  std::mt19937_64 rng(need_seed(c, d, ctx));
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> zero(0, 3);

  InequalityReport worst;
  worst.check = "operator";
  double max_ratio = -1;
  bool all = true;
  double worst_extremal = 2;
  for (int i = 0; i < trials; ++i) {
    DiagonalOperatorPair ops;
    ops.t_diag = random_vector(rng, dim);
    ops.s_diag = random_vector(rng, dim);
    for (auto& t : ops.t_diag)
      if (zero(rng) == 0) t = {0, 0};  // exercise the 0/0 = 0 convention
    std::vector<Complex> x = random_vector(rng, dim);
    std::vector<Complex> f = random_vector(rng, dim);

    InequalityReport r = verify_operator_inequality(ops, x, f);
    all = all && r.certified;
    if (r.ratio > max_ratio || max_ratio < 0) {
      max_ratio = r.ratio;
      worst.lhs = r.lhs;
      worst.rhs = r.rhs;
      worst.constant = r.constant;
    }

    InequalityReport eq =
        verify_operator_inequality(ops, operator_extremal(ops, f), f);
    if (!eq.degenerate) worst_extremal = std::min(worst_extremal, eq.ratio);
  }
  worst.ratio = max_ratio;
  worst.slack = certification_slack(worst.rhs, 1e-12);
  worst.certified = all && std::abs(worst_extremal - 1.0) <= 1e-10;
  worst.grid_meta["dim"] = std::to_string(dim);
  worst.grid_meta["trials"] = std::to_string(trials);
  worst.grid_meta["min_extremal_ratio"] = fmt(worst_extremal);
  worst.note = "random diagonal pairs; extremal input re-attains equality";
  return {worst};
}

std::vector<InequalityReport> run_functional(const json& c, const json& d,
                                             const std::string& ctx) {
  double sigma = need<double>(c, d, "sigma", ctx);
  LinearMethod L = method_from(c, d, sigma, ctx);
  Weight V = weight_by_label(need<std::string>(c, d, "weight", ctx));
  SymbolPair s = symbol_by_label(need<std::string>(c, d, "symbol", ctx));
  double delta =
      delta_field(c, d, "delta", ctx, sigma);
  int trials = need<int>(c, d, "trials", ctx);
  std::mt19937_64 rng(need_seed(c, d, ctx));
  GammaKernel k(V, s);

  ElementOptions eo;
  eo.integer_frequencies = false;
  InequalityReport agg;
  agg.check = "functional";
  double max_ratio = 0;
  double worst_extremal = 2;
  bool all = true;
  int degenerate = 0;
  for (int i = 0; i < trials; ++i) {
    SpectralElement x = random_element(rng, eo);
    SpectralElement f = random_element(rng, eo);
    InequalityReport r = functional_bound(x, f, L, k, delta);
    if (r.degenerate) {
      ++degenerate;
    } else {
      all = all && r.certified;
      if (r.ratio > max_ratio) {
        max_ratio = r.ratio;
        agg.lhs = r.lhs;
        agg.rhs = r.rhs;
        agg.constant = r.constant;
      }
    }
    SpectralElement xt = functional_extremal(f, L, k, delta);
    InequalityReport eq = functional_bound(xt, f, L, k, delta);
    if (!eq.degenerate) worst_extremal = std::min(worst_extremal, eq.ratio);
  }
  agg.ratio = max_ratio;
  agg.slack = certification_slack(agg.rhs);
  agg.certified = all && worst_extremal >= 1.0 - 1e-9;
  agg.grid_meta["trials"] = std::to_string(trials);
  agg.grid_meta["degenerate_trials"] = std::to_string(degenerate);
  agg.grid_meta["min_extremal_ratio"] = fmt(worst_extremal);
  agg.grid_meta["method"] = L.lam.description;
  agg.note = "residual-functional bound on random (x, f); extremal element "
             "re-attains equality";
  return {agg};
}

std::vector<InequalityReport> run_norm_bound(const json& c, const json& d,
                                             const std::string& ctx) {
  double sigma = need<double>(c, d, "sigma", ctx);
  LinearMethod L = method_from(c, d, sigma, ctx);
  Weight V = weight_by_label(need<std::string>(c, d, "weight", ctx));
  SymbolPair s = symbol_by_label(need<std::string>(c, d, "symbol", ctx));
  double delta = delta_field(c, d, "delta", ctx, sigma);
  int trials = need<int>(c, d, "trials", ctx);
  std::mt19937_64 rng(need_seed(c, d, ctx));
  GammaKernel k(V, s);

  ElementOptions eo;
  eo.integer_frequencies = false;
  InequalityReport agg;
  agg.check = "norm_bound";
  double max_ratio = 0;
  bool all = true;
  for (int i = 0; i < trials; ++i) {
    SpectralElement x = random_element(rng, eo);
    InequalityReport r = norm_bound(x, L, k, delta);
    if (r.degenerate) continue;
    all = all && r.certified;
    if (r.ratio > max_ratio) {
      max_ratio = r.ratio;
      agg.lhs = r.lhs;
      agg.rhs = r.rhs;
      agg.constant = r.constant;
      agg.grid_meta = r.grid_meta;
    }
  }
  agg.ratio = max_ratio;
  agg.slack = certification_slack(agg.rhs);
  agg.certified = all;
  agg.grid_meta["trials"] = std::to_string(trials);
  agg.grid_meta["method"] = L.lam.description;
  return {agg};
}

std::vector<InequalityReport> run_jackson(const json& c, const json& d,
                                          const std::string& ctx) {
  double sigma = need<double>(c, d, "sigma", ctx);
  Weight V = weight_by_label(need<std::string>(c, d, "weight", ctx));
  SymbolPair s = symbol_by_label(need<std::string>(c, d, "symbol", ctx));
  double delta = delta_field(c, d, "delta", ctx, sigma);
  const json* pv = find_field(c, d, "p");
  double p = pv ? parse_p(*pv, ctx) : 2.0;
  int trials = need<int>(c, d, "trials", ctx);
  std::mt19937_64 rng(need_seed(c, d, ctx));
  GammaKernel k(V, s);

  ElementOptions eo;
  eo.integer_frequencies = get_or<bool>(c, d, "integer_frequencies", ctx, false);
  InequalityReport agg;
  agg.check = "jackson";
  double max_ratio = 0;
  bool all = true;
  for (int i = 0; i < trials; ++i) {
    SpectralElement x = random_element(rng, eo);
    InequalityReport r = jackson_bound(x, sigma, k, delta, p);
    if (r.degenerate) continue;
    all = all && r.certified;
    if (r.ratio > max_ratio) {
      max_ratio = r.ratio;
      agg.lhs = r.lhs;
      agg.rhs = r.rhs;
      agg.constant = r.constant;
      agg.grid_meta = r.grid_meta;
    }
  }
  agg.ratio = max_ratio;
  agg.slack = certification_slack(agg.rhs);
  agg.certified = all;
  agg.grid_meta["trials"] = std::to_string(trials);
  return {agg};
}

std::vector<InequalityReport> run_sharpness(const json& c, const json& d,
                                            const std::string& ctx) {
  double sigma = need<double>(c, d, "sigma", ctx);
  Weight V = weight_by_label(need<std::string>(c, d, "weight", ctx));
  SymbolPair s = symbol_by_label(need<std::string>(c, d, "symbol", ctx));
  double delta = delta_field(c, d, "delta", ctx, sigma);
  GammaKernel k(V, s);
  return {sharpness_search(sigma, k, delta)};
}

std::vector<InequalityReport> run_chernykh(const json& c, const json& d,
                                           const std::string& ctx) {
  return {chernykh_check(need<int>(c, d, "m", ctx), need<int>(c, d, "n", ctx),
                         need<int>(c, d, "trials", ctx), need_seed(c, d, ctx))};
}

std::vector<InequalityReport> run_chi(const json& c, const json& d,
                                      const std::string& ctx) {
  return {chi_bound_check(need<int>(c, d, "m", ctx), need<int>(c, d, "n", ctx),
                          need<int>(c, d, "trials", ctx),
                          need_seed(c, d, ctx))};
}

std::vector<InequalityReport> run_minimal_delta(const json& c, const json& d,
                                                const std::string& ctx) {
  double lo = delta_field(c, d, "delta_min", ctx, std::nullopt, "0.2pi");
  double hi = delta_field(c, d, "delta_max", ctx, std::nullopt, "2pi");
  double step = delta_field(c, d, "delta_step", ctx, std::nullopt, "0.01pi");
  if (!(lo > 0) || !(hi > lo) || !(step > 0))
    throw ConfigError(ctx + ": need 0 < delta_min < delta_max, delta_step > 0");
  std::vector<double> grid;
  for (double v = lo; v <= hi + step / 2; v += step) grid.push_back(v);
  DeltaScanReport rep = minimal_delta_scan(
      need<int>(c, d, "m", ctx), need<int>(c, d, "n", ctx),
      need<int>(c, d, "trials", ctx), grid, need_seed(c, d, ctx));
  return {rep.summary};
}

std::vector<InequalityReport> run_vstar(const json& c, const json& d,
                                        const std::string& ctx) {
  std::vector<int> m_list =
      get_or<std::vector<int>>(c, d, "m_list", ctx, {1, 2, 3});
  std::vector<InequalityReport> out;
  for (const AdmissibilityReport& a : vstar_admissibility_check(m_list)) {
    InequalityReport r;
    r.check = "vstar_admissibility";
    r.lhs = a.mean;
    r.rhs = a.window_infimum;
    r.constant = a.mean;
    r.ratio = a.window_infimum != 0 ? a.mean / a.window_infimum : 0;
    r.slack = 1e-6;
    r.certified = a.certified;
    r.note = a.note;
    r.grid_meta["margin"] = fmt(a.margin);
    r.grid_meta["gamma"] = fmt(a.gamma);
    out.push_back(r);
  }
  return out;
}

std::vector<InequalityReport> run_vhat(const json& c, const json& d,
                                       const std::string& ctx) {
  std::vector<int> m_list =
      get_or<std::vector<int>>(c, d, "m_list", ctx, {1, 2, 3});
  int trials = need<int>(c, d, "trials", ctx);
  std::uint64_t seed = need_seed(c, d, ctx);
  std::vector<double> p_list = {2, 4, p_infinity};
  if (const json* pv = find_field(c, d, "p_list")) {
    p_list.clear();
    for (const auto& v : *pv) p_list.push_back(parse_p(v, ctx));
  }
  VhatBoundReport rep = vhat_bound_check(m_list, trials, seed, p_list);
  std::vector<InequalityReport> out;
  for (const AdmissibilityReport& a : rep.margins) {
    InequalityReport r;
    r.check = "vhat_margin";
    r.lhs = 0.75 * a.mean;
    r.rhs = a.window_infimum;
    r.constant = 0.75 * a.mean;
    r.ratio = a.window_infimum != 0 ? r.lhs / a.window_infimum : 0;
    r.slack = 1e-6;
    r.certified = a.certified;
    r.note = a.note;
    r.grid_meta["margin"] = fmt(a.margin);
    out.push_back(r);
  }
  out.insert(out.end(), rep.campaigns.begin(), rep.campaigns.end());
  return out;
}

std::vector<InequalityReport> run_gamma_profile(const json& c, const json& d,
                                                const std::string& ctx) {
  Weight V = weight_by_label(need<std::string>(c, d, "weight", ctx));
  SymbolPair s = symbol_by_label(need<std::string>(c, d, "symbol", ctx));
  double t0 = need<double>(c, d, "t0", ctx);
  double t1 = need<double>(c, d, "t1", ctx);
  int samples = need<int>(c, d, "samples", ctx);
  std::string out_path = need<std::string>(c, d, "out", ctx);
  std::filesystem::path p(out_path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(out_path);
  if (!out) throw ConfigError(ctx + ": cannot open output file " + out_path);
  emit_gamma_profile(V, s, t0, t1, samples, out);

  InequalityReport r;
  r.check = "gamma_profile";
  r.certified = true;
  r.note = "wrote " + std::to_string(samples) + " rows to " + out_path;
  return {r};
}

using CheckFn = std::vector<InequalityReport> (*)(const json&, const json&,
                                                 const std::string&);

const std::map<std::string, CheckFn>& check_table() {
  static const std::map<std::string, CheckFn> table = {
      {"operator", run_operator},
      {"functional", run_functional},
      {"norm_bound", run_norm_bound},
      {"jackson", run_jackson},
      {"sharpness", run_sharpness},
      {"chernykh", run_chernykh},
      {"chi_bound", run_chi},
      {"minimal_delta", run_minimal_delta},
      {"vstar_admissibility", run_vstar},
      {"vhat_bound", run_vhat},
      {"gamma_profile", run_gamma_profile},
  };
  return table;
}

}  // namespace

SymbolPair symbol_by_label(const std::string& label) {
  if (label.rfind("classical:", 0) == 0) {
    int m = 0;
    std::string num = label.substr(10);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), m);
    if (ec != std::errc{} || ptr != num.data() + num.size())
      throw InvalidSymbol("bad order in symbol label '" + label + "'");
    return classical_symbol(m);
  }
  if (label.rfind("custom:", 0) == 0) {
    std::string file = label.substr(7);
    return tabulated_symbol(label, read_two_columns(file));
  }
  throw InvalidSymbol("unknown symbol label '" + label +
                      "'; expected classical:<m> or custom:<file>");
}

Weight weight_by_label(const std::string& label) {
  if (label.rfind("custom:", 0) == 0) {
    std::string file = label.substr(7);
    return weight_from_table(label, read_two_columns(file));
  }
  return weight_by_name(label);
}

double parse_delta(const std::string& text, std::optional<double> sigma) {
  // Plain number first.
  {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end && *end == '\0' && end != text.c_str()) {
      if (!(v > 0)) throw ConfigError("step must be positive: " + text);
      return v;
    }
  }
  static const std::regex form(
      R"(^\s*([0-9]*\.?[0-9]*)\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+|sigma))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form))
    throw ConfigError("cannot parse step '" + text +
                      "'; use a number, \"<a>pi\", \"<a>pi/<b>\" or "
                      "\"<a>pi/sigma\"");
  double a = m[1].str().empty() ? 1.0 : std::stod(m[1].str());
  double denom = 1.0;
  if (m[2].matched) {
    if (m[2].str() == "sigma") {
      if (!sigma)
        throw ConfigError("step '" + text +
                          "' needs a cutoff, but none is in scope");
      denom = *sigma;
    } else {
      denom = std::stod(m[2].str());
    }
  }
  if (!(denom > 0) || !(a > 0))
    throw ConfigError("step '" + text + "' is not positive");
  return a * M_PI / denom;
}

void emit_gamma_profile(const Weight& V, const SymbolPair& s, double t0,
                        double t1, int samples, std::ostream& out) {
  if (samples < 2) samples = 2;
  GammaKernel k(V, s);
  double mean = mean_value(s);
  out << "# weight=" << V.label << " symbol=" << s.label
      << " period_mean=" << fmt(mean) << "\n";
  out << "# t gamma\n";
  for (int i = 0; i < samples; ++i) {
    double t = t0 + (t1 - t0) * i / (samples - 1);
    out << fmt(t) << ' ';
    try {
      out << fmt(k(t)) << '\n';
    } catch (const QuadratureFailure& e) {
      out << "nan # quadrature-failure\n";
    }
  }
}

int run_config(const std::string& path, std::ostream& log,
               std::optional<std::uint64_t> seed_override) {
  json cfg = load_json(path);
  json defaults = cfg.value("defaults", json::object());
  if (seed_override) defaults["seed"] = *seed_override;
  if (!cfg.contains("checks") || !cfg["checks"].is_array())
    throw ConfigError(path + ": top-level 'checks' array is required");

  const auto& table = check_table();
  struct Pending {
    std::string name;
    std::future<std::vector<InequalityReport>> future;
  };
  std::vector<Pending> pending;
  int index = 0;
  for (const json& c : cfg["checks"]) {
    std::string ctx = "checks[" + std::to_string(index) + "]";
    if (!c.is_object()) throw ConfigError(ctx + ": must be an object");
    std::string name = need<std::string>(c, json::object(), "check", ctx);
    auto it = table.find(name);
    if (it == table.end()) {
      std::string names;
      for (const auto& [k, fn] : table) names += (names.empty() ? "" : ", ") + k;
      throw ConfigError(ctx + ": unknown check '" + name +
                        "'; valid checks: " + names);
    }
    CheckFn fn = it->second;
    pending.push_back(
        {name, std::async(std::launch::async, [fn, c, defaults, ctx] {
           return fn(c, defaults, ctx);
         })});
    ++index;
  }

  // Results are gathered strictly in config order, whatever the completion
  // order of the workers.
  std::vector<InequalityReport> reports;
  bool all_pass = true;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    std::vector<InequalityReport> rs;
    try {
      rs = pending[i].future.get();
    } catch (const std::exception& e) {
      throw ConfigError("checks[" + std::to_string(i) + "] (" +
                        pending[i].name + "): " + e.what());
    }
    for (const auto& r : rs) {
      all_pass = all_pass && (r.certified || r.degenerate);
      log << (r.certified ? "[pass] " : (r.degenerate ? "[degen] " : "[FAIL] "))
          << r.check << "  ratio=" << fmt(r.ratio)
          << "  constant=" << fmt(r.constant) << "\n";
      reports.push_back(r);
    }
  }

  auto open_out = [](const std::string& p) {
    std::filesystem::path fp(p);
    if (fp.has_parent_path())
      std::filesystem::create_directories(fp.parent_path());
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot open output file " + p);
    return out;
  };
  if (cfg.contains("summary")) {
    auto out = open_out(cfg["summary"].get<std::string>());
    write_csv(out, reports);
  } else {
    std::ostringstream buf;
    write_csv(buf, reports);
    log << buf.str();
  }
  if (cfg.contains("records")) {
    auto out = open_out(cfg["records"].get<std::string>());
    write_json_lines(out, reports);
  }
  return all_pass ? 0 : 1;
}

}  // namespace specmod
