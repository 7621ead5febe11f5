#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "specmod/inequalities.hpp"
#include "specmod/moduli.hpp"
#include "specmod/report.hpp"
#include "specmod/runner.hpp"

namespace {

using namespace specmod;

SpectralElement load_element(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open element file: " + path);
  return read_element(in);
}

// Reports and tables go to --out when given, stdout otherwise.
int with_output(const std::string& out_path,
                const std::function<void(std::ostream&)>& body) {
  if (out_path.empty()) {
    body(std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    body(out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Verification toolkit for spectral moduli of continuity and "
      "best-approximation inequalities on atomic spectra"};
  app.require_subcommand(1);

  std::string out_path;
  double tol = 0;     // 0 = library default quadrature tolerance
  double tmax = 0;    // 0 = default infimum window
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out_path, "write results to this file");
  app.add_option("--tol", tol, "override quadrature absolute tolerance");
  app.add_option("--tmax", tmax, "override the infimum window end (t units)");
  app.add_option_function<std::uint64_t>(
      "--seed", [&seed](std::uint64_t v) { seed = v; },
      "override defaults.seed of a run config");

  auto kernel_opts = [&tol] {
    QuadratureOptions opt;
    if (tol > 0) opt.abs_tol = tol;
    return opt;
  };

  // run <config>
  auto* run = app.add_subcommand("run", "execute a JSON config of checks");
  std::string config_path;
  run->add_option("config", config_path, "config file")->required();
  run->callback([&] {
    int rc = run_config(config_path, std::cout, seed);
    if (rc != 0) throw CLI::RuntimeError(rc);
  });

  // gamma <weight> <symbol> <t0> <t1> <n>
  auto* gamma = app.add_subcommand(
      "gamma", "tabulate the averaging kernel over a t range");
  std::string g_weight, g_symbol;
  double g_t0 = 0, g_t1 = 0;
  int g_n = 0;
  gamma->add_option("weight", g_weight)->required();
  gamma->add_option("symbol", g_symbol)->required();
  gamma->add_option("t0", g_t0)->required();
  gamma->add_option("t1", g_t1)->required();
  gamma->add_option("n", g_n)->required();
  gamma->callback([&] {
    Weight V = weight_by_label(g_weight);
    SymbolPair s = symbol_by_label(g_symbol);
    with_output(out_path, [&](std::ostream& out) {
      emit_gamma_profile(V, s, g_t0, g_t1, g_n, out);
    });
  });

  // modulus <element> --symbol --delta [--p] [--weight]
  auto* modulus =
      app.add_subcommand("modulus", "moduli of continuity of an element");
  std::string m_element, m_symbol, m_weight, m_delta = "pi", m_p = "inf";
  modulus->add_option("element", m_element, "element file (freq re im rows)")
      ->required();
  modulus->add_option("--symbol", m_symbol)->required();
  modulus->add_option("--delta", m_delta, "step: number or pi-expression");
  modulus->add_option("--p", m_p, "2, a finite p >= 1, or inf");
  modulus->add_option("--weight", m_weight, "weight for finite p");
  modulus->callback([&] {
    SpectralElement x = load_element(m_element);
    SymbolPair s = symbol_by_label(m_symbol);
    double delta = parse_delta(m_delta, std::nullopt);
    with_output(out_path, [&](std::ostream& out) {
      if (m_p == "inf" || m_p == "sup") {
        SupModulus r = omega_sup(x, s, delta);
        out << "omega_sup " << r.value << " argmax " << r.argmax << "\n";
        return;
      }
      double p = std::stod(m_p);
      if (m_weight.empty())
        throw std::runtime_error("finite p needs --weight");
      Weight V = weight_by_label(m_weight);
      if (p == 2) {
        GammaKernel k(V, s, kernel_opts());
        out << "omega_2v " << omega_2v(x, k, delta) << "\n";
      } else {
        out << "omega_pv(p=" << p << ") " << omega_pv(x, s, V, p, delta)
            << "\n";
      }
    });
  });

  // bound <element> --sigma --weight --symbol --delta [--p]
  auto* bound = app.add_subcommand(
      "bound", "best-approximation bound report for an element");
  std::string b_element, b_weight, b_symbol, b_delta = "pi/sigma",
              b_p = "2";
  double b_sigma = 0;
  bound->add_option("element", b_element)->required();
  bound->add_option("--sigma", b_sigma)->required();
  bound->add_option("--weight", b_weight)->required();
  bound->add_option("--symbol", b_symbol)->required();
  bound->add_option("--delta", b_delta);
  bound->add_option("--p", b_p);
  bound->callback([&] {
    SpectralElement x = load_element(b_element);
    Weight V = weight_by_label(b_weight);
    SymbolPair s = symbol_by_label(b_symbol);
    double delta = parse_delta(b_delta, b_sigma);
    double p = (b_p == "inf" || b_p == "sup") ? p_infinity : std::stod(b_p);
    GammaKernel k(V, s, kernel_opts());
    InequalityReport r = jackson_bound(x, b_sigma, k, delta, p, tmax);
    with_output(out_path,
                [&](std::ostream& out) { out << to_json_line(r) << "\n"; });
    if (!r.certified && !r.degenerate) throw CLI::RuntimeError(1);
  });

  // sharpness --sigma --weight --symbol --delta
  auto* sharp = app.add_subcommand(
      "sharpness", "single-atom extremal instance at the infimum argmin");
  std::string s_weight, s_symbol, s_delta = "pi/sigma";
  double s_sigma = 0;
  sharp->add_option("--sigma", s_sigma)->required();
  sharp->add_option("--weight", s_weight)->required();
  sharp->add_option("--symbol", s_symbol)->required();
  sharp->add_option("--delta", s_delta);
  sharp->callback([&] {
    Weight V = weight_by_label(s_weight);
    SymbolPair s = symbol_by_label(s_symbol);
    double delta = parse_delta(s_delta, s_sigma);
    GammaKernel k(V, s, kernel_opts());
    InequalityReport r = sharpness_search(s_sigma, k, delta, tmax);
    with_output(out_path,
                [&](std::ostream& out) { out << to_json_line(r) << "\n"; });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
