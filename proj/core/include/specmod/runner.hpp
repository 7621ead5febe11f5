#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "specmod/symbols.hpp"
#include "specmod/weights.hpp"

namespace specmod {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Executes the checks listed in a JSON config file (documented in the README):
// runs them on a worker pool, writes the comma-separated summary and the
// line-delimited records in config order, and returns 0 iff every certified
// check passed.  `log` receives one progress line per check.  A seed override
// replaces the config's defaults.seed.
int run_config(const std::string& path, std::ostream& log,
               std::optional<std::uint64_t> seed_override = std::nullopt);

// Two-column "t Gamma(V;t)" table over [t0, t1] with a header carrying the
// period mean of psi as the reference line value.
void emit_gamma_profile(const Weight& V, const SymbolPair& s, double t0,
                        double t1, int samples, std::ostream& out);

// "classical:m" or "custom:<file>" (two-column t psi(t) samples).
SymbolPair symbol_by_label(const std::string& label);

// Weight names plus "custom:<file>" (two-column s V(s) samples).
Weight weight_by_label(const std::string& label);

// Step strings: a plain number, "pi", "2pi", "0.5pi/3", "pi/sigma",
// "2pi/sigma"; the "/sigma" forms need the cutoff to be known.
double parse_delta(const std::string& text, std::optional<double> sigma);

}  // namespace specmod
