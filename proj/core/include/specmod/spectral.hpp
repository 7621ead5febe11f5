#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace specmod {

using Complex = std::complex<double>;

struct InvalidAtom : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A multiplier evaluation hit a non-finite value at some frequency.
struct MultiplierSingular : std::runtime_error {
  MultiplierSingular(const std::string& what, double lambda)
      : std::runtime_error(what), frequency(lambda) {}
  double frequency;
};

struct Atom {
  double frequency = 0;  // radians per unit
  Complex amplitude{0, 0};
};

// A Hilbert-space element given by a finite atomic spectral measure: the atom
// list is kept canonical (sorted ascending by frequency, duplicates merged by
// summing amplitudes, exact-zero amplitudes dropped), so equal elements are
// structurally equal and every Parseval identity below is a finite exact sum.
class SpectralElement {
 public:
  SpectralElement() = default;
  explicit SpectralElement(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  double norm_sq() const;
  double norm() const;
  // Largest |frequency| present, 0 for the zero element.
  double max_abs_frequency() const;

  static SpectralElement single(double frequency, Complex amplitude);

  friend bool operator==(const SpectralElement& a, const SpectralElement& b) {
    if (a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i) {
      if (a.atoms_[i].frequency != b.atoms_[i].frequency ||
          a.atoms_[i].amplitude != b.atoms_[i].amplitude)
        return false;
    }
    return true;
  }

 private:
  std::vector<Atom> atoms_;
};

SpectralElement make_element(std::vector<Atom> atoms);

// Scalar product over shared frequencies: sum of amp_x(l)*conj(amp_f(l)).
Complex inner(const SpectralElement& x, const SpectralElement& f);

SpectralElement add(const SpectralElement& a, const SpectralElement& b);
SpectralElement subtract(const SpectralElement& a, const SpectralElement& b);
SpectralElement scale(Complex c, const SpectralElement& x);

// A bounded function of the generator, applied atomwise.
struct Multiplier {
  std::function<Complex(double)> eval;
  std::string description;
};

// Each atom (l, c) maps to (l, F(l)*c); F must be finite on the spectrum.
SpectralElement apply_multiplier(const Multiplier& F, const SpectralElement& x);

// The translation group: multiplier e^{i*l*t}; preserves the norm exactly.
SpectralElement translate(const SpectralElement& x, double t);

// Tail mass beyond the cutoff: (sum over |l| >= sigma of |amp|^2)^{1/2}.
// The boundary |l| == sigma counts as tail throughout this library.
double best_approx_error(const SpectralElement& x, double sigma);

// Keeps atoms with |l| < sigma (strict).
SpectralElement project(const SpectralElement& x, double sigma);

// An approximation method given by a symbol lam supported in (-sigma, sigma),
// identically 1 on (-epsilon, epsilon).  The residual symbol is
// theta(t) = 1 - lam(t) for |t| < sigma and theta(t) = 1 outside.
struct LinearMethod {
  double sigma = 0;
  double epsilon = 0;
  Multiplier lam;

  Complex lambda_at(double t) const;
  Complex theta_at(double t) const;
};

// lam identically 1 on (-sigma, sigma): the residual is the projection tail.
LinearMethod projection_method(double sigma);

// lam = 1 on [-epsilon, epsilon], raised-cosine rolloff to 0 at |t| = sigma.
LinearMethod plateau_method(double sigma, double epsilon);

// Grid check of the method's contract: lam == 1 on (-epsilon, epsilon) and
// |lam| <= bound on (-sigma, sigma).  Returns the worst deviation found.
double validate_method(const LinearMethod& L, int grid_n = 1024,
                       double bound = 1.0 + 1e-12);

struct MethodSplit {
  SpectralElement approx;    // multiplier lam restricted to |t| < sigma
  SpectralElement residual;  // multiplier theta; approx + residual == x
};

MethodSplit apply_linear_method(const LinearMethod& L,
                                const SpectralElement& x);

// Plain tabular text: one atom per line, "frequency real_part imag_part".
SpectralElement read_element(std::istream& in);
void write_element(std::ostream& out, const SpectralElement& x);

}  // namespace specmod
