#include "specmod/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace specmod {
namespace {

bool finite(Complex c) {
  return std::isfinite(c.real()) && std::isfinite(c.imag());
}

std::vector<Atom> canonicalize(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!std::isfinite(a.frequency)) {
      std::ostringstream msg;
      msg << "non-finite frequency " << a.frequency;
      throw InvalidAtom(msg.str());
    }
    if (!finite(a.amplitude)) throw InvalidAtom("non-finite amplitude");
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return a.frequency < b.frequency;
  });
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const Atom& a : atoms) {
    if (!out.empty() && out.back().frequency == a.frequency)
      out.back().amplitude += a.amplitude;
    else
      out.push_back(a);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const Atom& a) {
                             return a.amplitude == Complex{0, 0};
                           }),
            out.end());
  return out;
}

}  // namespace

SpectralElement::SpectralElement(std::vector<Atom> atoms)
    : atoms_(canonicalize(std::move(atoms))) {}

double SpectralElement::norm_sq() const {
  double s = 0;
  for (const Atom& a : atoms_) s += std::norm(a.amplitude);
  return s;
}

double SpectralElement::norm() const { return std::sqrt(norm_sq()); }

double SpectralElement::max_abs_frequency() const {
  double m = 0;
  for (const Atom& a : atoms_) m = std::max(m, std::abs(a.frequency));
  return m;
}

SpectralElement SpectralElement::single(double frequency, Complex amplitude) {
  return SpectralElement({{frequency, amplitude}});
}

SpectralElement make_element(std::vector<Atom> atoms) {
  return SpectralElement(std::move(atoms));
}

Complex inner(const SpectralElement& x, const SpectralElement& f) {
  // Both atom lists are sorted; walk them in lockstep.
  Complex s{0, 0};
  const auto& xa = x.atoms();
  const auto& fa = f.atoms();
  std::size_t i = 0, j = 0;
  while (i < xa.size() && j < fa.size()) {
    if (xa[i].frequency < fa[j].frequency)
      ++i;
    else if (fa[j].frequency < xa[i].frequency)
      ++j;
    else {
      s += xa[i].amplitude * std::conj(fa[j].amplitude);
      ++i;
      ++j;
    }
  }
  return s;
}

SpectralElement add(const SpectralElement& a, const SpectralElement& b) {
  std::vector<Atom> atoms = a.atoms();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return SpectralElement(std::move(atoms));
}

SpectralElement subtract(const SpectralElement& a, const SpectralElement& b) {
  std::vector<Atom> atoms = a.atoms();
  atoms.reserve(atoms.size() + b.size());
  for (const Atom& at : b.atoms())
    atoms.push_back({at.frequency, -at.amplitude});
  return SpectralElement(std::move(atoms));
}

SpectralElement scale(Complex c, const SpectralElement& x) {
  std::vector<Atom> atoms = x.atoms();
  for (Atom& a : atoms) a.amplitude *= c;
  return SpectralElement(std::move(atoms));
}

SpectralElement apply_multiplier(const Multiplier& F,
                                 const SpectralElement& x) {
  std::vector<Atom> atoms = x.atoms();
  for (Atom& a : atoms) {
    Complex v = F.eval(a.frequency);
    if (!(std::isfinite(v.real()) && std::isfinite(v.imag()))) {
      std::ostringstream msg;
      msg << "multiplier " << (F.description.empty() ? "?" : F.description)
          << " non-finite at frequency " << a.frequency;
      throw MultiplierSingular(msg.str(), a.frequency);
    }
    a.amplitude *= v;
  }
  return SpectralElement(std::move(atoms));
}

SpectralElement translate(const SpectralElement& x, double t) {
  return apply_multiplier(
      {[t](double l) { return std::exp(Complex{0, l * t}); }, "translation"},
      x);
}

double best_approx_error(const SpectralElement& x, double sigma) {
  double s = 0;
  for (const Atom& a : x.atoms())
    if (std::abs(a.frequency) >= sigma) s += std::norm(a.amplitude);
  return std::sqrt(s);
}

SpectralElement project(const SpectralElement& x, double sigma) {
  std::vector<Atom> atoms;
  for (const Atom& a : x.atoms())
    if (std::abs(a.frequency) < sigma) atoms.push_back(a);
  return SpectralElement(std::move(atoms));
}

Complex LinearMethod::lambda_at(double t) const {
  if (std::abs(t) >= sigma) return {0, 0};
  if (std::abs(t) <= epsilon) return {1, 0};
  return lam.eval(t);
}

Complex LinearMethod::theta_at(double t) const {
  if (std::abs(t) >= sigma) return {1, 0};
  return Complex{1, 0} - lambda_at(t);
}

LinearMethod projection_method(double sigma) {
  LinearMethod L;
  L.sigma = sigma;
  L.epsilon = 0.5 * sigma;
  L.lam = {[](double) { return Complex{1, 0}; }, "projection"};
  return L;
}

LinearMethod plateau_method(double sigma, double epsilon) {
  LinearMethod L;
  L.sigma = sigma;
  L.epsilon = epsilon;
  L.lam = {[sigma, epsilon](double t) -> Complex {
             double a = std::abs(t);
             if (a <= epsilon) return {1, 0};
             if (a >= sigma) return {0, 0};
             // Raised cosine from 1 at epsilon down to 0 at sigma.
             double u = (a - epsilon) / (sigma - epsilon);
             return {0.5 * (1.0 + std::cos(M_PI * u)), 0};
           },
           "plateau"};
  return L;
}

double validate_method(const LinearMethod& L, int grid_n, double bound) {
  double worst = 0;
  for (int i = 0; i <= grid_n; ++i) {
    double t = -L.sigma + 2.0 * L.sigma * i / grid_n;
    Complex v = L.lambda_at(t);
    if (std::abs(t) < L.epsilon)
      worst = std::max(worst, std::abs(v - Complex{1, 0}));
    if (std::abs(t) < L.sigma)
      worst = std::max(worst, std::max(0.0, std::abs(v) - bound));
  }
  return worst;
}

MethodSplit apply_linear_method(const LinearMethod& L,
                                const SpectralElement& x) {
  std::vector<Atom> approx, residual;
  for (const Atom& a : x.atoms()) {
    Complex lam = L.lambda_at(a.frequency);
    Complex th = L.theta_at(a.frequency);
    approx.push_back({a.frequency, lam * a.amplitude});
    residual.push_back({a.frequency, th * a.amplitude});
  }
  return {SpectralElement(std::move(approx)),
          SpectralElement(std::move(residual))};
}

SpectralElement read_element(std::istream& in) {
  std::vector<Atom> atoms;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double freq, re, im;
    if (row >> freq >> re >> im) atoms.push_back({freq, {re, im}});
  }
  return SpectralElement(std::move(atoms));
}

void write_element(std::ostream& out, const SpectralElement& x) {
  std::ostringstream buf;
  buf.precision(17);
  for (const Atom& a : x.atoms())
    buf << a.frequency << ' ' << a.amplitude.real() << ' '
        << a.amplitude.imag() << '\n';
  out << buf.str();
}

}  // namespace specmod
