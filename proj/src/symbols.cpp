#include "crange/symbols.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "parse_util.hpp"

namespace crange {

namespace {

constexpr double kInteriorMargin = 1e-12;
constexpr double kProximalBand = 1e-9;
constexpr double kPreimageResidual = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<Complex> multiply(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex horner_deriv(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * c[k];
  return acc;
}

void add_candidate(PreimageSet& out, Complex z, int multiplicity) {
  const double m = std::abs(z);
  if (m < 1.0 - kInteriorMargin) {
    out.points.push_back({z, multiplicity});
  } else if (m <= 1.0 + kProximalBand) {
    out.boundary_proximal = true;
  }
}

void add_roots(PreimageSet& out, const PolyCoeffs& poly) {
  for (const PolyRoot& r : poly_roots(poly)) add_candidate(out, r.z, r.multiplicity);
}

std::string fmt(Complex c) { return detail::format_complex(c); }

bool unimodular(Complex c) { return std::abs(std::abs(c) - 1.0) <= 1e-12; }

}  // namespace

int PreimageSet::total_multiplicity() const {
  int total = 0;
  for (const Preimage& p : points) total += p.multiplicity;
  return total;
}

Symbol::Symbol(SymbolVariant v) : variant_(std::move(v)) {}

Symbol Symbol::blaschke(std::vector<Complex> zeros, Complex rotation) {
  if (zeros.empty()) throw PreconditionError("blaschke: a constant product is not a valid symbol");
  for (const Complex& a : zeros) {
    if (!(std::abs(a) < 1.0)) throw PreconditionError("blaschke: zeros must lie in the open disk");
  }
  if (!unimodular(rotation)) throw PreconditionError("blaschke: rotation must be unimodular");
  Symbol s(variants::FiniteBlaschke{std::move(zeros), rotation});
  s.certify();
  s.label_ = s.describe();
  return s;
}

Symbol Symbol::polynomial(std::vector<Complex> coefficients) {
  while (!coefficients.empty() && coefficients.back() == Complex(0.0, 0.0)) coefficients.pop_back();
  if (coefficients.size() < 2) throw PreconditionError("polynomial: symbol must be nonconstant");
  Symbol s(variants::PolynomialMap{std::move(coefficients)});
  s.certify();
  s.label_ = s.describe();
  return s;
}

Symbol Symbol::moebius(Complex a, Complex rotation) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError("moebius: a must lie in the open disk");
  if (!unimodular(rotation)) throw PreconditionError("moebius: rotation must be unimodular");
  Symbol s(variants::Moebius{a, rotation});
  s.certify();
  s.label_ = s.describe();
  return s;
}

Symbol Symbol::affine(double scale, Complex offset) {
  if (!(scale > 0.0 && scale <= 1.0)) throw PreconditionError("affine: scale must lie in (0, 1]");
  if (scale + std::abs(offset) > 1.0 + 1e-12) {
    throw PreconditionError("affine: scale + |offset| must not exceed 1");
  }
  Symbol s(variants::AffineContraction{scale, offset});
  s.certify();
  s.label_ = s.describe();
  return s;
}

Symbol Symbol::compose(const Symbol& outer, const Symbol& inner) {
  Symbol s(variants::Composition{std::make_shared<const Symbol>(outer),
                                 std::make_shared<const Symbol>(inner)});
  s.certify();
  s.label_ = s.describe();
  return s;
}

Symbol Symbol::identity() { return polynomial({0.0, 1.0}).with_label("identity"); }

Symbol Symbol::rotation(double alpha) { return moebius(0.0, std::polar(1.0, alpha)); }

Symbol Symbol::with_label(std::string label) const {
  Symbol copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

void Symbol::certify(const SymbolOptions& options) const {
  double worst = 0.0;
  for (int j = 0; j < options.certificate_angles; ++j) {
    const double theta = kTwoPi * j / options.certificate_angles;
    const double m = std::abs(eval(std::polar(1.0, theta)));
    if (!std::isfinite(m)) throw PreconditionError("symbol has a pole on the closed disk");
    worst = std::max(worst, m);
  }
  if (worst > 1.0 + options.certificate_slack) {
    std::ostringstream msg;
    msg << std::setprecision(12) << "not a self-map of the disk: max |phi| on the circle is "
        << worst;
    throw PreconditionError(msg.str());
  }
}

Complex Symbol::eval(Complex z) const {
  return std::visit(
      Overloaded{
          [z](const variants::FiniteBlaschke& b) {
            Complex acc = b.rotation;
            for (const Complex& a : b.zeros) acc *= (z - a) / (1.0 - std::conj(a) * z);
            return acc;
          },
          [z](const variants::PolynomialMap& p) { return horner(p.coefficients, z); },
          [z](const variants::Moebius& m) {
            return m.rotation * (z - m.a) / (1.0 - std::conj(m.a) * z);
          },
          [z](const variants::AffineContraction& a) { return a.scale * z + a.offset; },
          [z](const variants::Composition& c) { return c.outer->eval(c.inner->eval(z)); },
      },
      variant_);
}

Complex Symbol::eval_deriv(Complex z) const {
  return std::visit(
      Overloaded{
          [z](const variants::FiniteBlaschke& b) {
            const std::size_t n = b.zeros.size();
            std::vector<Complex> factor(n);
            std::vector<Complex> dfactor(n);
            for (std::size_t k = 0; k < n; ++k) {
              const Complex a = b.zeros[k];
              const Complex den = 1.0 - std::conj(a) * z;
              factor[k] = (z - a) / den;
              dfactor[k] = (1.0 - std::norm(a)) / (den * den);
            }
            Complex total = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
              Complex term = dfactor[k];
              for (std::size_t j = 0; j < n; ++j) {
                if (j != k) term *= factor[j];
              }
              total += term;
            }
            return b.rotation * total;
          },
          [z](const variants::PolynomialMap& p) { return horner_deriv(p.coefficients, z); },
          [z](const variants::Moebius& m) {
            const Complex den = 1.0 - std::conj(m.a) * z;
            return m.rotation * (1.0 - std::norm(m.a)) / (den * den);
          },
          [](const variants::AffineContraction& a) { return Complex(a.scale, 0.0); },
          [z](const variants::Composition& c) {
            return c.outer->eval_deriv(c.inner->eval(z)) * c.inner->eval_deriv(z);
          },
      },
      variant_);
}

PreimageSet Symbol::preimages(Complex w) const {
  if (!(std::abs(w) < 1.0)) throw PreconditionError("preimages: w must lie in the open disk");
  PreimageSet out;
  std::visit(
      Overloaded{
          [&](const variants::FiniteBlaschke& b) {
            // rotation * prod(z - a_k) - w * prod(1 - conj(a_k) z) = 0
            std::vector<Complex> num{1.0};
            std::vector<Complex> den{1.0};
            for (const Complex& a : b.zeros) {
              num = multiply(num, {-a, 1.0});
              den = multiply(den, {1.0, -std::conj(a)});
            }
            std::vector<Complex> c(num.size());
            for (std::size_t k = 0; k < num.size(); ++k) c[k] = b.rotation * num[k] - w * den[k];
            add_roots(out, PolyCoeffs(std::move(c)));
          },
          [&](const variants::PolynomialMap& p) {
            std::vector<Complex> c = p.coefficients;
            c[0] -= w;
            add_roots(out, PolyCoeffs(std::move(c)));
          },
          [&](const variants::Moebius& m) {
            const Complex u = w / m.rotation;
            add_candidate(out, (u + m.a) / (1.0 + std::conj(m.a) * u), 1);
          },
          [&](const variants::AffineContraction& a) {
            add_candidate(out, (w - a.offset) / a.scale, 1);
          },
          [&](const variants::Composition& c) {
            const PreimageSet mid = c.outer->preimages(w);
            out.boundary_proximal = mid.boundary_proximal;
            for (const Preimage& u : mid.points) {
              const PreimageSet inner = c.inner->preimages(u.z);
              out.boundary_proximal = out.boundary_proximal || inner.boundary_proximal;
              for (const Preimage& z : inner.points) {
                out.points.push_back({z.z, z.multiplicity * u.multiplicity});
              }
            }
          },
      },
      variant_);

  for (const Preimage& p : out.points) {
    const double residual = std::abs(eval(p.z) - w);
    if (residual > kPreimageResidual) {
      std::ostringstream msg;
      msg << std::setprecision(6) << "preimages: |phi(z) - w| = " << residual << " at z = ("
          << p.z.real() << ", " << p.z.imag() << ") for " << describe();
      throw ConvergenceError(msg.str());
    }
  }
  return out;
}

int Symbol::degree() const {
  return std::visit(
      Overloaded{
          [](const variants::FiniteBlaschke& b) { return static_cast<int>(b.zeros.size()); },
          [](const variants::PolynomialMap& p) { return static_cast<int>(p.coefficients.size()) - 1; },
          [](const variants::Moebius&) { return 1; },
          [](const variants::AffineContraction&) { return 1; },
          [](const variants::Composition& c) { return c.outer->degree() * c.inner->degree(); },
      },
      variant_);
}

bool Symbol::is_inner() const {
  return std::visit(
      Overloaded{
          [](const variants::FiniteBlaschke&) { return true; },
          [](const variants::PolynomialMap& p) {
            // Only monomials c z^n with |c| = 1 are inner polynomials.
            int nonzero = 0;
            Complex lead = 0.0;
            for (const Complex& c : p.coefficients) {
              if (c != Complex(0.0, 0.0)) {
                ++nonzero;
                lead = c;
              }
            }
            return nonzero == 1 && unimodular(lead);
          },
          [](const variants::Moebius&) { return true; },
          [](const variants::AffineContraction& a) { return a.scale == 1.0; },
          [](const variants::Composition& c) { return c.outer->is_inner() && c.inner->is_inner(); },
      },
      variant_);
}

std::string Symbol::describe() const {
  return std::visit(
      Overloaded{
          [](const variants::FiniteBlaschke& b) {
            std::string s = "blaschke " + fmt(b.rotation);
            for (const Complex& a : b.zeros) s += " " + fmt(a);
            return s;
          },
          [](const variants::PolynomialMap& p) {
            std::string s = "poly";
            for (const Complex& c : p.coefficients) s += " " + fmt(c);
            return s;
          },
          [](const variants::Moebius& m) { return "moebius " + fmt(m.a) + " " + fmt(m.rotation); },
          [](const variants::AffineContraction& a) {
            return "affine " + detail::format_real(a.scale) + " " + fmt(a.offset);
          },
          [](const variants::Composition& c) {
            return c.outer->describe() + " | " + c.inner->describe();
          },
      },
      variant_);
}

}  // namespace crange
