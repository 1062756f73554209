#pragma once

// Rational analytic self-maps of the unit disk.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "crange/numerics.hpp"

namespace crange {

struct Preimage {
  Complex z;
  int multiplicity = 1;
};

/// Solutions of phi(z) = w inside the open disk.
struct PreimageSet {
  std::vector<Preimage> points;
  /// A candidate root with 1 - 1e-12 <= |z| <= 1 + 1e-9 was dropped as lying on the circle.
  bool boundary_proximal = false;

  int total_multiplicity() const;
};

/// Evaluator contract for self-maps of the disk. Rational symbols implement it
/// exactly; other symbol classes can be added behind the same interface.
class SelfMap {
 public:
  virtual ~SelfMap() = default;
  virtual Complex eval(Complex z) const = 0;
  virtual Complex eval_deriv(Complex z) const = 0;
  virtual PreimageSet preimages(Complex w) const = 0;
  virtual std::string describe() const = 0;

  Complex at_origin() const { return eval(0.0); }
  /// phi(e^{i theta}); the radial limit for symbols continuous on the closed disk.
  Complex boundary_pushforward_point(double theta) const { return eval(std::polar(1.0, theta)); }
};

class Symbol;

namespace variants {

/// rotation * prod (z - a_k) / (1 - conj(a_k) z)
struct FiniteBlaschke {
  std::vector<Complex> zeros;
  Complex rotation{1.0, 0.0};
};

/// sum c_k z^k
struct PolynomialMap {
  std::vector<Complex> coefficients;
};

/// rotation * (z - a) / (1 - conj(a) z)
struct Moebius {
  Complex a;
  Complex rotation{1.0, 0.0};
};

/// scale * z + offset, scale in (0, 1], scale + |offset| <= 1
struct AffineContraction {
  double scale = 1.0;
  Complex offset{0.0, 0.0};
};

/// outer(inner(z))
struct Composition {
  std::shared_ptr<const Symbol> outer;
  std::shared_ptr<const Symbol> inner;
};

}  // namespace variants

using SymbolVariant = std::variant<variants::FiniteBlaschke, variants::PolynomialMap,
                                   variants::Moebius, variants::AffineContraction,
                                   variants::Composition>;

struct SymbolOptions {
  /// Boundary angles used by the self-map certificate.
  int certificate_angles = 4096;
  double certificate_slack = 1e-10;
};

/// Immutable rational self-map of the disk. Construction certifies the map:
/// nonconstant, pole-free on the closed disk, and |phi| <= 1 + 1e-10 on a dense
/// boundary sample, which by the maximum principle makes it a self-map.
class Symbol final : public SelfMap {
 public:
  static Symbol blaschke(std::vector<Complex> zeros, Complex rotation = 1.0);
  static Symbol polynomial(std::vector<Complex> coefficients);
  static Symbol moebius(Complex a, Complex rotation = 1.0);
  static Symbol affine(double scale, Complex offset = 0.0);
  static Symbol compose(const Symbol& outer, const Symbol& inner);
  static Symbol identity();
  /// z -> e^{i alpha} z
  static Symbol rotation(double alpha);

  Complex eval(Complex z) const override;
  Complex eval_deriv(Complex z) const override;
  PreimageSet preimages(Complex w) const override;
  std::string describe() const override;

  const SymbolVariant& variant() const { return variant_; }
  /// Degree of the rational map (number of preimages of a generic interior point
  /// for inner symbols).
  int degree() const;
  /// True for finite Blaschke products and Moebius maps, and compositions of them.
  bool is_inner() const;

  /// Optional human label carried into reports; defaults to describe().
  const std::string& label() const { return label_; }
  Symbol with_label(std::string label) const;

 private:
  explicit Symbol(SymbolVariant v);
  void certify(const SymbolOptions& options = {}) const;

  SymbolVariant variant_;
  std::string label_;
};

/// One-line record: keyword followed by "re,im" parameters; see docs/symbol_format.md.
Symbol parse_symbol(const std::string& record);
/// Records separated by newlines; blank lines and '#' comments are skipped.
std::vector<Symbol> parse_symbol_list(const std::string& text);
std::string format_symbol(const Symbol& symbol);

}  // namespace crange
