#pragma once

// Hardy space machinery: three independent routes to ||f||^p, outer functions
// with prescribed boundary modulus, and the reproducing-kernel families.
//
// Every norm routine returns the p-th power ||f||_{H^p}^p.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "crange/numerics.hpp"
#include "crange/symbols.hpp"

namespace crange {

/// |z|^p with exact fast paths for the common exponents.
inline double abs_pow(Complex z, double p) {
  if (p == 2.0) return std::norm(z);
  if (p == 1.0) return std::abs(z);
  if (p == 4.0) {
    const double n = std::norm(z);
    return n * n;
  }
  return std::pow(std::norm(z), 0.5 * p);
}

class HardyExponent {
 public:
  HardyExponent(double p);  // NOLINT: implicit so call sites can pass a plain p
  double value() const { return p_; }
  operator double() const { return p_; }  // NOLINT: an exponent is a number

 private:
  double p_;
};

/// Analytic function on a neighbourhood of the closed disk with its derivative.
struct TestFunction {
  std::function<Complex(Complex)> value;
  std::function<Complex(Complex)> derivative;
  bool zero_free = false;
  std::string tag;
  /// Circle nodes needed to resolve the boundary values; 0 when any rule will do.
  int circle_nodes_hint = 0;

  Complex operator()(Complex z) const { return value(z); }
};

namespace test_functions {

TestFunction constant(Complex c);
/// coeff * z^k
TestFunction monomial(int k, Complex coeff = 1.0);
/// Zero-freeness is decided from the roots.
TestFunction polynomial(std::vector<Complex> ascending);
/// scale / (1 - conj(lambda) z)^s, principal branch.
TestFunction kernel_power(Complex lambda, double s, Complex scale = 1.0);
/// exp(a z + b)
TestFunction exponential(Complex a, Complex b = 0.0);
/// f o phi, the image under the composition operator.
TestFunction compose(const TestFunction& f, const Symbol& phi);

/// Tagged closed-form descriptor: "const c", "mono k [coeff]", "poly c0 c1 ...",
/// "kernel lambda s [scale]", "exp a [b]", "outer2 start length inside outside".
TestFunction parse(const std::string& descriptor);

}  // namespace test_functions

/// Throws PreconditionError if a zero-free claim fails on a dense sample of the
/// closed disk.
void validate_zero_free(const TestFunction& f);

/// Radii for the sup over circles: 1 - 2^{-k}, k = 0..20, then the boundary r = 1.
struct RadiusGrid {
  std::vector<double> radii;
  static RadiusGrid standard(int max_k = 20, bool include_boundary = true);
};

/// p-means of |f| on each circle of the grid.
std::vector<double> circle_means(const TestFunction& f, HardyExponent p, const CircleQuadrature& q,
                                 const RadiusGrid& radii);

/// sup over the radius grid of the circle p-means.
double norm_boundary(const TestFunction& f, HardyExponent p, const CircleQuadrature& q,
                     const RadiusGrid& radii = RadiusGrid::standard());

/// Constant in front of the area term of the Hardy-Stein identity under
/// normalized area measure.
inline double hardy_stein_constant(double p) { return 0.5 * p * p; }

/// |f(0)|^p + constant * iint |f|^{p-2} |f'|^2 log(1/|z|) dA.
/// The constant defaults to p^2/2, the value that makes the identity exact.
double norm_hardy_stein(const TestFunction& f, HardyExponent p, const DiskQuadrature& q,
                        std::optional<double> constant = std::nullopt);

/// Quadrature over lambda. [min |f|, max |f|] is split at the sampled critical
/// values of |f| (where the distribution function has square-root kinks), and
/// each piece gets `sub_panels` Gauss panels of the given order.
struct LambdaGrid {
  int sub_panels = 16;
  int order = 8;
};

/// int_0^inf p lambda^{p-1} m({|f| > lambda}) dlambda. The distribution
/// function is measured on the piecewise-linear interpolant of |f| through the
/// circle rule, so it is continuous in lambda; below min |f| it is exactly 1.
double norm_layer_cake(const TestFunction& f, HardyExponent p, const CircleQuadrature& q,
                       const LambdaGrid& grid = {});

// ---------------------------------------------------------------------------
// Outer functions
// ---------------------------------------------------------------------------

struct ArcValue {
  double start = 0.0;   ///< angle where the arc begins
  double length = 0.0;  ///< angular length in (0, 2 pi)
  double value = 1.0;   ///< modulus on the arc
};

/// Piecewise-constant modulus: `background` off the listed (disjoint) arcs.
struct StepModulus {
  std::vector<ArcValue> arcs;
  double background = 1.0;
};

/// Smooth positive modulus sampled on the circle rule.
struct SmoothModulus {
  std::function<double(double)> psi;
  std::string tag;
};

using BoundaryModulus = std::variant<StepModulus, SmoothModulus>;

/// exp( int (e^{it} + z)/(e^{it} - z) log psi(t) dm(t) ).
///
/// Step moduli use the closed-form Herglotz integral of each arc, so the result
/// is exact on the closed disk away from the jump angles. Smooth moduli are
/// expanded through the Fourier coefficients of log psi on the circle rule.
TestFunction outer_function(const BoundaryModulus& psi, const CircleQuadrature& q);

/// Outer function with |f| = inside on the arc [start, start + length) and
/// outside elsewhere.
TestFunction two_valued_outer(double start, double length, double inside, double outside);

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

enum class KernelRegime { kNormalized, kPower };

struct KernelSpec {
  Complex lambda;
  double p = 2.0;
  /// kNormalized for p > 1, kPower for 0 < p <= 1.
  KernelRegime regime() const { return p > 1.0 ? KernelRegime::kNormalized : KernelRegime::kPower; }
};

/// Circle nodes that resolve 1/(1 - conj(lambda) z) to near machine precision.
int kernel_circle_nodes(double lambda_modulus);

/// ||k_lambda||_{H^p}^p for k_lambda = 1/(1 - conj(lambda) z), through norm_boundary.
/// Depends only on |lambda|.
double kernel_norm_power(double lambda_modulus, double p);

/// p > 1: k_lambda / ||k_lambda||_{H^p}. 0 < p <= 1: (1 - |lambda|^2) / (1 - conj(lambda) z)^{(p+1)/p}.
/// A precomputed ||k_lambda||^p can be passed to skip the norm computation.
TestFunction kernel(const KernelSpec& spec, std::optional<double> norm_power = std::nullopt);

/// w -> |K_lambda(w)|^p with the per-lambda constants hoisted out.
class KernelPowerField {
 public:
  /// `norm_power` is ||k_lambda||^p and is ignored for p <= 1.
  KernelPowerField(const KernelSpec& spec, double norm_power);
  double operator()(Complex w) const;

 private:
  Complex lambda_conj_;
  double coefficient_;
  double exponent_;  // of |1 - conj(lambda) w|
};

/// |K_lambda(w)|^p for the kernel of the spec; `norm_power` is ignored for p <= 1.
double kernel_abs_pow(const KernelSpec& spec, double norm_power, Complex w);

}  // namespace crange
