#include "crange/hardy.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <sstream>

#include "parse_util.hpp"

namespace crange {

namespace {

std::string fmt(double x) { return detail::format_real(x); }
std::string fmt(Complex c) { return detail::format_complex(c); }

// d^{-e/2} for d = |u|^2, with exact paths for the exponents the kernels use.
double inv_pow_half(double d, double e) {
  if (e == 1.0) return 1.0 / std::sqrt(d);
  if (e == 2.0) return 1.0 / d;
  if (e == 3.0) return 1.0 / (d * std::sqrt(d));
  if (e == 4.0) return 1.0 / (d * d);
  if (e == 1.5) return 1.0 / std::sqrt(d * std::sqrt(d));
  return std::pow(d, -0.5 * e);
}

Complex complex_pow_neg(Complex u, double s) {
  if (s == 1.0) return 1.0 / u;
  if (s == 2.0) return 1.0 / (u * u);
  if (s == 3.0) return 1.0 / (u * u * u);
  return std::exp(-s * std::log(u));
}

const CircleQuadrature& resolve_rule(const TestFunction& f, const CircleQuadrature& q,
                                     std::optional<CircleQuadrature>& storage) {
  if (f.circle_nodes_hint > q.size()) {
    storage.emplace(f.circle_nodes_hint, q.offset());
    return *storage;
  }
  return q;
}

double circle_mean(const TestFunction& f, double p, const CircleQuadrature& q, double r) {
  return integrate_circle([&](double theta) { return abs_pow(f(std::polar(r, theta)), p); }, q);
}

// Herglotz integral of the indicator of the arc [alpha, alpha + length) and its derivative.
struct ArcHerglotz {
  Complex value;
  Complex derivative;
};

ArcHerglotz arc_herglotz(double alpha, double length, Complex z) {
  const Complex ea = std::polar(1.0, alpha);
  const Complex eb = std::polar(1.0, alpha + length);
  const Complex da = ea - z;
  const Complex db = eb - z;
  double turn = std::arg(db / da);
  if (turn <= 0.0) turn += kTwoPi;
  const double inv_pi = 1.0 / std::numbers::pi;
  const Complex value(turn * inv_pi - length / kTwoPi,
                      -inv_pi * (std::log(std::abs(db)) - std::log(std::abs(da))));
  const Complex derivative = (1.0 / da - 1.0 / db) / Complex(0.0, std::numbers::pi);
  return {value, derivative};
}

TestFunction step_outer(const StepModulus& m) {
  if (!(m.background > 0.0) || !std::isfinite(m.background)) {
    throw PreconditionError("outer_function: modulus must be positive");
  }
  std::vector<ArcValue> arcs = m.arcs;
  for (const ArcValue& a : arcs) {
    if (!(a.value > 0.0) || !std::isfinite(a.value)) {
      throw PreconditionError("outer_function: modulus must be positive");
    }
    if (!(a.length > 0.0 && a.length < kTwoPi)) {
      throw PreconditionError("outer_function: arc length must lie in (0, 2 pi)");
    }
  }
  const double log_bg = std::log(m.background);
  // log psi = log background + sum (log v_k - log background) 1_{arc k}.
  auto exponent = [arcs, log_bg](Complex z, Complex* dexp) {
    Complex f = log_bg;
    Complex df = 0.0;
    for (const ArcValue& a : arcs) {
      const double jump = std::log(a.value) - log_bg;
      const ArcHerglotz h = arc_herglotz(a.start, a.length, z);
      f += jump * h.value;
      df += jump * h.derivative;
    }
    if (dexp != nullptr) *dexp = df;
    return f;
  };

  TestFunction out;
  out.value = [exponent](Complex z) { return std::exp(exponent(z, nullptr)); };
  out.derivative = [exponent](Complex z) {
    Complex d;
    const Complex f = exponent(z, &d);
    return d * std::exp(f);
  };
  out.zero_free = true;
  std::ostringstream tag;
  tag << "outer step background " << fmt(m.background);
  for (const ArcValue& a : arcs) {
    tag << " [" << fmt(a.start) << " " << fmt(a.length) << " " << fmt(a.value) << "]";
  }
  out.tag = tag.str();
  return out;
}

TestFunction smooth_outer(const SmoothModulus& m, const CircleQuadrature& q) {
  const int n = q.size();
  std::vector<double> log_psi(n);
  for (int j = 0; j < n; ++j) {
    const double v = m.psi(q.angles()[j]);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw PreconditionError("outer_function: modulus must be positive and finite, got " +
                              fmt(v) + " at angle " + fmt(q.angles()[j]));
    }
    log_psi[j] = std::log(v);
  }
  // F(z) = c_0 + 2 sum_{k>=1} c_k z^k with c_k the Fourier coefficients of log psi.
  const int kmax = n / 2;
  std::vector<Complex> c(kmax);
  for (int k = 0; k < kmax; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) acc += log_psi[j] * std::polar(1.0, -k * q.angles()[j]);
    c[k] = acc / static_cast<double>(n);
    if (k > 0) c[k] *= 2.0;
  }
  c[0] = c[0].real();
  double scale = 0.0;
  for (const Complex& ck : c) scale = std::max(scale, std::abs(ck));
  std::size_t keep = c.size();
  while (keep > 1 && std::abs(c[keep - 1]) <= 1e-17 * scale) --keep;
  c.resize(keep);

  TestFunction out;
  out.value = [c](Complex z) {
    Complex acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return std::exp(acc);
  };
  out.derivative = [c](Complex z) {
    Complex acc = 0.0;
    Complex dacc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      dacc = dacc * z + acc;
      acc = acc * z + *it;
    }
    return dacc * std::exp(acc);
  };
  out.zero_free = true;
  out.tag = "outer " + (m.tag.empty() ? std::string("smooth") : m.tag);
  return out;
}

}  // namespace

HardyExponent::HardyExponent(double p) : p_(p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw PreconditionError("Hardy exponent must be a finite positive number, got " + fmt(p));
  }
}

namespace test_functions {

TestFunction constant(Complex c) {
  TestFunction f;
  f.value = [c](Complex) { return c; };
  f.derivative = [](Complex) { return Complex(0.0, 0.0); };
  f.zero_free = c != Complex(0.0, 0.0);
  f.tag = "const " + fmt(c);
  return f;
}

TestFunction monomial(int k, Complex coeff) {
  if (k < 0) throw PreconditionError("monomial: exponent must be nonnegative");
  if (k == 0) return constant(coeff);
  TestFunction f;
  f.value = [k, coeff](Complex z) { return coeff * std::pow(z, k); };
  f.derivative = [k, coeff](Complex z) {
    return coeff * static_cast<double>(k) * std::pow(z, k - 1);
  };
  f.zero_free = false;
  f.tag = "mono " + std::to_string(k) + " " + fmt(coeff);
  return f;
}

TestFunction polynomial(std::vector<Complex> ascending) {
  const PolyCoeffs poly(std::move(ascending));
  if (poly.degree() < 0) return constant(0.0);
  if (poly.degree() == 0) return constant(poly[0]);
  bool zero_free = true;
  for (const PolyRoot& r : poly_roots(poly)) {
    if (std::abs(r.z) <= 1.0 + 1e-12) zero_free = false;
  }
  TestFunction f;
  f.value = [poly](Complex z) { return poly(z); };
  f.derivative = [poly](Complex z) { return poly.derivative(z); };
  f.zero_free = zero_free;
  f.tag = "poly";
  for (const Complex& c : poly.coeffs()) f.tag += " " + fmt(c);
  return f;
}

TestFunction kernel_power(Complex lambda, double s, Complex scale) {
  if (!(std::abs(lambda) < 1.0)) throw PreconditionError("kernel_power: |lambda| must be < 1");
  const Complex lc = std::conj(lambda);
  TestFunction f;
  f.value = [lc, s, scale](Complex z) { return scale * complex_pow_neg(1.0 - lc * z, s); };
  f.derivative = [lc, s, scale](Complex z) {
    return scale * s * lc * complex_pow_neg(1.0 - lc * z, s + 1.0);
  };
  f.zero_free = scale != Complex(0.0, 0.0);
  f.tag = "kernel " + fmt(lambda) + " " + fmt(s) + " " + fmt(scale);
  f.circle_nodes_hint = kernel_circle_nodes(std::abs(lambda));
  return f;
}

TestFunction exponential(Complex a, Complex b) {
  TestFunction f;
  f.value = [a, b](Complex z) { return std::exp(a * z + b); };
  f.derivative = [a, b](Complex z) { return a * std::exp(a * z + b); };
  f.zero_free = true;
  f.tag = "exp " + fmt(a) + " " + fmt(b);
  return f;
}

TestFunction compose(const TestFunction& f, const Symbol& phi) {
  TestFunction out;
  out.value = [f, phi](Complex z) { return f.value(phi.eval(z)); };
  out.derivative = [f, phi](Complex z) { return f.derivative(phi.eval(z)) * phi.eval_deriv(z); };
  out.zero_free = f.zero_free;
  out.tag = "(" + f.tag + ") o (" + phi.describe() + ")";
  out.circle_nodes_hint = f.circle_nodes_hint;
  return out;
}

TestFunction parse(const std::string& descriptor) {
  const auto tokens = detail::split_ws(detail::trim(descriptor));
  if (tokens.empty()) throw ParseError("empty test-function descriptor");
  const std::string& kw = tokens[0];
  const std::string ctx = "'" + descriptor + "'";
  std::vector<Complex> args;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    args.push_back(detail::parse_complex(tokens[i], ctx));
  }
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw ParseError("wrong number of parameters in test-function descriptor " + ctx);
    }
  };
  auto real = [&](std::size_t i) {
    if (args[i].imag() != 0.0) throw ParseError("expected a real parameter in " + ctx);
    return args[i].real();
  };
  try {
    if (kw == "const") {
      need(1, 1);
      return constant(args[0]);
    }
    if (kw == "mono") {
      need(1, 2);
      const double k = real(0);
      if (k != std::floor(k)) throw ParseError("monomial exponent must be an integer in " + ctx);
      return monomial(static_cast<int>(k), args.size() == 2 ? args[1] : Complex(1.0, 0.0));
    }
    if (kw == "poly") {
      need(1, std::numeric_limits<std::size_t>::max());
      return polynomial(args);
    }
    if (kw == "kernel") {
      need(2, 3);
      return kernel_power(args[0], real(1), args.size() == 3 ? args[2] : Complex(1.0, 0.0));
    }
    if (kw == "exp") {
      need(1, 2);
      return exponential(args[0], args.size() == 2 ? args[1] : Complex(0.0, 0.0));
    }
    if (kw == "outer2") {
      need(4, 4);
      return two_valued_outer(real(0), real(1), real(2), real(3));
    }
  } catch (const PreconditionError& e) {
    throw ParseError("invalid test-function descriptor " + ctx + ": " + e.what());
  }
  throw ParseError("unknown test-function keyword '" + kw + "'");
}

}  // namespace test_functions

void validate_zero_free(const TestFunction& f) {
  if (!f.zero_free) return;
  // Argument principle on |z| = 1: the winding number of f counts the zeros
  // inside. The rule is refined until no step turns by more than pi/2.
  for (int n = std::max(4096, f.circle_nodes_hint);; n *= 2) {
    double turn = 0.0;
    double worst_step = 0.0;
    Complex prev = f(1.0);
    for (int j = 1; j <= n; ++j) {
      const Complex cur = f(std::polar(1.0, kTwoPi * j / n));
      const double step = std::arg(cur / prev);
      worst_step = std::max(worst_step, std::abs(step));
      turn += step;
      prev = cur;
    }
    if (worst_step < 0.5 * std::numbers::pi || n >= (1 << 22)) {
      const long winding = std::lround(turn / kTwoPi);
      if (winding != 0) {
        throw PreconditionError("zero-free claim fails for " + f.tag + ": boundary winding number " +
                                std::to_string(winding));
      }
      break;
    }
  }
  constexpr int kRadii = 32;
  constexpr int kAngles = 512;
  for (int i = 0; i <= kRadii; ++i) {
    const double r = static_cast<double>(i) / kRadii;
    const int angles = i == 0 ? 1 : kAngles;
    for (int j = 0; j < angles; ++j) {
      const Complex z = std::polar(r, kTwoPi * (j + 0.5) / angles);
      const double m = std::abs(f(z));
      if (!(m > 0.0) || !std::isfinite(m)) {
        std::ostringstream msg;
        msg << std::setprecision(12) << "zero-free claim fails for " << f.tag << ": |f| = " << m
            << " at (" << z.real() << ", " << z.imag() << ")";
        throw PreconditionError(msg.str());
      }
    }
  }
}

RadiusGrid RadiusGrid::standard(int max_k, bool include_boundary) {
  RadiusGrid g;
  for (int k = 0; k <= max_k; ++k) g.radii.push_back(1.0 - std::ldexp(1.0, -k));
  if (include_boundary) g.radii.push_back(1.0);
  return g;
}

std::vector<double> circle_means(const TestFunction& f, HardyExponent p, const CircleQuadrature& q,
                                 const RadiusGrid& radii) {
  std::optional<CircleQuadrature> storage;
  const CircleQuadrature& rule = resolve_rule(f, q, storage);
  std::vector<double> means;
  means.reserve(radii.radii.size());
  for (double r : radii.radii) {
    if (!(r >= 0.0 && r <= 1.0)) throw PreconditionError("circle_means: radius outside [0, 1]");
    means.push_back(circle_mean(f, p, rule, r));
  }
  return means;
}

double norm_boundary(const TestFunction& f, HardyExponent p, const CircleQuadrature& q,
                     const RadiusGrid& radii) {
  if (radii.radii.empty()) throw PreconditionError("norm_boundary: empty radius grid");
  const auto means = circle_means(f, p, q, radii);
  return *std::max_element(means.begin(), means.end());
}

double norm_hardy_stein(const TestFunction& f, HardyExponent p, const DiskQuadrature& q,
                        std::optional<double> constant) {
  const double pv = p.value();
  if (pv < 2.0) {
    if (!f.zero_free) {
      throw PreconditionError("norm_hardy_stein: p < 2 requires a zero-free function (" + f.tag +
                              ")");
    }
    validate_zero_free(f);
  }
  const double half_exp = 0.5 * (pv - 2.0);
  const double area = integrate_disk(
      [&](Complex z) {
        const double d = std::norm(f.derivative(z));
        if (d == 0.0) return 0.0;
        const double m = std::norm(f.value(z));
        const double weight = half_exp == 0.0 ? 1.0 : std::pow(m, half_exp);
        return weight * d * log_inv_modulus(z);
      },
      q);
  return abs_pow(f(0.0), pv) + constant.value_or(hardy_stein_constant(pv)) * area;
}

double norm_layer_cake(const TestFunction& f, HardyExponent p, const CircleQuadrature& q,
                       const LambdaGrid& grid) {
  if (grid.sub_panels < 1 || grid.order < 1) {
    throw PreconditionError("norm_layer_cake: lambda grid must be nonempty");
  }
  std::optional<CircleQuadrature> storage;
  const CircleQuadrature& rule = resolve_rule(f, q, storage);
  const int n = rule.size();
  std::vector<double> a(n);
  for (int j = 0; j < n; ++j) {
    a[j] = std::abs(f(rule.point(j)));
    if (!std::isfinite(a[j])) {
      detail::throw_nonfinite("norm_layer_cake", j, rule.point(j), a[j]);
    }
  }
  const double pv = p.value();
  const auto [lo_it, hi_it] = std::minmax_element(a.begin(), a.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double below = std::pow(lo, pv);  // m(E_f(lambda)) = 1 for lambda < min |f|
  if (hi - lo <= 1e-15 * hi) return below;

  // Critical values of the sampled modulus bound the smooth pieces of the distribution.
  std::vector<double> cuts{lo, hi};
  for (int j = 0; j < n; ++j) {
    const double prev = a[(j + n - 1) % n];
    const double next = a[(j + 1) % n];
    if ((a[j] >= prev && a[j] >= next) || (a[j] <= prev && a[j] <= next)) cuts.push_back(a[j]);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> merged;
  for (double c : cuts) {
    if (merged.empty() || c - merged.back() > 1e-9 * (hi - lo)) merged.push_back(c);
  }
  merged.back() = hi;
  if (merged.size() > 65) {
    merged.clear();
    for (int k = 0; k <= 64; ++k) merged.push_back(lo + (hi - lo) * k / 64.0);
  }

  // Distribution function of the piecewise-linear interpolant of |f|.
  auto distribution = [&](double lambda) {
    CompensatedSum acc;
    for (int j = 0; j < n; ++j) {
      const double u = a[j];
      const double v = a[(j + 1) % n];
      const double mn = std::min(u, v);
      const double mx = std::max(u, v);
      if (lambda < mn) {
        acc.add(1.0);
      } else if (lambda < mx) {
        acc.add((mx - lambda) / (mx - mn));
      }
    }
    return acc.value() / n;
  };

  const GaussLegendreRule gl = gauss_legendre(grid.order);
  CompensatedSum total;
  total.add(below);
  // lambda = a + (b - a)(3t^2 - 2t^3) flattens the square-root kinks at both ends.
  for (std::size_t s = 0; s + 1 < merged.size(); ++s) {
    const double a0 = merged[s];
    const double span = merged[s + 1] - a0;
    const double width = 1.0 / grid.sub_panels;
    for (int k = 0; k < grid.sub_panels; ++k) {
      for (int i = 0; i < grid.order; ++i) {
        const double t = (k + 0.5 * (gl.nodes[i] + 1.0)) * width;
        const double lambda = a0 + span * t * t * (3.0 - 2.0 * t);
        const double w = 0.5 * width * gl.weights[i] * span * 6.0 * t * (1.0 - t);
        total.add(w * pv * std::pow(lambda, pv - 1.0) * distribution(lambda));
      }
    }
  }
  return total.value();
}

TestFunction outer_function(const BoundaryModulus& psi, const CircleQuadrature& q) {
  if (const auto* step = std::get_if<StepModulus>(&psi)) return step_outer(*step);
  return smooth_outer(std::get<SmoothModulus>(psi), q);
}

TestFunction two_valued_outer(double start, double length, double inside, double outside) {
  StepModulus m;
  m.arcs.push_back({start, length, inside});
  m.background = outside;
  TestFunction f = step_outer(m);
  f.tag = "outer2 " + fmt(start) + " " + fmt(length) + " " + fmt(inside) + " " + fmt(outside);
  return f;
}

int kernel_circle_nodes(double lambda_modulus) {
  constexpr int kMin = 256;
  constexpr int kMax = 1 << 22;
  const double gap = 1.0 - lambda_modulus;
  if (!(gap > 0.0)) return kMax;
  const double want = 40.0 / gap;
  int n = kMin;
  while (n < want && n < kMax) n *= 2;
  return n;
}

double kernel_norm_power(double lambda_modulus, double p) {
  const TestFunction k = test_functions::kernel_power(lambda_modulus, 1.0);
  return norm_boundary(k, HardyExponent(p), CircleQuadrature(kernel_circle_nodes(lambda_modulus)));
}

TestFunction kernel(const KernelSpec& spec, std::optional<double> norm_power) {
  const HardyExponent p(spec.p);
  if (!(std::abs(spec.lambda) < 1.0)) throw PreconditionError("kernel: |lambda| must be < 1");
  TestFunction k;
  if (spec.regime() == KernelRegime::kNormalized) {
    const double np = norm_power.value_or(kernel_norm_power(std::abs(spec.lambda), p));
    k = test_functions::kernel_power(spec.lambda, 1.0, std::pow(np, -1.0 / p.value()));
  } else {
    k = test_functions::kernel_power(spec.lambda, (p.value() + 1.0) / p.value(),
                                     1.0 - std::norm(spec.lambda));
  }
  k.tag = "K " + fmt(spec.lambda) + " p=" + fmt(spec.p);
  return k;
}

KernelPowerField::KernelPowerField(const KernelSpec& spec, double norm_power)
    : lambda_conj_(std::conj(spec.lambda)) {
  const HardyExponent p(spec.p);
  if (spec.regime() == KernelRegime::kNormalized) {
    if (!(norm_power > 0.0)) throw PreconditionError("kernel: norm must be positive");
    coefficient_ = 1.0 / norm_power;
    exponent_ = p.value();
  } else {
    coefficient_ = std::pow(1.0 - std::norm(spec.lambda), p.value());
    exponent_ = p.value() + 1.0;
  }
}

double KernelPowerField::operator()(Complex w) const {
  return coefficient_ * inv_pow_half(std::norm(1.0 - lambda_conj_ * w), exponent_);
}

double kernel_abs_pow(const KernelSpec& spec, double norm_power, Complex w) {
  return KernelPowerField(spec, norm_power)(w);
}

}  // namespace crange
