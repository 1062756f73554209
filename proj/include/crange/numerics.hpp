#pragma once

// Shared computational substrate: quadrature on the disk and the circle,
// seeded sampling, and polynomial root extraction.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "crange/errors.hpp"

namespace crange {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// log(1/|z|), computed through log1p when |z| is close to 1.
inline double log_inv_modulus(Complex z) {
  const double m = std::abs(z);
  if (m > 0.9) return -std::log1p(m - 1.0);
  return -std::log(m);
}

/// Neumaier-compensated running sum. Deterministic for a fixed input order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int n);

/// Tensor-product rule for the normalized area measure dA = dx dy / pi.
///
/// Radial nodes come from composite Gauss-Legendre panels in t in (0,1) mapped
/// through r = 1 - (1-t)^beta, which clusters nodes toward |z| = 1. The
/// innermost panel, when it has at least 6 nodes, is further mapped through
/// t = b v^3 so that log(1/|z|) converges quickly despite the origin
/// singularity. Angular nodes are equispaced midpoints. The origin is never a
/// node.
class DiskQuadrature {
 public:
  static constexpr int kDefaultPanels = 4;

  DiskQuadrature(int radial_nodes, int angular_nodes,
                 double radial_refinement = 2.0,
                 int radial_panels = kDefaultPanels);

  int radial_nodes() const { return static_cast<int>(radii_.size()); }
  int angular_nodes() const { return angular_nodes_; }
  double radial_refinement() const { return refinement_; }
  std::size_t size() const { return nodes_.size(); }

  std::span<const Complex> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> radii() const { return radii_; }

  /// Same structure with both node counts doubled.
  DiskQuadrature refined() const;

 private:
  int angular_nodes_;
  double refinement_;
  int panels_;
  std::vector<double> radii_;
  std::vector<Complex> nodes_;
  std::vector<double> weights_;
};

/// Equispaced rule for the normalized length measure dm = dtheta / 2pi.
/// Node j sits at angle 2pi (j + offset) / n.
class CircleQuadrature {
 public:
  explicit CircleQuadrature(int nodes, double offset = 0.5);

  int size() const { return static_cast<int>(angles_.size()); }
  double offset() const { return offset_; }
  std::span<const double> angles() const { return angles_; }
  double weight() const { return 1.0 / static_cast<double>(angles_.size()); }
  Complex point(int j) const { return std::polar(1.0, angles_[j]); }

  CircleQuadrature refined() const { return CircleQuadrature(2 * size(), offset_); }

 private:
  double offset_;
  std::vector<double> angles_;
};

namespace detail {
[[noreturn]] void throw_nonfinite(const char* where, std::size_t index, Complex at, double value);
}

/// Quadrature approximation of the integral of f over the disk, normalized area.
template <class F>
double integrate_disk(F&& f, const DiskQuadrature& q) {
  CompensatedSum acc;
  const auto nodes = q.nodes();
  const auto weights = q.weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = f(nodes[i]);
    if (!std::isfinite(v)) detail::throw_nonfinite("integrate_disk", i, nodes[i], v);
    acc.add(v * weights[i]);
  }
  return acc.value();
}

/// Quadrature approximation of the integral of f(e^{i theta}) dm(theta).
/// f receives the angle.
template <class F>
double integrate_circle(F&& f, const CircleQuadrature& q) {
  CompensatedSum acc;
  const auto angles = q.angles();
  for (std::size_t j = 0; j < angles.size(); ++j) {
    const double v = f(angles[j]);
    if (!std::isfinite(v)) {
      detail::throw_nonfinite("integrate_circle", j, std::polar(1.0, angles[j]), v);
    }
    acc.add(v);
  }
  return acc.value() * q.weight();
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded 64-bit generator over std::mt19937_64, whose output sequence is fixed
/// by the standard. Doubles are built from the top 53 bits rather than through
/// <random> distributions, whose output is implementation-defined.
class SeededSampler {
 public:
  explicit SeededSampler(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1).
  double uniform();
  /// Independent sampler for a numbered sub-stream.
  SeededSampler fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t position_ = 0;
};

struct PseudoDisk;

/// n uniform samples from the region, in draw order.
std::vector<Complex> sample_region(const PseudoDisk& region, std::size_t n, SeededSampler& sampler);

/// Fraction of n uniform samples from the region that satisfy the predicate.
/// Draws exactly the points sample_region would.
double mc_region_fraction(const std::function<bool(Complex)>& predicate,
                          const PseudoDisk& region, std::size_t n, SeededSampler& sampler);

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Complex coefficients in ascending degree. Exact trailing zeros are trimmed.
class PolyCoeffs {
 public:
  PolyCoeffs() = default;
  explicit PolyCoeffs(std::vector<Complex> ascending);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex operator[](std::size_t k) const { return coeffs_[k]; }
  double max_abs_coeff() const;

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;
  /// sum |a_k| |z|^k, the scale used for residual bounds.
  double magnitude_at(Complex z) const;

  static PolyCoeffs from_roots(std::span<const Complex> roots, Complex leading = 1.0);

 private:
  std::vector<Complex> coeffs_;
};

struct PolyRoot {
  Complex z;
  int multiplicity = 1;
};

struct RootOptions {
  double residual_tol = 1e-12;
  double cluster_tol = 1e-8;
  int max_iterations = 500;
};

/// All complex roots with multiplicity (Aberth-Ehrlich simultaneous iteration
/// followed by Newton polishing).
std::vector<PolyRoot> poly_roots(const PolyCoeffs& p, const RootOptions& options = {});

}  // namespace crange
