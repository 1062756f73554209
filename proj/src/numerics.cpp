#include "crange/numerics.hpp"

#include <algorithm>
#include <iomanip>

#include "crange/geometry.hpp"

namespace crange {

namespace detail {

void throw_nonfinite(const char* where, std::size_t index, Complex at, double value) {
  std::ostringstream msg;
  msg << std::setprecision(17) << where << ": non-finite value " << value << " at node "
      << index << " (" << at.real() << ", " << at.imag() << ")";
  throw EvaluationError(msg.str());
}

}  // namespace detail

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw PreconditionError("gauss_legendre: need at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton on P_n from the asymptotic initial guess; nodes come in symmetric pairs.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * x * p2 - (k - 1.0) * p3) / k;
      }
      dp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

DiskQuadrature::DiskQuadrature(int radial_nodes, int angular_nodes, double radial_refinement,
                               int radial_panels)
    : angular_nodes_(angular_nodes), refinement_(radial_refinement), panels_(radial_panels) {
  if (radial_nodes < 1 || angular_nodes < 1 || radial_panels < 1) {
    throw PreconditionError("DiskQuadrature: node and panel counts must be positive");
  }
  if (radial_nodes % radial_panels != 0) {
    throw PreconditionError("DiskQuadrature: radial_nodes must be a multiple of radial_panels");
  }
  if (!(radial_refinement >= 1.0)) {
    throw PreconditionError("DiskQuadrature: radial_refinement must be >= 1");
  }
  const int per_panel = radial_nodes / radial_panels;
  const GaussLegendreRule gl = gauss_legendre(per_panel);

  std::vector<double> radial_weights;
  radii_.reserve(radial_nodes);
  radial_weights.reserve(radial_nodes);
  for (int panel = 0; panel < radial_panels; ++panel) {
    const double a = static_cast<double>(panel) / radial_panels;
    const double b = static_cast<double>(panel + 1) / radial_panels;
    for (int i = 0; i < per_panel; ++i) {
      double t = a + 0.5 * (b - a) * (gl.nodes[i] + 1.0);
      double wt = 0.5 * (b - a) * gl.weights[i];
      if (panel == 0 && per_panel >= 6) {
        // t = b v^3 on the innermost panel flattens r log(1/r) at the origin.
        // For beta = 2, 2 r dr is then a degree-11 polynomial in v, which 6 or
        // more Gauss nodes integrate exactly, so the total area stays 1.
        const double v = 0.5 * (gl.nodes[i] + 1.0);
        t = b * v * v * v;
        wt = 0.5 * gl.weights[i] * 3.0 * b * v * v;
      }
      const double s = 1.0 - t;
      const double r = 1.0 - std::pow(s, refinement_);
      const double dr = refinement_ * std::pow(s, refinement_ - 1.0) * wt;
      radii_.push_back(r);
      // dA = 2 r dr dtheta / 2pi in polar form.
      radial_weights.push_back(2.0 * r * dr);
    }
  }

  nodes_.reserve(static_cast<std::size_t>(radial_nodes) * angular_nodes);
  weights_.reserve(nodes_.capacity());
  const double dtheta = kTwoPi / angular_nodes;
  std::vector<Complex> unit(angular_nodes);
  for (int j = 0; j < angular_nodes; ++j) unit[j] = std::polar(1.0, (j + 0.5) * dtheta);
  for (std::size_t i = 0; i < radii_.size(); ++i) {
    for (int j = 0; j < angular_nodes; ++j) {
      nodes_.push_back(radii_[i] * unit[j]);
      weights_.push_back(radial_weights[i] / angular_nodes);
    }
  }
}

DiskQuadrature DiskQuadrature::refined() const {
  return DiskQuadrature(2 * radial_nodes(), 2 * angular_nodes_, refinement_, panels_);
}

CircleQuadrature::CircleQuadrature(int nodes, double offset) : offset_(offset) {
  if (nodes < 1) throw PreconditionError("CircleQuadrature: need at least one node");
  angles_.resize(nodes);
  for (int j = 0; j < nodes; ++j) angles_[j] = kTwoPi * (j + offset) / nodes;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

SeededSampler::SeededSampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t SeededSampler::next_u64() {
  ++position_;
  return engine_();
}

double SeededSampler::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

SeededSampler SeededSampler::fork(std::uint64_t stream) const {
  return SeededSampler(mix_seed(seed_, stream));
}

namespace {

Complex draw_in_disk(Complex center, double radius, SeededSampler& sampler) {
  const double rho = radius * std::sqrt(sampler.uniform());
  const double theta = kTwoPi * sampler.uniform();
  return center + std::polar(rho, theta);
}

}  // namespace

std::vector<Complex> sample_region(const PseudoDisk& region, std::size_t n, SeededSampler& sampler) {
  const Complex center = region.euclidean_center();
  const double radius = region.euclidean_radius();
  if (!(radius > 0.0)) throw PreconditionError("sample_region: region has zero area");
  std::vector<Complex> out(n);
  for (Complex& z : out) z = draw_in_disk(center, radius, sampler);
  return out;
}

double mc_region_fraction(const std::function<bool(Complex)>& predicate, const PseudoDisk& region,
                          std::size_t n, SeededSampler& sampler) {
  if (n < 1) throw PreconditionError("mc_region_fraction: need at least one sample");
  const Complex center = region.euclidean_center();
  const double radius = region.euclidean_radius();
  if (!(radius > 0.0)) throw PreconditionError("mc_region_fraction: region has zero area");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (predicate(draw_in_disk(center, radius, sampler))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

}  // namespace crange
