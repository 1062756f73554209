#include "crange/geometry.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "crange/nevanlinna.hpp"

namespace crange {

namespace {

constexpr std::size_t kStratumBlock = 4096;

// Window predicate on polar coordinates; arg in (-pi, pi].
bool contains_polar(const CarlesonWindow& w, double modulus, double arg) {
  if (!(modulus > 1.0 - w.h && modulus <= 1.0)) return false;
  double d = arg - std::arg(w.zeta);
  if (d > std::numbers::pi) d -= kTwoPi;
  if (d <= -std::numbers::pi) d += kTwoPi;
  return std::abs(d) <= std::numbers::pi * w.h;
}

}  // namespace

double pseudo_distance(Complex z, Complex w) {
  if (!(std::abs(z) < 1.0 && std::abs(w) < 1.0)) {
    throw PreconditionError("pseudo_distance: points must lie in the open disk");
  }
  return std::abs(z - w) / std::abs(1.0 - std::conj(z) * w);
}

PseudoDisk::PseudoDisk(Complex a_, double eta_) : a(a_), eta(eta_) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError("PseudoDisk: centre must lie in the open disk");
  if (!(eta > 0.0 && eta < 1.0)) throw PreconditionError("PseudoDisk: eta must lie in (0, 1)");
}

Complex PseudoDisk::euclidean_center() const {
  const double e2 = eta * eta;
  return (1.0 - e2) * a / (1.0 - e2 * std::norm(a));
}

double PseudoDisk::euclidean_radius() const {
  const double e2 = eta * eta;
  return eta * (1.0 - std::norm(a)) / (1.0 - e2 * std::norm(a));
}

double pseudo_disk_area(const PseudoDisk& d) {
  const double r = d.euclidean_radius();
  return r * r;
}

CarlesonWindow::CarlesonWindow(Complex zeta_, double h_) : zeta(zeta_), h(h_) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12) {
    throw PreconditionError("CarlesonWindow: zeta must be unimodular");
  }
  if (!(h > 0.0 && h < 1.0)) throw PreconditionError("CarlesonWindow: h must lie in (0, 1)");
}

bool window_contains(const CarlesonWindow& w, Complex z) {
  if (z == Complex(0.0, 0.0)) return false;
  return contains_polar(w, std::abs(z), std::arg(z));
}

EmpiricalBoundaryMeasure::EmpiricalBoundaryMeasure(std::vector<double> angles,
                                                   std::vector<Complex> points,
                                                   std::string symbol_tag, std::uint64_t seed)
    : angles_(std::move(angles)), points_(std::move(points)), tag_(std::move(symbol_tag)),
      seed_(seed) {
  if (points_.empty()) throw PreconditionError("EmpiricalBoundaryMeasure: no atoms");
  if (angles_.size() != points_.size()) {
    throw PreconditionError("EmpiricalBoundaryMeasure: angle and atom counts differ");
  }
  if (points_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw PreconditionError("EmpiricalBoundaryMeasure: too many atoms");
  }
  const std::size_t n = points_.size();
  moduli_.resize(n);
  args_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = std::abs(points_[i]);
    if (m > 1.0) {
      // z / |z| can still round to modulus 1 + ulp; shrink until it does not,
      // so the stored atom and its cached modulus agree.
      Complex p = points_[i] / m;
      while (std::abs(p) > 1.0) p *= 1.0 - 0x1p-53;
      points_[i] = p;
      m = std::abs(p);
    }
    moduli_[i] = m;
    args_[i] = std::arg(points_[i]);
  }
  by_arg_.resize(n);
  std::iota(by_arg_.begin(), by_arg_.end(), 0u);
  std::sort(by_arg_.begin(), by_arg_.end(), [this](std::uint32_t x, std::uint32_t y) {
    return args_[x] < args_[y] || (args_[x] == args_[y] && x < y);
  });
  sorted_args_.resize(n);
  for (std::size_t i = 0; i < n; ++i) sorted_args_[i] = args_[by_arg_[i]];
}

std::size_t EmpiricalBoundaryMeasure::count_in_window(const CarlesonWindow& w) const {
  // Candidates by angle, padded against rounding, then the exact predicate.
  const double centre = std::arg(w.zeta);
  const double half = std::numbers::pi * w.h + 1e-12;
  std::size_t count = 0;
  for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
    const double lo = std::max(centre - half + shift, -std::numbers::pi - 1.0);
    const double hi = std::min(centre + half + shift, std::numbers::pi + 1.0);
    if (lo > hi) continue;
    const auto first = std::lower_bound(sorted_args_.begin(), sorted_args_.end(), lo);
    const auto last = std::upper_bound(first, sorted_args_.end(), hi);
    for (auto it = first; it != last; ++it) {
      const std::uint32_t i = by_arg_[static_cast<std::size_t>(it - sorted_args_.begin())];
      if (contains_polar(w, moduli_[i], args_[i])) ++count;
    }
  }
  return count;
}

void EmpiricalBoundaryMeasure::write_columns(std::ostream& out) const {
  out << "# pullback measure of " << tag_ << "; seed " << seed_ << "; atoms " << size() << '\n';
  out << "# angle re im weight\n";
  out << std::setprecision(17);
  const double wgt = weight();
  for (std::size_t i = 0; i < size(); ++i) {
    out << angles_[i] << ' ' << points_[i].real() << ' ' << points_[i].imag() << ' ' << wgt
        << '\n';
  }
}

EmpiricalBoundaryMeasure pullback_measure(const SelfMap& phi, std::size_t n, SeededSampler& sampler,
                                          const std::string& tag) {
  if (n < 1) throw PreconditionError("pullback_measure: need at least one sample");
  const std::uint64_t base = sampler.next_u64();
  std::vector<double> angles(n);
  std::vector<Complex> points(n);
  const double step = kTwoPi / static_cast<double>(n);
  for (std::size_t start = 0; start < n; start += kStratumBlock) {
    SeededSampler block(mix_seed(base, start / kStratumBlock));
    const std::size_t end = std::min(n, start + kStratumBlock);
    for (std::size_t j = start; j < end; ++j) {
      angles[j] = step * (static_cast<double>(j) + block.uniform());
      points[j] = phi.boundary_pushforward_point(angles[j]);
    }
  }
  return EmpiricalBoundaryMeasure(std::move(angles), std::move(points),
                                  tag.empty() ? phi.describe() : tag, sampler.seed());
}

double measure_of_window(const EmpiricalBoundaryMeasure& mu, const CarlesonWindow& w) {
  return static_cast<double>(mu.count_in_window(w)) * mu.weight();
}

WindowMass window_mass(const EmpiricalBoundaryMeasure& mu, const CarlesonWindow& w) {
  WindowMass out;
  out.mass = measure_of_window(mu, w);
  out.std_error = std::sqrt(out.mass * (1.0 - out.mass) / static_cast<double>(mu.size()));
  return out;
}

DensityEstimate rn_density(const EmpiricalBoundaryMeasure& mu, int bins, double circle_tol) {
  if (bins < 8) throw PreconditionError("rn_density: need at least 8 bins");
  if (mu.size() < static_cast<std::size_t>(bins)) {
    throw PreconditionError("rn_density: fewer samples than bins");
  }
  DensityEstimate est;
  est.bins = bins;
  est.samples = mu.size();
  est.counts.assign(bins, 0);
  std::size_t on_circle = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu.moduli()[i] < 1.0 - circle_tol) continue;
    ++on_circle;
    double t = mu.args()[i];
    if (t < 0.0) t += kTwoPi;
    auto b = static_cast<int>(t / kTwoPi * bins);
    b = std::clamp(b, 0, bins - 1);
    ++est.counts[b];
  }
  const double n = static_cast<double>(mu.size());
  est.density.resize(bins);
  std::size_t min_count = est.counts[0];
  for (int b = 0; b < bins; ++b) {
    est.density[b] = static_cast<double>(est.counts[b]) * bins / n;
    min_count = std::min(min_count, est.counts[b]);
  }
  est.ess_inf = *std::min_element(est.density.begin(), est.density.end());
  est.max_density = *std::max_element(est.density.begin(), est.density.end());
  const double pmin = static_cast<double>(min_count) / n;
  est.ess_inf_std_error = bins * std::sqrt(pmin * (1.0 - pmin) / n);
  est.mass_on_circle = static_cast<double>(on_circle) / n;
  return est;
}

DensityEstimate rn_density(const SelfMap& phi, int bins, std::size_t n, SeededSampler& sampler,
                           double circle_tol) {
  if (bins < 8) throw PreconditionError("rn_density: need at least 8 bins");
  return rn_density(pullback_measure(phi, n, sampler), bins, circle_tol);
}

namespace {

template <class AreaTerm>
Pb2Report pb2_impl(const Symbol& phi, const TestObservable& g, const EmpiricalBoundaryMeasure& mu,
                   AreaTerm&& area_term) {
  Pb2Report r;
  r.samples = mu.size();
  CompensatedSum sum;
  CompensatedSum abs_sum;
  for (const Complex& w : mu.points()) {
    const double v = g(w);
    sum.add(v);
    abs_sum.add(std::abs(v));
  }
  const double n = static_cast<double>(mu.size());
  r.lhs = sum.value() / n;
  CompensatedSum sq;
  for (const Complex& w : mu.points()) {
    const double d = g(w) - r.lhs;
    sq.add(d * d);
  }
  r.sample_sigma = std::sqrt(sq.value() / n);
  r.value_at_origin = g(phi.at_origin());
  r.area_term = area_term();
  r.rhs = r.value_at_origin + r.area_term;
  r.gap = std::abs(r.lhs - r.rhs);
  r.scale = std::max({std::abs(r.lhs), std::abs(r.rhs), abs_sum.value() / n});
  r.relative_gap = r.scale > 0.0 ? r.gap / r.scale : r.gap;
  return r;
}

}  // namespace

Pb2Report verify_pb2(const Symbol& phi, const TestObservable& g, const EmpiricalBoundaryMeasure& mu,
                     const DiskQuadrature& q) {
  return pb2_impl(phi, g, mu, [&] {
    return 0.5 * integrate_disk(
                     [&](Complex w) {
                       const double lap = g.laplacian(w);
                       if (lap == 0.0) return 0.0;
                       return lap * counting(phi, w);
                     },
                     q);
  });
}

Pb2Report verify_pb2(const Symbol& phi, const TestObservable& g, const EmpiricalBoundaryMeasure& mu,
                     const DiskQuadrature& q, const std::vector<double>& counting_nodes) {
  if (counting_nodes.size() != q.size()) {
    throw PreconditionError("verify_pb2: counting values do not match the quadrature rule");
  }
  return pb2_impl(phi, g, mu, [&] {
    const auto nodes = q.nodes();
    const auto weights = q.weights();
    CompensatedSum acc;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (counting_nodes[i] == 0.0) continue;
      const double v = g.laplacian(nodes[i]) * counting_nodes[i];
      if (!std::isfinite(v)) detail::throw_nonfinite("verify_pb2", i, nodes[i], v);
      acc.add(weights[i] * v);
    }
    return 0.5 * acc.value();
  });
}

Pb1Report verify_pb1(const Symbol& phi, const CarlesonWindow& w, double c,
                     const EmpiricalBoundaryMeasure& mu, const ProbeGrid& grid) {
  if (!(c > 0.0 && c < 0.125)) throw PreconditionError("verify_pb1: c must lie in (0, 1/8)");
  const double bound = (1.0 - std::abs(phi.at_origin())) / 8.0;
  if (!(w.h < bound)) {
    std::ostringstream msg;
    msg << std::setprecision(6) << "verify_pb1: h = " << w.h << " violates h < (1 - |phi(0)|)/8 = "
        << bound;
    throw PreconditionError(msg.str());
  }
  if (grid.moduli < 1 || grid.angles < 2) throw PreconditionError("verify_pb1: probe grid too small");

  Pb1Report r;
  const double inner = 1.0 - w.h;
  const double outer = 1.0 - 1e-6;
  const double centre = std::arg(w.zeta);
  r.argmax = std::polar(outer, centre);
  for (int i = 0; i < grid.moduli; ++i) {
    const double rho = inner + (outer - inner) * (i + 1) / grid.moduli;
    for (int j = 0; j < grid.angles; ++j) {
      const double theta =
          centre + std::numbers::pi * w.h * (2.0 * j / (grid.angles - 1) - 1.0);
      const Complex z = std::polar(rho, theta);
      const double n = counting(phi, z);
      if (n > r.lhs) {
        r.lhs = n;
        r.argmax = z;
      }
    }
  }
  r.window_mass = measure_of_window(mu, w.scaled(1.0 + c));
  r.rhs = 100.0 / (c * c) * r.window_mass;
  r.margin = r.rhs - r.lhs;
  r.holds = r.margin >= 0.0;
  return r;
}

}  // namespace crange
