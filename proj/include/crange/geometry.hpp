#pragma once

// Pseudo-hyperbolic geometry, Carleson windows, empirical pullback measures and
// the verifiers built on them.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "crange/numerics.hpp"
#include "crange/observable.hpp"
#include "crange/symbols.hpp"

namespace crange {

/// rho(z, w) = |z - w| / |1 - conj(z) w|
double pseudo_distance(Complex z, Complex w);

/// D_eta(a) = { z : rho(a, z) < eta }, a Euclidean disk.
struct PseudoDisk {
  Complex a;
  double eta;

  PseudoDisk(Complex a, double eta);
  Complex euclidean_center() const;
  double euclidean_radius() const;
  bool contains(Complex z) const { return pseudo_distance(a, z) < eta; }
};

/// Normalized area of D_eta(a): the squared Euclidean radius.
double pseudo_disk_area(const PseudoDisk& d);

/// W(zeta, h) = { 1 - h < |z| <= 1, |arg(z conj(zeta))| <= pi h }
struct CarlesonWindow {
  Complex zeta;
  double h;

  CarlesonWindow(Complex zeta, double h);
  /// Same centre, height scaled by `factor`.
  CarlesonWindow scaled(double factor) const { return CarlesonWindow(zeta, h * factor); }
};

bool window_contains(const CarlesonWindow& w, Complex z);

/// Equal-weight atoms phi(e^{i theta_j}) approximating m_phi. Atoms that land
/// outside the closed disk through rounding are projected onto the circle.
class EmpiricalBoundaryMeasure {
 public:
  EmpiricalBoundaryMeasure(std::vector<double> angles, std::vector<Complex> points,
                           std::string symbol_tag, std::uint64_t seed);

  std::size_t size() const { return points_.size(); }
  double weight() const { return 1.0 / static_cast<double>(points_.size()); }
  double total_mass() const { return weight() * static_cast<double>(points_.size()); }
  const std::string& symbol_tag() const { return tag_; }
  std::uint64_t seed() const { return seed_; }

  const std::vector<double>& angles() const { return angles_; }
  const std::vector<Complex>& points() const { return points_; }
  const std::vector<double>& moduli() const { return moduli_; }
  const std::vector<double>& args() const { return args_; }

  /// Number of atoms inside the window.
  std::size_t count_in_window(const CarlesonWindow& w) const;

  /// Columns "angle re im weight", one atom per line, with a '#' header.
  void write_columns(std::ostream& out) const;

 private:
  std::vector<double> angles_;
  std::vector<Complex> points_;
  std::vector<double> moduli_;
  std::vector<double> args_;
  std::vector<std::uint32_t> by_arg_;  // atom indices sorted by arg
  std::vector<double> sorted_args_;
  std::string tag_;
  std::uint64_t seed_;
};

/// Pushforward of m under the boundary map, over stratified angles
/// theta_j = 2 pi (j + u_j) / n. Draws one word from the sampler; the strata use
/// derived sub-streams, so the result depends only on that word and n.
EmpiricalBoundaryMeasure pullback_measure(const SelfMap& phi, std::size_t n, SeededSampler& sampler,
                                          const std::string& tag = {});

double measure_of_window(const EmpiricalBoundaryMeasure& mu, const CarlesonWindow& w);

struct WindowMass {
  double mass = 0.0;
  double std_error = 0.0;  ///< binomial sqrt(m (1 - m) / n)
};
WindowMass window_mass(const EmpiricalBoundaryMeasure& mu, const CarlesonWindow& w);

struct DensityEstimate {
  int bins = 0;
  std::vector<double> density;  ///< d nu / dm per arc [2 pi b / B, 2 pi (b+1) / B)
  std::vector<std::size_t> counts;
  double ess_inf = 0.0;
  double ess_inf_std_error = 0.0;
  double max_density = 0.0;
  double mass_on_circle = 0.0;
  std::size_t samples = 0;
};

DensityEstimate rn_density(const EmpiricalBoundaryMeasure& mu, int bins = 64,
                           double circle_tol = 1e-9);
DensityEstimate rn_density(const SelfMap& phi, int bins, std::size_t n, SeededSampler& sampler,
                           double circle_tol = 1e-9);

struct Pb2Report {
  double lhs = 0.0;            ///< sum over atoms of g * weight
  double rhs = 0.0;            ///< g(phi(0)) + 1/2 iint Delta g N_phi dA
  double value_at_origin = 0.0;
  double area_term = 0.0;
  double gap = 0.0;
  double scale = 0.0;          ///< max(|lhs|, |rhs|, mean |g| over atoms)
  double relative_gap = 0.0;
  double sample_sigma = 0.0;   ///< standard deviation of g over the atoms
  std::size_t samples = 0;
};

Pb2Report verify_pb2(const Symbol& phi, const TestObservable& g, const EmpiricalBoundaryMeasure& mu,
                     const DiskQuadrature& q);

/// Same, with N_phi at the nodes of q supplied (see counting_at_nodes).
Pb2Report verify_pb2(const Symbol& phi, const TestObservable& g, const EmpiricalBoundaryMeasure& mu,
                     const DiskQuadrature& q, const std::vector<double>& counting_nodes);

struct ProbeGrid {
  int moduli = 32;
  int angles = 32;
};

struct Pb1Report {
  double lhs = 0.0;  ///< max of N_phi over the probe grid in W
  double rhs = 0.0;  ///< (100 / c^2) m_phi(W(zeta, (1 + c) h))
  double margin = 0.0;
  bool holds = false;
  Complex argmax;
  double window_mass = 0.0;
};

/// Requires 0 < c < 1/8 and h < (1 - |phi(0)|) / 8.
Pb1Report verify_pb1(const Symbol& phi, const CarlesonWindow& w, double c,
                     const EmpiricalBoundaryMeasure& mu, const ProbeGrid& grid = {});

}  // namespace crange
