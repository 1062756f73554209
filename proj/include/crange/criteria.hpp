#pragma once

// The three equivalent closed-range conditions, the window condition, and two
// supporting probes, combined into one report per (symbol, p).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crange/geometry.hpp"
#include "crange/hardy.hpp"
#include "crange/nevanlinna.hpp"
#include "crange/symbols.hpp"

namespace crange {

enum class VerdictState { kClosed, kNotClosed, kInconclusive };

std::string to_string(VerdictState s);

struct Verdict {
  VerdictState state = VerdictState::kInconclusive;
  double estimate = 0.0;
  double threshold = 0.0;
  std::string note;
};

/// Closed when estimate >= threshold, NotClosed when estimate <= threshold / 10,
/// Inconclusive in between.
Verdict classify(double estimate, double threshold, std::string note = {});

struct CriteriaConfig {
  std::uint64_t seed = 20240611;
  /// Atoms in the pullback measure shared by the kernel, density and window tests.
  std::size_t measure_samples = 1'000'000;

  // Condition (i): kernel integrals against m_phi.
  /// Deepest k in |lambda| = 1 - 2^{-k}; 0 selects max(12, ceil(10 / p)).
  int kernel_depth = 0;
  int kernel_rays = 16;
  double eps_i = 0.05;

  // Condition (ii): boundary density.
  int density_bins = 64;
  double circle_tol = 1e-9;
  double eps_ii = 0.05;

  // Condition (iii): G_c density in pseudo-hyperbolic disks.
  std::vector<double> c_grid = {1.0 / 128, 1.0 / 64, 1.0 / 32, 1.0 / 16,
                                1.0 / 8,   1.0 / 4,  1.0 / 2,  1.0};
  std::vector<double> eta_values = {0.5};
  int gc_depth = 10;
  int gc_angles = 16;
  std::size_t gc_samples = 2048;
  double delta = 0.1;

  // Window condition.
  int window_depth = 10;
  int window_angles = 16;
  double eps_window = 0.05;

  // Probes; they report curves and never vote.
  bool probes = true;
  double luecking_c = 0.125;
  int luecking_depth = 6;
  int luecking_angles = 8;
  int luecking_radial = 32;
  int luecking_angular = 128;
  int ratio_kernel_depth = 6;
  int ratio_kernel_rays = 8;
  int ratio_outer_arcs = 8;
  int ratio_circle_nodes = 4096;

  /// Resolved kernel depth for an exponent.
  int kernel_depth_for(double p) const;
};

struct KernelPoint {
  int depth = 0;
  int ray = 0;
  Complex lambda;
  double integral = 0.0;
};

struct GcCurve {
  double c = 0.0;
  double eta = 0.0;
  /// min over angles of the G_c fraction at each depth k = 0..gc_depth.
  std::vector<double> min_fraction_by_depth;
  double min_fraction = 0.0;
};

struct WindowPoint {
  int depth = 0;
  int angle = 0;
  double h = 0.0;
  double mass = 0.0;
  double std_error = 0.0;
  double ratio = 0.0;
};

struct LueckingPoint {
  Complex a;
  double i_full = 0.0;
  double i_gc = 0.0;
  double i_tau = 0.0;
};

struct LueckingReport {
  double c = 0.0;
  std::vector<LueckingPoint> points;
  double min_gc_ratio = 0.0;   ///< min over a of I_Gc / I_full
  double min_tau_ratio = 0.0;  ///< min over a of I_tau / I_full
};

struct NormRatioPoint {
  std::string tag;
  double ratio = 0.0;
};

struct NormRatioReport {
  std::vector<NormRatioPoint> family;
  double min_ratio = 0.0;
  std::string argmin;
};

struct ClosedRangeReport {
  std::string symbol;
  std::string symbol_record;
  double p = 2.0;

  Verdict verdict_i;
  Verdict verdict_ii;
  Verdict verdict_iii;
  Verdict verdict_window;
  bool consistent = false;
  VerdictState overall = VerdictState::kInconclusive;

  std::vector<KernelPoint> kernel_curve;
  DensityEstimate density;
  std::vector<GcCurve> gc_curves;
  std::vector<WindowPoint> window_curve;
  std::optional<LueckingReport> luecking;
  std::optional<NormRatioReport> norm_ratio;

  std::vector<std::string> errors;
};

/// True iff all non-Inconclusive verdicts agree.
bool consistency(const std::vector<Verdict>& verdicts);

/// Kernel grid lambda = (1 - 2^{-k}) e^{2 pi i j / J}, k = 0..depth.
Verdict condition_i_kernel_test(const EmpiricalBoundaryMeasure& mu, HardyExponent p,
                                const CriteriaConfig& config,
                                std::vector<KernelPoint>* curve = nullptr);

Verdict condition_ii_density_test(const DensityEstimate& density, const CriteriaConfig& config);
Verdict condition_ii_density_test(const EmpiricalBoundaryMeasure& mu, const CriteriaConfig& config,
                                  DensityEstimate* density = nullptr);

/// max over c (and eta) of min over the a-grid of A(G_c cap D_eta(a)) / A(D_eta(a)).
Verdict condition_iii_gc_test(const Symbol& phi, const CriteriaConfig& config,
                              std::vector<GcCurve>* curves = nullptr);

/// min over zeta (window_angles) and h = 2^{-k}, k = 1..window_depth, of mu(W) / h.
Verdict condition_window_test(const EmpiricalBoundaryMeasure& mu, const CriteriaConfig& config,
                              std::vector<WindowPoint>* curve = nullptr);

/// I_full, I_Gc and I_tau for g' with |g'|^2 = (1-|a|^2)^3 / |1 - conj(a) z|^6,
/// computed after the substitution z = (a + u) / (1 + conj(a) u).
LueckingPoint luecking_point(const Symbol& phi, double c, Complex a, const DiskQuadrature& q);
LueckingReport luecking_probe(const Symbol& phi, double c, const std::vector<Complex>& a_grid,
                              const DiskQuadrature& q);

/// min over the family of ||f o phi||^p / ||f||^p, an upper bound for the
/// closed-range constant. Throws PreconditionError on ||f|| = 0.
NormRatioReport direct_norm_ratio_probe(const Symbol& phi, HardyExponent p,
                                        const std::vector<TestFunction>& family,
                                        const CircleQuadrature& q);

/// Normalized kernels along a few rays and two-valued outer functions.
std::vector<TestFunction> default_ratio_family(HardyExponent p, const CriteriaConfig& config);

ClosedRangeReport analyze(const Symbol& phi, HardyExponent p, const CriteriaConfig& config = {});

/// One report per exponent; the p-independent work is shared.
std::vector<ClosedRangeReport> analyze_exponents(const Symbol& phi, const std::vector<double>& ps,
                                                 const CriteriaConfig& config = {});

}  // namespace crange
