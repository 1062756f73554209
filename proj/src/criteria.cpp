#include "crange/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace crange {

namespace {

// Sub-stream identifiers under the configured seed.
constexpr std::uint64_t kMeasureStream = 1;
constexpr std::uint64_t kGcStream = 2;

std::string describe_point(const char* name, Complex z) {
  std::ostringstream s;
  s << std::setprecision(6) << name << " = (" << z.real() << ", " << z.imag() << ")";
  return s.str();
}

// ||k_lambda||^p depends only on |lambda| and p; shared across symbols and calls.
double cached_kernel_norm_power(double modulus, double p) {
  static std::mutex mutex;
  static std::map<std::pair<double, double>, double> cache;
  const auto key = std::make_pair(modulus, p);
  {
    std::lock_guard lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double value = kernel_norm_power(modulus, p);
  std::lock_guard lock(mutex);
  cache.emplace(key, value);
  return value;
}

double radius_at_depth(int k) { return 1.0 - std::ldexp(1.0, -k); }

// Block sums merged with compensation; the order is fixed, so the result is too.
template <class F>
double mean_over_atoms(const std::vector<Complex>& atoms, F&& f) {
  constexpr std::size_t kBlock = 4096;
  CompensatedSum total;
  for (std::size_t start = 0; start < atoms.size(); start += kBlock) {
    const std::size_t end = std::min(atoms.size(), start + kBlock);
    double block = 0.0;
    for (std::size_t i = start; i < end; ++i) block += f(atoms[i]);
    total.add(block);
  }
  return total.value() / static_cast<double>(atoms.size());
}

// tau with the measure-zero exclusions (z = 0, z = phi(0)) mapped to +inf.
double tau_or_inf(const Symbol& phi, Complex z) {
  try {
    return tau(phi, z);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();
  }
}

double counting_or_zero(const Symbol& phi, Complex w) {
  try {
    return counting(phi, w);
  } catch (const DomainError&) {
    return 0.0;
  }
}

}  // namespace

std::string to_string(VerdictState s) {
  switch (s) {
    case VerdictState::kClosed:
      return "Closed";
    case VerdictState::kNotClosed:
      return "NotClosed";
    case VerdictState::kInconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict classify(double estimate, double threshold, std::string note) {
  Verdict v;
  v.estimate = estimate;
  v.threshold = threshold;
  v.note = std::move(note);
  if (estimate >= threshold) {
    v.state = VerdictState::kClosed;
  } else if (estimate <= threshold / 10.0) {
    v.state = VerdictState::kNotClosed;
  } else {
    v.state = VerdictState::kInconclusive;
  }
  return v;
}

int CriteriaConfig::kernel_depth_for(double p) const {
  if (kernel_depth > 0) return kernel_depth;
  // For p <= 1 the kernel integrals of non-closed symbols decay only like
  // (1 - |lambda|)^p, so small p needs a deeper grid.
  if (p < 1.0) return std::max(12, static_cast<int>(std::ceil(10.0 / p)));
  return 12;
}

bool consistency(const std::vector<Verdict>& verdicts) {
  std::optional<VerdictState> seen;
  for (const Verdict& v : verdicts) {
    if (v.state == VerdictState::kInconclusive) continue;
    if (seen && *seen != v.state) return false;
    seen = v.state;
  }
  return true;
}

Verdict condition_i_kernel_test(const EmpiricalBoundaryMeasure& mu, HardyExponent p,
                                const CriteriaConfig& config, std::vector<KernelPoint>* curve) {
  const int depth = config.kernel_depth_for(p);
  if (config.kernel_rays < 1) throw PreconditionError("kernel test: need at least one ray");
  double best = std::numeric_limits<double>::infinity();
  Complex argmin;
  for (int k = 0; k <= depth; ++k) {
    const double r = radius_at_depth(k);
    const double np = p.value() > 1.0 ? cached_kernel_norm_power(r, p) : 1.0;
    const int rays = k == 0 ? 1 : config.kernel_rays;
    for (int j = 0; j < rays; ++j) {
      const Complex lambda = std::polar(r, kTwoPi * j / config.kernel_rays);
      const KernelPowerField field(KernelSpec{lambda, p}, np);
      const double integral = mean_over_atoms(mu.points(), field);
      if (curve != nullptr) curve->push_back({k, j, lambda, integral});
      if (integral < best) {
        best = integral;
        argmin = lambda;
      }
    }
  }
  return classify(best, config.eps_i,
                  "min over lambda of int |K_lambda|^p dm_phi at " + describe_point("lambda", argmin) +
                      ", depth " + std::to_string(depth));
}

Verdict condition_ii_density_test(const DensityEstimate& density, const CriteriaConfig& config) {
  std::ostringstream note;
  note << std::setprecision(6) << "ess inf of d nu/dm over " << density.bins
       << " bins (+/- " << density.ess_inf_std_error << "), mass on circle "
       << density.mass_on_circle;
  return classify(density.ess_inf, config.eps_ii, note.str());
}

Verdict condition_ii_density_test(const EmpiricalBoundaryMeasure& mu, const CriteriaConfig& config,
                                  DensityEstimate* density) {
  const DensityEstimate d = rn_density(mu, config.density_bins, config.circle_tol);
  if (density != nullptr) *density = d;
  return condition_ii_density_test(d, config);
}

Verdict condition_iii_gc_test(const Symbol& phi, const CriteriaConfig& config,
                              std::vector<GcCurve>* curves) {
  if (config.c_grid.empty() || config.eta_values.empty()) {
    throw PreconditionError("G_c test: c grid and eta values must be nonempty");
  }
  if (config.gc_samples < 1 || config.gc_angles < 1 || config.gc_depth < 0) {
    throw PreconditionError("G_c test: empty a-grid or sample count");
  }
  const SeededSampler root(mix_seed(config.seed, kGcStream));
  double best = -1.0;
  std::string best_note;
  std::uint64_t stream = 0;
  for (double eta : config.eta_values) {
    std::vector<GcCurve> local(config.c_grid.size());
    for (std::size_t ci = 0; ci < local.size(); ++ci) {
      local[ci].c = config.c_grid[ci];
      local[ci].eta = eta;
      local[ci].min_fraction_by_depth.assign(config.gc_depth + 1, 1.0);
      local[ci].min_fraction = 1.0;
    }
    std::vector<double> taus(config.gc_samples);
    for (int k = 0; k <= config.gc_depth; ++k) {
      const int angles = k == 0 ? 1 : config.gc_angles;
      for (int j = 0; j < angles; ++j) {
        const PseudoDisk disk(std::polar(radius_at_depth(k), kTwoPi * j / config.gc_angles), eta);
        SeededSampler sampler = root.fork(stream++);
        const std::vector<Complex> pts = sample_region(disk, config.gc_samples, sampler);
        for (std::size_t i = 0; i < pts.size(); ++i) taus[i] = tau_or_inf(phi, pts[i]);
        for (GcCurve& curve : local) {
          const auto hits = std::count_if(taus.begin(), taus.end(),
                                          [&](double t) { return t > curve.c; });
          const double fraction = static_cast<double>(hits) / static_cast<double>(pts.size());
          curve.min_fraction_by_depth[k] = std::min(curve.min_fraction_by_depth[k], fraction);
          curve.min_fraction = std::min(curve.min_fraction, fraction);
        }
      }
    }
    for (const GcCurve& curve : local) {
      if (curve.min_fraction > best) {
        best = curve.min_fraction;
        std::ostringstream note;
        note << std::setprecision(6) << "best c = " << curve.c << ", eta = " << curve.eta
             << "; min over a of A(G_c cap D)/A(D)";
        best_note = note.str();
      }
    }
    if (curves != nullptr) curves->insert(curves->end(), local.begin(), local.end());
  }
  return classify(best, config.delta, best_note);
}

Verdict condition_window_test(const EmpiricalBoundaryMeasure& mu, const CriteriaConfig& config,
                              std::vector<WindowPoint>* curve) {
  if (config.window_depth < 1 || config.window_angles < 1) {
    throw PreconditionError("window test: empty window grid");
  }
  double best = std::numeric_limits<double>::infinity();
  Complex argmin;
  double argmin_h = 0.0;
  for (int k = 1; k <= config.window_depth; ++k) {
    const double h = std::ldexp(1.0, -k);
    for (int j = 0; j < config.window_angles; ++j) {
      const CarlesonWindow w(std::polar(1.0, kTwoPi * j / config.window_angles), h);
      const WindowMass m = window_mass(mu, w);
      const double ratio = m.mass / h;
      if (curve != nullptr) curve->push_back({k, j, h, m.mass, m.std_error, ratio});
      if (ratio < best) {
        best = ratio;
        argmin = w.zeta;
        argmin_h = h;
      }
    }
  }
  std::ostringstream note;
  note << std::setprecision(6) << "min of m_phi(W)/h at " << describe_point("zeta", argmin)
       << ", h = " << argmin_h;
  return classify(best, config.eps_window, note.str());
}

LueckingPoint luecking_point(const Symbol& phi, double c, Complex a, const DiskQuadrature& q) {
  if (!(std::abs(a) < 1.0)) throw PreconditionError("luecking probe: a must lie in the open disk");
  const Complex ac = std::conj(a);
  const double one_minus = 1.0 - std::norm(a);
  LueckingPoint pt;
  pt.a = a;
  pt.i_full = integrate_disk([](Complex u) { return 1.0 - std::norm(u); }, q);
  CompensatedSum gc;
  CompensatedSum tau_part;
  const auto nodes = q.nodes();
  const auto weights = q.weights();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Complex u = nodes[i];
    const Complex z = (a + u) / (1.0 + ac * u);
    if (!(std::abs(z) < 1.0)) continue;  // rounding at the rim; weight there vanishes
    const double n = counting_or_zero(phi, z);
    const double t = n == 0.0 ? 0.0 : n / log_inv_modulus(z);
    if (t > c) gc.add(weights[i] * (1.0 - std::norm(u)));
    tau_part.add(weights[i] * std::norm(1.0 + ac * u) / one_minus * n);
  }
  pt.i_gc = gc.value();
  pt.i_tau = tau_part.value();
  return pt;
}

LueckingReport luecking_probe(const Symbol& phi, double c, const std::vector<Complex>& a_grid,
                              const DiskQuadrature& q) {
  if (a_grid.empty()) throw PreconditionError("luecking probe: empty a-grid");
  LueckingReport r;
  r.c = c;
  r.min_gc_ratio = std::numeric_limits<double>::infinity();
  r.min_tau_ratio = std::numeric_limits<double>::infinity();
  for (const Complex& a : a_grid) {
    const LueckingPoint pt = luecking_point(phi, c, a, q);
    r.min_gc_ratio = std::min(r.min_gc_ratio, pt.i_gc / pt.i_full);
    r.min_tau_ratio = std::min(r.min_tau_ratio, pt.i_tau / pt.i_full);
    r.points.push_back(pt);
  }
  return r;
}

NormRatioReport direct_norm_ratio_probe(const Symbol& phi, HardyExponent p,
                                        const std::vector<TestFunction>& family,
                                        const CircleQuadrature& q) {
  if (family.empty()) throw PreconditionError("norm ratio probe: empty family");
  NormRatioReport r;
  r.min_ratio = std::numeric_limits<double>::infinity();
  for (const TestFunction& f : family) {
    const double nf = norm_boundary(f, p, q);
    if (!(nf > 0.0)) throw PreconditionError("norm ratio probe: ||f|| = 0 for " + f.tag);
    const double ng = norm_boundary(test_functions::compose(f, phi), p, q);
    const double ratio = ng / nf;
    r.family.push_back({f.tag, ratio});
    if (ratio < r.min_ratio) {
      r.min_ratio = ratio;
      r.argmin = f.tag;
    }
  }
  return r;
}

std::vector<TestFunction> default_ratio_family(HardyExponent p, const CriteriaConfig& config) {
  std::vector<TestFunction> family;
  for (int k = 1; k <= config.ratio_kernel_depth; ++k) {
    const double r = radius_at_depth(k);
    const double np = p.value() > 1.0 ? cached_kernel_norm_power(r, p) : 1.0;
    for (int j = 0; j < config.ratio_kernel_rays; ++j) {
      family.push_back(kernel(KernelSpec{std::polar(r, kTwoPi * j / config.ratio_kernel_rays), p}, np));
    }
  }
  const double arc = kTwoPi / config.ratio_outer_arcs;
  for (int i = 0; i < config.ratio_outer_arcs; ++i) {
    family.push_back(two_valued_outer(i * arc, arc, 1.0, 1.0 / 16.0));
  }
  return family;
}

namespace {

std::vector<Complex> luecking_grid(const CriteriaConfig& config) {
  std::vector<Complex> grid;
  for (int k = 0; k <= config.luecking_depth; ++k) {
    const int angles = k == 0 ? 1 : config.luecking_angles;
    for (int j = 0; j < angles; ++j) {
      grid.push_back(std::polar(radius_at_depth(k), kTwoPi * j / config.luecking_angles));
    }
  }
  return grid;
}

template <class F>
void guarded(std::vector<std::string>& errors, const char* what, Verdict* verdict, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    errors.push_back(std::string(what) + ": " + e.what());
    if (verdict != nullptr) {
      *verdict = Verdict{};
      verdict->note = std::string("error: ") + e.what();
    }
  }
}

}  // namespace

std::vector<ClosedRangeReport> analyze_exponents(const Symbol& phi, const std::vector<double>& ps,
                                                 const CriteriaConfig& config) {
  std::vector<HardyExponent> exponents(ps.begin(), ps.end());

  ClosedRangeReport shared;
  shared.symbol = phi.label();
  shared.symbol_record = phi.describe();

  std::optional<EmpiricalBoundaryMeasure> mu;
  guarded(shared.errors, "pullback measure", nullptr, [&] {
    SeededSampler sampler(mix_seed(config.seed, kMeasureStream));
    mu.emplace(pullback_measure(phi, config.measure_samples, sampler, phi.label()));
  });
  const auto no_measure = [&](Verdict& v) {
    v = Verdict{};
    v.note = "error: pullback measure unavailable";
  };

  if (mu) {
    guarded(shared.errors, "condition (ii)", &shared.verdict_ii, [&] {
      shared.verdict_ii = condition_ii_density_test(*mu, config, &shared.density);
    });
    guarded(shared.errors, "window condition", &shared.verdict_window, [&] {
      shared.verdict_window = condition_window_test(*mu, config, &shared.window_curve);
    });
  } else {
    no_measure(shared.verdict_ii);
    no_measure(shared.verdict_window);
  }
  guarded(shared.errors, "condition (iii)", &shared.verdict_iii, [&] {
    shared.verdict_iii = condition_iii_gc_test(phi, config, &shared.gc_curves);
  });
  if (config.probes) {
    guarded(shared.errors, "luecking probe", nullptr, [&] {
      shared.luecking = luecking_probe(phi, config.luecking_c, luecking_grid(config),
                                       DiskQuadrature(config.luecking_radial, config.luecking_angular));
    });
  }

  std::vector<ClosedRangeReport> reports;
  for (const HardyExponent& p : exponents) {
    ClosedRangeReport r = shared;
    r.p = p.value();
    if (mu) {
      guarded(r.errors, "condition (i)", &r.verdict_i, [&] {
        r.verdict_i = condition_i_kernel_test(*mu, p, config, &r.kernel_curve);
      });
    } else {
      no_measure(r.verdict_i);
    }
    if (config.probes) {
      guarded(r.errors, "norm ratio probe", nullptr, [&] {
        r.norm_ratio = direct_norm_ratio_probe(phi, p, default_ratio_family(p, config),
                                               CircleQuadrature(config.ratio_circle_nodes));
      });
    }
    const std::vector<Verdict> votes{r.verdict_i, r.verdict_ii, r.verdict_iii, r.verdict_window};
    r.consistent = consistency(votes);
    r.overall = VerdictState::kInconclusive;
    if (r.consistent) {
      for (const Verdict& v : votes) {
        if (v.state != VerdictState::kInconclusive) r.overall = v.state;
      }
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

ClosedRangeReport analyze(const Symbol& phi, HardyExponent p, const CriteriaConfig& config) {
  return analyze_exponents(phi, {p.value()}, config).front();
}

}  // namespace crange
