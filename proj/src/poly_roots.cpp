#include <algorithm>
#include <iomanip>
#include <limits>
#include <numeric>

#include "crange/numerics.hpp"

namespace crange {

PolyCoeffs::PolyCoeffs(std::vector<Complex> ascending) : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0, 0.0)) coeffs_.pop_back();
}

double PolyCoeffs::max_abs_coeff() const {
  double m = 0.0;
  for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Complex PolyCoeffs::operator()(Complex z) const {
  Complex acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex PolyCoeffs::derivative(Complex z) const {
  Complex acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * coeffs_[k];
  return acc;
}

double PolyCoeffs::magnitude_at(Complex z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

PolyCoeffs PolyCoeffs::from_roots(std::span<const Complex> roots, Complex leading) {
  std::vector<Complex> c{leading};
  for (const Complex& r : roots) {
    std::vector<Complex> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  return PolyCoeffs(std::move(c));
}

namespace {

// Residual scale: max_k |a_k| max(1,|z|)^k. Equals max|a_k| inside the closed disk.
double residual_scale(const PolyCoeffs& p, Complex z) {
  const double r = std::max(1.0, std::abs(z));
  double scale = 0.0;
  double rk = 1.0;
  for (const Complex& a : p.coeffs()) {
    scale = std::max(scale, std::abs(a) * rk);
    rk *= r;
  }
  return scale;
}

// Taylor coefficients of p at c: out[k] = p^{(k)}(c) / k!.
std::vector<Complex> taylor_shift(const PolyCoeffs& p, Complex c) {
  std::vector<Complex> b(p.coeffs().begin(), p.coeffs().end());
  const int n = static_cast<int>(b.size()) - 1;
  for (int k = 0; k <= n; ++k) {
    for (int j = n - 1; j >= k; --j) b[j] += c * b[j + 1];
  }
  return b;
}

// Same shift applied to |a_k| and |c|: bounds the rounding scale of each Taylor coefficient.
std::vector<double> taylor_scale(const PolyCoeffs& p, Complex c) {
  std::vector<double> b;
  b.reserve(p.coeffs().size());
  for (const Complex& a : p.coeffs()) b.push_back(std::abs(a));
  const double r = std::abs(c);
  const int n = static_cast<int>(b.size()) - 1;
  for (int k = 0; k <= n; ++k) {
    for (int j = n - 1; j >= k; --j) b[j] += r * b[j + 1];
  }
  return b;
}

void polish_newton(const PolyCoeffs& p, Complex& z) {
  double best = std::abs(p(z));
  for (int it = 0; it < 8 && best > 0.0; ++it) {
    const Complex d = p.derivative(z);
    if (d == Complex(0.0, 0.0)) return;
    const Complex candidate = z - p(z) / d;
    const double res = std::abs(p(candidate));
    if (!(res < best)) return;
    z = candidate;
    best = res;
  }
}

std::vector<Complex> aberth(const PolyCoeffs& p, int max_iterations, bool& converged) {
  const int n = p.degree();
  const auto a = p.coeffs();
  const Complex lead = a[n];

  // Initial circle: geometric mean of root moduli when defined, else a Cauchy-type bound.
  double radius = 0.0;
  if (std::abs(a[0]) > 0.0) {
    radius = std::pow(std::abs(a[0]) / std::abs(lead), 1.0 / n);
  } else {
    for (int k = 0; k < n; ++k) radius = std::max(radius, std::abs(a[k] / lead));
    radius = 0.5 * (1.0 + radius);
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;

  std::vector<Complex> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, kTwoPi * k / n + 0.4);

  std::vector<bool> done(n, false);
  converged = false;
  for (int it = 0; it < max_iterations; ++it) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const Complex pz = p(z[i]);
      if (std::abs(pz) <= 1e-16 * p.magnitude_at(z[i])) {
        done[i] = true;
        continue;
      }
      const Complex dz = p.derivative(z[i]);
      Complex sum = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      Complex step;
      if (dz == Complex(0.0, 0.0)) {
        step = -1e-3 * std::max(1.0, std::abs(z[i])) * Complex(0.6, 0.8);
      } else {
        const Complex ratio = pz / dz;
        step = ratio / (1.0 - ratio * sum);
      }
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) {
        step = 1e-3 * std::max(1.0, std::abs(z[i])) * Complex(0.6, 0.8);
      }
      z[i] -= step;
      if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z[i])) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) {
      converged = true;
      break;
    }
  }
  return z;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// True when c is a root of multiplicity >= m to working precision.
bool certify_multiple_root(const PolyCoeffs& p, Complex c, int m) {
  const auto t = taylor_shift(p, c);
  const auto s = taylor_scale(p, c);
  for (int k = 0; k < m; ++k) {
    if (std::abs(t[k]) > 1e-9 * std::max(s[k], 1e-300)) return false;
  }
  return true;
}

// Newton on p^{(m-1)}, which has a simple root at an m-fold root of p.
Complex polish_multiple(const PolyCoeffs& p, Complex c, int m) {
  for (int it = 0; it < 8; ++it) {
    const auto t = taylor_shift(p, c);
    const Complex f = t[m - 1];
    const Complex df = t[m] * static_cast<double>(m);
    if (df == Complex(0.0, 0.0)) break;
    const Complex step = f / df;
    c -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(c))) break;
  }
  return c;
}

}  // namespace

std::vector<PolyRoot> poly_roots(const PolyCoeffs& p, const RootOptions& options) {
  const int n = p.degree();
  if (n < 1) throw PreconditionError("poly_roots: degree must be at least 1");

  std::vector<Complex> z;
  if (n == 1) {
    z = {-p[0] / p[1]};
  } else {
    bool converged = false;
    z = aberth(p, options.max_iterations, converged);
    for (Complex& r : z) polish_newton(p, r);
  }

  // Tight clusters always merge; looser clusters merge only when the centroid is
  // certified as a multiple root (Aberth resolves an m-fold root to ~eps^{1/m}).
  DisjointSets sets(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = std::abs(z[i] - z[j]);
      const double scale = std::max(1.0, std::max(std::abs(z[i]), std::abs(z[j])));
      if (d <= options.cluster_tol * scale) sets.unite(i, j);
    }
  }
  const double loose = std::sqrt(options.cluster_tol);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (sets.find(i) == sets.find(j)) continue;
      const double d = std::abs(z[i] - z[j]);
      const double scale = std::max(1.0, std::max(std::abs(z[i]), std::abs(z[j])));
      if (d > loose * scale) continue;
      std::vector<int> members;
      for (int k = 0; k < n; ++k) {
        if (sets.find(k) == sets.find(i) || sets.find(k) == sets.find(j)) members.push_back(k);
      }
      Complex c = 0.0;
      for (int k : members) c += z[k];
      c /= static_cast<double>(members.size());
      if (certify_multiple_root(p, c, static_cast<int>(members.size()))) sets.unite(i, j);
    }
  }

  std::vector<PolyRoot> roots;
  std::vector<int> seen;
  for (int i = 0; i < n; ++i) {
    const int rep = sets.find(i);
    if (std::find(seen.begin(), seen.end(), rep) != seen.end()) continue;
    seen.push_back(rep);
    Complex c = 0.0;
    int m = 0;
    for (int k = 0; k < n; ++k) {
      if (sets.find(k) == rep) {
        c += z[k];
        ++m;
      }
    }
    c /= static_cast<double>(m);
    if (m > 1) {
      c = polish_multiple(p, c, m);
    } else {
      c = z[i];
    }
    roots.push_back({c, m});
  }

  // Residual contract.
  std::ostringstream bad;
  bool failed = false;
  for (const PolyRoot& r : roots) {
    const double res = std::abs(p(r.z));
    if (!(res <= options.residual_tol * residual_scale(p, r.z))) {
      failed = true;
      bad << std::setprecision(6) << " z=(" << r.z.real() << "," << r.z.imag()
          << ") |p(z)|=" << res;
    }
  }
  if (failed) {
    throw ConvergenceError("poly_roots: residual bound not met for degree " + std::to_string(n) +
                           ":" + bad.str());
  }
  return roots;
}

}  // namespace crange
