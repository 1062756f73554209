#include <numbers>
#include <sstream>

#include "crange/geometry.hpp"
#include "crange/nevanlinna.hpp"
#include "test_support.hpp"

using namespace crange;
using crange::testing::interior_points;
using crange::testing::rel_err;

namespace {

const double kPi = std::numbers::pi;

EmpiricalBoundaryMeasure measure(const Symbol& phi, std::size_t n, std::uint64_t seed = 42) {
  SeededSampler s(seed);
  return pullback_measure(phi, n, s);
}

double sigma(double m, std::size_t n) { return std::sqrt(std::max(m * (1 - m), 1e-12) / n); }

}  // namespace

TEST_CASE("pseudo_distance examples") {
  CHECK(pseudo_distance(Complex(0.3, 0.1), Complex(0.3, 0.1)) == 0.0);
  CHECK(std::abs(pseudo_distance(0.0, Complex(0.3, -0.4)) - 0.5) < 1e-15);
  CHECK(std::abs(pseudo_distance(0.5, -0.5) - 0.8) < 1e-15);
}

TEST_CASE("pseudo-hyperbolic distance is Moebius invariant") {
  for (Complex a : {Complex(0.5), Complex(-0.2, 0.7), Complex(0.0, -0.95)}) {
    const Symbol psi = Symbol::moebius(a);
    const auto zs = interior_points(100, 0.99, 1);
    const auto ws = interior_points(100, 0.99, 2);
    for (std::size_t i = 0; i < zs.size(); ++i) {
      CHECK(std::abs(pseudo_distance(psi.eval(zs[i]), psi.eval(ws[i])) - pseudo_distance(zs[i], ws[i])) <
            1e-10);
    }
  }
}

TEST_CASE("pseudo_disk_area examples") {
  CHECK(std::abs(pseudo_disk_area(PseudoDisk(0.0, 0.3)) - 0.09) < 1e-15);

  const PseudoDisk d(0.5, 0.5);
  const PseudoDisk whole(0.0, 0.999999);
  SeededSampler s(5);
  const std::size_t n = 200000;
  const double frac = mc_region_fraction([&](Complex z) { return d.contains(z); }, whole, n, s);
  const double mc_area = frac * pseudo_disk_area(whole);
  CHECK(std::abs(mc_area - pseudo_disk_area(d)) < 3 * sigma(frac, n));

  const double eta = 1e-3;
  const PseudoDisk small(0.9, eta);
  const double want = std::pow((1 - 0.81) / (1 - eta * eta * 0.81), 2);
  CHECK(rel_err(pseudo_disk_area(small) / (eta * eta), want) < 1e-12);
  CHECK(std::abs(want - 0.19 * 0.19) < 1e-6);
}

TEST_CASE("pseudo disks validate their parameters") {
  CHECK_THROWS_AS(PseudoDisk(1.0, 0.5), PreconditionError);
  CHECK_THROWS_AS(PseudoDisk(0.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(CarlesonWindow(0.5, 0.1), PreconditionError);
  CHECK_THROWS_AS(CarlesonWindow(1.0, 1.0), PreconditionError);
}

TEST_CASE("window_contains examples") {
  const CarlesonWindow w(1.0, 0.1);
  CHECK(window_contains(w, 0.95));
  CHECK_FALSE(window_contains(w, 0.85));
  CHECK_FALSE(window_contains(w, std::polar(0.95, kPi * 0.15)));
  CHECK(window_contains(CarlesonWindow(-1.0, 0.1), std::polar(1.0, -kPi * 0.95)));
}

TEST_CASE("pullback measure of the identity is arc length") {
  const std::size_t n = 200000;
  const auto mu = measure(Symbol::identity(), n);
  CHECK(mu.size() == n);
  CHECK(std::abs(mu.total_mass() - 1.0) < 1e-12);
  for (Complex z : mu.points()) CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
  const double m = measure_of_window(mu, CarlesonWindow(1.0, 0.2));
  CHECK(std::abs(m - 0.2) < 3 * sigma(0.2, n));
}

TEST_CASE("pullback measure of (1+z)/2 lives on |w - 1/2| = 1/2") {
  const auto mu = measure(Symbol::affine(0.5, 0.5), 100000);
  for (Complex z : mu.points()) CHECK(std::abs(std::abs(z - 0.5) - 0.5) < 1e-12);
  CHECK(rn_density(mu).mass_on_circle < 1e-4);
}

TEST_CASE("pullback measure of z^2 preserves arc mass") {
  const std::size_t n = 200000;
  const auto mu = measure(Symbol::polynomial({0.0, 0.0, 1.0}), n);
  for (double h : {0.05, 0.2}) {
    for (double t : {0.0, 1.0, 3.0}) {
      CHECK(std::abs(measure_of_window(mu, CarlesonWindow(std::polar(1.0, t), h)) - h) <
            3 * sigma(h, n) + 1e-5);
    }
  }
}

TEST_CASE("measure_of_window examples") {
  const auto mu = measure(Symbol::affine(0.5), 50000);
  for (double h : {0.1, 0.3, 0.49}) CHECK(measure_of_window(mu, CarlesonWindow(Complex(0, 1), h)) == 0.0);

  const auto nu = measure(Symbol::moebius(0.5), 50000);
  double prev = 0.0;
  for (double h : {0.01, 0.02, 0.05, 0.1, 0.3, 0.6}) {
    const double m = measure_of_window(nu, CarlesonWindow(Complex(0.6, 0.8), h));
    CHECK(m >= prev);
    prev = m;
  }
  const auto wm = window_mass(nu, CarlesonWindow(1.0, 0.1));
  CHECK(wm.std_error == doctest::Approx(std::sqrt(wm.mass * (1 - wm.mass) / 50000)));
}

TEST_CASE("window counts agree with the predicate") {
  const auto mu = measure(Symbol::compose(Symbol::moebius(0.5), Symbol::polynomial({0.0, 0.0, 1.0})), 20000);
  for (int j = 0; j < 16; ++j) {
    const CarlesonWindow w(std::polar(1.0, kTwoPi * j / 16 + 0.01), 0.03 * (1 + j % 5));
    std::size_t brute = 0;
    for (Complex z : mu.points()) brute += window_contains(w, z) ? 1 : 0;
    CHECK(mu.count_in_window(w) == brute);
  }
}

TEST_CASE("pullback measures are reproducible and serialize") {
  const Symbol phi = Symbol::blaschke({0.0, 0.5});
  const auto a = measure(phi, 1000, 9);
  const auto b = measure(phi, 1000, 9);
  CHECK(a.points() == b.points());
  CHECK(a.seed() == 9);
  std::ostringstream out;
  a.write_columns(out);
  const std::string text = out.str();
  CHECK(text.rfind("#", 0) == 0);
  std::istringstream lines(text);
  int rows = 0;
  for (std::string line; std::getline(lines, line);) rows += line.empty() || line[0] == '#' ? 0 : 1;
  CHECK(rows == 1000);
}

TEST_CASE("rn_density oracles") {
  const std::size_t n = 1000000;
  for (int k : {1, 2, 3}) {
    std::vector<Complex> c(k + 1, 0.0);
    c[k] = 1.0;
    SeededSampler s(17);
    const auto d = rn_density(Symbol::polynomial(c), 64, n, s);
    CHECK(d.bins == 64);
    for (double v : d.density) CHECK(std::abs(v - 1.0) < 0.02);
    CHECK(std::abs(d.ess_inf - 1.0) < 0.02);
    CHECK(std::abs(d.mass_on_circle - 1.0) < 1e-12);
  }
  SeededSampler s(17);
  const auto half = rn_density(Symbol::affine(0.5, 0.5), 64, 100000, s);
  CHECK(half.mass_on_circle < 1e-4);
  CHECK(half.ess_inf == 0.0);
  CHECK_THROWS_AS(rn_density(Symbol::identity(), 4, 1000, s), PreconditionError);
}

TEST_CASE("density integrates to the circle mass and inner symbols stay on the circle") {
  for (const Symbol& phi : {Symbol::moebius(0.5), Symbol::blaschke({0.0, 0.5, Complex(0.0, -0.4)}),
                            Symbol::polynomial({0.0, 0.5, 0.5}), Symbol::affine(0.8)}) {
    SeededSampler s(3);
    const auto d = rn_density(phi, 64, 200000, s);
    double total = 0.0;
    for (double v : d.density) {
      CHECK(v >= 0.0);
      total += v / d.bins;
    }
    CHECK(std::abs(total - d.mass_on_circle) <= 0.02 * std::max(d.mass_on_circle, 1e-300) + 1e-12);
    if (phi.is_inner()) CHECK(d.mass_on_circle >= 1 - 1e-6);
  }
}

TEST_CASE("pb2 examples") {
  const DiskQuadrature q(256, 1024);
  const auto mod2 = observables::modulus_power(1);
  const auto id = verify_pb2(Symbol::identity(), mod2, measure(Symbol::identity(), 10000), q);
  CHECK(std::abs(id.lhs - 1.0) < 1e-12);
  CHECK(std::abs(id.rhs - 1.0) < 1e-8);

  const Symbol z2 = Symbol::polynomial({0.0, 0.0, 1.0});
  const auto r = verify_pb2(z2, mod2, measure(z2, 1000000), q);
  CHECK(std::abs(r.lhs - 1.0) < 1e-12);
  CHECK(r.relative_gap < 1e-2);

  const auto harmonic =
      verify_pb2(Symbol::moebius(0.3, -1.0), observables::real_part(), measure(Symbol::moebius(0.3, -1.0), 100000), q);
  CHECK(std::abs(harmonic.rhs - 0.3) < 1e-12);
  CHECK(std::abs(harmonic.lhs - 0.3) < 1e-3);
  const auto zero = verify_pb2(z2, observables::real_part(), measure(z2, 100000), q);
  CHECK(zero.rhs == 0.0);
  CHECK(std::abs(zero.lhs) < 1e-6);
}

TEST_CASE("pb1 examples") {
  const std::size_t n = 1000000;
  const double c = 1.0 / 16;
  const CarlesonWindow w(1.0, 0.05);
  const auto id = verify_pb1(Symbol::identity(), w, c, measure(Symbol::identity(), n));
  CHECK(id.holds);
  CHECK(id.lhs <= std::log(1 / 0.95));
  CHECK(id.lhs > 0.9 * std::log(1 / 0.95));
  CHECK(rel_err(id.rhs, 25600 * 0.053125) < 0.01);

  const Symbol z2 = Symbol::polynomial({0.0, 0.0, 1.0});
  const auto sq = verify_pb1(z2, w, c, measure(z2, n));
  CHECK(sq.holds);
  CHECK(rel_err(sq.lhs, id.lhs) < 1e-10);

  const Symbol half = Symbol::affine(0.5);
  for (double h : {0.1, 0.05, 0.01}) {
    const auto r = verify_pb1(half, CarlesonWindow(Complex(0, 1), h), c, measure(half, 10000));
    CHECK(r.lhs == 0.0);
    CHECK(r.holds);
  }
}

TEST_CASE("pb1 enforces its hypotheses") {
  const auto mu = measure(Symbol::identity(), 1000);
  CHECK_THROWS_AS(verify_pb1(Symbol::identity(), CarlesonWindow(1.0, 0.05), 0.2, mu), PreconditionError);
  CHECK_THROWS_AS(verify_pb1(Symbol::identity(), CarlesonWindow(1.0, 0.2), 0.05, mu), PreconditionError);
  const Symbol psi = Symbol::moebius(0.5);
  CHECK_THROWS_AS(verify_pb1(psi, CarlesonWindow(1.0, 0.07), 0.05, mu), PreconditionError);
  CHECK_NOTHROW(verify_pb1(psi, CarlesonWindow(1.0, 0.06), 0.05, mu));
}
