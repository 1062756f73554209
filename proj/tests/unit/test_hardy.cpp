#include <numbers>

#include "crange/hardy.hpp"
#include "test_support.hpp"

using namespace crange;
using crange::testing::close;
using crange::testing::interior_points;
using crange::testing::rel_err;
namespace tf = crange::test_functions;

namespace {

const CircleQuadrature kCircle(4096);
const DiskQuadrature kDisk(128, 256);

}  // namespace

TEST_CASE("exponents must be positive") {
  CHECK_THROWS_AS(HardyExponent(0.0), PreconditionError);
  CHECK_THROWS_AS(HardyExponent(-1.0), PreconditionError);
  CHECK(HardyExponent(0.5).value() == 0.5);
}

TEST_CASE("norm_boundary examples") {
  for (double p : {0.5, 1.0, 2.0, 4.0}) {
    CHECK(rel_err(norm_boundary(tf::monomial(1), p, kCircle), 1.0) < 1e-12);
    const Complex c(0.3, -1.2);
    CHECK(rel_err(norm_boundary(tf::constant(c), p, kCircle), std::pow(std::abs(c), p)) < 1e-12);
  }
  CHECK(rel_err(norm_boundary(tf::kernel_power(0.6, 1.0), 2.0, kCircle), 1.5625) < 1e-12);
}

TEST_CASE("norm_hardy_stein examples") {
  const Complex c(0.3, 0.4);
  CHECK(rel_err(norm_hardy_stein(tf::constant(c), 1.0, kDisk), std::pow(0.5, 1.0)) < 1e-12);
  CHECK(rel_err(norm_hardy_stein(tf::monomial(1), 2.0, kDisk), 1.0) < 1e-8);
  const auto f = tf::polynomial({2.0, 1.0});
  CHECK(rel_err(norm_hardy_stein(f, 4.0, DiskQuadrature(256, 512)), norm_boundary(f, 4.0, kCircle)) <
        1e-6);
}

TEST_CASE("Hardy-Stein needs a zero-free function below p = 2") {
  CHECK_THROWS_AS(norm_hardy_stein(tf::monomial(1), 1.0, kDisk), PreconditionError);
  CHECK_NOTHROW(norm_hardy_stein(tf::monomial(1), 3.0, kDisk));
}

TEST_CASE("norm_layer_cake examples") {
  const Complex c(1.5, -0.2);
  CHECK(rel_err(norm_layer_cake(tf::constant(c), 3.0, kCircle), std::pow(std::abs(c), 3.0)) < 1e-12);
  CHECK(rel_err(norm_layer_cake(tf::monomial(1), 1.0, kCircle), 1.0) < 1e-12);
  const auto f = tf::polynomial({1.0, -0.5});
  CHECK(rel_err(norm_layer_cake(f, 2.0, kCircle), norm_boundary(f, 2.0, kCircle)) < 1e-4);
}

TEST_CASE("three norms agree on zero-free functions") {
  const std::vector<TestFunction> family = {
      tf::polynomial({2.0, 1.0}), tf::polynomial({3.0, 0.0, 1.0}),
      tf::kernel_power(0.6, 1.0), tf::exponential(1.0), tf::exponential(Complex(0.0, 0.5), 0.2)};
  const CircleQuadrature circle(16384);
  const DiskQuadrature disk(256, 1024);
  for (const auto& f : family) {
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
      const double b = norm_boundary(f, p, circle);
      CHECK_MESSAGE(rel_err(norm_hardy_stein(f, p, disk), b) < 1e-4, f.tag << " p=" << p);
      CHECK_MESSAGE(rel_err(norm_layer_cake(f, p, circle), b) < 1e-4, f.tag << " p=" << p);
    }
  }
}

TEST_CASE("a wrong Hardy-Stein constant breaks the agreement") {
  const auto f = tf::polynomial({2.0, 1.0});
  const double b = norm_boundary(f, 4.0, kCircle);
  CHECK(rel_err(norm_hardy_stein(f, 4.0, kDisk, 1.0), b) > 1e-2);
}

TEST_CASE("circle means increase with the radius") {
  for (const auto& f : {tf::polynomial({0.2, 1.0, -0.5}), tf::exponential(Complex(1.0, 1.0)),
                        tf::kernel_power(Complex(0.0, 0.9), 1.0), tf::monomial(3)}) {
    for (double p : {0.5, 2.0}) {
      const auto means = circle_means(f, p, kCircle, RadiusGrid::standard());
      for (std::size_t i = 1; i < means.size(); ++i) CHECK(means[i] >= means[i - 1] * (1 - 1e-12));
    }
  }
}

TEST_CASE("outer_function examples") {
  const auto one = outer_function(StepModulus{{}, 1.0}, kCircle);
  for (Complex z : interior_points(20, 0.99, 1)) CHECK(close(one(z), 1.0, 1e-14));

  SmoothModulus smooth{[](double t) { return std::abs(1.0 - 0.5 * std::polar(1.0, t)); }, "|1-z/2|"};
  const auto f = outer_function(smooth, kCircle);
  for (int j = 0; j < 64; ++j) {
    const Complex z = std::polar(1.0, kTwoPi * (j + 0.3) / 64);
    CHECK(std::abs(std::abs(f(z)) - std::abs(1.0 - 0.5 * z)) < 1e-10);
  }
  for (Complex z : interior_points(50, 0.99, 2)) {
    CHECK(close(f(z), 1.0 - 0.5 * z, 1e-10));
    CHECK(close(f.derivative(z), -0.5, 1e-8));
  }

  const StepModulus step{{ArcValue{0.4, 0.25 * kTwoPi, 1.0}}, 0.125};
  const auto g = outer_function(step, kCircle);
  CHECK(rel_err(norm_boundary(g, 2.0, kCircle), 0.25 + 0.75 / 64.0) < 1e-6);
}

TEST_CASE("outer functions are zero-free") {
  const auto g = two_valued_outer(1.0, 0.3, 1.0, 1.0 / 16);
  CHECK(g.zero_free);
  for (Complex z : interior_points(2000, 0.999, 3)) CHECK(std::abs(g(z)) > 0.0);
  CHECK_NOTHROW(validate_zero_free(g));
}

TEST_CASE("a false zero-free claim is rejected") {
  auto f = tf::polynomial({0.25, 1.0});
  CHECK_FALSE(f.zero_free);
  f.zero_free = true;
  CHECK_THROWS_AS(validate_zero_free(f), PreconditionError);
}

TEST_CASE("kernel examples") {
  const auto k0 = kernel({0.0, 2.0});
  for (Complex z : interior_points(10, 0.9, 4)) CHECK(close(k0(z), 1.0, 1e-12));
  const auto k6 = kernel({0.6, 2.0});
  for (Complex z : interior_points(10, 0.9, 5)) CHECK(close(k6(z), 0.8 / (1.0 - 0.6 * z), 1e-12));
  CHECK(std::abs(norm_boundary(k6, 2.0, kCircle) - 1.0) < 1e-8);
  const auto k5 = kernel({0.5, 1.0});
  for (Complex z : interior_points(10, 0.9, 6)) {
    CHECK(close(k5(z), 0.75 / std::pow(1.0 - 0.5 * z, 2), 1e-12));
    CHECK(close(k5.derivative(z), 0.75 / std::pow(1.0 - 0.5 * z, 3), 1e-12));
  }
}

TEST_CASE("normalized kernels have unit norm up to depth 12") {
  for (double p : {1.5, 2.0, 4.0}) {
    for (int k = 0; k <= 12; ++k) {
      const Complex lambda = std::polar(1.0 - std::ldexp(1.0, -k), 0.7 * k);
      const auto f = kernel({lambda, p});
      const CircleQuadrature q(std::max(kernel_circle_nodes(std::abs(lambda)), 256));
      CHECK_MESSAGE(std::abs(norm_boundary(f, p, q) - 1.0) < 1e-6, "p=" << p << " k=" << k);
    }
  }
}

TEST_CASE("kernel power fields match the kernel") {
  for (double p : {0.5, 1.0, 2.0, 3.0}) {
    const KernelSpec spec{Complex(0.3, 0.8), p};
    const double np = kernel_norm_power(std::abs(spec.lambda), p);
    const auto f = kernel(spec, np);
    const KernelPowerField field(spec, np);
    for (Complex w : interior_points(20, 1.0, 7)) {
      CHECK(rel_err(field(w), std::pow(std::abs(f(w)), p)) < 1e-10);
    }
  }
}

TEST_CASE("test function descriptors") {
  const auto f = tf::parse("poly 2 1");
  CHECK(f.zero_free);
  CHECK(close(f(0.5), 2.5, 1e-15));
  CHECK(close(tf::parse("kernel 0.6 1")(0.5), 1.0 / 0.7, 1e-14));
  CHECK(close(tf::parse("exp 0,1")(0.0), 1.0, 1e-15));
  CHECK(close(tf::parse("mono 3 2")(0.5), 0.25, 1e-15));
  CHECK(tf::parse("outer2 0 1 1 0.5").zero_free);
  CHECK_THROWS_AS(tf::parse("sinh 1"), ParseError);
}

TEST_CASE("composition with a symbol") {
  const auto f = tf::compose(tf::monomial(2), Symbol::affine(0.5));
  CHECK(rel_err(norm_boundary(f, 2.0, kCircle), std::pow(0.5, 4.0)) < 1e-12);
  CHECK(close(f.derivative(0.4), 2.0 * 0.5 * 0.2, 1e-15));
}
