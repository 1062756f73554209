#pragma once

// C^2 observables paired with their closed-form Laplacians.

#include <functional>
#include <string>

#include "crange/numerics.hpp"

namespace crange {

/// g together with Delta g = 4 d^2 g / dz dzbar.
struct TestObservable {
  std::function<double(Complex)> g;
  std::function<double(Complex)> laplacian;
  std::string description;

  double operator()(Complex z) const { return g(z); }

  /// Checks the supplied Laplacian against a 5-point stencil at seeded interior
  /// points and throws PreconditionError on a mismatch above 1e-5.
  static TestObservable make(std::function<double(Complex)> g,
                             std::function<double(Complex)> laplacian, std::string description);
};

namespace observables {

TestObservable constant(double c);
/// |z|^{2k}
TestObservable modulus_power(int k);
TestObservable real_part();
/// exp(Re z)
TestObservable exp_real();
/// |z - c|^2
TestObservable shifted_square(Complex c);

/// "const c", "modpow k", "re", "expre", "shifted c".
TestObservable parse(const std::string& descriptor);

}  // namespace observables

}  // namespace crange
