#include "crange/observable.hpp"

#include <algorithm>
#include <iomanip>

#include "parse_util.hpp"

namespace crange {

TestObservable TestObservable::make(std::function<double(Complex)> g,
                                    std::function<double(Complex)> laplacian,
                                    std::string description) {
  TestObservable obs{std::move(g), std::move(laplacian), std::move(description)};
  constexpr double h = 1e-3;
  SeededSampler sampler(0x0b5e7ab1eULL);
  for (int i = 0; i < 32; ++i) {
    const Complex z = std::polar(0.95 * std::sqrt(sampler.uniform()), kTwoPi * sampler.uniform());
    const double centre = obs.g(z);
    const double stencil = (obs.g(z + h) + obs.g(z - h) + obs.g(z + Complex(0.0, h)) +
                            obs.g(z - Complex(0.0, h)) - 4.0 * centre) /
                           (h * h);
    const double claimed = obs.laplacian(z);
    if (std::abs(stencil - claimed) > 1e-5 * std::max(1.0, std::abs(claimed))) {
      std::ostringstream msg;
      msg << std::setprecision(10) << "observable '" << obs.description
          << "': supplied Laplacian " << claimed << " disagrees with the stencil value " << stencil
          << " at (" << z.real() << ", " << z.imag() << ")";
      throw PreconditionError(msg.str());
    }
  }
  return obs;
}

namespace observables {

TestObservable constant(double c) {
  return TestObservable::make([c](Complex) { return c; }, [](Complex) { return 0.0; },
                              "const " + std::to_string(c));
}

TestObservable modulus_power(int k) {
  if (k < 1) throw PreconditionError("modulus_power: k must be positive");
  return TestObservable::make(
      [k](Complex z) { return std::pow(std::norm(z), k); },
      [k](Complex z) { return 4.0 * k * k * std::pow(std::norm(z), k - 1); },
      "|z|^" + std::to_string(2 * k));
}

TestObservable real_part() {
  return TestObservable::make([](Complex z) { return z.real(); }, [](Complex) { return 0.0; },
                              "Re z");
}

TestObservable exp_real() {
  return TestObservable::make([](Complex z) { return std::exp(z.real()); },
                              [](Complex z) { return std::exp(z.real()); }, "exp(Re z)");
}

TestObservable shifted_square(Complex c) {
  std::ostringstream d;
  d << "|z - (" << c.real() << "," << c.imag() << ")|^2";
  return TestObservable::make([c](Complex z) { return std::norm(z - c); },
                              [](Complex) { return 4.0; }, d.str());
}

TestObservable parse(const std::string& descriptor) {
  const auto tokens = detail::split_ws(detail::trim(descriptor));
  const std::string ctx = "'" + descriptor + "'";
  if (tokens.empty()) throw ParseError("empty observable descriptor");
  const std::string& kw = tokens[0];
  auto arity = [&](std::size_t n) {
    if (tokens.size() != n + 1) throw ParseError("wrong number of parameters in " + ctx);
  };
  if (kw == "const") {
    arity(1);
    return constant(detail::parse_real(tokens[1], ctx));
  }
  if (kw == "modpow") {
    arity(1);
    const double k = detail::parse_real(tokens[1], ctx);
    if (k != std::floor(k) || k < 1) throw ParseError("modpow needs a positive integer in " + ctx);
    return modulus_power(static_cast<int>(k));
  }
  if (kw == "re") {
    arity(0);
    return real_part();
  }
  if (kw == "expre") {
    arity(0);
    return exp_real();
  }
  if (kw == "shifted") {
    arity(1);
    return shifted_square(detail::parse_complex(tokens[1], ctx));
  }
  throw ParseError("unknown observable keyword '" + kw + "'");
}

}  // namespace observables

}  // namespace crange
