#include "crange/nevanlinna.hpp"

#include <algorithm>
#include <bit>
#include <iomanip>
#include <mutex>

namespace crange {

namespace {

// phi(0) is excluded from the counting function; closer than this is treated as equal.
constexpr double kOriginImageTol = 1e-15;

}  // namespace

double counting(const SelfMap& phi, Complex w) {
  if (!(std::abs(w) < 1.0)) throw PreconditionError("counting: w must lie in the open disk");
  if (std::abs(w - phi.at_origin()) <= kOriginImageTol) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "counting: w = phi(0) = (" << w.real() << ", " << w.imag()
        << ") is excluded";
    throw DomainError(msg.str());
  }
  const PreimageSet pre = phi.preimages(w);
  CompensatedSum acc;
  for (const Preimage& z : pre.points) {
    if (z.z == Complex(0.0, 0.0)) throw DomainError("counting: preimage at the origin");
    acc.add(z.multiplicity * log_inv_modulus(z.z));
  }
  return acc.value();
}

double tau(const SelfMap& phi, Complex z) {
  if (z == Complex(0.0, 0.0)) throw DomainError("tau: z = 0 is excluded");
  const double n = counting(phi, z);
  if (n == 0.0) return 0.0;
  return n / log_inv_modulus(z);
}

bool in_Gc(const SelfMap& phi, Complex z, double c) { return tau(phi, z) > c; }

TauField::TauField(Symbol phi, std::size_t cache_limit)
    : phi_(std::move(phi)), cache_limit_(cache_limit) {}

std::size_t TauField::KeyHash::operator()(const Key& k) const {
  return static_cast<std::size_t>(mix_seed(k.re, k.im));
}

double TauField::operator()(Complex z) const {
  const Key key{std::bit_cast<std::uint64_t>(z.real()), std::bit_cast<std::uint64_t>(z.imag())};
  {
    std::shared_lock lock(mutex_);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double value = tau(phi_, z);
  std::unique_lock lock(mutex_);
  if (cache_.size() < cache_limit_) cache_.emplace(key, value);
  return value;
}

std::size_t TauField::cached() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

std::vector<double> counting_at_nodes(const SelfMap& phi, const DiskQuadrature& q) {
  const auto nodes = q.nodes();
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = counting(phi, nodes[i]);
  return out;
}

std::vector<ChangeOfVariableReport> verify_change_of_variable(
    const Symbol& phi, const std::vector<TestObservable>& gs, const DiskQuadrature& q) {
  const auto nodes = q.nodes();
  const auto weights = q.weights();
  std::vector<Complex> image(nodes.size());
  std::vector<double> jacobian(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    image[i] = phi.eval(nodes[i]);
    jacobian[i] = std::norm(phi.eval_deriv(nodes[i])) * log_inv_modulus(nodes[i]);
  }
  const std::vector<double> n = counting_at_nodes(phi, q);

  std::vector<ChangeOfVariableReport> out;
  for (const TestObservable& g : gs) {
    CompensatedSum lhs;
    CompensatedSum area;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const double l = g(image[i]) * jacobian[i];
      const double a = n[i] == 0.0 ? 0.0 : g(nodes[i]) * n[i];
      if (!std::isfinite(l)) detail::throw_nonfinite("change of variable", i, nodes[i], l);
      if (!std::isfinite(a)) detail::throw_nonfinite("change of variable", i, nodes[i], a);
      lhs.add(weights[i] * l);
      area.add(weights[i] * a);
    }
    ChangeOfVariableReport r;
    r.lhs = lhs.value();
    r.constant = 1.0;
    r.rhs = r.constant * area.value();
    r.rhs_displayed_constant = 2.0 * area.value();
    r.gap = std::abs(r.lhs - r.rhs);
    const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
    r.relative_gap = scale > 0.0 ? r.gap / scale : r.gap;
    out.push_back(r);
  }
  return out;
}

ChangeOfVariableReport verify_change_of_variable(const Symbol& phi, const TestObservable& g,
                                                 const DiskQuadrature& q) {
  return verify_change_of_variable(phi, std::vector<TestObservable>{g}, q).front();
}

}  // namespace crange
