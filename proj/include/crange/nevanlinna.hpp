#pragma once

// Nevanlinna counting function, the ratio field tau, and the change-of-variable
// check that ties them to phi'.

#include <cstdint>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "crange/numerics.hpp"
#include "crange/observable.hpp"
#include "crange/symbols.hpp"

namespace crange {

/// N_phi(w) = sum over phi(z) = w, with multiplicity, of log(1/|z|); 0 off the image.
/// Throws DomainError at w = phi(0).
double counting(const SelfMap& phi, Complex w);

/// N_phi(z) / log(1/|z|). Zero where the counting function vanishes.
double tau(const SelfMap& phi, Complex z);

/// tau(phi, z) > c
bool in_Gc(const SelfMap& phi, Complex z, double c);

/// tau over a fixed symbol with a bounded memo table. Concurrent reads and
/// concurrent inserts of the same point are safe; a repeated insert stores the
/// same value.
class TauField {
 public:
  explicit TauField(Symbol phi, std::size_t cache_limit = 1u << 20);

  double operator()(Complex z) const;
  bool in_Gc(Complex z, double c) const { return (*this)(z) > c; }

  const Symbol& symbol() const { return phi_; }
  std::size_t cached() const;

 private:
  struct Key {
    std::uint64_t re;
    std::uint64_t im;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  Symbol phi_;
  std::size_t cache_limit_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Key, double, KeyHash> cache_;
};

struct ChangeOfVariableReport {
  double lhs = 0.0;  ///< iint g(phi) |phi'|^2 log(1/|z|) dA
  double rhs = 0.0;  ///< constant * iint g N_phi dA
  double constant = 1.0;
  /// The same right-hand side with the factor 2 in front, as the identity is
  /// sometimes displayed. Reported for comparison only.
  double rhs_displayed_constant = 0.0;
  double gap = 0.0;           ///< |lhs - rhs|
  double relative_gap = 0.0;  ///< gap / max(|lhs|, |rhs|), or gap when both vanish
};

/// Both sides of the non-univalent change of variable on the same disk rule.
ChangeOfVariableReport verify_change_of_variable(const Symbol& phi, const TestObservable& g,
                                                 const DiskQuadrature& q);

/// Several observables against one evaluation of N_phi at the nodes.
std::vector<ChangeOfVariableReport> verify_change_of_variable(
    const Symbol& phi, const std::vector<TestObservable>& gs, const DiskQuadrature& q);

/// N_phi at every node of the rule, in node order.
std::vector<double> counting_at_nodes(const SelfMap& phi, const DiskQuadrature& q);

}  // namespace crange
