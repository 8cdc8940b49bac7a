#pragma once

#include <map>
#include <optional>
#include <stdexcept>

#include "tropsplit/fan.hpp"

namespace tropsplit {

/// Formal integer combination of torus-invariant strata, keyed by cone
/// index into the carrying fan.  Zero coefficients are never stored.
struct TorusCycle {
  FanPtr fan;
  std::map<std::size_t, Int> terms;

  void add(std::size_t cone, const Int& coeff) {
    if (coeff == 0) return;
    Int& slot = terms[cone];
    slot += coeff;
    if (slot == 0) terms.erase(cone);
  }
  bool operator==(const TorusCycle& other) const {
    return terms == other.terms;
  }
};

struct GenericityWitness {
  std::size_t cone_index;  // index in the fan the check ran in
  AffineSliceResult slice;
};

struct GenericityReport {
  bool generic = true;
  std::vector<GenericityWitness> witnesses;
};

struct NotGenericError : std::runtime_error {
  explicit NotGenericError(GenericityReport r)
      : std::runtime_error("displacement vector is not generic"),
        report(std::move(r)) {}
  GenericityReport report;
};

/// Displacement-direction genericity: every cone of complementary
/// dimension is sliced by span(subspace) + v either emptily or in a single
/// relative-interior point.  With tau present the test runs in the star
/// quotient of tau (witness indices then refer to the original fan).
GenericityReport check_generic(const Fan& fan, const IntMatrix& subspace,
                               std::optional<std::size_t> tau, const ZVec& v);

/// V_Y(tau) described by its cone in the source lattice.
struct SourceStratum {
  std::size_t lattice_rank;
  Cone tau;
};

struct PushforwardResult {
  TorusCycle cycle;
  Int stack_index = 1;
  bool empty_delta = false;
  bool fan_complete = true;
};

/// Displacement-rule pushforward of [V_Y(tau)] along the toric morphism
/// with lattice map f_N, for the displacement direction v.  Coefficients
/// are the indices [N(X) : f_N(N(Y)) + N_delta] over the cone set cut out
/// by the containment, dimension, and slice conditions.  stack_index is
/// the quotient-lattice index [(im q f_N)^sat : im q f_N] when a quotient
/// sublattice is supplied, 1 otherwise.
PushforwardResult pushforward(FanPtr fan_x, const IntMatrix& f_n,
                              const SourceStratum& source, const ZVec& v,
                              const std::optional<IntMatrix>& stack_sublattice);

}  // namespace tropsplit
