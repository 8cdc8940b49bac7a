#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tropsplit/cone.hpp"

namespace tropsplit {

/// Raised by fan construction and fan queries; kind is one of
/// "bad ray", "overlap", "not strongly convex", "unsupported",
/// "none found", "not unique".
struct FanError : std::runtime_error {
  FanError(std::string k, const std::string& msg)
      : std::runtime_error(msg), kind(std::move(k)) {}
  std::string kind;
};

/// A fan: face-closed, pairwise-compatible collection of strongly convex
/// cones with stable canonical indices (sorted by dimension then canonical
/// cone order; index 0 is always the apex).
class Fan {
 public:
  /// Assemble from maximal cones given as ray-index lists.
  static Fan build(std::size_t lattice_rank, const std::vector<ZVec>& rays,
                   const std::vector<std::vector<std::size_t>>& cones);
  /// Assemble from explicit cones; faces are added automatically.
  static Fan from_cones(std::size_t lattice_rank, std::vector<Cone> cones);

  std::size_t lattice_rank() const { return rank_; }
  std::size_t size() const { return cones_.size(); }
  const Cone& cone(std::size_t i) const { return cones_.at(i); }
  const std::vector<Cone>& cones() const { return cones_; }

  std::size_t apex_index() const { return 0; }
  /// Index of a structurally equal cone, or size() when absent.
  std::size_t find(const Cone& c) const;
  /// Unique minimal fan cone containing c; throws "unsupported" when c is
  /// not inside the support.
  std::size_t minimal_cone_containing(const Cone& c) const;
  /// Face indices of cone i (including i itself and the apex).
  const std::vector<std::size_t>& faces_of(std::size_t i) const {
    return faces_of_.at(i);
  }
  bool is_face(std::size_t face, std::size_t of) const;

  /// All rays (one-dimensional cones) appearing in the fan, as primitive
  /// vectors in canonical order.
  std::vector<ZVec> ray_vectors() const;

  /// Every wall is shared by exactly two maximal cones; detects complete
  /// support for warning purposes.
  bool is_complete() const;

  bool operator==(const Fan& other) const {
    return rank_ == other.rank_ && cones_ == other.cones_;
  }

 private:
  Fan() = default;
  void close_and_validate();
  std::size_t rank_ = 0;
  std::vector<Cone> cones_;
  std::vector<std::vector<std::size_t>> faces_of_;
};

using FanPtr = std::shared_ptr<const Fan>;

/// Fan morphism: lattice map plus the induced minimal-cone assignment.
struct FanMorphism {
  FanPtr source;
  FanPtr target;
  IntMatrix lattice_map;
  std::vector<std::size_t> cone_assignment;  // source index -> target index
};

/// Computes the cone assignment; throws FanError{"unsupported"} when some
/// source cone does not map into the target support.
FanMorphism make_fan_morphism(FanPtr source, FanPtr target,
                              IntMatrix lattice_map);

struct StarQuotient {
  Fan fan;                 // fan of the stratum, lattice N / span(tau)
  IntMatrix quotient_map;  // projection onto the free quotient
  /// original index of a cone containing tau -> index in the star fan
  std::map<std::size_t, std::size_t> cone_map;
};

StarQuotient star_quotient(const Fan& f, std::size_t tau);

struct FanFiberProduct {
  Fan fan;
  Int component_count;
  LatticeFiberProduct lattice;
  FanMorphism to_first;
  FanMorphism to_second;
};

/// Fiber product of fans over a common target together with the number of
/// components [(im alpha)^sat : im alpha] for alpha(x, z) = f(x) - g(z).
FanFiberProduct fan_fiber_product(const FanMorphism& f, const FanMorphism& g);

/// Unique minimal source cone whose image meets the relative interior of
/// the target cone; throws "none found" / "not unique".
std::size_t minimal_cone_over(const FanMorphism& m, std::size_t target_cone);

}  // namespace tropsplit
