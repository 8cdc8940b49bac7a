#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tropsplit/fan.hpp"
#include "tropsplit/tropical_type.hpp"

namespace tropsplit {

struct SplitEdgeData {
  std::string edge;        // edge id in the glued type
  FanPtr fan;              // Sigma_p
  IntMatrix base_map;      // N_p -> N_B
  std::size_t stratum_cone;  // index of sigma(p) in the fan
};

/// Input data of a splitting computation: the log-point base, one fan per
/// split edge with its structure map, the glued type with its split set,
/// the ambient (deepest) types scoping the enumeration, and the
/// displacement vector in the product of the edge lattices.
struct SplittingInstance {
  std::size_t base_rank = 0;
  Cone base_cone = Cone::zero(0);  // sigma_B, full-dimensional in N_B
  std::vector<SplitEdgeData> split_edges;
  ConeComplex complex;
  DecoratedType glued_type;
  std::vector<DecoratedType> ambient_types;  // empty means: the glued type
  ZVec displacement;                         // per-edge blocks, sorted ids
};

struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Verdict { generic, not_generic, unsatisfiable };

/// One candidate split type [rho], recorded as a tuple of faces of the
/// ambient evaluation cones together with its contraction data.
struct CandidateDescriptor {
  std::size_t ambient_index = 0;
  std::vector<Cone> faces;  // one face of each omega_i evaluation cone
  std::vector<std::vector<std::string>> contracted_edges;  // per component
  std::vector<std::size_t> face_dims;
  Cone image_cone = Cone::zero(0);  // image of epsilon restricted to the face
};

struct DisplacementWitness {
  CandidateDescriptor candidate;
  std::string reason;
};

/// Both sides of the dimension bookkeeping: the directly computed lattice
/// ranks, and the closed form as printed (which disagrees by a sign; the
/// corrected variant is what the direct computation reproduces).
struct DimensionAudit {
  std::size_t dim_tau_tilde = 0;
  long long direct_rank_difference = 0;   // sum rank N_tau_i - rank N_tau
  long long required_face_dim = 0;        // dim tau~ + direct difference
  long long printed_closed_form = 0;      // sum n_p - (|S|-r-1) * base rank
  long long corrected_closed_form = 0;    // sum n_p - (|S|-r+1) * base rank
  bool direct_matches_printed = false;
  bool direct_matches_corrected = false;
  std::size_t total_edge_rank = 0;        // rank of the displacement lattice
};

struct DisplacementReport {
  Verdict verdict = Verdict::generic;
  bool displacement_in_psi_image = true;
  DimensionAudit dims;
  std::vector<DisplacementWitness> witnesses;
  std::size_t candidates_after_dimension_filter = 0;
  std::size_t survivors = 0;
};

struct DeltaTerm {
  CandidateDescriptor rho;
  Int multiplicity;        // m_[rho]
  Int m_prime;             // the per-component model multiplicity
};

struct DeltaResult {
  std::vector<DeltaTerm> terms;
  /// every ambient scope produced the same candidate invariants
  bool scoping_consistent = true;
};

struct KunnethTerm {
  Int coefficient;
  std::vector<std::string> factors;  // one class symbol per component
};

struct SplittingFormula {
  std::vector<DeltaTerm> terms;
  Int component_count = 1;
  bool scoping_consistent = true;  // ambient scopes produced matching terms
  std::string rendering;
};

/// Prepared splitting computation: validates the instance, builds the
/// component evaluation cones, the fiber-product lattices, and the
/// epsilon / psi maps, then answers the displacement queries.
class SplittingContext {
 public:
  explicit SplittingContext(SplittingInstance inst);

  const SplittingInstance& instance() const { return inst_; }
  std::size_t component_count_r() const { return split_.components.size(); }
  const SplitResult& split() const { return split_; }
  const EvaluationCone& component_cone(std::size_t i) const {
    return comp_eval_[i];
  }
  const EvaluationCone& glued_cone() const { return glued_eval_; }

  /// Composite of the per-component fiber projections with the difference
  /// map on each edge factor.
  const IntMatrix& psi_map() const { return psi_; }
  /// Product of the component evaluation maps composed with the difference
  /// map, on the ambient with the given index (0 when ambients default to
  /// the glued type itself).
  const IntMatrix& epsilon_map(std::size_t ambient_index = 0) const;
  /// The lattice diagonal into the product of the component fiber lattices.
  const IntMatrix& diagonal_map() const { return diag_; }

  Int component_count_N() const;

  DisplacementReport check_displacement() const;
  DisplacementReport check_displacement(const ZVec& v) const;

  /// Surviving candidates with their multiplicities; requires a generic
  /// displacement and asserts component_count_N * m' = m on every term.
  DeltaResult enumerate_delta() const;
  DeltaResult enumerate_delta(const ZVec& v) const;

  SplittingFormula assemble_formula(
      const DeltaResult& delta, const Int& n,
      const std::optional<std::vector<KunnethTerm>>& kunneth) const;

  /// Scans the image lattice of psi in graded lexicographic order.
  std::optional<ZVec> find_displacement(long bound) const;

  std::size_t threads = 1;  // results are independent of this

 private:
  struct ComponentLattice {
    std::vector<std::string> legs;       // sorted marking legs of tau_i
    std::vector<std::string> leg_edge;   // originating edge per leg
    std::size_t rank = 0;                // rank N_tau_i
    IntMatrix projections;               // stacked per-leg blocks
    std::vector<std::size_t> leg_offset;
  };
  struct AmbientGeometry {
    std::vector<DecoratedType> comps;
    std::vector<EvaluationCone> eval;
    std::vector<IntMatrix> embed_tau;  // tau_i-tilde ambient -> omega_i ambient
    std::vector<Cone> tau_face;
    std::vector<IntMatrix> ev_bar;     // omega_i ambient -> N_tau_i
    IntMatrix epsilon;
    std::vector<std::size_t> comp_offset;
    std::size_t total_ambient = 0;
  };
  struct Candidate {
    std::size_t ambient_index;
    std::vector<std::size_t> face_index;
    std::vector<Cone> faces;
    Cone product_face = Cone::zero(0);
    Cone image_cone = Cone::zero(0);
    IntMatrix span_basis;  // saturated span of the product face
    std::size_t dim = 0;
    std::string dedupe_key;
  };

  void validate_and_build();
  AmbientGeometry build_ambient(const DecoratedType& omega) const;
  std::vector<Candidate> dimension_candidates() const;
  CandidateDescriptor describe(const Candidate& c) const;
  Int m_of(const Candidate& c) const;
  Int m_prime_of(const Candidate& c) const;

  SplittingInstance inst_;
  FanPtr base_fan_;
  std::vector<std::string> edge_order_;
  std::map<std::string, std::size_t> edge_index_;
  std::vector<std::size_t> edge_rank_, edge_offset_;
  std::size_t total_np_ = 0;

  SplitResult split_;
  std::vector<EvaluationCone> comp_eval_;
  std::vector<ComponentLattice> comp_lat_;
  std::vector<std::size_t> comp_col_offset_;  // into the psi domain
  std::size_t psi_domain_rank_ = 0;

  EvaluationCone glued_eval_;
  std::size_t glued_fiber_rank_ = 0;
  IntMatrix glued_projections_;  // N_tau -> stacked per-edge blocks
  IntMatrix diag_;
  IntMatrix psi_;

  std::vector<AmbientGeometry> ambients_;
};

}  // namespace tropsplit
