#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tropsplit/cone.hpp"

namespace tropsplit {

/// Cone complex: cells carrying cones in their own lattices, glued by face
/// arrows.  An arrow matrix maps the source cone isomorphically onto a face
/// of the target cone; composites are derived by path composition.
class ConeComplex {
 public:
  void add_cell(const std::string& id, Cone cone);
  void add_arrow(const std::string& source, const std::string& target,
                 IntMatrix matrix);

  bool has_cell(const std::string& id) const;
  const Cone& cell(const std::string& id) const;
  std::size_t cell_rank(const std::string& id) const;
  std::vector<std::string> cell_ids() const;
  struct ArrowData {
    std::string source, target;
    IntMatrix matrix;
  };
  const std::vector<ArrowData>& arrows() const { return arrows_; }

  /// Identity for from == to, else the (first) composite along arrows.
  std::optional<IntMatrix> arrow(const std::string& from,
                                 const std::string& to) const;

  /// Structural violations; empty means valid.
  std::vector<std::string> validate() const;

 private:
  std::map<std::string, Cone> cells_;
  std::vector<ArrowData> arrows_;
};

struct TypeVertex {
  std::string id;
  Int genus;
  std::vector<std::string> curve_class;  // formal symbols, kept sorted
  std::string cell;
};

struct TypeEdge {
  std::string id;
  std::string tail, head;  // contact order points from tail to head
  std::string cell;
  ZVec contact;
};

struct TypeLeg {
  std::string id;
  std::string vertex;
  std::string cell;
  ZVec contact;
};

/// Decorated tropical type: graph with genus and curve-class decorations,
/// image cells, contact orders, and the set of marked (split) elements.
struct DecoratedType {
  std::vector<TypeVertex> vertices;
  std::vector<TypeEdge> edges;
  std::vector<TypeLeg> legs;
  std::set<std::string> split_set;  // edge or leg ids

  const TypeVertex* find_vertex(const std::string& id) const;
  const TypeEdge* find_edge(const std::string& id) const;
  const TypeLeg* find_leg(const std::string& id) const;
  void sort_members();
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
  void fail(std::string v) {
    ok = false;
    violations.push_back(std::move(v));
  }
};

ValidationReport validate_type(const DecoratedType& t, const ConeComplex& cx,
                               bool require_connected);

struct SplitResult {
  std::vector<DecoratedType> components;
  /// cut edge id -> (component/leg carrying +u, component/leg carrying -u)
  struct LegPair {
    std::size_t tail_component;
    std::string tail_leg;
    std::size_t head_component;
    std::string head_leg;
  };
  std::map<std::string, LegPair> pairing;
};

/// Cuts the edges in s; each cut edge becomes a tail-side leg with the
/// original contact order and a head-side leg with its negative, both
/// joining the split sets of their components.
SplitResult split_type(const DecoratedType& t, const std::set<std::string>& s);

/// Def-style contraction check: edge_map values are target edge ids, or
/// nullopt for contracted edges.
bool is_contraction(const DecoratedType& rho, const DecoratedType& tau,
                    const std::map<std::string, std::string>& vertex_map,
                    const std::map<std::string, std::optional<std::string>>&
                        edge_map,
                    const ConeComplex& cx);

/// Coordinate layout of an evaluation cone: vertex blocks (sorted by vertex
/// id), then edge lengths (sorted by edge id), then marking lengths (split
/// set, sorted by id).
struct EvaluationCone {
  Cone cone;
  struct Legend {
    enum class Kind { vertex_block, edge_length, marking_length };
    Kind kind;
    std::string id;
    std::size_t offset;
    std::size_t rank;
  };
  std::vector<Legend> legend;
  std::vector<std::string> marking_order;  // split-set ids, sorted
  IntMatrix evt;  // ambient -> stacked marking-cell lattices
  std::vector<std::size_t> marking_rank;  // per marking, target block rank
  bool realizable = true;

  std::size_t ambient_rank() const { return cone.ambient_rank(); }
  /// Vertex or edge block (markings on split edges share the edge id).
  const Legend& block(const std::string& id) const;
  const Legend& marking_block(const std::string& id) const;
};

/// Builds the evaluation cone of Def-2.4 type: vertex positions in their
/// cells, nonnegative edge lengths with the edge displacement equations,
/// and one marking length per split element constrained to stay on its
/// edge (0 <= l_p <= l_E) or leg and evaluate inside the marked cell.
EvaluationCone evaluation_cone(const DecoratedType& t, const ConeComplex& cx);

IntMatrix evt_map(const EvaluationCone& ec);

/// Type of a face: edges whose length vanishes identically on the face are
/// contracted, every cell is replaced by the minimal cell containing the
/// face's projection, genus and class are summed over merged vertices.
DecoratedType face_to_type(const DecoratedType& t, const ConeComplex& cx,
                           const EvaluationCone& ec, const Cone& face);

}  // namespace tropsplit
