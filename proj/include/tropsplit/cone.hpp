#pragma once

#include <cstddef>
#include <vector>

#include "tropsplit/int_matrix.hpp"

namespace tropsplit {

/// Closed rational polyhedral cone in canonical form.
///
/// Stored data:
///  - lineality: HNF basis of the saturated lineality lattice,
///  - rays: extreme rays modulo lineality, projected onto the orthogonal
///    complement of the lineality space, primitive, sorted,
///  - facet_normals: extreme rays of the dual cone modulo its lineality,
///    projected onto the span of this cone, primitive, sorted.
///
/// A point x belongs to the cone iff x lies in the span and pairs >= 0 with
/// every facet normal.  Equal cones compare equal structurally.
class Cone {
 public:
  /// The zero cone in the rank-0 lattice.
  Cone() = default;

  static Cone from_rays(std::size_t ambient_rank,
                        const std::vector<ZVec>& generators);
  static Cone from_generators(std::size_t ambient_rank,
                              const std::vector<ZVec>& generators,
                              const std::vector<ZVec>& lineality);
  static Cone from_inequalities(std::size_t ambient_rank,
                                const std::vector<ZVec>& inequalities,
                                const std::vector<ZVec>& equalities);
  static Cone zero(std::size_t ambient_rank);
  static Cone full_space(std::size_t ambient_rank);

  std::size_t ambient_rank() const { return ambient_; }
  std::size_t dim() const { return dim_; }
  const std::vector<ZVec>& rays() const { return rays_; }
  const std::vector<ZVec>& facet_normals() const { return facet_normals_; }
  const std::vector<ZVec>& lineality() const { return lineality_; }
  /// Basis of the lattice of functionals vanishing on the cone's span.
  const std::vector<ZVec>& span_complement() const { return span_complement_; }

  bool is_zero_cone() const { return rays_.empty() && lineality_.empty(); }
  bool is_strongly_convex() const { return lineality_.empty(); }

  /// Sum of the primitive rays; lies in the relative interior.
  QVec relative_interior_point() const;

  /// Generators of the span as a saturated lattice (rays + lineality).
  IntMatrix span_lattice_basis() const;

  bool operator==(const Cone& other) const {
    return ambient_ == other.ambient_ && dim_ == other.dim_ &&
           rays_ == other.rays_ && facet_normals_ == other.facet_normals_ &&
           lineality_ == other.lineality_;
  }
  bool operator<(const Cone& other) const;

 private:
  std::size_t ambient_ = 0;
  std::size_t dim_ = 0;
  std::vector<ZVec> rays_;
  std::vector<ZVec> facet_normals_;
  std::vector<ZVec> lineality_;
  std::vector<ZVec> span_complement_;

  friend Cone dual_cone(const Cone&);
};

Cone dual_cone(const Cone& c);
std::vector<Cone> faces(const Cone& c);
Cone intersect_cones(const Cone& a, const Cone& b);
Cone map_cone(const IntMatrix& f, const Cone& c);
bool cone_contains(const Cone& outer, const Cone& inner);
bool is_face_of(const Cone& face, const Cone& cone);

enum class Membership { outside, boundary, relative_interior };
Membership membership(const Cone& c, const QVec& x);
Membership membership(const Cone& c, const ZVec& x);

struct AffineSliceResult {
  enum class Kind { empty, point, infinite };
  Kind kind = Kind::empty;
  QVec point;            // present iff kind == point
  bool interior = false; // membership of point is relative_interior
};

/// Classifies (span(subspace_basis) + v) meet c.  subspace_basis columns
/// live in the ambient lattice of c.
AffineSliceResult affine_slice(const IntMatrix& subspace_basis, const QVec& v,
                               const Cone& c);

struct ConeFiberProduct {
  Cone cone;                  // in fiber-lattice coordinates
  LatticeFiberProduct lattice;
};

/// {(x, z) in c1 x c2 : f1(x) = f2(z)} written in the coordinates of the
/// fiber-product lattice returned by lattice_fiber_product(f1, f2).
ConeFiberProduct cone_fiber_product(const Cone& c1, const IntMatrix& f1,
                                    const Cone& c2, const IntMatrix& f2);

}  // namespace tropsplit
