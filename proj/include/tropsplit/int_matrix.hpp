#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tropsplit {

using Int = mpz_class;
using Rat = mpq_class;
using ZVec = std::vector<Int>;
using QVec = std::vector<Rat>;

ZVec primitive(const ZVec& v);
ZVec primitive(const QVec& v);
QVec to_rational(const ZVec& v);
bool lex_less(const ZVec& a, const ZVec& b);

/// Dense integer matrix with arbitrary-precision entries, row-major.
/// Acts on column vectors; columns are the natural carriers of lattice
/// generators throughout.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, Int(0)) {}

  static IntMatrix identity(std::size_t n);
  static IntMatrix from_rows(const std::vector<ZVec>& rows);
  static IntMatrix from_columns(const std::vector<ZVec>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Int& at(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  ZVec row(std::size_t r) const;
  ZVec column(std::size_t c) const;
  std::vector<ZVec> columns() const;

  IntMatrix transposed() const;
  IntMatrix operator*(const IntMatrix& other) const;
  IntMatrix operator-() const;
  ZVec apply(const ZVec& v) const;
  QVec apply(const QVec& v) const;

  /// [this | other], matching row counts.
  IntMatrix hstack(const IntMatrix& other) const;
  /// [this ; other], matching column counts.
  IntMatrix vstack(const IntMatrix& other) const;
  IntMatrix submatrix_columns(const std::vector<std::size_t>& idx) const;

  bool is_zero() const;
  bool operator==(const IntMatrix& other) const = default;

  std::string to_string() const;

 private:
  std::size_t rows_, cols_;
  std::vector<Int> entries_;
};

/// left * input * right = diag with left, right unimodular and the diagonal
/// a nonnegative divisibility chain d1 | d2 | ... with zeros trailing.
struct SnfDecomposition {
  IntMatrix left;
  IntMatrix diag;
  IntMatrix right;
  IntMatrix left_inv;
  IntMatrix right_inv;

  std::size_t rank() const;
  std::vector<Int> divisors() const;  // nonzero diagonal entries
};

SnfDecomposition smith_normal_form(const IntMatrix& m);

/// Column-style Hermite normal form of the column lattice: a canonical
/// basis matrix (unique per lattice), used to make lattice bases
/// structurally comparable.
IntMatrix hnf_column_basis(const IntMatrix& generators);

std::size_t rank_of(const IntMatrix& m);

/// Index of the column span inside the ambient lattice; nullopt when the
/// span has deficient rank (infinite index).
std::optional<Int> sublattice_index(const IntMatrix& generators,
                                    std::size_t ambient_rank);

/// Canonical basis of {x : k*x lies in the column span for some k > 0}.
IntMatrix saturate(const IntMatrix& generators);

/// [im^sat : im] = product of the nonzero elementary divisors.
Int saturation_index(const IntMatrix& map);

struct Cokernel {
  std::size_t free_rank = 0;
  std::vector<Int> torsion;        // invariant factors > 1
  IntMatrix projection_to_free;    // target_rank columns, free_rank rows
};

struct KernelImageCokernel {
  IntMatrix kernel_basis;  // saturated, columns
  IntMatrix image_basis;   // columns
  Cokernel cokernel;
};

KernelImageCokernel kernel_image_cokernel(const IntMatrix& map);

struct LatticeFiberProduct {
  std::size_t rank = 0;
  IntMatrix into_first;   // basis written in the source lattice of f
  IntMatrix into_second;  // basis written in the source lattice of g
};

/// The lattice {(x, z) : f(x) = g(z)} with its two projections; always
/// saturated since it is an integer kernel.
LatticeFiberProduct lattice_fiber_product(const IntMatrix& f,
                                          const IntMatrix& g);

/// Solve A X = B over the integers; nullopt when no integral solution.
std::optional<IntMatrix> solve_integer(const IntMatrix& a, const IntMatrix& b);

/// True when x lies in the column span of generators over Z.
bool in_column_span(const IntMatrix& generators, const ZVec& x);

}  // namespace tropsplit
