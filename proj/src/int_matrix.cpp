#include "tropsplit/int_matrix.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace tropsplit {

ZVec primitive(const ZVec& v) {
  Int g = 0;
  for (const Int& x : v) g = gcd(g, x);
  if (g == 0) return v;
  ZVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / g;
  return out;
}

ZVec primitive(const QVec& v) {
  Int l = 1;
  for (const Rat& x : v) l = lcm(l, x.get_den());
  ZVec scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rat t = v[i] * Rat(l);
    t.canonicalize();
    assert(t.get_den() == 1);
    scaled[i] = t.get_num();
  }
  return primitive(scaled);
}

QVec to_rational(const ZVec& v) {
  QVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(v[i]);
  return out;
}

bool lex_less(const ZVec& a, const ZVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<ZVec>& rows) {
  if (rows.empty()) return IntMatrix(0, 0);
  IntMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw std::invalid_argument("ragged rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<ZVec>& cols) {
  if (cols.empty()) return IntMatrix(0, 0);
  IntMatrix m(cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != m.rows()) throw std::invalid_argument("ragged cols");
    for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

ZVec IntMatrix::row(std::size_t r) const {
  ZVec out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out[j] = at(r, j);
  return out;
}

ZVec IntMatrix::column(std::size_t c) const {
  ZVec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, c);
  return out;
}

std::vector<ZVec> IntMatrix::columns() const {
  std::vector<ZVec> out;
  out.reserve(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
  return out;
}

IntMatrix IntMatrix::transposed() const {
  IntMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("shape mismatch");
  IntMatrix m(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j)
        m.at(i, j) += a * other.at(k, j);
    }
  return m;
}

IntMatrix IntMatrix::operator-() const {
  IntMatrix m(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = -at(i, j);
  return m;
}

ZVec IntMatrix::apply(const ZVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
  ZVec out(rows_, Int(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
  return out;
}

QVec IntMatrix::apply(const QVec& v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply: size mismatch");
  QVec out(rows_, Rat(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += Rat(at(i, j)) * v[j];
  return out;
}

IntMatrix IntMatrix::hstack(const IntMatrix& other) const {
  if (rows_ != other.rows_ && cols_ != 0 && other.cols_ != 0)
    throw std::invalid_argument("hstack: row mismatch");
  std::size_t r = std::max(rows_, other.rows_);
  IntMatrix m(r, cols_ + other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
  for (std::size_t i = 0; i < other.rows_; ++i)
    for (std::size_t j = 0; j < other.cols_; ++j)
      m.at(i, cols_ + j) = other.at(i, j);
  return m;
}

IntMatrix IntMatrix::vstack(const IntMatrix& other) const {
  if (cols_ != other.cols_ && rows_ != 0 && other.rows_ != 0)
    throw std::invalid_argument("vstack: col mismatch");
  std::size_t c = std::max(cols_, other.cols_);
  IntMatrix m(rows_ + other.rows_, c);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
  for (std::size_t i = 0; i < other.rows_; ++i)
    for (std::size_t j = 0; j < other.cols_; ++j)
      m.at(rows_ + i, j) = other.at(i, j);
  return m;
}

IntMatrix IntMatrix::submatrix_columns(
    const std::vector<std::size_t>& idx) const {
  IntMatrix m(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t i = 0; i < rows_; ++i) m.at(i, j) = at(i, idx[j]);
  return m;
}

bool IntMatrix::is_zero() const {
  for (const Int& x : entries_)
    if (x != 0) return false;
  return true;
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j);
  }
  os << "]";
  return os.str();
}

std::size_t SnfDecomposition::rank() const {
  std::size_t r = 0;
  std::size_t n = std::min(diag.rows(), diag.cols());
  for (std::size_t i = 0; i < n; ++i)
    if (diag.at(i, i) != 0) ++r;
  return r;
}

std::vector<Int> SnfDecomposition::divisors() const {
  std::vector<Int> d;
  std::size_t n = std::min(diag.rows(), diag.cols());
  for (std::size_t i = 0; i < n; ++i)
    if (diag.at(i, i) != 0) d.push_back(diag.at(i, i));
  return d;
}

namespace {

// Elementary operations applied simultaneously to the working matrix and the
// transformation pair (U, Uinv) or (V, Vinv).  Row operations on A mirror as
// row ops on U and inverse column ops on Uinv; column ops mirror on V/Vinv.
struct SnfState {
  IntMatrix a, u, uinv, v, vinv;

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a.at(i, c), a.at(j, c));
    for (std::size_t c = 0; c < u.cols(); ++c) std::swap(u.at(i, c), u.at(j, c));
    for (std::size_t r = 0; r < uinv.rows(); ++r)
      std::swap(uinv.at(r, i), uinv.at(r, j));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a.at(r, i), a.at(r, j));
    for (std::size_t r = 0; r < v.rows(); ++r) std::swap(v.at(r, i), v.at(r, j));
    for (std::size_t c = 0; c < vinv.cols(); ++c)
      std::swap(vinv.at(i, c), vinv.at(j, c));
  }
  // row_i += q * row_j    (A, U); Uinv: col_j -= q * col_i
  void add_row(std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t c = 0; c < a.cols(); ++c) a.at(i, c) += q * a.at(j, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) += q * u.at(j, c);
    for (std::size_t r = 0; r < uinv.rows(); ++r)
      uinv.at(r, j) -= q * uinv.at(r, i);
  }
  // col_i += q * col_j    (A, V); Vinv: row_j -= q * row_i
  void add_col(std::size_t i, std::size_t j, const Int& q) {
    if (q == 0) return;
    for (std::size_t r = 0; r < a.rows(); ++r) a.at(r, i) += q * a.at(r, j);
    for (std::size_t r = 0; r < v.rows(); ++r) v.at(r, i) += q * v.at(r, j);
    for (std::size_t c = 0; c < vinv.cols(); ++c)
      vinv.at(j, c) -= q * vinv.at(i, c);
  }
  void negate_row(std::size_t i) {
    for (std::size_t c = 0; c < a.cols(); ++c) a.at(i, c) = -a.at(i, c);
    for (std::size_t c = 0; c < u.cols(); ++c) u.at(i, c) = -u.at(i, c);
    for (std::size_t r = 0; r < uinv.rows(); ++r)
      uinv.at(r, i) = -uinv.at(r, i);
  }
};

// Pivot: smallest absolute value among nonzero entries of the trailing
// block, ties broken by lowest row index then lowest column index.
bool find_pivot(const IntMatrix& a, std::size_t t, std::size_t& pi,
                std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < a.rows(); ++i)
    for (std::size_t j = t; j < a.cols(); ++j) {
      const Int& x = a.at(i, j);
      if (x == 0) continue;
      Int ax = abs(x);
      if (!found || ax < best) {
        found = true;
        best = ax;
        pi = i;
        pj = j;
      }
    }
  return found;
}

}  // namespace

SnfDecomposition smith_normal_form(const IntMatrix& m) {
  SnfState s{m, IntMatrix::identity(m.rows()), IntMatrix::identity(m.rows()),
             IntMatrix::identity(m.cols()), IntMatrix::identity(m.cols())};
  std::size_t n = std::min(m.rows(), m.cols());
  for (std::size_t t = 0; t < n; ++t) {
    std::size_t pi, pj;
    if (!find_pivot(s.a, t, pi, pj)) break;
    s.swap_rows(t, pi);
    s.swap_cols(t, pj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m.rows(); ++i) {
        if (s.a.at(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), s.a.at(i, t).get_mpz_t(),
                   s.a.at(t, t).get_mpz_t());
        s.add_row(i, t, -q);
        if (s.a.at(i, t) != 0) {
          s.swap_rows(t, i);  // remainder is strictly smaller, recurse on it
          clean = false;
        }
      }
      if (!clean) continue;
      for (std::size_t j = t + 1; j < m.cols(); ++j) {
        if (s.a.at(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), s.a.at(t, j).get_mpz_t(),
                   s.a.at(t, t).get_mpz_t());
        s.add_col(j, t, -q);
        if (s.a.at(t, j) != 0) {
          s.swap_cols(t, j);
          clean = false;
        }
      }
      if (clean) break;
    }
    // Enforce the divisibility chain: fold any non-multiple into column t.
    bool redo = false;
    for (std::size_t i = t + 1; i < m.rows() && !redo; ++i)
      for (std::size_t j = t + 1; j < m.cols() && !redo; ++j)
        if (s.a.at(i, j) % s.a.at(t, t) != 0) {
          s.add_row(t, i, 1);
          redo = true;
        }
    if (redo) {
      --t;
      continue;
    }
    if (s.a.at(t, t) < 0) s.negate_row(t);
  }
  return SnfDecomposition{s.u, s.a, s.v, s.uinv, s.vinv};
}

IntMatrix hnf_column_basis(const IntMatrix& generators) {
  // Column-style HNF via integer column operations; the result keeps only
  // the nonzero columns and is the unique echelon basis of the column span.
  IntMatrix a = generators;
  std::size_t rows = a.rows(), cols = a.cols();
  auto add_col = [&](std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t r = 0; r < rows; ++r) a.at(r, dst) += q * a.at(r, src);
  };
  auto swap_col = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t r = 0; r < rows; ++r) std::swap(a.at(r, i), a.at(r, j));
  };
  std::size_t lead = 0;
  std::vector<std::size_t> pivot_rows;
  for (std::size_t r = 0; r < rows && lead < cols; ++r) {
    // gcd-reduce row r across columns lead..cols-1
    for (;;) {
      std::size_t best = cols;
      for (std::size_t j = lead; j < cols; ++j) {
        if (a.at(r, j) == 0) continue;
        if (best == cols || abs(a.at(r, j)) < abs(a.at(r, best))) best = j;
      }
      if (best == cols) break;
      swap_col(lead, best);
      bool done = true;
      for (std::size_t j = lead + 1; j < cols; ++j) {
        if (a.at(r, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.at(r, j).get_mpz_t(),
                   a.at(r, lead).get_mpz_t());
        add_col(j, lead, -q);
        if (a.at(r, j) != 0) done = false;
      }
      if (done) break;
    }
    if (a.at(r, lead) == 0) continue;
    if (a.at(r, lead) < 0)
      for (std::size_t k = 0; k < rows; ++k) a.at(k, lead) = -a.at(k, lead);
    // reduce earlier columns against this pivot
    for (std::size_t j = 0; j < lead; ++j) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a.at(r, j).get_mpz_t(),
                 a.at(r, lead).get_mpz_t());
      add_col(j, lead, -q);
    }
    pivot_rows.push_back(r);
    ++lead;
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < lead; ++j) keep.push_back(j);
  return a.submatrix_columns(keep);
}

std::size_t rank_of(const IntMatrix& m) {
  return smith_normal_form(m).rank();
}

std::optional<Int> sublattice_index(const IntMatrix& generators,
                                    std::size_t ambient_rank) {
  if (generators.rows() != ambient_rank && generators.cols() != 0)
    throw std::invalid_argument("sublattice_index: ambient mismatch");
  if (ambient_rank == 0) return Int(1);
  SnfDecomposition snf = smith_normal_form(
      generators.cols() == 0 ? IntMatrix(ambient_rank, 0) : generators);
  if (snf.rank() < ambient_rank) return std::nullopt;
  Int idx = 1;
  for (const Int& d : snf.divisors()) idx *= d;
  return idx;
}

IntMatrix saturate(const IntMatrix& generators) {
  SnfDecomposition snf = smith_normal_form(generators);
  std::size_t r = snf.rank();
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < r; ++j) keep.push_back(j);
  return hnf_column_basis(snf.left_inv.submatrix_columns(keep));
}

Int saturation_index(const IntMatrix& map) {
  Int idx = 1;
  for (const Int& d : smith_normal_form(map).divisors()) idx *= d;
  return idx;
}

KernelImageCokernel kernel_image_cokernel(const IntMatrix& map) {
  SnfDecomposition snf = smith_normal_form(map);
  std::size_t r = snf.rank();
  KernelImageCokernel out;

  std::vector<std::size_t> ker_cols;
  for (std::size_t j = r; j < map.cols(); ++j) ker_cols.push_back(j);
  out.kernel_basis = snf.right.submatrix_columns(ker_cols);

  // image basis: d_i * (Uinv e_i) for i < r
  IntMatrix img(map.rows(), r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < map.rows(); ++i)
      img.at(i, j) = snf.left_inv.at(i, j) * snf.diag.at(j, j);
  out.image_basis = img;

  out.cokernel.free_rank = map.rows() - r;
  for (std::size_t i = 0; i < r; ++i)
    if (snf.diag.at(i, i) > 1) out.cokernel.torsion.push_back(snf.diag.at(i, i));
  IntMatrix proj(map.rows() - r, map.rows());
  for (std::size_t i = r; i < map.rows(); ++i)
    for (std::size_t j = 0; j < map.rows(); ++j)
      proj.at(i - r, j) = snf.left.at(i, j);
  out.cokernel.projection_to_free = proj;
  return out;
}

LatticeFiberProduct lattice_fiber_product(const IntMatrix& f,
                                          const IntMatrix& g) {
  if (f.rows() != g.rows())
    throw std::invalid_argument("fiber product: target mismatch");
  IntMatrix alpha = f.hstack(-g);
  if (alpha.cols() == 0) alpha = IntMatrix(f.rows(), 0);
  KernelImageCokernel kic = kernel_image_cokernel(alpha);
  LatticeFiberProduct out;
  out.rank = kic.kernel_basis.cols();
  IntMatrix top(f.cols(), out.rank), bot(g.cols(), out.rank);
  for (std::size_t j = 0; j < out.rank; ++j) {
    for (std::size_t i = 0; i < f.cols(); ++i)
      top.at(i, j) = kic.kernel_basis.at(i, j);
    for (std::size_t i = 0; i < g.cols(); ++i)
      bot.at(i, j) = kic.kernel_basis.at(f.cols() + i, j);
  }
  out.into_first = top;
  out.into_second = bot;
  return out;
}

std::optional<IntMatrix> solve_integer(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve: shape");
  SnfDecomposition snf = smith_normal_form(a);
  IntMatrix ub = snf.left * b;
  std::size_t r = snf.rank();
  IntMatrix y(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i < r) {
        if (ub.at(i, j) % snf.diag.at(i, i) != 0) return std::nullopt;
        if (i < a.cols()) y.at(i, j) = ub.at(i, j) / snf.diag.at(i, i);
      } else if (ub.at(i, j) != 0) {
        return std::nullopt;
      }
    }
  }
  return snf.right * y;
}

bool in_column_span(const IntMatrix& generators, const ZVec& x) {
  IntMatrix b(x.size(), 1);
  for (std::size_t i = 0; i < x.size(); ++i) b.at(i, 0) = x[i];
  return solve_integer(generators, b).has_value();
}

}  // namespace tropsplit
