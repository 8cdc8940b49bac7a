#include "tropsplit/cone.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <stdexcept>

namespace tropsplit {

namespace {

Int dot(const ZVec& a, const ZVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat dotq(const ZVec& a, const QVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
  return s;
}

// Exact Gaussian elimination solve of a square rational system; the Gram
// matrices used here are positive definite, so a solution always exists.
QVec solve_rational_square(std::vector<QVec> m, QVec rhs) {
  std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) throw std::logic_error("singular system");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rat f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  QVec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = rhs[i] / m[i][i];
  return out;
}

// Orthogonal projection of x off span(basis), over Q.
QVec project_off(const std::vector<ZVec>& basis, const QVec& x) {
  if (basis.empty()) return x;
  std::size_t k = basis.size();
  std::vector<QVec> gram(k, QVec(k));
  QVec rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) gram[i][j] = Rat(dot(basis[i], basis[j]));
    rhs[i] = dotq(basis[i], x);
  }
  QVec y = solve_rational_square(gram, rhs);
  QVec out = x;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < out.size(); ++c) out[c] -= y[i] * Rat(basis[i][c]);
  return out;
}

struct DdRay {
  ZVec v;
  std::vector<bool> tight;  // per processed inequality
};

struct VRep {
  std::vector<ZVec> lineality;
  std::vector<ZVec> rays;
};

bool is_zero_vec(const ZVec& v) {
  for (const Int& x : v)
    if (x != 0) return false;
  return true;
}

// Double description: V-representation of {x : <a,x> >= 0, <e,x> = 0}.
VRep dd_h_to_v(std::size_t rank, const std::vector<ZVec>& ineqs,
               const std::vector<ZVec>& eqs) {
  std::vector<ZVec> lin;
  for (std::size_t i = 0; i < rank; ++i) {
    ZVec e(rank, Int(0));
    e[i] = 1;
    lin.push_back(e);
  }
  std::vector<DdRay> rays;
  std::size_t n_processed = 0;  // inequality count for tight bookkeeping

  auto reduce_by_lineality = [&](const ZVec& a) -> bool {
    // Returns true when some lineality generator pairs nonzero with a and
    // restructures state so all remaining lineality and rays pair to zero.
    std::size_t pick = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        pick = i;
        break;
      }
    if (pick == lin.size()) return false;
    ZVec l0 = lin[pick];
    Int c0 = dot(a, l0);
    if (c0 < 0) {
      for (Int& x : l0) x = -x;
      c0 = -c0;
    }
    std::vector<ZVec> new_lin;
    for (std::size_t i = 0; i < lin.size(); ++i) {
      if (i == pick) continue;
      Int ci = dot(a, lin[i]);
      ZVec w(rank);
      for (std::size_t c = 0; c < rank; ++c) w[c] = c0 * lin[i][c] - ci * l0[c];
      if (!is_zero_vec(w)) new_lin.push_back(primitive(w));
    }
    lin = std::move(new_lin);
    for (DdRay& r : rays) {
      Int cr = dot(a, r.v);
      if (cr == 0) continue;
      ZVec w(rank);
      for (std::size_t c = 0; c < rank; ++c) w[c] = c0 * r.v[c] - cr * l0[c];
      r.v = primitive(w);
    }
    // l0 becomes an honest ray when cutting by an inequality.
    DdRay nr;
    nr.v = primitive(l0);
    nr.tight.assign(n_processed, true);
    rays.push_back(nr);
    return true;
  };

  auto combine = [&](const DdRay& p, const DdRay& n, const ZVec& a) -> DdRay {
    Int cp = dot(a, p.v), cn = dot(a, n.v);
    ZVec w(rank);
    for (std::size_t c = 0; c < rank; ++c) w[c] = cp * n.v[c] - cn * p.v[c];
    DdRay out;
    out.v = primitive(w);
    out.tight.resize(n_processed);
    for (std::size_t i = 0; i < n_processed; ++i)
      out.tight[i] = p.tight[i] && n.tight[i];
    return out;
  };

  auto adjacent = [&](std::size_t i, std::size_t j) -> bool {
    std::vector<bool> t(n_processed);
    for (std::size_t k = 0; k < n_processed; ++k)
      t[k] = rays[i].tight[k] && rays[j].tight[k];
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (r == i || r == j) continue;
      bool superset = true;
      for (std::size_t k = 0; k < n_processed && superset; ++k)
        if (t[k] && !rays[r].tight[k]) superset = false;
      if (superset) return false;
    }
    return true;
  };

  auto cut_inequality = [&](const ZVec& a) {
    if (reduce_by_lineality(a)) {
      // The promoted ray is the only one with positive pairing; everything
      // else is now tight at a.
      for (DdRay& r : rays) r.tight.push_back(dot(a, r.v) == 0);
      ++n_processed;
      return;
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      int s = sgn(dot(a, rays[i].v));
      if (s > 0) pos.push_back(i);
      if (s < 0) neg.push_back(i);
    }
    std::vector<DdRay> combos;
    for (std::size_t p : pos)
      for (std::size_t n : neg)
        if (adjacent(p, n)) combos.push_back(combine(rays[p], rays[n], a));
    std::vector<DdRay> next;
    for (DdRay& r : rays) {
      Int c = dot(a, r.v);
      if (c < 0) continue;
      r.tight.push_back(c == 0);
      next.push_back(std::move(r));
    }
    for (DdRay& r : combos) {
      r.tight.push_back(true);
      next.push_back(std::move(r));
    }
    rays = std::move(next);
    ++n_processed;
  };

  auto cut_equality = [&](const ZVec& a) {
    std::size_t pick = lin.size();
    for (std::size_t i = 0; i < lin.size(); ++i)
      if (dot(a, lin[i]) != 0) {
        pick = i;
        break;
      }
    if (pick != lin.size()) {
      ZVec l0 = lin[pick];
      Int c0 = dot(a, l0);
      if (c0 < 0) {
        for (Int& x : l0) x = -x;
        c0 = -c0;
      }
      std::vector<ZVec> new_lin;
      for (std::size_t i = 0; i < lin.size(); ++i) {
        if (i == pick) continue;
        Int ci = dot(a, lin[i]);
        ZVec w(rank);
        for (std::size_t c = 0; c < rank; ++c)
          w[c] = c0 * lin[i][c] - ci * l0[c];
        if (!is_zero_vec(w)) new_lin.push_back(primitive(w));
      }
      lin = std::move(new_lin);
      for (DdRay& r : rays) {
        Int cr = dot(a, r.v);
        if (cr == 0) continue;
        ZVec w(rank);
        for (std::size_t c = 0; c < rank; ++c)
          w[c] = c0 * r.v[c] - cr * l0[c];
        r.v = primitive(w);
        if (is_zero_vec(r.v)) r.v.clear();  // mark for removal
      }
      std::erase_if(rays, [](const DdRay& r) { return r.v.empty(); });
      return;
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      int s = sgn(dot(a, rays[i].v));
      if (s > 0) pos.push_back(i);
      if (s < 0) neg.push_back(i);
    }
    std::vector<DdRay> combos;
    for (std::size_t p : pos)
      for (std::size_t n : neg)
        if (adjacent(p, n)) combos.push_back(combine(rays[p], rays[n], a));
    std::vector<DdRay> next;
    for (DdRay& r : rays)
      if (dot(a, r.v) == 0) next.push_back(std::move(r));
    for (DdRay& r : combos) next.push_back(std::move(r));
    rays = std::move(next);
  };

  for (const ZVec& e : eqs)
    if (!is_zero_vec(e)) cut_equality(e);
  for (const ZVec& a : ineqs)
    if (!is_zero_vec(a)) cut_inequality(a);

  VRep out;
  out.lineality = lin;
  std::set<ZVec> seen;
  for (const DdRay& r : rays)
    if (seen.insert(r.v).second) out.rays.push_back(r.v);
  return out;
}

std::vector<ZVec> canonical_mod(const std::vector<ZVec>& vecs,
                                const std::vector<ZVec>& kill_basis) {
  std::set<ZVec> out;
  for (const ZVec& v : vecs) {
    QVec p = project_off(kill_basis, to_rational(v));
    ZVec pr = primitive(p);
    if (!is_zero_vec(pr)) out.insert(pr);
  }
  return std::vector<ZVec>(out.begin(), out.end());
}

std::vector<ZVec> matrix_columns_or_empty(const IntMatrix& m) {
  std::vector<ZVec> out;
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

std::vector<ZVec> canonical_lattice_basis(const std::vector<ZVec>& gens,
                                          std::size_t rank) {
  if (gens.empty()) return {};
  IntMatrix m = IntMatrix::from_columns(gens);
  if (m.rows() != rank) throw std::invalid_argument("rank mismatch");
  return matrix_columns_or_empty(saturate(m));
}

std::vector<ZVec> orthogonal_complement_basis(const std::vector<ZVec>& gens,
                                              std::size_t rank) {
  if (gens.empty()) {
    std::vector<ZVec> full;
    for (std::size_t i = 0; i < rank; ++i) {
      ZVec e(rank, Int(0));
      e[i] = 1;
      full.push_back(e);
    }
    return full;
  }
  IntMatrix rows = IntMatrix::from_columns(gens).transposed();
  KernelImageCokernel kic = kernel_image_cokernel(rows);
  if (kic.kernel_basis.cols() == 0) return {};
  return matrix_columns_or_empty(hnf_column_basis(kic.kernel_basis));
}

}  // namespace

Cone Cone::from_generators(std::size_t ambient_rank,
                           const std::vector<ZVec>& generators,
                           const std::vector<ZVec>& lineality) {
  for (const ZVec& g : generators)
    if (g.size() != ambient_rank)
      throw std::invalid_argument("generator rank mismatch");
  for (const ZVec& l : lineality)
    if (l.size() != ambient_rank)
      throw std::invalid_argument("lineality rank mismatch");
  VRep dual = dd_h_to_v(ambient_rank, generators, lineality);
  VRep primal = dd_h_to_v(ambient_rank, dual.rays, dual.lineality);

  Cone c;
  c.ambient_ = ambient_rank;
  c.lineality_ = canonical_lattice_basis(primal.lineality, ambient_rank);
  c.rays_ = canonical_mod(primal.rays, c.lineality_);

  std::vector<ZVec> span_gens = c.rays_;
  span_gens.insert(span_gens.end(), c.lineality_.begin(), c.lineality_.end());
  c.span_complement_ = orthogonal_complement_basis(span_gens, ambient_rank);
  c.dim_ = ambient_rank - c.span_complement_.size();
  c.facet_normals_ = canonical_mod(dual.rays, c.span_complement_);
  return c;
}

Cone Cone::from_rays(std::size_t ambient_rank,
                     const std::vector<ZVec>& generators) {
  return from_generators(ambient_rank, generators, {});
}

Cone Cone::from_inequalities(std::size_t ambient_rank,
                             const std::vector<ZVec>& inequalities,
                             const std::vector<ZVec>& equalities) {
  VRep primal = dd_h_to_v(ambient_rank, inequalities, equalities);
  return from_generators(ambient_rank, primal.rays, primal.lineality);
}

Cone Cone::zero(std::size_t ambient_rank) {
  return from_generators(ambient_rank, {}, {});
}

Cone Cone::full_space(std::size_t ambient_rank) {
  std::vector<ZVec> lin;
  for (std::size_t i = 0; i < ambient_rank; ++i) {
    ZVec e(ambient_rank, Int(0));
    e[i] = 1;
    lin.push_back(e);
  }
  return from_generators(ambient_rank, {}, lin);
}

QVec Cone::relative_interior_point() const {
  QVec p(ambient_, Rat(0));
  for (const ZVec& r : rays_)
    for (std::size_t i = 0; i < ambient_; ++i) p[i] += Rat(r[i]);
  return p;
}

IntMatrix Cone::span_lattice_basis() const {
  std::vector<ZVec> gens = rays_;
  gens.insert(gens.end(), lineality_.begin(), lineality_.end());
  if (gens.empty()) return IntMatrix(ambient_, 0);
  return saturate(IntMatrix::from_columns(gens));
}

bool Cone::operator<(const Cone& other) const {
  if (dim_ != other.dim_) return dim_ < other.dim_;
  if (lineality_ != other.lineality_) return lineality_ < other.lineality_;
  if (rays_ != other.rays_) return rays_ < other.rays_;
  return facet_normals_ < other.facet_normals_;
}

Cone dual_cone(const Cone& c) {
  Cone d;
  d.ambient_ = c.ambient_;
  d.rays_ = c.facet_normals_;
  d.lineality_ = c.span_complement_;
  d.facet_normals_ = c.rays_;
  d.span_complement_ = c.lineality_;
  d.dim_ = c.ambient_ - c.lineality_.size();
  return d;
}

Membership membership(const Cone& c, const QVec& x) {
  if (x.size() != c.ambient_rank())
    throw std::invalid_argument("membership: rank mismatch");
  for (const ZVec& sc : c.span_complement())
    if (dotq(sc, x) != 0) return Membership::outside;
  bool strict = true;
  for (const ZVec& n : c.facet_normals()) {
    Rat s = dotq(n, x);
    if (s < 0) return Membership::outside;
    if (s == 0) strict = false;
  }
  return strict ? Membership::relative_interior : Membership::boundary;
}

Membership membership(const Cone& c, const ZVec& x) {
  return membership(c, to_rational(x));
}

Cone intersect_cones(const Cone& a, const Cone& b) {
  if (a.ambient_rank() != b.ambient_rank())
    throw std::invalid_argument("intersect: rank mismatch");
  std::vector<ZVec> ineqs = a.facet_normals();
  ineqs.insert(ineqs.end(), b.facet_normals().begin(), b.facet_normals().end());
  std::vector<ZVec> eqs = a.span_complement();
  eqs.insert(eqs.end(), b.span_complement().begin(), b.span_complement().end());
  return Cone::from_inequalities(a.ambient_rank(), ineqs, eqs);
}

Cone map_cone(const IntMatrix& f, const Cone& c) {
  if (f.cols() != c.ambient_rank())
    throw std::invalid_argument("map_cone: rank mismatch");
  std::vector<ZVec> gens, lin;
  for (const ZVec& r : c.rays()) gens.push_back(f.apply(r));
  for (const ZVec& l : c.lineality()) lin.push_back(f.apply(l));
  return Cone::from_generators(f.rows(), gens, lin);
}

bool cone_contains(const Cone& outer, const Cone& inner) {
  for (const ZVec& r : inner.rays())
    if (membership(outer, r) == Membership::outside) return false;
  for (const ZVec& l : inner.lineality()) {
    if (membership(outer, l) == Membership::outside) return false;
    ZVec neg(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
    if (membership(outer, neg) == Membership::outside) return false;
  }
  return true;
}

bool is_face_of(const Cone& face, const Cone& cone) {
  if (face.ambient_rank() != cone.ambient_rank()) return false;
  if (!cone_contains(cone, face)) return false;
  std::vector<ZVec> tight;
  auto vanishes_on_face = [&](const ZVec& n) {
    for (const ZVec& r : face.rays())
      if (dot(n, r) != 0) return false;
    for (const ZVec& l : face.lineality())
      if (dot(n, l) != 0) return false;
    return true;
  };
  for (const ZVec& n : cone.facet_normals())
    if (vanishes_on_face(n)) tight.push_back(n);
  std::vector<ZVec> eqs = cone.span_complement();
  eqs.insert(eqs.end(), tight.begin(), tight.end());
  Cone cut = Cone::from_inequalities(cone.ambient_rank(), cone.facet_normals(),
                                     eqs);
  return cut == face;
}

std::vector<Cone> faces(const Cone& c) {
  std::vector<Cone> out;
  std::deque<Cone> queue;
  std::set<Cone> seen;
  queue.push_back(c);
  seen.insert(c);
  while (!queue.empty()) {
    Cone f = queue.front();
    queue.pop_front();
    out.push_back(f);
    for (const ZVec& n : c.facet_normals()) {
      bool tight_everywhere = true;
      for (const ZVec& r : f.rays())
        if (dot(n, r) != 0) tight_everywhere = false;
      if (tight_everywhere) continue;
      std::vector<ZVec> eqs = f.span_complement();
      eqs.push_back(n);
      Cone cut =
          Cone::from_inequalities(c.ambient_rank(), f.facet_normals(), eqs);
      if (seen.insert(cut).second) queue.push_back(cut);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

AffineSliceResult affine_slice(const IntMatrix& subspace_basis, const QVec& v,
                               const Cone& c) {
  std::size_t n = c.ambient_rank();
  if (v.size() != n || (subspace_basis.cols() > 0 && subspace_basis.rows() != n))
    throw std::invalid_argument("affine_slice: rank mismatch");
  // Homogenize in rank n+1 with slack coordinate s: points (x, s) with
  // x in cone-span, facet normals >= 0, x - s*v in span(subspace), s >= 0.
  std::vector<ZVec> ineqs, eqs;
  for (const ZVec& a : c.facet_normals()) {
    ZVec row(n + 1, Int(0));
    for (std::size_t i = 0; i < n; ++i) row[i] = a[i];
    ineqs.push_back(row);
  }
  ZVec spos(n + 1, Int(0));
  spos[n] = 1;
  ineqs.push_back(spos);
  for (const ZVec& e : c.span_complement()) {
    ZVec row(n + 1, Int(0));
    for (std::size_t i = 0; i < n; ++i) row[i] = e[i];
    eqs.push_back(row);
  }
  std::vector<ZVec> w_complement =
      orthogonal_complement_basis(matrix_columns_or_empty(subspace_basis), n);
  Int denom = 1;
  for (const Rat& q : v) denom = lcm(denom, q.get_den());
  for (const ZVec& w : w_complement) {
    ZVec row(n + 1, Int(0));
    for (std::size_t i = 0; i < n; ++i) row[i] = denom * w[i];
    Rat wv = dotq(w, v) * Rat(denom);
    wv.canonicalize();
    assert(wv.get_den() == 1);
    row[n] = -wv.get_num();
    eqs.push_back(row);
  }
  Cone hat = Cone::from_inequalities(n + 1, ineqs, eqs);

  std::vector<ZVec> positive, horizontal;
  for (const ZVec& r : hat.rays())
    (r[n] > 0 ? positive : horizontal).push_back(r);

  AffineSliceResult out;
  if (positive.empty()) {
    out.kind = AffineSliceResult::Kind::empty;
    return out;
  }
  if (positive.size() == 1 && horizontal.empty() && hat.lineality().empty()) {
    out.kind = AffineSliceResult::Kind::point;
    out.point.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      out.point[i] = Rat(positive[0][i]) / Rat(positive[0][n]);
    out.interior = membership(c, out.point) == Membership::relative_interior;
    return out;
  }
  out.kind = AffineSliceResult::Kind::infinite;
  return out;
}

ConeFiberProduct cone_fiber_product(const Cone& c1, const IntMatrix& f1,
                                    const Cone& c2, const IntMatrix& f2) {
  if (f1.cols() != c1.ambient_rank() || f2.cols() != c2.ambient_rank())
    throw std::invalid_argument("cone_fiber_product: rank mismatch");
  LatticeFiberProduct lfp = lattice_fiber_product(f1, f2);
  // Pull the H-descriptions of both factors back along the inclusion basis.
  IntMatrix top_t = lfp.into_first.transposed();
  IntMatrix bot_t = lfp.into_second.transposed();
  std::vector<ZVec> ineqs, eqs;
  for (const ZVec& a : c1.facet_normals()) ineqs.push_back(top_t.apply(a));
  for (const ZVec& a : c2.facet_normals()) ineqs.push_back(bot_t.apply(a));
  for (const ZVec& e : c1.span_complement()) eqs.push_back(top_t.apply(e));
  for (const ZVec& e : c2.span_complement()) eqs.push_back(bot_t.apply(e));
  ConeFiberProduct out{Cone::from_inequalities(lfp.rank, ineqs, eqs), lfp};
  return out;
}

}  // namespace tropsplit
