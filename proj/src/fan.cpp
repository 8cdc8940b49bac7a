#include "tropsplit/fan.hpp"

#include <algorithm>
#include <set>

namespace tropsplit {

Fan Fan::build(std::size_t lattice_rank, const std::vector<ZVec>& rays,
               const std::vector<std::vector<std::size_t>>& cones) {
  std::set<ZVec> seen;
  for (const ZVec& r : rays) {
    if (r.size() != lattice_rank)
      throw FanError("bad ray", "ray rank mismatch");
    if (r != primitive(r) || std::all_of(r.begin(), r.end(),
                                         [](const Int& x) { return x == 0; }))
      throw FanError("bad ray", "ray must be primitive and nonzero");
    if (!seen.insert(r).second)
      throw FanError("bad ray", "duplicate ray");
  }
  std::vector<Cone> cs;
  for (const auto& idx : cones) {
    std::vector<ZVec> gens;
    for (std::size_t i : idx) {
      if (i >= rays.size()) throw FanError("bad ray", "ray index out of range");
      gens.push_back(rays[i]);
    }
    cs.push_back(Cone::from_rays(lattice_rank, gens));
  }
  return from_cones(lattice_rank, std::move(cs));
}

Fan Fan::from_cones(std::size_t lattice_rank, std::vector<Cone> cones) {
  Fan f;
  f.rank_ = lattice_rank;
  f.cones_ = std::move(cones);
  f.cones_.push_back(Cone::zero(lattice_rank));
  f.close_and_validate();
  return f;
}

void Fan::close_and_validate() {
  std::set<Cone> all;
  for (const Cone& c : cones_) {
    if (c.ambient_rank() != rank_)
      throw FanError("bad ray", "cone rank mismatch");
    if (!c.is_strongly_convex())
      throw FanError("not strongly convex", "fan cone contains a line");
    for (const Cone& face : faces(c)) all.insert(face);
  }
  cones_.assign(all.begin(), all.end());
  std::sort(cones_.begin(), cones_.end());
  for (std::size_t i = 0; i < cones_.size(); ++i)
    for (std::size_t j = i + 1; j < cones_.size(); ++j) {
      Cone meet = intersect_cones(cones_[i], cones_[j]);
      if (!is_face_of(meet, cones_[i]) || !is_face_of(meet, cones_[j]))
        throw FanError("overlap", "two cones intersect in a non-face");
    }
  faces_of_.assign(cones_.size(), {});
  for (std::size_t i = 0; i < cones_.size(); ++i)
    for (std::size_t j = 0; j < cones_.size(); ++j)
      if (is_face_of(cones_[j], cones_[i])) faces_of_[i].push_back(j);
}

std::size_t Fan::find(const Cone& c) const {
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i] == c) return i;
  return cones_.size();
}

std::size_t Fan::minimal_cone_containing(const Cone& c) const {
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cone_contains(cones_[i], c)) candidates.push_back(i);
  if (candidates.empty())
    throw FanError("unsupported", "cone lies outside the fan support");
  std::size_t best = candidates[0];
  for (std::size_t i : candidates)
    if (cones_[i].dim() < cones_[best].dim()) best = i;
  for (std::size_t i : candidates)
    if (!cone_contains(cones_[i], cones_[best]))
      throw FanError("not unique", "no unique minimal containing cone");
  return best;
}

bool Fan::is_face(std::size_t face, std::size_t of) const {
  const auto& fs = faces_of_.at(of);
  return std::find(fs.begin(), fs.end(), face) != fs.end();
}

std::vector<ZVec> Fan::ray_vectors() const {
  std::vector<ZVec> out;
  for (const Cone& c : cones_)
    if (c.dim() == 1 && c.is_strongly_convex()) out.push_back(c.rays()[0]);
  return out;
}

bool Fan::is_complete() const {
  if (rank_ == 0) return true;
  std::vector<std::size_t> top;
  for (std::size_t i = 0; i < cones_.size(); ++i)
    if (cones_[i].dim() == rank_) top.push_back(i);
  if (top.empty()) return false;
  for (std::size_t w = 0; w < cones_.size(); ++w) {
    if (cones_[w].dim() != rank_ - 1) continue;
    std::size_t count = 0;
    for (std::size_t t : top)
      if (is_face(w, t)) ++count;
    if (count != 2) return false;
  }
  return true;
}

FanMorphism make_fan_morphism(FanPtr source, FanPtr target,
                              IntMatrix lattice_map) {
  if (lattice_map.rows() != target->lattice_rank() ||
      lattice_map.cols() != source->lattice_rank())
    throw FanError("unsupported", "lattice map shape mismatch");
  FanMorphism m{std::move(source), std::move(target), std::move(lattice_map), {}};
  m.cone_assignment.resize(m.source->size());
  for (std::size_t i = 0; i < m.source->size(); ++i) {
    Cone image = map_cone(m.lattice_map, m.source->cone(i));
    m.cone_assignment[i] = m.target->minimal_cone_containing(image);
  }
  return m;
}

StarQuotient star_quotient(const Fan& f, std::size_t tau) {
  const Cone& t = f.cone(tau);
  IntMatrix span = t.span_lattice_basis();
  KernelImageCokernel kic = kernel_image_cokernel(span);
  IntMatrix q = kic.cokernel.projection_to_free;

  std::vector<Cone> images;
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.is_face(tau, i)) continue;
    images.push_back(map_cone(q, f.cone(i)));
    sources.push_back(i);
  }
  StarQuotient out{Fan::from_cones(q.rows(), images), q, {}};
  for (std::size_t k = 0; k < images.size(); ++k)
    out.cone_map[sources[k]] = out.fan.find(images[k]);
  return out;
}

FanFiberProduct fan_fiber_product(const FanMorphism& f, const FanMorphism& g) {
  if (!(*f.target == *g.target))
    throw FanError("unsupported", "fiber product requires a common target");
  LatticeFiberProduct lfp = lattice_fiber_product(f.lattice_map, g.lattice_map);
  IntMatrix top_t = lfp.into_first.transposed();
  IntMatrix bot_t = lfp.into_second.transposed();
  IntMatrix f_top = f.lattice_map * lfp.into_first;
  IntMatrix f_top_t = f_top.transposed();

  std::vector<Cone> cones;
  for (const Cone& cx : f.source->cones())
    for (const Cone& cz : g.source->cones())
      for (const Cone& cy : f.target->cones()) {
        std::vector<ZVec> ineqs, eqs;
        for (const ZVec& a : cx.facet_normals()) ineqs.push_back(top_t.apply(a));
        for (const ZVec& e : cx.span_complement()) eqs.push_back(top_t.apply(e));
        for (const ZVec& a : cz.facet_normals()) ineqs.push_back(bot_t.apply(a));
        for (const ZVec& e : cz.span_complement()) eqs.push_back(bot_t.apply(e));
        for (const ZVec& a : cy.facet_normals())
          ineqs.push_back(f_top_t.apply(a));
        for (const ZVec& e : cy.span_complement())
          eqs.push_back(f_top_t.apply(e));
        cones.push_back(Cone::from_inequalities(lfp.rank, ineqs, eqs));
      }

  IntMatrix alpha = f.lattice_map.hstack(-g.lattice_map);
  FanFiberProduct out{Fan::from_cones(lfp.rank, std::move(cones)),
                      saturation_index(alpha), lfp, FanMorphism{},
                      FanMorphism{}};
  FanPtr fiber = std::make_shared<Fan>(out.fan);
  out.to_first = make_fan_morphism(fiber, f.source, lfp.into_first);
  out.to_second = make_fan_morphism(fiber, g.source, lfp.into_second);
  return out;
}

std::size_t minimal_cone_over(const FanMorphism& m, std::size_t target_cone) {
  const Cone& target = m.target->cone(target_cone);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < m.source->size(); ++i) {
    Cone image = map_cone(m.lattice_map, m.source->cone(i));
    Cone meet = intersect_cones(image, target);
    if (meet.is_zero_cone() && target.dim() > 0) continue;
    if (membership(target, meet.relative_interior_point()) ==
        Membership::relative_interior)
      candidates.push_back(i);
  }
  if (candidates.empty())
    throw FanError("none found", "no source cone maps onto the interior");
  std::vector<std::size_t> minimal;
  for (std::size_t i : candidates) {
    bool has_smaller = false;
    for (std::size_t j : candidates)
      if (j != i && m.source->is_face(j, i)) has_smaller = true;
    if (!has_smaller) minimal.push_back(i);
  }
  if (minimal.size() != 1)
    throw FanError("not unique", "minimal cone over the stratum is not unique");
  return minimal[0];
}

}  // namespace tropsplit
