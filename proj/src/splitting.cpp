#include "tropsplit/splitting.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <thread>

namespace tropsplit {

namespace {

std::string cone_key(const Cone& c) {
  std::ostringstream os;
  auto dump = [&](const std::vector<ZVec>& vs) {
    os << "{";
    for (const ZVec& v : vs) {
      for (const Int& x : v) os << x << ",";
      os << ";";
    }
    os << "}";
  };
  os << c.ambient_rank() << ":" << c.dim() << ":";
  dump(c.rays());
  dump(c.lineality());
  return os.str();
}

struct FiberLattice {
  std::size_t rank = 0;
  IntMatrix projections;  // stacked factor blocks applied to the basis
  std::vector<std::size_t> offsets;
  IntMatrix base_height;  // common composite to N_B
};

// Iterated fiber product of the factor lattices over the base lattice.
FiberLattice iterated_fiber(const std::vector<const IntMatrix*>& base_maps,
                            const std::vector<std::size_t>& ranks,
                            std::size_t base_rank) {
  FiberLattice out;
  if (base_maps.empty()) {
    out.projections = IntMatrix(0, 0);
    out.base_height = IntMatrix(base_rank, 0);
    return out;
  }
  out.rank = ranks[0];
  out.projections = IntMatrix::identity(ranks[0]);
  out.offsets = {0};
  out.base_height = *base_maps[0];
  std::size_t total = ranks[0];
  for (std::size_t j = 1; j < base_maps.size(); ++j) {
    LatticeFiberProduct fp =
        lattice_fiber_product(out.base_height, *base_maps[j]);
    out.projections = (out.projections * fp.into_first).vstack(fp.into_second);
    out.offsets.push_back(total);
    total += ranks[j];
    out.rank = fp.rank;
    out.base_height = *base_maps[j] * fp.into_second;
  }
  return out;
}

std::vector<ZVec> stacked_generators(const std::vector<Cone>& cones,
                                     bool lineality) {
  std::size_t total = 0;
  for (const Cone& c : cones) total += c.ambient_rank();
  std::vector<ZVec> out;
  std::size_t off = 0;
  for (const Cone& c : cones) {
    const auto& src = lineality ? c.lineality() : c.rays();
    for (const ZVec& v : src) {
      ZVec w(total, Int(0));
      for (std::size_t i = 0; i < v.size(); ++i) w[off + i] = v[i];
      out.push_back(w);
    }
    off += c.ambient_rank();
  }
  return out;
}

void run_chunked(std::size_t total, std::size_t threads,
                 const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || total < 2 * threads) {
    body(0, total);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (total + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(total, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(body, begin, end);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SplittingContext::SplittingContext(SplittingInstance inst)
    : inst_(std::move(inst)) {
  validate_and_build();
}

void SplittingContext::validate_and_build() {
  if (inst_.split_edges.empty())
    throw InstanceError("instance has no split edges");
  std::sort(inst_.split_edges.begin(), inst_.split_edges.end(),
            [](const SplitEdgeData& a, const SplitEdgeData& b) {
              return a.edge < b.edge;
            });

  if (inst_.base_cone.ambient_rank() != inst_.base_rank)
    throw InstanceError("base cone rank mismatch");
  if (inst_.base_rank > 0 && inst_.base_cone.dim() != inst_.base_rank)
    throw InstanceError("base cone must be full-dimensional");
  base_fan_ = std::make_shared<Fan>(
      Fan::from_cones(inst_.base_rank, {inst_.base_cone}));

  std::set<std::string> split_ids;
  for (const SplitEdgeData& e : inst_.split_edges) {
    if (!split_ids.insert(e.edge).second)
      throw InstanceError("duplicate split edge: " + e.edge);
    const TypeEdge* te = inst_.glued_type.find_edge(e.edge);
    if (!te) throw InstanceError("split edge not in the glued type: " + e.edge);
    if (!e.fan) throw InstanceError("split edge without a fan: " + e.edge);
    if (e.base_map.rows() != inst_.base_rank ||
        e.base_map.cols() != e.fan->lattice_rank())
      throw InstanceError("base map shape mismatch on edge " + e.edge);
    // the fan must live over the base cone
    make_fan_morphism(e.fan, base_fan_, e.base_map);
    if (e.stratum_cone >= e.fan->size())
      throw InstanceError("stratum cone out of range on edge " + e.edge);
    const Cone& stratum = e.fan->cone(e.stratum_cone);
    if (!(inst_.complex.cell(te->cell) == stratum))
      throw InstanceError("edge cell disagrees with the stratum cone on " +
                          e.edge);
    if (!(map_cone(e.base_map, stratum) == inst_.base_cone))
      throw InstanceError("stratum cone does not surject onto the base on " +
                          e.edge);
  }
  if (split_ids != inst_.glued_type.split_set)
    throw InstanceError(
        "the split set of the glued type must list exactly the split edges");

  for (const std::string& v : inst_.complex.validate())
    throw InstanceError("cone complex: " + v);
  ValidationReport vr = validate_type(inst_.glued_type, inst_.complex, true);
  if (!vr.ok) throw InstanceError("glued type: " + vr.violations.front());

  edge_order_.assign(split_ids.begin(), split_ids.end());
  total_np_ = 0;
  for (std::size_t k = 0; k < edge_order_.size(); ++k) {
    edge_index_[edge_order_[k]] = k;
    std::size_t r = inst_.split_edges[k].fan->lattice_rank();
    edge_rank_.push_back(r);
    edge_offset_.push_back(total_np_);
    total_np_ += r;
  }
  if (inst_.displacement.size() != total_np_)
    throw InstanceError("displacement vector has the wrong rank");

  split_ = split_type(inst_.glued_type, split_ids);
  for (const DecoratedType& comp : split_.components)
    comp_eval_.push_back(evaluation_cone(comp, inst_.complex));

  // component fiber lattices N_tau_i over the base
  for (const DecoratedType& comp : split_.components) {
    ComponentLattice cl;
    for (const std::string& leg : comp.split_set) {
      cl.legs.push_back(leg);
      cl.leg_edge.push_back(leg.substr(0, leg.size() - 1));
    }
    std::vector<const IntMatrix*> maps;
    std::vector<std::size_t> ranks;
    for (const std::string& e : cl.leg_edge) {
      const SplitEdgeData& d = inst_.split_edges[edge_index_.at(e)];
      maps.push_back(&d.base_map);
      ranks.push_back(d.fan->lattice_rank());
    }
    FiberLattice fl = iterated_fiber(maps, ranks, inst_.base_rank);
    cl.rank = fl.rank;
    cl.projections = fl.projections;
    cl.leg_offset = fl.offsets;
    comp_lat_.push_back(std::move(cl));
  }
  psi_domain_rank_ = 0;
  for (const ComponentLattice& cl : comp_lat_) {
    comp_col_offset_.push_back(psi_domain_rank_);
    psi_domain_rank_ += cl.rank;
  }

  // glued fiber lattice N_tau, one factor per edge
  {
    std::vector<const IntMatrix*> maps;
    std::vector<std::size_t> ranks;
    for (const std::string& e : edge_order_) {
      const SplitEdgeData& d = inst_.split_edges[edge_index_.at(e)];
      maps.push_back(&d.base_map);
      ranks.push_back(d.fan->lattice_rank());
    }
    FiberLattice fl = iterated_fiber(maps, ranks, inst_.base_rank);
    glued_fiber_rank_ = fl.rank;
    glued_projections_ = fl.projections;
  }

  // diagonal N_tau -> product of the component lattices
  diag_ = IntMatrix(psi_domain_rank_, glued_fiber_rank_);
  for (std::size_t i = 0; i < comp_lat_.size(); ++i) {
    const ComponentLattice& cl = comp_lat_[i];
    IntMatrix rhs(cl.projections.rows(), glued_fiber_rank_);
    for (std::size_t k = 0; k < cl.legs.size(); ++k) {
      std::size_t e = edge_index_.at(cl.leg_edge[k]);
      for (std::size_t r = 0; r < edge_rank_[e]; ++r)
        for (std::size_t c = 0; c < glued_fiber_rank_; ++c)
          rhs.at(cl.leg_offset[k] + r, c) =
              glued_projections_.at(edge_offset_[e] + r, c);
    }
    auto block = solve_integer(cl.projections, rhs);
    if (!block)
      throw InstanceError(
          "the glued fiber lattice does not project to component " +
          std::to_string(i));
    for (std::size_t r = 0; r < cl.rank; ++r)
      for (std::size_t c = 0; c < glued_fiber_rank_; ++c)
        diag_.at(comp_col_offset_[i] + r, c) = block->at(r, c);
  }

  // psi: difference of the two leg projections on each edge factor
  psi_ = IntMatrix(total_np_, psi_domain_rank_);
  for (std::size_t k = 0; k < edge_order_.size(); ++k) {
    const auto& pair = split_.pairing.at(edge_order_[k]);
    auto add_side = [&](std::size_t comp, const std::string& leg, int sign) {
      const ComponentLattice& cl = comp_lat_[comp];
      std::size_t li =
          std::find(cl.legs.begin(), cl.legs.end(), leg) - cl.legs.begin();
      for (std::size_t r = 0; r < edge_rank_[k]; ++r)
        for (std::size_t c = 0; c < cl.rank; ++c)
          psi_.at(edge_offset_[k] + r, comp_col_offset_[comp] + c) +=
              Int(sign) * cl.projections.at(cl.leg_offset[li] + r, c);
    };
    add_side(pair.tail_component, pair.tail_leg, +1);
    add_side(pair.head_component, pair.head_leg, -1);
  }

  glued_eval_ = evaluation_cone(inst_.glued_type, inst_.complex);

  std::vector<DecoratedType> scopes = inst_.ambient_types;
  if (scopes.empty()) scopes.push_back(inst_.glued_type);
  for (const DecoratedType& omega : scopes)
    ambients_.push_back(build_ambient(omega));
}

SplittingContext::AmbientGeometry SplittingContext::build_ambient(
    const DecoratedType& omega_in) const {
  const DecoratedType& tau = inst_.glued_type;
  DecoratedType omega = omega_in;
  omega.sort_members();
  ValidationReport vr = validate_type(omega, inst_.complex, true);
  if (!vr.ok) throw InstanceError("ambient type: " + vr.violations.front());
  if (omega.split_set != tau.split_set)
    throw InstanceError("ambient type must carry the same split set");

  // Derive the contraction: edges of omega missing from tau are contracted;
  // every contracted group must contain exactly one vertex of tau.
  std::map<std::string, std::optional<std::string>> edge_map;
  std::set<std::string> contracted;
  for (const TypeEdge& e : omega.edges) {
    if (tau.find_edge(e.id)) {
      edge_map[e.id] = e.id;
    } else {
      edge_map[e.id] = std::nullopt;
      contracted.insert(e.id);
    }
  }
  std::map<std::string, std::string> parent;
  for (const TypeVertex& v : omega.vertices) parent[v.id] = v.id;
  std::function<std::string(std::string)> find = [&](std::string x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const std::string& eid : contracted) {
    const TypeEdge* e = omega.find_edge(eid);
    parent[find(e->tail)] = find(e->head);
  }
  std::map<std::string, std::string> group_target;
  for (const TypeVertex& v : omega.vertices) {
    if (!tau.find_vertex(v.id)) continue;
    std::string root = find(v.id);
    if (group_target.count(root))
      throw InstanceError("ambient type merges two vertices of the glued type");
    group_target[root] = v.id;
  }
  std::map<std::string, std::string> vertex_map;
  for (const TypeVertex& v : omega.vertices) {
    auto it = group_target.find(find(v.id));
    if (it == group_target.end())
      throw InstanceError(
          "ambient vertex group contains no vertex of the glued type");
    vertex_map[v.id] = it->second;
  }
  if (!is_contraction(omega, tau, vertex_map, edge_map, inst_.complex))
    throw InstanceError("ambient type does not contract to the glued type");

  AmbientGeometry ag;
  SplitResult os = split_type(omega, tau.split_set);
  if (os.components.size() != split_.components.size())
    throw InstanceError("ambient type splits into a different component count");
  std::vector<std::size_t> match(os.components.size(), os.components.size());
  for (std::size_t j = 0; j < os.components.size(); ++j) {
    std::set<std::size_t> hits;
    for (const TypeVertex& w : os.components[j].vertices)
      for (std::size_t i = 0; i < split_.components.size(); ++i)
        if (split_.components[i].find_vertex(vertex_map.at(w.id)))
          hits.insert(i);
    if (hits.size() != 1)
      throw InstanceError("ambient component does not match a unique piece");
    match[j] = *hits.begin();
  }
  ag.comps.resize(os.components.size());
  for (std::size_t j = 0; j < os.components.size(); ++j) {
    if (std::count(match.begin(), match.end(), match[j]) != 1)
      throw InstanceError("two ambient components map to the same piece");
    ag.comps[match[j]] = os.components[j];
  }

  std::size_t off = 0;
  for (std::size_t i = 0; i < ag.comps.size(); ++i) {
    std::map<std::string, std::string> vm;
    std::map<std::string, std::optional<std::string>> em;
    for (const TypeVertex& w : ag.comps[i].vertices)
      vm[w.id] = vertex_map.at(w.id);
    for (const TypeEdge& e : ag.comps[i].edges) em[e.id] = edge_map.at(e.id);
    if (!is_contraction(ag.comps[i], split_.components[i], vm, em,
                        inst_.complex))
      throw InstanceError("ambient component does not contract to its piece");

    EvaluationCone ev = evaluation_cone(ag.comps[i], inst_.complex);

    // embedding of the tau_i evaluation cone into the omega_i coordinates
    const EvaluationCone& tev = comp_eval_[i];
    IntMatrix phi(ev.ambient_rank(), tev.ambient_rank());
    for (const auto& le : ev.legend) {
      using K = EvaluationCone::Legend::Kind;
      if (le.kind == K::vertex_block) {
        const std::string& tau_v = vm.at(le.id);
        const auto& tb = tev.block(tau_v);
        auto a = inst_.complex.arrow(
            split_.components[i].find_vertex(tau_v)->cell,
            ag.comps[i].find_vertex(le.id)->cell);
        if (!a) throw InstanceError("missing arrow for ambient embedding");
        for (std::size_t r = 0; r < le.rank; ++r)
          for (std::size_t c = 0; c < tb.rank; ++c)
            phi.at(le.offset + r, tb.offset + c) = a->at(r, c);
      } else if (le.kind == K::edge_length) {
        const auto& target = em.at(le.id);
        if (target) phi.at(le.offset, tev.block(*target).offset) = 1;
      } else {
        phi.at(le.offset, tev.marking_block(le.id).offset) = 1;
      }
    }
    if (!(ev.evt * phi == tev.evt))
      throw InstanceError("evaluation maps do not restrict along the face");
    Cone tau_face = map_cone(phi, tev.cone);
    if (!is_face_of(tau_face, ev.cone))
      throw InstanceError(
          "the glued-piece cone is not a face of the ambient cone");

    auto evb = solve_integer(comp_lat_[i].projections, ev.evt);
    if (!evb)
      throw InstanceError(
          "evaluation map does not factor through the base fiber product");

    ag.eval.push_back(std::move(ev));
    ag.embed_tau.push_back(std::move(phi));
    ag.tau_face.push_back(std::move(tau_face));
    ag.ev_bar.push_back(std::move(*evb));
    ag.comp_offset.push_back(off);
    off += ag.eval.back().ambient_rank();
  }
  ag.total_ambient = off;

  // epsilon: per-edge difference of the two marked evaluations
  ag.epsilon = IntMatrix(total_np_, ag.total_ambient);
  for (std::size_t k = 0; k < edge_order_.size(); ++k) {
    const auto& pair = split_.pairing.at(edge_order_[k]);
    auto add_side = [&](std::size_t comp, const std::string& leg, int sign) {
      const EvaluationCone& ev = ag.eval[comp];
      std::size_t row = 0;
      for (std::size_t m = 0; m < ev.marking_order.size(); ++m) {
        if (ev.marking_order[m] == leg) break;
        row += ev.marking_rank[m];
      }
      for (std::size_t r = 0; r < edge_rank_[k]; ++r)
        for (std::size_t c = 0; c < ev.ambient_rank(); ++c)
          ag.epsilon.at(edge_offset_[k] + r, ag.comp_offset[comp] + c) +=
              Int(sign) * ev.evt.at(row + r, c);
    };
    add_side(pair.tail_component, pair.tail_leg, +1);
    add_side(pair.head_component, pair.head_leg, -1);
  }
  return ag;
}

const IntMatrix& SplittingContext::epsilon_map(
    std::size_t ambient_index) const {
  return ambients_.at(ambient_index).epsilon;
}

Int SplittingContext::component_count_N() const {
  return saturation_index(psi_);
}

std::vector<SplittingContext::Candidate>
SplittingContext::dimension_candidates() const {
  long long direct = 0;
  for (const ComponentLattice& cl : comp_lat_)
    direct += static_cast<long long>(cl.rank);
  direct -= static_cast<long long>(glued_fiber_rank_);
  long long required =
      static_cast<long long>(glued_eval_.cone.dim()) + direct;

  std::vector<Candidate> out;
  if (required < 0) return out;
  for (std::size_t a = 0; a < ambients_.size(); ++a) {
    const AmbientGeometry& ag = ambients_[a];
    std::vector<std::vector<Cone>> comp_faces(ag.eval.size());
    for (std::size_t i = 0; i < ag.eval.size(); ++i)
      for (const Cone& f : faces(ag.eval[i].cone))
        if (cone_contains(f, ag.tau_face[i])) comp_faces[i].push_back(f);

    std::size_t tuples = 1;
    for (const auto& fs : comp_faces) tuples *= fs.size();
    std::vector<std::optional<Candidate>> results(tuples);

    run_chunked(tuples, threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t t = begin; t < end; ++t) {
        std::size_t rest = t;
        std::vector<std::size_t> pick(ag.eval.size());
        long long dim_sum = 0;
        for (std::size_t i = 0; i < ag.eval.size(); ++i) {
          pick[i] = rest % comp_faces[i].size();
          rest /= comp_faces[i].size();
          dim_sum += static_cast<long long>(comp_faces[i][pick[i]].dim());
        }
        if (dim_sum != required) continue;
        Candidate c;
        c.ambient_index = a;
        c.face_index = pick;
        for (std::size_t i = 0; i < pick.size(); ++i)
          c.faces.push_back(comp_faces[i][pick[i]]);
        c.product_face = Cone::from_generators(
            ag.total_ambient, stacked_generators(c.faces, false),
            stacked_generators(c.faces, true));
        c.span_basis = c.product_face.span_lattice_basis();
        c.dim = c.product_face.dim();
        c.image_cone = map_cone(ag.epsilon, c.product_face);
        results[t] = std::move(c);
      }
    });
    for (auto& r : results)
      if (r) out.push_back(std::move(*r));
  }
  return out;
}

CandidateDescriptor SplittingContext::describe(const Candidate& c) const {
  const AmbientGeometry& ag = ambients_[c.ambient_index];
  CandidateDescriptor d;
  d.ambient_index = c.ambient_index;
  d.faces = c.faces;
  d.image_cone = c.image_cone;
  for (std::size_t i = 0; i < c.faces.size(); ++i) {
    d.face_dims.push_back(c.faces[i].dim());
    std::vector<std::string> contracted;
    for (const TypeEdge& e : ag.comps[i].edges) {
      std::size_t off = ag.eval[i].block(e.id).offset;
      bool zero = true;
      for (const ZVec& r : c.faces[i].rays())
        if (r[off] != 0) zero = false;
      for (const ZVec& l : c.faces[i].lineality())
        if (l[off] != 0) zero = false;
      if (zero) contracted.push_back(e.id);
    }
    d.contracted_edges.push_back(contracted);
  }
  return d;
}

Int SplittingContext::m_of(const Candidate& c) const {
  const AmbientGeometry& ag = ambients_[c.ambient_index];
  return saturation_index(ag.epsilon * c.span_basis);
}

Int SplittingContext::m_prime_of(const Candidate& c) const {
  const AmbientGeometry& ag = ambients_[c.ambient_index];
  // [prod N_tau_i : im(diagonal) + prod im(ev_bar restricted to the face)]
  IntMatrix gens = diag_;
  for (std::size_t i = 0; i < c.faces.size(); ++i) {
    IntMatrix span = c.faces[i].span_lattice_basis();
    IntMatrix img = ag.ev_bar[i] * span;
    IntMatrix lifted(psi_domain_rank_, img.cols());
    for (std::size_t r = 0; r < img.rows(); ++r)
      for (std::size_t cc = 0; cc < img.cols(); ++cc)
        lifted.at(comp_col_offset_[i] + r, cc) = img.at(r, cc);
    gens = gens.hstack(lifted);
  }
  auto idx = sublattice_index(gens, psi_domain_rank_);
  if (!idx)
    throw std::logic_error(
        "infinite component-model index on a surviving candidate");
  return *idx;
}

DisplacementReport SplittingContext::check_displacement() const {
  return check_displacement(inst_.displacement);
}

DisplacementReport SplittingContext::check_displacement(const ZVec& v) const {
  if (v.size() != total_np_)
    throw InstanceError("displacement vector has the wrong rank");
  DisplacementReport rep;

  // Def-style audit of both dimension counts
  long long sum_ranks = 0;
  for (const ComponentLattice& cl : comp_lat_) sum_ranks += cl.rank;
  rep.dims.dim_tau_tilde = glued_eval_.cone.dim();
  rep.dims.direct_rank_difference =
      sum_ranks - static_cast<long long>(glued_fiber_rank_);
  rep.dims.required_face_dim =
      static_cast<long long>(rep.dims.dim_tau_tilde) +
      rep.dims.direct_rank_difference;
  long long np_sum = static_cast<long long>(total_np_);
  long long s = static_cast<long long>(edge_order_.size());
  long long r = static_cast<long long>(split_.components.size());
  long long rb = static_cast<long long>(inst_.base_rank);
  rep.dims.printed_closed_form = np_sum - (s - r - 1) * rb;
  rep.dims.corrected_closed_form = np_sum - (s - r + 1) * rb;
  rep.dims.direct_matches_printed =
      rep.dims.direct_rank_difference == rep.dims.printed_closed_form;
  rep.dims.direct_matches_corrected =
      rep.dims.direct_rank_difference == rep.dims.corrected_closed_form;
  rep.dims.total_edge_rank = total_np_;

  IntMatrix vcol(total_np_, 1);
  for (std::size_t i = 0; i < total_np_; ++i) vcol.at(i, 0) = v[i];
  rep.displacement_in_psi_image = solve_integer(psi_, vcol).has_value();
  if (!rep.displacement_in_psi_image) {
    rep.verdict = Verdict::not_generic;
    rep.witnesses.push_back(
        {CandidateDescriptor{}, "displacement lies outside the image of psi"});
  }

  std::vector<Candidate> candidates = dimension_candidates();
  rep.candidates_after_dimension_filter = candidates.size();

  if (rep.dims.required_face_dim > np_sum && !candidates.empty()) {
    rep.verdict = Verdict::unsatisfiable;
    std::ostringstream os;
    os << "required face dimension " << rep.dims.required_face_dim
       << " exceeds the displacement lattice rank " << np_sum
       << "; the evaluation map cannot be injective for any displacement";
    rep.witnesses.push_back({describe(candidates.front()), os.str()});
    return rep;
  }

  QVec vq = to_rational(v);
  for (const Candidate& c : candidates) {
    Membership mem = membership(c.image_cone, vq);
    if (mem == Membership::outside) continue;  // fails condition (iii)
    ++rep.survivors;
    bool injective =
        rank_of(ambients_[c.ambient_index].epsilon * c.span_basis) == c.dim;
    if (mem != Membership::relative_interior) {
      rep.verdict = Verdict::not_generic;
      rep.witnesses.push_back(
          {describe(c),
           "displacement lies on the boundary of the image cone"});
    }
    if (!injective) {
      rep.verdict = Verdict::not_generic;
      rep.witnesses.push_back(
          {describe(c), "evaluation map is not injective on the face"});
    }
  }
  return rep;
}

DeltaResult SplittingContext::enumerate_delta() const {
  return enumerate_delta(inst_.displacement);
}

DeltaResult SplittingContext::enumerate_delta(const ZVec& v) const {
  DisplacementReport rep = check_displacement(v);
  if (rep.verdict != Verdict::generic)
    throw InstanceError(rep.verdict == Verdict::unsatisfiable
                            ? "no generic displacement vector exists"
                            : "displacement vector is not generic");

  Int n = component_count_N();
  QVec vq = to_rational(v);
  std::vector<Candidate> survivors;
  for (Candidate& c : dimension_candidates()) {
    if (membership(c.image_cone, vq) != Membership::relative_interior)
      continue;
    survivors.push_back(std::move(c));
  }

  struct Keyed {
    DeltaTerm term;
    std::string key;
    std::size_t ambient;
  };
  std::vector<Keyed> keyed;
  for (const Candidate& c : survivors) {
    const AmbientGeometry& ag = ambients_[c.ambient_index];
    DeltaTerm term;
    term.rho = describe(c);
    term.multiplicity = m_of(c);
    term.m_prime = m_prime_of(c);
    if (n * term.m_prime != term.multiplicity)
      throw std::logic_error(
          "component count times the model multiplicity does not equal the "
          "splitting multiplicity");
    std::ostringstream key;
    key << term.multiplicity << "|" << term.m_prime << "|"
        << cone_key(c.image_cone);
    for (std::size_t i = 0; i < c.faces.size(); ++i)
      key << "#" << c.faces[i].dim() << ":"
          << cone_key(map_cone(ag.ev_bar[i], c.faces[i]));
    keyed.push_back({std::move(term), key.str(), c.ambient_index});
  }

  // the scopes agree when every ambient produced the same key multiset
  DeltaResult out;
  out.scoping_consistent = true;
  if (ambients_.size() > 1) {
    std::map<std::size_t, std::multiset<std::string>> per_ambient;
    for (const Keyed& k : keyed) per_ambient[k.ambient].insert(k.key);
    for (std::size_t a = 1; a < ambients_.size(); ++a)
      if (per_ambient[a] != per_ambient[0]) out.scoping_consistent = false;
  }

  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.ambient < b.ambient;
  });
  std::set<std::string> seen;
  for (Keyed& k : keyed)
    if (seen.insert(k.key).second) out.terms.push_back(std::move(k.term));
  return out;
}

SplittingFormula SplittingContext::assemble_formula(
    const DeltaResult& delta, const Int& n,
    const std::optional<std::vector<KunnethTerm>>& kunneth) const {
  SplittingFormula f;
  f.terms = delta.terms;
  f.component_count = n;
  f.scoping_consistent = delta.scoping_consistent;

  std::size_t r = split_.components.size();
  std::ostringstream os;
  os << "delta_*[M(tau)]^virt = ";
  if (f.terms.empty()) {
    os << "0";
  } else {
    for (std::size_t t = 0; t < f.terms.size(); ++t) {
      if (t) os << " + ";
      os << f.terms[t].multiplicity;
      for (std::size_t i = 0; i < r; ++i)
        os << (i ? " x " : "*") << "[M_rho" << (t + 1) << "(tau_" << (i + 1)
           << ")]^virt";
    }
  }
  if (kunneth) {
    os << "\n";
    os << "delta_* int_{[M(tau)]^virt} e*(beta) = ";
    bool first = true;
    if (f.terms.empty() || kunneth->empty()) os << "0";
    for (std::size_t mu = 0; mu < kunneth->size(); ++mu) {
      const KunnethTerm& kt = (*kunneth)[mu];
      if (kt.factors.size() != r)
        throw InstanceError("Kunneth term arity mismatch");
      for (std::size_t t = 0; t < f.terms.size(); ++t) {
        if (!first) os << " + ";
        first = false;
        os << "(" << kt.coefficient << ")*" << f.terms[t].multiplicity;
        for (std::size_t i = 0; i < r; ++i)
          os << "*int_{[M_rho" << (t + 1) << "(tau_" << (i + 1)
             << ")]^virt} e*(" << kt.factors[i] << ")";
      }
    }
  }
  f.rendering = os.str();
  return f;
}

std::optional<ZVec> SplittingContext::find_displacement(long bound) const {
  if (bound < 0) return std::nullopt;
  KernelImageCokernel kic = kernel_image_cokernel(psi_);
  const IntMatrix& basis = kic.image_basis;
  std::size_t k = basis.cols();

  // graded lexicographic scan of coefficient tuples, value order
  // 0 < 1 < -1 < 2 < -2 < ...
  std::vector<long> values;
  values.push_back(0);
  for (long b = 1; b <= bound; ++b) {
    values.push_back(b);
    values.push_back(-b);
  }
  std::vector<std::vector<long>> tuples;
  std::vector<long> cur(k, 0);
  std::function<void(std::size_t)> gen = [&](std::size_t pos) {
    if (pos == k) {
      tuples.push_back(cur);
      return;
    }
    for (long v : values) {
      cur[pos] = v;
      gen(pos + 1);
    }
  };
  gen(0);
  auto grade = [](const std::vector<long>& t) {
    long g = 0;
    for (long x : t) g += std::abs(x);
    return g;
  };
  auto rank_in_order = [&](long x) {
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] == x) return i;
    return values.size();
  };
  std::stable_sort(tuples.begin(), tuples.end(),
                   [&](const std::vector<long>& a, const std::vector<long>& b) {
                     if (grade(a) != grade(b)) return grade(a) < grade(b);
                     for (std::size_t i = 0; i < k; ++i)
                       if (a[i] != b[i])
                         return rank_in_order(a[i]) < rank_in_order(b[i]);
                     return false;
                   });

  for (const std::vector<long>& t : tuples) {
    ZVec v(total_np_, Int(0));
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < total_np_; ++i)
        v[i] += Int(t[j]) * basis.at(i, j);
    DisplacementReport rep = check_displacement(v);
    if (rep.verdict == Verdict::unsatisfiable) return std::nullopt;
    if (rep.verdict == Verdict::generic) return v;
  }
  return std::nullopt;
}

}  // namespace tropsplit
