#include "tropsplit/tropical_type.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>

namespace tropsplit {

void ConeComplex::add_cell(const std::string& id, Cone cone) {
  if (!cells_.emplace(id, std::move(cone)).second)
    throw std::invalid_argument("duplicate cell id: " + id);
}

void ConeComplex::add_arrow(const std::string& source,
                            const std::string& target, IntMatrix matrix) {
  arrows_.push_back({source, target, std::move(matrix)});
}

bool ConeComplex::has_cell(const std::string& id) const {
  return cells_.count(id) > 0;
}

const Cone& ConeComplex::cell(const std::string& id) const {
  auto it = cells_.find(id);
  if (it == cells_.end()) throw std::invalid_argument("unknown cell: " + id);
  return it->second;
}

std::size_t ConeComplex::cell_rank(const std::string& id) const {
  return cell(id).ambient_rank();
}

std::vector<std::string> ConeComplex::cell_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, c] : cells_) out.push_back(id);
  return out;
}

std::optional<IntMatrix> ConeComplex::arrow(const std::string& from,
                                            const std::string& to) const {
  if (!has_cell(from) || !has_cell(to)) return std::nullopt;
  if (from == to) return IntMatrix::identity(cell_rank(from));
  std::map<std::string, IntMatrix> reached;
  std::deque<std::string> queue;
  reached.emplace(from, IntMatrix::identity(cell_rank(from)));
  queue.push_back(from);
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const ArrowData& a : arrows_) {
      if (a.source != cur || reached.count(a.target)) continue;
      reached.emplace(a.target, a.matrix * reached.at(cur));
      queue.push_back(a.target);
    }
  }
  auto it = reached.find(to);
  if (it == reached.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ConeComplex::validate() const {
  std::vector<std::string> out;
  for (const ArrowData& a : arrows_) {
    if (!has_cell(a.source) || !has_cell(a.target)) {
      out.push_back("arrow references unknown cell " + a.source + "->" +
                    a.target);
      continue;
    }
    const Cone& src = cell(a.source);
    const Cone& dst = cell(a.target);
    if (a.matrix.rows() != dst.ambient_rank() ||
        a.matrix.cols() != src.ambient_rank()) {
      out.push_back("arrow matrix shape mismatch " + a.source + "->" +
                    a.target);
      continue;
    }
    Cone image = map_cone(a.matrix, src);
    if (!is_face_of(image, dst))
      out.push_back("arrow image is not a face of the target: " + a.source +
                    "->" + a.target);
    IntMatrix span = src.span_lattice_basis();
    if (span.cols() > 0) {
      IntMatrix mapped = a.matrix * span;
      if (rank_of(mapped) != src.dim())
        out.push_back("arrow not injective on " + a.source);
      else if (saturation_index(mapped) != 1)
        out.push_back("arrow not saturated on " + a.source);
    }
  }
  return out;
}

const TypeVertex* DecoratedType::find_vertex(const std::string& id) const {
  for (const auto& v : vertices)
    if (v.id == id) return &v;
  return nullptr;
}

const TypeEdge* DecoratedType::find_edge(const std::string& id) const {
  for (const auto& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

const TypeLeg* DecoratedType::find_leg(const std::string& id) const {
  for (const auto& l : legs)
    if (l.id == id) return &l;
  return nullptr;
}

void DecoratedType::sort_members() {
  std::sort(vertices.begin(), vertices.end(),
            [](const TypeVertex& a, const TypeVertex& b) { return a.id < b.id; });
  std::sort(edges.begin(), edges.end(),
            [](const TypeEdge& a, const TypeEdge& b) { return a.id < b.id; });
  std::sort(legs.begin(), legs.end(),
            [](const TypeLeg& a, const TypeLeg& b) { return a.id < b.id; });
  for (auto& v : vertices)
    std::sort(v.curve_class.begin(), v.curve_class.end());
}

ValidationReport validate_type(const DecoratedType& t, const ConeComplex& cx,
                               bool require_connected) {
  ValidationReport r;
  std::set<std::string> vertex_ids, element_ids;
  for (const auto& v : t.vertices) {
    if (!vertex_ids.insert(v.id).second) r.fail("duplicate vertex id " + v.id);
    element_ids.insert(v.id);
    if (!cx.has_cell(v.cell)) r.fail("vertex " + v.id + ": unknown cell");
    if (v.genus < 0) r.fail("vertex " + v.id + ": negative genus");
  }
  auto check_contact = [&](const std::string& id, const std::string& cell,
                           const ZVec& u) {
    if (!cx.has_cell(cell)) {
      r.fail(id + ": unknown cell");
      return;
    }
    if (u.size() != cx.cell_rank(cell))
      r.fail(id + ": contact order rank mismatch");
  };
  for (const auto& e : t.edges) {
    if (!element_ids.insert(e.id).second) r.fail("duplicate id " + e.id);
    if (!vertex_ids.count(e.tail) || !vertex_ids.count(e.head)) {
      r.fail("edge " + e.id + ": missing endpoint");
      continue;
    }
    check_contact("edge " + e.id, e.cell, e.contact);
    if (cx.has_cell(e.cell)) {
      const auto* tail = t.find_vertex(e.tail);
      const auto* head = t.find_vertex(e.head);
      if (tail && cx.has_cell(tail->cell) && !cx.arrow(tail->cell, e.cell))
        r.fail("edge " + e.id + ": no face arrow from tail cell");
      if (head && cx.has_cell(head->cell) && !cx.arrow(head->cell, e.cell))
        r.fail("edge " + e.id + ": no face arrow from head cell");
    }
  }
  for (const auto& l : t.legs) {
    if (!element_ids.insert(l.id).second) r.fail("duplicate id " + l.id);
    if (!vertex_ids.count(l.vertex)) {
      r.fail("leg " + l.id + ": missing vertex");
      continue;
    }
    check_contact("leg " + l.id, l.cell, l.contact);
    const auto* v = t.find_vertex(l.vertex);
    if (cx.has_cell(l.cell) && v && cx.has_cell(v->cell) &&
        !cx.arrow(v->cell, l.cell))
      r.fail("leg " + l.id + ": no face arrow from vertex cell");
  }
  for (const std::string& s : t.split_set)
    if (!t.find_edge(s) && !t.find_leg(s))
      r.fail("split set member is not an edge or leg: " + s);
  if (require_connected && !t.vertices.empty()) {
    std::map<std::string, std::string> parent;
    for (const auto& v : t.vertices) parent[v.id] = v.id;
    std::function<std::string(std::string)> find = [&](std::string x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : t.edges)
      if (vertex_ids.count(e.tail) && vertex_ids.count(e.head))
        parent[find(e.tail)] = find(e.head);
    std::set<std::string> roots;
    for (const auto& v : t.vertices) roots.insert(find(v.id));
    if (roots.size() > 1) r.fail("graph is not connected");
  }
  return r;
}

SplitResult split_type(const DecoratedType& t, const std::set<std::string>& s) {
  for (const std::string& id : s)
    if (!t.find_edge(id))
      throw std::invalid_argument("split set member is not an edge: " + id);

  std::map<std::string, std::string> parent;
  for (const auto& v : t.vertices) parent[v.id] = v.id;
  std::function<std::string(std::string)> find = [&](std::string x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : t.edges)
    if (!s.count(e.id)) parent[find(e.tail)] = find(e.head);

  std::map<std::string, std::size_t> comp_of_root;
  std::vector<std::string> roots;
  for (const auto& v : t.vertices) {
    std::string rt = find(v.id);
    if (!comp_of_root.count(rt)) {
      comp_of_root[rt] = 0;
      roots.push_back(rt);
    }
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < roots.size(); ++i) comp_of_root[roots[i]] = i;
  auto comp_of = [&](const std::string& vid) {
    return comp_of_root.at(find(vid));
  };

  SplitResult out;
  out.components.resize(roots.size());
  for (const auto& v : t.vertices)
    out.components[comp_of(v.id)].vertices.push_back(v);
  for (const auto& e : t.edges) {
    if (!s.count(e.id)) {
      out.components[comp_of(e.tail)].edges.push_back(e);
      if (t.split_set.count(e.id))
        out.components[comp_of(e.tail)].split_set.insert(e.id);
      continue;
    }
    std::size_t ct = comp_of(e.tail), ch = comp_of(e.head);
    TypeLeg tail_leg{e.id + "+", e.tail, e.cell, e.contact};
    ZVec neg(e.contact.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -e.contact[i];
    TypeLeg head_leg{e.id + "-", e.head, e.cell, neg};
    out.components[ct].legs.push_back(tail_leg);
    out.components[ct].split_set.insert(tail_leg.id);
    out.components[ch].legs.push_back(head_leg);
    out.components[ch].split_set.insert(head_leg.id);
    out.pairing[e.id] = {ct, tail_leg.id, ch, head_leg.id};
  }
  for (const auto& l : t.legs) {
    std::size_t c = comp_of(l.vertex);
    out.components[c].legs.push_back(l);
    if (t.split_set.count(l.id)) out.components[c].split_set.insert(l.id);
  }
  for (auto& comp : out.components) comp.sort_members();
  return out;
}

bool is_contraction(const DecoratedType& rho, const DecoratedType& tau,
                    const std::map<std::string, std::string>& vertex_map,
                    const std::map<std::string, std::optional<std::string>>&
                        edge_map,
                    const ConeComplex& cx) {
  for (const auto& v : rho.vertices) {
    auto it = vertex_map.find(v.id);
    if (it == vertex_map.end() || !tau.find_vertex(it->second)) return false;
  }
  std::map<std::string, std::string> surviving;  // tau edge -> rho edge
  std::set<std::string> contracted;
  for (const auto& e : rho.edges) {
    auto it = edge_map.find(e.id);
    if (it == edge_map.end()) return false;
    if (!it->second) {
      if (vertex_map.at(e.tail) != vertex_map.at(e.head)) return false;
      contracted.insert(e.id);
      continue;
    }
    if (!tau.find_edge(*it->second)) return false;
    if (surviving.count(*it->second)) return false;
    surviving[*it->second] = e.id;
  }
  if (surviving.size() != tau.edges.size()) return false;

  // surviving edges: endpoints, cells, contact orders (orientation may flip)
  for (const auto& [tid, rid] : surviving) {
    const TypeEdge* te = tau.find_edge(tid);
    const TypeEdge* re = rho.find_edge(rid);
    auto a = cx.arrow(te->cell, re->cell);
    if (!a) return false;
    ZVec tu = a->apply(te->contact);
    bool straight = vertex_map.at(re->tail) == te->tail &&
                    vertex_map.at(re->head) == te->head && tu == re->contact;
    ZVec neg(tu.size());
    for (std::size_t i = 0; i < tu.size(); ++i) neg[i] = -tu[i];
    bool flipped = vertex_map.at(re->tail) == te->head &&
                   vertex_map.at(re->head) == te->tail && neg == re->contact;
    if (!straight && !flipped) return false;
  }

  // legs correspond by id
  if (rho.legs.size() != tau.legs.size()) return false;
  for (const auto& tl : tau.legs) {
    const TypeLeg* rl = rho.find_leg(tl.id);
    if (!rl) return false;
    if (vertex_map.at(rl->vertex) != tl.vertex) return false;
    auto a = cx.arrow(tl.cell, rl->cell);
    if (!a) return false;
    if (a->apply(tl.contact) != rl->contact) return false;
  }

  // genus and curve class of a tau vertex are the sums over the preimage
  for (const auto& tv : tau.vertices) {
    Int genus = 0;
    std::vector<std::string> cls;
    bool any = false;
    for (const auto& rv : rho.vertices) {
      if (vertex_map.at(rv.id) != tv.id) continue;
      any = true;
      genus += rv.genus;
      cls.insert(cls.end(), rv.curve_class.begin(), rv.curve_class.end());
    }
    if (!any) return false;
    std::sort(cls.begin(), cls.end());
    std::vector<std::string> want = tv.curve_class;
    std::sort(want.begin(), want.end());
    if (genus != tv.genus || cls != want) return false;
  }

  // tau cells are faces of every preimage cell
  for (const auto& rv : rho.vertices) {
    const TypeVertex* tv = tau.find_vertex(vertex_map.at(rv.id));
    if (!cx.arrow(tv->cell, rv.cell)) return false;
  }
  for (const std::string& eid : contracted) {
    const TypeEdge* re = rho.find_edge(eid);
    const TypeVertex* tv = tau.find_vertex(vertex_map.at(re->tail));
    if (!cx.arrow(tv->cell, re->cell)) return false;
  }

  // the preimage of each tau vertex is connected through contracted edges
  for (const auto& tv : tau.vertices) {
    std::vector<std::string> group;
    for (const auto& rv : rho.vertices)
      if (vertex_map.at(rv.id) == tv.id) group.push_back(rv.id);
    std::map<std::string, std::string> parent;
    for (const auto& v : group) parent[v] = v;
    std::function<std::string(std::string)> find = [&](std::string x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const std::string& eid : contracted) {
      const TypeEdge* re = rho.find_edge(eid);
      if (parent.count(re->tail) && parent.count(re->head))
        parent[find(re->tail)] = find(re->head);
    }
    std::set<std::string> roots;
    for (const auto& v : group) roots.insert(find(v));
    if (roots.size() != 1) return false;
  }
  return true;
}

const EvaluationCone::Legend& EvaluationCone::block(
    const std::string& id) const {
  for (const auto& l : legend)
    if (l.id == id && l.kind != Legend::Kind::marking_length) return l;
  // markings on legs are the only entry carrying the leg id
  for (const auto& l : legend)
    if (l.id == id) return l;
  throw std::invalid_argument("no legend entry for " + id);
}

const EvaluationCone::Legend& EvaluationCone::marking_block(
    const std::string& id) const {
  for (const auto& l : legend)
    if (l.id == id && l.kind == Legend::Kind::marking_length) return l;
  throw std::invalid_argument("no marking entry for " + id);
}

namespace {

ZVec embed(std::size_t ambient, std::size_t offset, const ZVec& v) {
  ZVec out(ambient, Int(0));
  for (std::size_t i = 0; i < v.size(); ++i) out[offset + i] = v[i];
  return out;
}

}  // namespace

EvaluationCone evaluation_cone(const DecoratedType& t, const ConeComplex& cx) {
  DecoratedType ty = t;
  ty.sort_members();

  EvaluationCone ec;
  std::size_t offset = 0;
  for (const auto& v : ty.vertices) {
    std::size_t r = cx.cell_rank(v.cell);
    ec.legend.push_back(
        {EvaluationCone::Legend::Kind::vertex_block, v.id, offset, r});
    offset += r;
  }
  for (const auto& e : ty.edges) {
    ec.legend.push_back(
        {EvaluationCone::Legend::Kind::edge_length, e.id, offset, 1});
    offset += 1;
  }
  for (const std::string& p : ty.split_set) {
    ec.marking_order.push_back(p);
    ec.legend.push_back(
        {EvaluationCone::Legend::Kind::marking_length, p, offset, 1});
    offset += 1;
  }
  std::size_t ambient = offset;

  std::vector<ZVec> ineqs, eqs;
  for (const auto& v : ty.vertices) {
    const Cone& c = cx.cell(v.cell);
    const auto& b = ec.block(v.id);
    for (const ZVec& n : c.facet_normals())
      ineqs.push_back(embed(ambient, b.offset, n));
    for (const ZVec& e : c.span_complement())
      eqs.push_back(embed(ambient, b.offset, e));
  }
  for (const auto& e : ty.edges) {
    ZVec row(ambient, Int(0));
    row[ec.block(e.id).offset] = 1;
    ineqs.push_back(row);
  }
  for (const std::string& p : ec.marking_order) {
    ZVec row(ambient, Int(0));
    row[ec.marking_block(p).offset] = 1;
    ineqs.push_back(row);
  }

  // edge displacement equations inside the edge cell
  for (const auto& e : ty.edges) {
    const TypeVertex* tail = ty.find_vertex(e.tail);
    const TypeVertex* head = ty.find_vertex(e.head);
    auto at = cx.arrow(tail->cell, e.cell);
    auto ah = cx.arrow(head->cell, e.cell);
    if (!at || !ah)
      throw std::invalid_argument("edge " + e.id + ": missing face arrow");
    std::size_t rk = cx.cell_rank(e.cell);
    const auto& bt = ec.block(e.tail);
    const auto& bh = ec.block(e.head);
    const auto& bl = ec.block(e.id);
    for (std::size_t k = 0; k < rk; ++k) {
      ZVec row(ambient, Int(0));
      for (std::size_t c = 0; c < bh.rank; ++c)
        row[bh.offset + c] += ah->at(k, c);
      for (std::size_t c = 0; c < bt.rank; ++c)
        row[bt.offset + c] -= at->at(k, c);
      row[bl.offset] -= e.contact[k];
      eqs.push_back(row);
    }
  }

  // markings: rows of "evaluate at the marked point", then membership
  std::vector<ZVec> evt_rows;
  for (const std::string& p : ec.marking_order) {
    const TypeEdge* e = ty.find_edge(p);
    const TypeLeg* l = e ? nullptr : ty.find_leg(p);
    std::string base_vertex = e ? e->tail : l->vertex;
    std::string cell = e ? e->cell : l->cell;
    const ZVec& u = e ? e->contact : l->contact;
    auto av = cx.arrow(ty.find_vertex(base_vertex)->cell, cell);
    if (!av)
      throw std::invalid_argument("marking " + p + ": missing face arrow");
    std::size_t rk = cx.cell_rank(cell);
    const auto& bv = ec.block(base_vertex);
    const auto& bp = ec.marking_block(p);
    std::vector<ZVec> rows;
    for (std::size_t k = 0; k < rk; ++k) {
      ZVec row(ambient, Int(0));
      for (std::size_t c = 0; c < bv.rank; ++c)
        row[bv.offset + c] += av->at(k, c);
      row[bp.offset] += u[k];
      rows.push_back(row);
    }
    const Cone& target = cx.cell(cell);
    for (const ZVec& n : target.facet_normals()) {
      ZVec row(ambient, Int(0));
      for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t c = 0; c < ambient; ++c) row[c] += n[k] * rows[k][c];
      ineqs.push_back(row);
    }
    for (const ZVec& sc : target.span_complement()) {
      ZVec row(ambient, Int(0));
      for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t c = 0; c < ambient; ++c) row[c] += sc[k] * rows[k][c];
      eqs.push_back(row);
    }
    if (e) {
      // the marked point stays on the edge: l_p <= l_E
      ZVec row(ambient, Int(0));
      row[ec.block(e->id).offset] = 1;
      row[bp.offset] -= 1;
      ineqs.push_back(row);
    }
    ec.marking_rank.push_back(rows.size());
    for (const ZVec& r : rows) evt_rows.push_back(r);
  }

  ec.cone = Cone::from_inequalities(ambient, ineqs, eqs);
  ec.evt = evt_rows.empty() ? IntMatrix(0, ambient)
                            : IntMatrix::from_rows(evt_rows);

  // realizable: the generic point of the cone keeps every vertex in the
  // relative interior of its cell and every edge length positive
  QVec sample = ec.cone.relative_interior_point();
  for (const auto& v : ty.vertices) {
    const auto& b = ec.block(v.id);
    QVec pt(sample.begin() + b.offset, sample.begin() + b.offset + b.rank);
    if (membership(cx.cell(v.cell), pt) != Membership::relative_interior)
      ec.realizable = false;
  }
  for (const auto& e : ty.edges)
    if (sample[ec.block(e.id).offset] <= 0) ec.realizable = false;
  return ec;
}

IntMatrix evt_map(const EvaluationCone& ec) { return ec.evt; }

DecoratedType face_to_type(const DecoratedType& t, const ConeComplex& cx,
                           const EvaluationCone& ec, const Cone& face) {
  if (!is_face_of(face, ec.cone))
    throw std::invalid_argument("face_to_type: not a face");
  DecoratedType ty = t;
  ty.sort_members();

  std::vector<QVec> samples;
  for (const ZVec& r : face.rays()) samples.push_back(to_rational(r));
  for (const ZVec& l : face.lineality()) {
    samples.push_back(to_rational(l));
    ZVec neg(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
    samples.push_back(to_rational(neg));
  }

  auto coordinate_zero = [&](std::size_t offset) {
    for (const QVec& s : samples)
      if (s[offset] != 0) return false;
    return true;
  };

  std::set<std::string> contracted;
  for (const auto& e : ty.edges)
    if (coordinate_zero(ec.block(e.id).offset)) contracted.insert(e.id);

  std::map<std::string, std::string> parent;
  for (const auto& v : ty.vertices) parent[v.id] = v.id;
  std::function<std::string(std::string)> find = [&](std::string x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const std::string& eid : contracted) {
    const TypeEdge* e = ty.find_edge(eid);
    parent[find(e->tail)] = find(e->head);
  }
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& v : ty.vertices) groups[find(v.id)].push_back(v.id);
  std::map<std::string, std::string> rep;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    for (const std::string& m : members) rep[m] = members.front();
  }

  // minimal face of the cell's cone containing the points, realized as a
  // cell of the complex through a face arrow
  auto minimal_cell = [&](const std::string& cell_id,
                          const std::vector<QVec>& pts) -> std::string {
    const Cone& big = cx.cell(cell_id);
    Cone best = big;
    for (const Cone& f : faces(big)) {
      bool contains_all = true;
      for (const QVec& p : pts)
        if (membership(f, p) == Membership::outside) contains_all = false;
      if (contains_all && f.dim() < best.dim()) best = f;
    }
    if (best == big) return cell_id;
    for (const std::string& cid : cx.cell_ids()) {
      auto a = cx.arrow(cid, cell_id);
      if (!a) continue;
      if (map_cone(*a, cx.cell(cid)) == best) return cid;
    }
    throw std::invalid_argument(
        "face_to_type: the complex has no cell for a face of " + cell_id);
  };

  auto block_points = [&](const std::string& id) {
    const auto& b = ec.block(id);
    std::vector<QVec> pts;
    for (const QVec& s : samples)
      pts.push_back(QVec(s.begin() + b.offset, s.begin() + b.offset + b.rank));
    if (pts.empty()) pts.push_back(QVec(b.rank, Rat(0)));
    return pts;
  };

  DecoratedType out;
  for (const auto& [root, members] : groups) {
    TypeVertex nv;
    nv.id = members.front();
    nv.genus = 0;
    for (const std::string& m : members) {
      const TypeVertex* v = ty.find_vertex(m);
      nv.genus += v->genus;
      nv.curve_class.insert(nv.curve_class.end(), v->curve_class.begin(),
                            v->curve_class.end());
    }
    std::sort(nv.curve_class.begin(), nv.curve_class.end());
    nv.cell = minimal_cell(ty.find_vertex(nv.id)->cell, block_points(nv.id));
    out.vertices.push_back(nv);
  }

  auto transport_contact = [&](const ZVec& u, const std::string& from_cell,
                               const std::string& to_cell) -> ZVec {
    if (from_cell == to_cell) return u;
    auto a = cx.arrow(to_cell, from_cell);
    IntMatrix rhs(u.size(), 1);
    for (std::size_t i = 0; i < u.size(); ++i) rhs.at(i, 0) = u[i];
    auto sol = solve_integer(*a, rhs);
    if (!sol)
      throw std::invalid_argument(
          "face_to_type: contact order does not lie in the face cell");
    return sol->column(0);
  };

  // image of a vertex block in a bigger cell, over the face generators
  auto transported_base = [&](const std::string& vertex,
                              const std::string& cell) -> std::vector<QVec> {
    auto a = cx.arrow(ty.find_vertex(vertex)->cell, cell);
    const auto& bv = ec.block(vertex);
    std::vector<QVec> pts;
    for (const QVec& s : samples)
      pts.push_back(a->apply(
          QVec(s.begin() + bv.offset, s.begin() + bv.offset + bv.rank)));
    if (pts.empty()) pts.push_back(QVec(cx.cell_rank(cell), Rat(0)));
    return pts;
  };

  for (const auto& e : ty.edges) {
    if (contracted.count(e.id)) continue;
    TypeEdge ne = e;
    ne.tail = rep.at(e.tail);
    ne.head = rep.at(e.head);
    // the edge sweeps from the tail image to the head image
    std::vector<QVec> pts = transported_base(e.tail, e.cell);
    std::vector<QVec> head_pts = transported_base(e.head, e.cell);
    pts.insert(pts.end(), head_pts.begin(), head_pts.end());
    std::string cell = minimal_cell(e.cell, pts);
    ne.contact = transport_contact(e.contact, e.cell, cell);
    ne.cell = cell;
    out.edges.push_back(ne);
    if (ty.split_set.count(e.id)) out.split_set.insert(e.id);
  }
  for (const auto& l : ty.legs) {
    TypeLeg nl = l;
    nl.vertex = rep.at(l.vertex);
    std::vector<QVec> pts = transported_base(l.vertex, l.cell);
    bool marked = std::find(ec.marking_order.begin(), ec.marking_order.end(),
                            l.id) != ec.marking_order.end();
    if (marked) {
      // use the actual evaluated points of the face generators
      auto a = cx.arrow(ty.find_vertex(l.vertex)->cell, l.cell);
      const auto& bv = ec.block(l.vertex);
      std::size_t l_off = ec.marking_block(l.id).offset;
      for (const QVec& s : samples) {
        QVec img = a->apply(
            QVec(s.begin() + bv.offset, s.begin() + bv.offset + bv.rank));
        for (std::size_t k = 0; k < img.size(); ++k)
          img[k] += s[l_off] * Rat(l.contact[k]);
        pts.push_back(img);
      }
    } else {
      // the leg walks off in the contact direction
      std::vector<QVec> far = pts;
      for (QVec& p : far)
        for (std::size_t k = 0; k < p.size(); ++k) p[k] += Rat(l.contact[k]);
      pts.insert(pts.end(), far.begin(), far.end());
    }
    std::string cell = minimal_cell(l.cell, pts);
    nl.contact = transport_contact(l.contact, l.cell, cell);
    nl.cell = cell;
    out.legs.push_back(nl);
    if (ty.split_set.count(l.id)) out.split_set.insert(l.id);
  }
  out.sort_members();
  return out;
}

}  // namespace tropsplit
