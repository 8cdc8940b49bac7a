#include "tropsplit/instance_io.hpp"

#include <algorithm>

#include "tropsplit/pushforward.hpp"

namespace tropsplit {

namespace {

Int int_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return Int(j.get<std::string>());
  if (j.is_number_integer()) return Int(static_cast<long>(j.get<long long>()));
  throw ParseError("schema", where, "expected a decimal integer string");
}

std::string int_to_string(const Int& x) { return x.get_str(); }

}  // namespace

Json matrix_to_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(int_to_string(m.at(i, j)));
    rows.push_back(row);
  }
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["entries"] = rows;
  return out;
}

IntMatrix matrix_from_json(const Json& j, const std::string& where) {
  // accept either the explicit form or a bare array of arrays
  if (j.is_array()) {
    std::vector<ZVec> rows;
    for (std::size_t i = 0; i < j.size(); ++i)
      rows.push_back(zvec_from_json(j[i], where + "/" + std::to_string(i)));
    for (const ZVec& r : rows)
      if (r.size() != rows[0].size())
        throw ParseError("schema", where, "ragged matrix rows");
    return rows.empty() ? IntMatrix(0, 0) : IntMatrix::from_rows(rows);
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("entries"))
    throw ParseError("schema", where, "expected a matrix");
  std::size_t r = j["rows"].get<std::size_t>();
  std::size_t c = j["cols"].get<std::size_t>();
  IntMatrix m(r, c);
  const Json& e = j["entries"];
  if (!e.is_array() || e.size() != r)
    throw ParseError("schema", where + "/entries", "row count mismatch");
  for (std::size_t i = 0; i < r; ++i) {
    if (!e[i].is_array() || e[i].size() != c)
      throw ParseError("schema", where + "/entries", "column count mismatch");
    for (std::size_t k = 0; k < c; ++k)
      m.at(i, k) = int_from_json(e[i][k], where + "/entries");
  }
  return m;
}

Json zvec_to_json(const ZVec& v) {
  Json out = Json::array();
  for (const Int& x : v) out.push_back(int_to_string(x));
  return out;
}

ZVec zvec_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError("schema", where, "expected a vector");
  ZVec out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(int_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

Json qvec_to_json(const QVec& v) {
  Json out = Json::array();
  for (const Rat& x : v) {
    if (x.get_den() == 1)
      out.push_back(x.get_num().get_str());
    else
      out.push_back(x.get_num().get_str() + "/" + x.get_den().get_str());
  }
  return out;
}

Json cone_to_json(const Cone& c) {
  Json out;
  out["ambient_rank"] = c.ambient_rank();
  out["dim"] = c.dim();
  Json rays = Json::array();
  for (const ZVec& r : c.rays()) rays.push_back(zvec_to_json(r));
  out["rays"] = rays;
  Json normals = Json::array();
  for (const ZVec& n : c.facet_normals()) normals.push_back(zvec_to_json(n));
  out["facet_normals"] = normals;
  Json lin = Json::array();
  for (const ZVec& l : c.lineality()) lin.push_back(zvec_to_json(l));
  out["lineality"] = lin;
  return out;
}

Json fan_to_json(const Fan& f) {
  Json out;
  out["lattice_rank"] = f.lattice_rank();
  std::vector<ZVec> rays = f.ray_vectors();
  Json jr = Json::array();
  for (const ZVec& r : rays) jr.push_back(zvec_to_json(r));
  out["rays"] = jr;
  Json cones = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    Json idx = Json::array();
    for (const ZVec& r : f.cone(i).rays()) {
      std::size_t pos =
          std::find(rays.begin(), rays.end(), r) - rays.begin();
      idx.push_back(pos);
    }
    cones.push_back(idx);
  }
  out["cones"] = cones;
  out["complete"] = f.is_complete();
  return out;
}

Json type_to_json(const DecoratedType& t) {
  Json out;
  Json vs = Json::array();
  for (const TypeVertex& v : t.vertices) {
    Json jv;
    jv["id"] = v.id;
    jv["genus"] = int_to_string(v.genus);
    jv["classes"] = v.curve_class;
    jv["cell"] = v.cell;
    vs.push_back(jv);
  }
  out["vertices"] = vs;
  Json es = Json::array();
  for (const TypeEdge& e : t.edges) {
    Json je;
    je["id"] = e.id;
    je["tail"] = e.tail;
    je["head"] = e.head;
    je["cell"] = e.cell;
    je["contact"] = zvec_to_json(e.contact);
    es.push_back(je);
  }
  out["edges"] = es;
  Json ls = Json::array();
  for (const TypeLeg& l : t.legs) {
    Json jl;
    jl["id"] = l.id;
    jl["vertex"] = l.vertex;
    jl["cell"] = l.cell;
    jl["contact"] = zvec_to_json(l.contact);
    ls.push_back(jl);
  }
  out["legs"] = ls;
  out["split_set"] = std::vector<std::string>(t.split_set.begin(),
                                              t.split_set.end());
  return out;
}

DecoratedType type_from_json(const Json& j, const std::string& where) {
  DecoratedType t;
  if (!j.is_object()) throw ParseError("schema", where, "expected a type");
  for (const Json& jv : j.value("vertices", Json::array())) {
    TypeVertex v;
    v.id = jv.at("id").get<std::string>();
    v.genus = int_from_json(jv.value("genus", Json("0")), where);
    for (const Json& c : jv.value("classes", Json::array()))
      v.curve_class.push_back(c.get<std::string>());
    v.cell = jv.at("cell").get<std::string>();
    t.vertices.push_back(v);
  }
  for (const Json& je : j.value("edges", Json::array())) {
    TypeEdge e;
    e.id = je.at("id").get<std::string>();
    e.tail = je.at("tail").get<std::string>();
    e.head = je.at("head").get<std::string>();
    e.cell = je.at("cell").get<std::string>();
    e.contact = zvec_from_json(je.at("contact"), where + "/edges");
    t.edges.push_back(e);
  }
  for (const Json& jl : j.value("legs", Json::array())) {
    TypeLeg l;
    l.id = jl.at("id").get<std::string>();
    l.vertex = jl.at("vertex").get<std::string>();
    l.cell = jl.at("cell").get<std::string>();
    l.contact = zvec_from_json(jl.at("contact"), where + "/legs");
    t.legs.push_back(l);
  }
  for (const Json& s : j.value("split_set", Json::array()))
    t.split_set.insert(s.get<std::string>());
  t.sort_members();
  return t;
}

namespace {

Fan fan_from_json(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError("schema", where, "expected a fan");
  std::size_t rank = j.at("lattice_rank").get<std::size_t>();
  std::vector<ZVec> rays;
  for (std::size_t i = 0; i < j.value("rays", Json::array()).size(); ++i)
    rays.push_back(zvec_from_json(j["rays"][i],
                                  where + "/rays/" + std::to_string(i)));
  std::vector<std::vector<std::size_t>> cones;
  for (const Json& jc : j.value("cones", Json::array())) {
    std::vector<std::size_t> idx;
    for (const Json& k : jc) {
      std::size_t p = k.get<std::size_t>();
      if (p >= rays.size())
        throw ParseError("reference", where + "/cones", "ray index range");
      idx.push_back(p);
    }
    cones.push_back(idx);
  }
  try {
    return Fan::build(rank, rays, cones);
  } catch (const FanError& e) {
    throw ParseError("math", where, std::string(e.what()));
  }
}

}  // namespace

InstanceDocument parse_and_validate(const std::string& bytes) {
  InstanceDocument doc;
  try {
    doc.raw = Json::parse(bytes);
  } catch (const Json::parse_error& e) {
    throw ParseError("schema", "/", e.what());
  }
  if (!doc.raw.is_object())
    throw ParseError("schema", "/", "document must be an object");

  const Json fans_block = doc.raw.value("fans", Json::object());
  for (auto it = fans_block.begin(); it != fans_block.end(); ++it)
    doc.fans[it.key()] = std::make_shared<Fan>(
        fan_from_json(it.value(), "/fans/" + it.key()));

  const Json& morphs = doc.raw.value("fan_morphisms", Json::object());
  for (auto it = morphs.begin(); it != morphs.end(); ++it) {
    InstanceDocument::MorphismRef m;
    m.source = it.value().at("source").get<std::string>();
    m.target = it.value().at("target").get<std::string>();
    if (!doc.fans.count(m.source) || !doc.fans.count(m.target))
      throw ParseError("reference", "/fan_morphisms/" + it.key(),
                       "unknown fan id");
    m.matrix = matrix_from_json(it.value().at("matrix"),
                                "/fan_morphisms/" + it.key() + "/matrix");
    try {
      make_fan_morphism(doc.fans[m.source], doc.fans[m.target], m.matrix);
    } catch (const FanError& e) {
      throw ParseError("math", "/fan_morphisms/" + it.key(), e.what());
    }
    doc.morphisms[it.key()] = std::move(m);
  }

  const Json cx = doc.raw.value("complex", Json::object());
  const Json cells_block = cx.value("cells", Json::object());
  for (auto it = cells_block.begin(); it != cells_block.end(); ++it) {
    const std::string where = "/complex/cells/" + it.key();
    std::size_t rank = it.value().at("lattice_rank").get<std::size_t>();
    std::vector<ZVec> rays, lin;
    for (const Json& r : it.value().value("rays", Json::array()))
      rays.push_back(zvec_from_json(r, where));
    for (const Json& l : it.value().value("lineality", Json::array()))
      lin.push_back(zvec_from_json(l, where));
    doc.complex.add_cell(it.key(), Cone::from_generators(rank, rays, lin));
  }
  for (const Json& ja : cx.value("arrows", Json::array())) {
    std::string s = ja.at("source").get<std::string>();
    std::string t = ja.at("target").get<std::string>();
    if (!doc.complex.has_cell(s) || !doc.complex.has_cell(t))
      throw ParseError("reference", "/complex/arrows", "unknown cell id");
    doc.complex.add_arrow(s, t,
                          matrix_from_json(ja.at("matrix"), "/complex/arrows"));
  }
  for (const std::string& v : doc.complex.validate())
    throw ParseError("math", "/complex", v);

  const Json types_block = doc.raw.value("types", Json::object());
  for (auto it = types_block.begin(); it != types_block.end(); ++it)
    doc.types[it.key()] =
        type_from_json(it.value(), "/types/" + it.key());

  if (doc.raw.contains("instance")) {
    const Json& ji = doc.raw["instance"];
    SplittingInstance& inst = doc.instance;
    inst.base_rank = ji.value("base_rank", 0);
    if (ji.contains("base_cone_rays")) {
      std::vector<ZVec> rays;
      for (const Json& r : ji["base_cone_rays"])
        rays.push_back(zvec_from_json(r, "/instance/base_cone_rays"));
      inst.base_cone = Cone::from_rays(inst.base_rank, rays);
    } else if (inst.base_rank == 0) {
      inst.base_cone = Cone::zero(0);
    } else {
      throw ParseError("schema", "/instance", "missing base_cone_rays");
    }
    for (const Json& je : ji.value("split_edges", Json::array())) {
      SplitEdgeData d;
      d.edge = je.at("edge").get<std::string>();
      std::string fan_id = je.at("fan").get<std::string>();
      if (!doc.fans.count(fan_id))
        throw ParseError("reference", "/instance/split_edges",
                         "unknown fan " + fan_id);
      d.fan = doc.fans[fan_id];
      d.base_map = matrix_from_json(je.at("base_map"),
                                    "/instance/split_edges/base_map");
      d.stratum_cone = je.at("stratum_cone").get<std::size_t>();
      inst.split_edges.push_back(std::move(d));
    }
    std::string glued = ji.at("glued_type").get<std::string>();
    if (!doc.types.count(glued))
      throw ParseError("reference", "/instance/glued_type",
                       "unknown type " + glued);
    inst.glued_type = doc.types[glued];
    for (const Json& ja : ji.value("ambient_types", Json::array())) {
      std::string id = ja.get<std::string>();
      if (!doc.types.count(id))
        throw ParseError("reference", "/instance/ambient_types",
                         "unknown type " + id);
      inst.ambient_types.push_back(doc.types[id]);
    }
    inst.complex = doc.complex;
    inst.displacement =
        zvec_from_json(ji.value("displacement", Json::array()),
                       "/instance/displacement");
    doc.has_instance = true;
  }
  return doc;
}

namespace {

SplittingContext make_context(const InstanceDocument& doc,
                              const CommandFlags& flags) {
  if (!doc.has_instance)
    throw ParseError("schema", "/instance", "document has no instance block");
  SplittingContext ctx(doc.instance);
  ctx.threads = flags.threads;
  return ctx;
}

Json witness_to_json(const DisplacementWitness& w) {
  Json out;
  out["reason"] = w.reason;
  Json dims = Json::array();
  for (std::size_t d : w.candidate.face_dims) dims.push_back(d);
  out["face_dims"] = dims;
  out["contracted_edges"] = w.candidate.contracted_edges;
  return out;
}

Json dims_to_json(const DimensionAudit& d) {
  Json out;
  out["dim_glued_evaluation_cone"] = d.dim_tau_tilde;
  out["direct_rank_difference"] = d.direct_rank_difference;
  out["required_face_dim"] = d.required_face_dim;
  out["printed_closed_form"] = d.printed_closed_form;
  out["corrected_closed_form"] = d.corrected_closed_form;
  out["direct_matches_printed"] = d.direct_matches_printed;
  out["direct_matches_corrected"] = d.direct_matches_corrected;
  out["note"] =
      "the engine uses the direct lattice count; the printed closed form "
      "differs by the sign of the component correction term";
  return out;
}

Json report_to_json(const DisplacementReport& rep) {
  Json out;
  out["verdict"] = rep.verdict == Verdict::generic
                       ? "generic"
                       : rep.verdict == Verdict::not_generic
                             ? "not generic"
                             : "unsatisfiable";
  out["displacement_in_psi_image"] = rep.displacement_in_psi_image;
  out["dimension_audit"] = dims_to_json(rep.dims);
  Json ws = Json::array();
  for (const DisplacementWitness& w : rep.witnesses)
    ws.push_back(witness_to_json(w));
  out["witnesses"] = ws;
  out["candidates_after_dimension_filter"] =
      rep.candidates_after_dimension_filter;
  out["survivors"] = rep.survivors;
  return out;
}

Json terms_to_json(const std::vector<DeltaTerm>& terms) {
  Json out = Json::array();
  for (const DeltaTerm& t : terms) {
    Json jt;
    jt["multiplicity"] = t.multiplicity.get_str();
    jt["component_model_multiplicity"] = t.m_prime.get_str();
    jt["contracted_edges"] = t.rho.contracted_edges;
    Json dims = Json::array();
    for (std::size_t d : t.rho.face_dims) dims.push_back(d);
    jt["face_dims"] = dims;
    Json fs = Json::array();
    for (const Cone& c : t.rho.faces) fs.push_back(cone_to_json(c));
    jt["faces"] = fs;
    jt["image_cone"] = cone_to_json(t.rho.image_cone);
    out.push_back(jt);
  }
  return out;
}

std::optional<std::vector<KunnethTerm>> kunneth_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  std::vector<KunnethTerm> out;
  for (const Json& jt : j) {
    KunnethTerm t;
    t.coefficient = int_from_json(jt.at("coefficient"), "/kunneth");
    for (const Json& f : jt.at("factors"))
      t.factors.push_back(f.get<std::string>());
    out.push_back(t);
  }
  return out;
}

}  // namespace

CommandResult run_command(const InstanceDocument& doc,
                          const std::string& command,
                          const CommandFlags& flags) {
  CommandResult res;
  const Json& raw = doc.raw;

  if (command == "lattice snf") {
    IntMatrix m = matrix_from_json(raw.at("matrix"), "/matrix");
    SnfDecomposition snf = smith_normal_form(m);
    res.output["left"] = matrix_to_json(snf.left);
    res.output["diag"] = matrix_to_json(snf.diag);
    res.output["right"] = matrix_to_json(snf.right);
    return res;
  }
  if (command == "lattice index") {
    IntMatrix m = matrix_from_json(raw.at("matrix"), "/matrix");
    std::size_t rank = raw.value("ambient_rank", m.rows());
    auto idx = sublattice_index(m, rank);
    res.output["index"] = idx ? Json(idx->get_str()) : Json("infinite");
    res.output["saturation_index"] = saturation_index(m).get_str();
    return res;
  }
  if (command == "lattice saturate") {
    IntMatrix m = matrix_from_json(raw.at("matrix"), "/matrix");
    res.output["basis"] = matrix_to_json(saturate(m));
    return res;
  }

  if (command == "fan build") {
    std::string id = raw.at("fan").get<std::string>();
    auto it = doc.fans.find(id);
    if (it == doc.fans.end())
      throw ParseError("reference", "/fan", "unknown fan " + id);
    res.output["fan"] = fan_to_json(*it->second);
    return res;
  }
  if (command == "fan star") {
    const Json& js = raw.at("star");
    std::string id = js.at("fan").get<std::string>();
    auto it = doc.fans.find(id);
    if (it == doc.fans.end())
      throw ParseError("reference", "/star/fan", "unknown fan " + id);
    std::size_t tau = js.at("cone").get<std::size_t>();
    if (tau >= it->second->size())
      throw ParseError("reference", "/star/cone", "cone index range");
    StarQuotient sq = star_quotient(*it->second, tau);
    res.output["fan"] = fan_to_json(sq.fan);
    res.output["quotient_map"] = matrix_to_json(sq.quotient_map);
    return res;
  }
  if (command == "fan product") {
    const Json& jp = raw.at("product");
    auto get = [&](const std::string& key) {
      std::string id = jp.at(key).get<std::string>();
      auto it = doc.morphisms.find(id);
      if (it == doc.morphisms.end())
        throw ParseError("reference", "/product/" + key,
                         "unknown morphism " + id);
      return make_fan_morphism(doc.fans.at(it->second.source),
                               doc.fans.at(it->second.target),
                               it->second.matrix);
    };
    FanFiberProduct fp = fan_fiber_product(get("f"), get("g"));
    res.output["fan"] = fan_to_json(fp.fan);
    res.output["component_count"] = fp.component_count.get_str();
    res.output["into_first"] = matrix_to_json(fp.lattice.into_first);
    res.output["into_second"] = matrix_to_json(fp.lattice.into_second);
    return res;
  }

  if (command == "fs-push") {
    const Json& jp = raw.at("fs_push");
    std::string id = jp.at("fan").get<std::string>();
    auto it = doc.fans.find(id);
    if (it == doc.fans.end())
      throw ParseError("reference", "/fs_push/fan", "unknown fan " + id);
    IntMatrix f = matrix_from_json(jp.at("map"), "/fs_push/map");
    std::size_t source_rank = jp.at("source_rank").get<std::size_t>();
    std::vector<ZVec> tau_rays;
    for (const Json& r : jp.value("tau_rays", Json::array()))
      tau_rays.push_back(zvec_from_json(r, "/fs_push/tau_rays"));
    SourceStratum src{source_rank, Cone::from_rays(source_rank, tau_rays)};
    ZVec v = zvec_from_json(jp.at("v"), "/fs_push/v");
    std::optional<IntMatrix> stack;
    if (jp.contains("stack_sublattice"))
      stack = matrix_from_json(jp["stack_sublattice"],
                               "/fs_push/stack_sublattice");
    try {
      PushforwardResult pr = pushforward(it->second, f, src, v, stack);
      Json terms = Json::array();
      for (const auto& [cone, coeff] : pr.cycle.terms) {
        Json jt;
        Json rays = Json::array();
        for (const ZVec& rr : it->second->cone(cone).rays())
          rays.push_back(zvec_to_json(rr));
        jt["cone"] = rays;
        jt["cone_index"] = cone;
        jt["coeff"] = coeff.get_str();
        terms.push_back(jt);
      }
      res.output["terms"] = terms;
      res.output["stack_index"] = pr.stack_index.get_str();
      res.output["empty_delta"] = pr.empty_delta;
      res.output["fan_complete"] = pr.fan_complete;
    } catch (const NotGenericError& e) {
      res.output["error"] = "not generic";
      Json ws = Json::array();
      for (const GenericityWitness& w : e.report.witnesses) {
        Json jw;
        jw["cone_index"] = w.cone_index;
        jw["slice"] = w.slice.kind == AffineSliceResult::Kind::empty
                          ? "empty"
                          : w.slice.kind == AffineSliceResult::Kind::point
                                ? "point"
                                : "infinite";
        if (w.slice.kind == AffineSliceResult::Kind::point) {
          jw["point"] = qvec_to_json(w.slice.point);
          jw["interior"] = w.slice.interior;
        }
        ws.push_back(jw);
      }
      res.output["witnesses"] = ws;
      res.exit_code = 2;
    }
    return res;
  }

  if (command == "type validate") {
    std::string id = raw.at("type").get<std::string>();
    auto it = doc.types.find(id);
    if (it == doc.types.end())
      throw ParseError("reference", "/type", "unknown type " + id);
    ValidationReport r = validate_type(it->second, doc.complex,
                                       raw.value("require_connected", true));
    res.output["ok"] = r.ok;
    res.output["violations"] = r.violations;
    return res;
  }
  if (command == "type split") {
    std::string id = raw.at("type").get<std::string>();
    auto it = doc.types.find(id);
    if (it == doc.types.end())
      throw ParseError("reference", "/type", "unknown type " + id);
    std::set<std::string> cut;
    for (const Json& c : raw.value("cut", Json::array()))
      cut.insert(c.get<std::string>());
    SplitResult sr = split_type(it->second, cut);
    Json comps = Json::array();
    for (const DecoratedType& t : sr.components)
      comps.push_back(type_to_json(t));
    res.output["components"] = comps;
    Json pairing = Json::object();
    for (const auto& [e, p] : sr.pairing) {
      Json jp;
      jp["tail_component"] = p.tail_component;
      jp["tail_leg"] = p.tail_leg;
      jp["head_component"] = p.head_component;
      jp["head_leg"] = p.head_leg;
      pairing[e] = jp;
    }
    res.output["pairing"] = pairing;
    return res;
  }
  if (command == "type cone") {
    std::string id = raw.at("type").get<std::string>();
    auto it = doc.types.find(id);
    if (it == doc.types.end())
      throw ParseError("reference", "/type", "unknown type " + id);
    EvaluationCone ec = evaluation_cone(it->second, doc.complex);
    res.output["cone"] = cone_to_json(ec.cone);
    Json legend = Json::array();
    for (const auto& le : ec.legend) {
      Json jl;
      jl["kind"] = le.kind == EvaluationCone::Legend::Kind::vertex_block
                       ? "vertex"
                       : le.kind == EvaluationCone::Legend::Kind::edge_length
                             ? "edge_length"
                             : "marking_length";
      jl["id"] = le.id;
      jl["offset"] = le.offset;
      jl["rank"] = le.rank;
      legend.push_back(jl);
    }
    res.output["legend"] = legend;
    res.output["evt"] = matrix_to_json(ec.evt);
    res.output["realizable"] = ec.realizable;
    return res;
  }

  if (command == "split-check") {
    SplittingContext ctx = make_context(doc, flags);
    DisplacementReport rep = ctx.check_displacement();
    res.output = report_to_json(rep);
    res.exit_code = rep.verdict == Verdict::generic ? 0 : 2;
    return res;
  }
  if (command == "split-delta") {
    SplittingContext ctx = make_context(doc, flags);
    DisplacementReport rep = ctx.check_displacement();
    if (rep.verdict != Verdict::generic) {
      res.output = report_to_json(rep);
      res.exit_code = 2;
      return res;
    }
    DeltaResult dr = ctx.enumerate_delta();
    res.output["terms"] = terms_to_json(dr.terms);
    res.output["component_count"] = ctx.component_count_N().get_str();
    res.output["scoping_consistent"] = dr.scoping_consistent;
    res.output["dimension_audit"] = dims_to_json(rep.dims);
    return res;
  }
  if (command == "split-formula") {
    SplittingContext ctx = make_context(doc, flags);
    DisplacementReport rep = ctx.check_displacement();
    if (rep.verdict != Verdict::generic) {
      res.output = report_to_json(rep);
      res.exit_code = 2;
      return res;
    }
    DeltaResult dr = ctx.enumerate_delta();
    Int n = ctx.component_count_N();
    SplittingFormula f =
        ctx.assemble_formula(dr, n, kunneth_from_json(flags.kunneth));
    res.output["terms"] = terms_to_json(f.terms);
    res.output["component_count"] = f.component_count.get_str();
    res.output["scoping_consistent"] = f.scoping_consistent;
    res.output["rendering"] = f.rendering;
    res.output["dimension_audit"] = dims_to_json(rep.dims);
    return res;
  }
  if (command == "split-search") {
    SplittingContext ctx = make_context(doc, flags);
    auto v = ctx.find_displacement(flags.bound);
    res.output["found"] = v.has_value();
    if (v) {
      res.output["displacement"] = zvec_to_json(*v);
    } else {
      DisplacementReport rep = ctx.check_displacement(
          ZVec(ctx.instance().displacement.size(), Int(0)));
      res.output["reason"] = rep.verdict == Verdict::unsatisfiable
                                 ? "unsatisfiable"
                                 : "no generic vector within the bound";
      if (rep.verdict == Verdict::unsatisfiable)
        res.output["dimension_audit"] = dims_to_json(rep.dims);
      res.exit_code = 2;
    }
    return res;
  }
  throw ParseError("schema", "/", "unknown command: " + command);
}

std::string render_output(const Json& j, bool pretty) {
  return (pretty ? j.dump(2) : j.dump()) + "\n";
}

}  // namespace tropsplit
