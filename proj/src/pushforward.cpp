#include "tropsplit/pushforward.hpp"

namespace tropsplit {

namespace {

std::size_t intersection_dim(const IntMatrix& a, const IntMatrix& b) {
  // dim(span a  meet  span b) = rk a + rk b - rk [a b]
  std::size_t ra = rank_of(a), rb = rank_of(b);
  return ra + rb - rank_of(a.hstack(b));
}

}  // namespace

GenericityReport check_generic(const Fan& fan, const IntMatrix& subspace,
                               std::optional<std::size_t> tau, const ZVec& v) {
  if (tau && *tau != fan.apex_index()) {
    StarQuotient sq = star_quotient(fan, *tau);
    IntMatrix qsub = sq.quotient_map * subspace;
    ZVec qv = sq.quotient_map.apply(v);
    GenericityReport inner = check_generic(sq.fan, qsub, std::nullopt, qv);
    // translate witness indices back to the original fan
    std::map<std::size_t, std::size_t> back;
    for (auto [orig, star] : sq.cone_map) back.emplace(star, orig);
    for (GenericityWitness& w : inner.witnesses) {
      auto it = back.find(w.cone_index);
      if (it != back.end()) w.cone_index = it->second;
    }
    return inner;
  }

  GenericityReport report;
  std::size_t sub_dim = rank_of(subspace);
  if (sub_dim > fan.lattice_rank()) sub_dim = fan.lattice_rank();
  std::size_t complementary = fan.lattice_rank() - sub_dim;
  QVec vq = to_rational(v);
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Cone& c = fan.cone(i);
    if (c.dim() != complementary) continue;
    AffineSliceResult slice = affine_slice(subspace, vq, c);
    bool ok = slice.kind == AffineSliceResult::Kind::empty ||
              (slice.kind == AffineSliceResult::Kind::point && slice.interior);
    if (!ok) {
      report.generic = false;
      report.witnesses.push_back({i, slice});
    }
  }
  return report;
}

PushforwardResult pushforward(FanPtr fan_x, const IntMatrix& f_n,
                              const SourceStratum& source, const ZVec& v,
                              const std::optional<IntMatrix>& stack_sublattice) {
  const Fan& fan = *fan_x;
  if (f_n.rows() != fan.lattice_rank() || f_n.cols() != source.lattice_rank ||
      source.tau.ambient_rank() != source.lattice_rank)
    throw std::invalid_argument("pushforward: rank mismatch");

  // The slice conditions are invariant under positive rescaling of v.
  ZVec vp = primitive(v);

  Cone image_tau = map_cone(f_n, source.tau);
  std::size_t tau_prime = fan.minimal_cone_containing(image_tau);

  GenericityReport report = check_generic(fan, f_n, tau_prime, vp);
  if (!report.generic) throw NotGenericError(std::move(report));

  IntMatrix tau_prime_span = fan.cone(tau_prime).span_lattice_basis();
  std::size_t dim_image = rank_of(f_n);
  std::size_t required_dim =
      fan.lattice_rank() - dim_image + intersection_dim(f_n, tau_prime_span);

  PushforwardResult out;
  out.cycle.fan = fan_x;
  out.fan_complete = fan.is_complete();
  QVec vq = to_rational(vp);
  for (std::size_t i = 0; i < fan.size(); ++i) {
    const Cone& delta = fan.cone(i);
    if (delta.dim() != required_dim) continue;
    if (!fan.is_face(tau_prime, i)) continue;
    AffineSliceResult slice = affine_slice(f_n, vq, delta);
    if (slice.kind == AffineSliceResult::Kind::empty) continue;
    IntMatrix n_delta = delta.span_lattice_basis();
    std::optional<Int> m = sublattice_index(f_n.hstack(n_delta),
                                            fan.lattice_rank());
    if (!m)
      throw std::logic_error(
          "infinite index in pushforward despite genericity");
    out.cycle.add(i, *m);
  }
  out.empty_delta = out.cycle.terms.empty();

  if (stack_sublattice) {
    KernelImageCokernel kic = kernel_image_cokernel(tau_prime_span);
    out.stack_index = saturation_index(kic.cokernel.projection_to_free * f_n);
  }
  return out;
}

}  // namespace tropsplit
