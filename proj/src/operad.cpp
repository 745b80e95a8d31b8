#include "oforge/operad.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace oforge {

namespace {

std::string basis_label(const BasedSpace& sp, int i) {
  return sp.basis[static_cast<size_t>(i)];
}

/// All (outer, slot, inner) triples with matching connecting color whose
/// merged scheme stays within the arity bound, in deterministic order.
std::vector<CompKey> comp_domain(const NsCollection& c, int max_arity) {
  std::vector<CompKey> keys;
  for (const auto& [s, ssp] : c.spaces)
    for (const auto& [r, rsp] : c.spaces) {
      if (s.arity() < 1 || s.arity() + r.arity() - 1 > max_arity) continue;
      for (int i = 1; i <= s.arity(); ++i)
        if (s.inputs[i - 1] == r.output) keys.push_back({s, i, r});
    }
  return keys;
}

const NsCollection& ns_of(const COperad& p) { return p.carrier.ns; }
const NsCollection& ns_of(const NsOperad& p) { return p.carrier; }

} // namespace

LinMap COperad::get_comp(const ColorScheme& outer, int i,
                         const ColorScheme& inner) const {
  auto it = comp.find({outer, i, inner});
  if (it != comp.end()) return it->second;
  return lin_zero(tensor_space(carrier.ns.space(outer), carrier.ns.space(inner)),
                  carrier.ns.space(scheme_merge(outer, i, inner)));
}

void COperad::set_comp(const ColorScheme& outer, int i,
                       const ColorScheme& inner, LinMap m) {
  if (smat_is_zero(m.m)) return;
  comp[{outer, i, inner}] = std::move(m);
}

SVec COperad::compose(const ColorScheme& outer, const SVec& a, int i,
                      const ColorScheme& inner, const SVec& b) const {
  return lin_apply(get_comp(outer, i, inner),
                   svec_tensor(a, b, dim(inner)));
}

namespace {

template <class Op>
void check_comp_typing(const Op& p, Report& rep) {
  for (const auto& [key, m] : p.comp) {
    const auto& [s, i, r] = key;
    std::string where = "comp " + scheme_to_string(s) + " o_" +
                        std::to_string(i) + " " + scheme_to_string(r);
    if (i < 1 || i > s.arity()) {
      rep.fail(where + ": slot out of range");
      continue;
    }
    if (s.inputs[i - 1] != r.output) {
      rep.fail(where + ": connecting colors differ");
      continue;
    }
    if (s.arity() + r.arity() - 1 > p.max_arity)
      rep.fail(where + ": merged arity exceeds truncation");
    if (!ns_of(p).supported(s) || !ns_of(p).supported(r))
      rep.fail(where + ": unsupported scheme");
    if (m.source.dim() != p.dim(s) * p.dim(r) ||
        m.target.dim() != p.dim(scheme_merge(s, i, r)))
      rep.fail(where + ": matrix dimensions do not match components");
    if (smat_is_zero(m.m)) rep.fail(where + ": stored zero map");
  }
}

/// Naturality of o_i in the variables that do not take part in the
/// composition: spectator input slots of either factor and both outputs.
template <class Op>
void check_comp_naturality(const Op& p, Report& rep) {
  const LinearCat& cat = p.cat();
  const NsCollection& ns = ns_of(p);
  for (const CompKey& key : comp_domain(ns_of(p), p.max_arity)) {
    const auto& [s, i, r] = key;
    ColorScheme m = scheme_merge(s, i, r);
    std::string where = scheme_to_string(s) + " o_" + std::to_string(i) +
                        " " + scheme_to_string(r);
    for (const std::string& f : cat.nonidentity_basis()) {
      const auto& fi = cat.info(f);
      // Outer spectator slots.
      for (int j = 1; j <= s.arity(); ++j) {
        if (j == i || s.inputs[j - 1] != fi.tgt) continue;
        int jm = j < i ? j : j + r.arity() - 1;
        ColorScheme s2 = scheme_replace_input(s, j, fi.src);
        LinMap lhs = lin_compose(p.get_comp(s2, i, r),
                                 lin_tensor(ns.get_in_act(s, j, f),
                                            lin_identity(ns.space(r))));
        LinMap rhs = lin_compose(ns.get_in_act(m, jm, f), p.get_comp(s, i, r));
        if (!lin_equal(lhs, rhs))
          rep.fail(where + ": not natural in outer slot " + std::to_string(j) +
                   " along " + f);
      }
      // Inner spectator slots.
      for (int j = 1; j <= r.arity(); ++j) {
        if (r.inputs[j - 1] != fi.tgt) continue;
        ColorScheme r2 = scheme_replace_input(r, j, fi.src);
        LinMap lhs = lin_compose(p.get_comp(s, i, r2),
                                 lin_tensor(lin_identity(ns.space(s)),
                                            ns.get_in_act(r, j, f)));
        LinMap rhs =
            lin_compose(ns.get_in_act(m, i - 1 + j, f), p.get_comp(s, i, r));
        if (!lin_equal(lhs, rhs))
          rep.fail(where + ": not natural in inner slot " + std::to_string(j) +
                   " along " + f);
      }
      // Output of the outer factor.
      if (s.output == fi.src) {
        ColorScheme s2 = scheme_replace_output(s, fi.tgt);
        LinMap lhs = lin_compose(p.get_comp(s2, i, r),
                                 lin_tensor(ns.get_out_act(s, f),
                                            lin_identity(ns.space(r))));
        LinMap rhs = lin_compose(ns.get_out_act(m, f), p.get_comp(s, i, r));
        if (!lin_equal(lhs, rhs))
          rep.fail(where + ": not natural in the output along " + f);
      }
    }
  }
}

template <class Op>
void check_comp_cowedge(const Op& p, Report& rep) {
  const LinearCat& cat = p.cat();
  const NsCollection& ns = ns_of(p);
  // Quantify over the connecting morphism f: c -> d, outer schemes with
  // slot i of color d, and inner schemes with output c.
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces) {
      if (s.arity() < 1 || s.arity() + r.arity() - 1 > p.max_arity) continue;
      for (const std::string& f : cat.nonidentity_basis()) {
        const auto& fi = cat.info(f);
        if (r.output != fi.src) continue;
        for (int i = 1; i <= s.arity(); ++i) {
          if (s.inputs[i - 1] != fi.tgt) continue;
          ColorScheme s2 = scheme_replace_input(s, i, fi.src);
          ColorScheme r2 = scheme_replace_output(r, fi.tgt);
          LinMap via_in = lin_compose(
              p.get_comp(s2, i, r),
              lin_tensor(ns.get_in_act(s, i, f), lin_identity(ns.space(r))));
          LinMap via_out = lin_compose(
              p.get_comp(s, i, r2),
              lin_tensor(lin_identity(ns.space(s)), ns.get_out_act(r, f)));
          if (!lin_equal(via_in, via_out))
            rep.fail("cowedge fails at " + scheme_to_string(s) + " o_" +
                     std::to_string(i) + " " + scheme_to_string(r) +
                     " along " + f);
        }
      }
    }
}

void check_comp_equivariance(const COperad& p, Report& rep) {
  for (const auto& [s, ssp] : p.carrier.ns.spaces)
    for (const auto& [r, rsp] : p.carrier.ns.spaces) {
      int n = s.arity(), m = r.arity();
      if (n < 1 || n + m - 1 > p.max_arity) continue;
      for (const Perm& sg : all_perms(n))
        for (const Perm& tau : all_perms(m))
          for (int i = 1; i <= n; ++i) {
            if (s.inputs[sg(i) - 1] != r.output) continue;
            ColorScheme ss = scheme_act(s, sg);
            ColorScheme rt = scheme_act(r, tau);
            Perm ins = perm_insert(sg, i, tau);
            ColorScheme plain = scheme_merge(s, sg(i), r);
            LinMap lhs =
                lin_compose(p.get_comp(ss, i, rt),
                            lin_tensor(p.carrier.get_sigma(s, sg),
                                       p.carrier.get_sigma(r, tau)));
            LinMap rhs = lin_compose(p.carrier.get_sigma(plain, ins),
                                     p.get_comp(s, sg(i), r));
            if (!lin_equal(lhs, rhs))
              rep.fail("equivariance fails at " + scheme_to_string(s) +
                       ", " + scheme_to_string(r) + ", i=" +
                       std::to_string(i) + ", sigma=" + perm_to_string(sg) +
                       ", tau=" + perm_to_string(tau));
          }
    }
}

template <class Op>
void check_comp_associativity(const Op& p, Report& rep) {
  const NsCollection& ns = ns_of(p);
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces)
      for (const auto& [q, qsp] : ns.spaces) {
        int n = s.arity(), m = r.arity(), k = q.arity();
        if (n < 1 || n + m - 1 < 1) continue;
        if (n + m + k - 2 > p.max_arity || n + m - 1 > p.max_arity) continue;
        for (int j = 1; j <= n; ++j) {
          if (s.inputs[j - 1] != r.output) continue;
          ColorScheme sr = scheme_merge(s, j, r);
          for (int i = 1; i <= n + m - 1; ++i) {
            if (sr.inputs[i - 1] != q.output) continue;
            // The other route passes through an intermediate of this arity;
            // when it overflows the truncation bound the law is vacuous.
            int inter = (i >= j && i < j + m) ? m + k - 1 : n + k - 1;
            if (inter > p.max_arity) continue;
            for (int a = 0; a < ssp.dim(); ++a)
              for (int b = 0; b < rsp.dim(); ++b)
                for (int c = 0; c < qsp.dim(); ++c) {
                  SVec ab = p.compose(s, svec_unit(a), j, r, svec_unit(b));
                  SVec lhs = p.compose(sr, ab, i, q, svec_unit(c));
                  SVec rhs;
                  if (i < j) {
                    SVec ac = p.compose(s, svec_unit(a), i, q, svec_unit(c));
                    rhs = p.compose(scheme_merge(s, i, q), ac, j + k - 1, r,
                                    svec_unit(b));
                  } else if (i < j + m) {
                    SVec bc = p.compose(r, svec_unit(b), i - j + 1, q,
                                        svec_unit(c));
                    rhs = p.compose(s, svec_unit(a), j,
                                    scheme_merge(r, i - j + 1, q), bc);
                  } else {
                    SVec ac = p.compose(s, svec_unit(a), i - m + 1, q,
                                        svec_unit(c));
                    rhs = p.compose(scheme_merge(s, i - m + 1, q), ac, j, r,
                                    svec_unit(b));
                  }
                  if (!svec_equal(lhs, rhs))
                    rep.fail("associativity fails at (" +
                             basis_label(ssp, a) + " o_" + std::to_string(j) +
                             " " + basis_label(rsp, b) + ") o_" +
                             std::to_string(i) + " " + basis_label(qsp, c) +
                             " over " + scheme_to_string(s) + ", " +
                             scheme_to_string(r) + ", " +
                             scheme_to_string(q));
                }
          }
        }
      }
}

} // namespace

Report check_operad(const COperad& p) {
  Report rep = validate_sym(p.carrier);
  if (p.max_arity < 1) rep.fail("nonpositive arity truncation");
  check_comp_typing(p, rep);
  if (!rep.ok()) return rep;
  check_comp_naturality(p, rep);
  check_comp_cowedge(p, rep);
  check_comp_equivariance(p, rep);
  check_comp_associativity(p, rep);
  return rep;
}

LinMap NsOperad::get_comp(const ColorScheme& outer, int i,
                          const ColorScheme& inner) const {
  auto it = comp.find({outer, i, inner});
  if (it != comp.end()) return it->second;
  return lin_zero(tensor_space(carrier.space(outer), carrier.space(inner)),
                  carrier.space(scheme_merge(outer, i, inner)));
}

void NsOperad::set_comp(const ColorScheme& outer, int i,
                        const ColorScheme& inner, LinMap m) {
  if (smat_is_zero(m.m)) return;
  comp[{outer, i, inner}] = std::move(m);
}

SVec NsOperad::compose(const ColorScheme& outer, const SVec& a, int i,
                       const ColorScheme& inner, const SVec& b) const {
  return lin_apply(get_comp(outer, i, inner), svec_tensor(a, b, dim(inner)));
}

Report check_ns_operad(const NsOperad& p) {
  Report rep = validate_functor(p.carrier);
  if (p.max_arity < 1) rep.fail("nonpositive arity truncation");
  check_comp_typing(p, rep);
  if (!rep.ok()) return rep;
  check_comp_naturality(p, rep);
  check_comp_cowedge(p, rep);
  check_comp_associativity(p, rep);
  return rep;
}

NsOperad ns_view(const COperad& p) {
  return NsOperad{p.carrier.ns, p.max_arity, p.comp};
}

Report check_unital(const UnitalCOperad& p) {
  Report rep;
  const LinearCat& cat = p.base.cat();
  const NsCollection& ns = p.base.carrier.ns;
  // Typing of the unit family.
  for (const auto& b : cat.basis) {
    auto it = p.units.find(b.id);
    if (it == p.units.end()) {
      rep.fail("missing unit for " + b.id);
      continue;
    }
    ColorScheme us{{b.src}, b.tgt};
    for (const auto& [idx, c] : it->second.terms)
      if (idx < 0 || idx >= ns.dim(us)) {
        rep.fail("unit for " + b.id + " is not a vector of " +
                 scheme_to_string(us));
        break;
      }
  }
  if (!rep.ok()) return rep;
  auto unit = [&](const std::string& f) { return p.units.at(f); };

  // Naturality: slot action by f and output action by h send u_g to the
  // unit of the (linearly extended) composite h g f.
  for (const auto& g : cat.basis) {
    ColorScheme ug{{g.src}, g.tgt};
    for (const std::string& f : cat.nonidentity_basis()) {
      if (cat.info(f).tgt != g.src) continue;
      SVec lhs = lin_apply(ns.get_in_act(ug, 1, f), unit(g.id));
      SVec rhs;
      for (const auto& [b, c] : cat.compose_basis(g.id, f))
        rhs = svec_axpy(rhs, c, unit(b));
      if (!svec_equal(lhs, rhs))
        rep.fail("unit naturality fails for input twist " + f + " of u_" +
                 g.id);
    }
    for (const std::string& h : cat.nonidentity_basis()) {
      if (cat.info(h).src != g.tgt) continue;
      SVec lhs = lin_apply(ns.get_out_act(ug, h), unit(g.id));
      SVec rhs;
      for (const auto& [b, c] : cat.compose_basis(h, g.id))
        rhs = svec_axpy(rhs, c, unit(b));
      if (!svec_equal(lhs, rhs))
        rep.fail("unit naturality fails for output twist " + h + " of u_" +
                 g.id);
    }
  }

  // Unit axioms on every basis element of every component.
  for (const auto& [s, sp] : ns.spaces) {
    for (const auto& f : cat.basis) {
      ColorScheme us{{f.src}, f.tgt};
      // u_f o_1 x = (output action of f)(x), for x with output f.src.
      if (s.output == f.src) {
        for (int a = 0; a < sp.dim(); ++a) {
          SVec lhs = p.base.compose(us, unit(f.id), 1, s, svec_unit(a));
          SVec rhs = lin_apply(ns.get_out_act(s, f.id), svec_unit(a));
          if (!svec_equal(lhs, rhs))
            rep.fail("left unit axiom fails for u_" + f.id + " o_1 " +
                     basis_label(sp, a) + " at " + scheme_to_string(s));
        }
      }
      // x o_i u_f = (slot i action of f)(x), for slots of color f.tgt.
      for (int i = 1; i <= s.arity(); ++i) {
        if (s.inputs[i - 1] != f.tgt) continue;
        for (int a = 0; a < sp.dim(); ++a) {
          SVec lhs = p.base.compose(s, svec_unit(a), i, us, unit(f.id));
          SVec rhs = lin_apply(ns.get_in_act(s, i, f.id), svec_unit(a));
          if (!svec_equal(lhs, rhs))
            rep.fail("right unit axiom fails for " + basis_label(sp, a) +
                     " o_" + std::to_string(i) + " u_" + f.id + " at " +
                     scheme_to_string(s));
        }
      }
    }
  }
  return rep;
}

Report cowedge_from_unital(const UnitalCOperad& p) {
  Report rep;
  check_comp_cowedge(p.base, rep);
  return rep;
}

UnitalCOperad hom_operad(const LinearCat& cat) {
  UnitalCOperad p;
  p.base.max_arity = 1;
  NsCollection& ns = p.base.carrier.ns;
  ns.cat = &cat;
  for (const Obj& a : cat.objects)
    for (const Obj& b : cat.objects) {
      BasedSpace h = cat.hom_space(a, b);
      if (h.dim() > 0) ns.set_space(ColorScheme{{a}, b}, h);
    }
  for (const auto& [s, sp] : ns.spaces) {
    const Obj& a = s.inputs[0];
    const Obj& b = s.output;
    for (const std::string& f : cat.nonidentity_basis()) {
      const auto& fi = cat.info(f);
      // Precomposition: hom(a, b) -> hom(c, b) for f: c -> a.
      if (fi.tgt == a) {
        BasedSpace tgt = cat.hom_space(fi.src, b);
        std::vector<SVec> cols;
        for (const std::string& g : cat.hom_ids(a, b)) {
          SVec col;
          for (const auto& [h, c] : cat.compose_basis(g, f)) {
            auto ids = cat.hom_ids(fi.src, b);
            int idx = static_cast<int>(
                std::find(ids.begin(), ids.end(), h) - ids.begin());
            col = svec_axpy(col, c, svec_unit(idx));
          }
          cols.push_back(col);
        }
        LinMap m = lin_from_cols(sp, tgt, cols);
        if (!smat_is_zero(m.m)) ns.set_in_act(s, 1, f, m);
      }
      // Postcomposition: hom(a, b) -> hom(a, d) for f: b -> d.
      if (fi.src == b) {
        BasedSpace tgt = cat.hom_space(a, fi.tgt);
        std::vector<SVec> cols;
        for (const std::string& g : cat.hom_ids(a, b)) {
          SVec col;
          for (const auto& [h, c] : cat.compose_basis(f, g)) {
            auto ids = cat.hom_ids(a, fi.tgt);
            int idx = static_cast<int>(
                std::find(ids.begin(), ids.end(), h) - ids.begin());
            col = svec_axpy(col, c, svec_unit(idx));
          }
          cols.push_back(col);
        }
        LinMap m = lin_from_cols(sp, tgt, cols);
        if (!smat_is_zero(m.m)) ns.set_out_act(s, f, m);
      }
    }
  }
  // Compositions: hom(b, c) (x) hom(a, b) -> hom(a, c).
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces) {
      if (s.inputs[0] != r.output) continue;
      const Obj& a = r.inputs[0];
      const Obj& c = s.output;
      BasedSpace tgt = cat.hom_space(a, c);
      auto tgt_ids = cat.hom_ids(a, c);
      std::vector<SVec> cols;
      for (const std::string& g : cat.hom_ids(s.inputs[0], c))
        for (const std::string& f : cat.hom_ids(a, r.output)) {
          SVec col;
          for (const auto& [h, coef] : cat.compose_basis(g, f)) {
            int idx = static_cast<int>(
                std::find(tgt_ids.begin(), tgt_ids.end(), h) -
                tgt_ids.begin());
            col = svec_axpy(col, coef, svec_unit(idx));
          }
          cols.push_back(col);
        }
      p.base.set_comp(s, 1, r, lin_from_cols(tensor_space(ssp, rsp), tgt,
                                             cols));
    }
  for (const auto& b : cat.basis) {
    auto ids = cat.hom_ids(b.src, b.tgt);
    int idx = static_cast<int>(std::find(ids.begin(), ids.end(), b.id) -
                               ids.begin());
    p.units[b.id] = svec_unit(idx);
  }
  return p;
}

LinMap PartialFPresentation::get_comp_f(const ColorScheme& outer, int i,
                                        const std::string& f,
                                        const ColorScheme& inner) const {
  auto it = comp_f.find({outer, i, f, inner});
  if (it != comp_f.end()) return it->second;
  return lin_zero(
      tensor_space(carrier.ns.space(outer), carrier.ns.space(inner)),
      carrier.ns.space(scheme_merge(outer, i, inner)));
}

void PartialFPresentation::set_comp_f(const ColorScheme& outer, int i,
                                      const std::string& f,
                                      const ColorScheme& inner, LinMap m) {
  if (smat_is_zero(m.m)) return;
  comp_f[{outer, i, f, inner}] = std::move(m);
}

LinMap PartialFPresentation::comp_f_vec(const ColorScheme& outer, int i,
                                        const std::map<std::string, Rat>& f,
                                        const ColorScheme& inner) const {
  LinMap acc = lin_zero(
      tensor_space(carrier.ns.space(outer), carrier.ns.space(inner)),
      carrier.ns.space(scheme_merge(outer, i, inner)));
  for (const auto& [id, c] : f)
    acc = lin_add(acc, lin_scale(c, get_comp_f(outer, i, id, inner)));
  return acc;
}

PartialFPresentation to_partial_f(const COperad& p) {
  PartialFPresentation q;
  q.carrier = p.carrier;
  q.max_arity = p.max_arity;
  const LinearCat& cat = p.cat();
  const NsCollection& ns = p.carrier.ns;
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces) {
      if (s.arity() < 1 || s.arity() + r.arity() - 1 > p.max_arity) continue;
      for (int i = 1; i <= s.arity(); ++i)
        for (const std::string& f : cat.hom_ids(r.output, s.inputs[i - 1])) {
          ColorScheme r2 = scheme_replace_output(r, s.inputs[i - 1]);
          LinMap m = lin_compose(
              p.get_comp(s, i, r2),
              lin_tensor(lin_identity(ssp), ns.get_out_act(r, f)));
          q.set_comp_f(s, i, f, r, m);
        }
    }
  return q;
}

COperad from_partial_f(const PartialFPresentation& q) {
  COperad p;
  p.carrier = q.carrier;
  p.max_arity = q.max_arity;
  const LinearCat& cat = q.cat();
  const NsCollection& ns = q.carrier.ns;
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces) {
      if (s.arity() < 1 || s.arity() + r.arity() - 1 > q.max_arity) continue;
      for (int i = 1; i <= s.arity(); ++i)
        if (s.inputs[i - 1] == r.output)
          p.set_comp(s, i, r,
                     q.get_comp_f(s, i, cat.identity.at(r.output), r));
    }
  return p;
}

namespace {

void check_partial_f_typing(const PartialFPresentation& q, Report& rep) {
  const LinearCat& cat = q.cat();
  for (const auto& [key, m] : q.comp_f) {
    const auto& [s, i, f, r] = key;
    std::string where = "comp_f " + scheme_to_string(s) + " o_" +
                        std::to_string(i) + "^" + f + " " +
                        scheme_to_string(r);
    if (i < 1 || i > s.arity()) {
      rep.fail(where + ": slot out of range");
      continue;
    }
    const auto* fi = cat.basis_index.count(f)
                         ? &cat.info(f)
                         : nullptr;
    if (fi == nullptr) {
      rep.fail(where + ": unknown connecting morphism");
      continue;
    }
    if (fi->src != r.output || fi->tgt != s.inputs[i - 1]) {
      rep.fail(where + ": connecting morphism endpoints do not match");
      continue;
    }
    if (s.arity() + r.arity() - 1 > q.max_arity)
      rep.fail(where + ": merged arity exceeds truncation");
    if (m.source.dim() != q.dim(s) * q.dim(r) ||
        m.target.dim() != q.dim(scheme_merge(s, i, r)))
      rep.fail(where + ": matrix dimensions do not match components");
    if (smat_is_zero(m.m)) rep.fail(where + ": stored zero map");
  }
}

void check_partial_f_equivariance(const PartialFPresentation& q, Report& rep) {
  const LinearCat& cat = q.cat();
  for (const auto& [s, ssp] : q.carrier.ns.spaces)
    for (const auto& [r, rsp] : q.carrier.ns.spaces) {
      int n = s.arity(), m = r.arity();
      if (n < 1 || n + m - 1 > q.max_arity) continue;
      for (const Perm& sg : all_perms(n))
        for (const Perm& tau : all_perms(m))
          for (int i = 1; i <= n; ++i)
            for (const std::string& h :
                 cat.hom_ids(r.output, s.inputs[sg(i) - 1])) {
              ColorScheme ss = scheme_act(s, sg);
              ColorScheme rt = scheme_act(r, tau);
              Perm ins = perm_insert(sg, i, tau);
              ColorScheme plain = scheme_merge(s, sg(i), r);
              LinMap lhs =
                  lin_compose(q.get_comp_f(ss, i, h, rt),
                              lin_tensor(q.carrier.get_sigma(s, sg),
                                         q.carrier.get_sigma(r, tau)));
              LinMap rhs = lin_compose(q.carrier.get_sigma(plain, ins),
                                       q.get_comp_f(s, sg(i), h, r));
              if (!lin_equal(lhs, rhs))
                rep.fail("twisted equivariance fails at " +
                         scheme_to_string(s) + ", " + scheme_to_string(r) +
                         ", i=" + std::to_string(i) + ", h=" + h +
                         ", sigma=" + perm_to_string(sg) + ", tau=" +
                         perm_to_string(tau));
            }
    }
}

/// Absorption of the connecting actions into the twist, plus naturality in
/// all spectator variables.
void check_partial_f_twists(const PartialFPresentation& q, Report& rep) {
  const LinearCat& cat = q.cat();
  const NsCollection& ns = q.carrier.ns;
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces) {
      int n = s.arity();
      if (n < 1 || n + r.arity() - 1 > q.max_arity) continue;
      ColorScheme mg;
      for (int i = 1; i <= n; ++i) {
        mg = scheme_merge(s, i, r);
        std::string where = scheme_to_string(s) + " o_" + std::to_string(i) +
                            " " + scheme_to_string(r);
        // Inner output action absorbed: o_i^h (1 (x) g#) = o_i^{h g}.
        for (const std::string& g : cat.nonidentity_basis()) {
          if (cat.info(g).src != r.output) continue;
          const Obj& a = cat.info(g).tgt;
          ColorScheme r2 = scheme_replace_output(r, a);
          for (const std::string& h : cat.hom_ids(a, s.inputs[i - 1])) {
            LinMap lhs = lin_compose(
                q.get_comp_f(s, i, h, r2),
                lin_tensor(lin_identity(ssp), ns.get_out_act(r, g)));
            LinMap rhs = q.comp_f_vec(s, i, cat.compose_basis(h, g), r);
            if (!lin_equal(lhs, rhs))
              rep.fail(where + ": inner output twist absorption fails for g=" +
                       g + ", h=" + h);
          }
        }
        // Outer slot-i action absorbed: o_i^h (e# (x) 1) = o_i^{e h}.
        for (const std::string& e : cat.nonidentity_basis()) {
          if (cat.info(e).tgt != s.inputs[i - 1]) continue;
          const Obj& c = cat.info(e).src;
          ColorScheme s2 = scheme_replace_input(s, i, c);
          for (const std::string& h : cat.hom_ids(r.output, c)) {
            LinMap lhs = lin_compose(
                q.get_comp_f(s2, i, h, r),
                lin_tensor(ns.get_in_act(s, i, e), lin_identity(rsp)));
            LinMap rhs = q.comp_f_vec(s, i, cat.compose_basis(e, h), r);
            if (!lin_equal(lhs, rhs))
              rep.fail(where + ": outer slot twist absorption fails for e=" +
                       e + ", h=" + h);
          }
        }
        // Spectator naturality, all with the twist h fixed.
        for (const std::string& h : cat.hom_ids(r.output, s.inputs[i - 1])) {
          for (const std::string& e : cat.nonidentity_basis()) {
            const auto& ei = cat.info(e);
            for (int j = 1; j <= n; ++j) {
              if (j == i || s.inputs[j - 1] != ei.tgt) continue;
              int jm = j < i ? j : j + r.arity() - 1;
              ColorScheme s2 = scheme_replace_input(s, j, ei.src);
              LinMap lhs = lin_compose(
                  q.get_comp_f(s2, i, h, r),
                  lin_tensor(ns.get_in_act(s, j, e), lin_identity(rsp)));
              LinMap rhs = lin_compose(ns.get_in_act(mg, jm, e),
                                       q.get_comp_f(s, i, h, r));
              if (!lin_equal(lhs, rhs))
                rep.fail(where + "^" + h + ": not natural in outer slot " +
                         std::to_string(j) + " along " + e);
            }
            for (int j = 1; j <= r.arity(); ++j) {
              if (r.inputs[j - 1] != ei.tgt) continue;
              ColorScheme r2 = scheme_replace_input(r, j, ei.src);
              LinMap lhs = lin_compose(
                  q.get_comp_f(s, i, h, r2),
                  lin_tensor(lin_identity(ssp), ns.get_in_act(r, j, e)));
              LinMap rhs = lin_compose(ns.get_in_act(mg, i - 1 + j, e),
                                       q.get_comp_f(s, i, h, r));
              if (!lin_equal(lhs, rhs))
                rep.fail(where + "^" + h + ": not natural in inner slot " +
                         std::to_string(j) + " along " + e);
            }
            if (s.output == ei.src) {
              ColorScheme s2 = scheme_replace_output(s, ei.tgt);
              LinMap lhs = lin_compose(
                  q.get_comp_f(s2, i, h, r),
                  lin_tensor(ns.get_out_act(s, e), lin_identity(rsp)));
              LinMap rhs = lin_compose(ns.get_out_act(mg, e),
                                       q.get_comp_f(s, i, h, r));
              if (!lin_equal(lhs, rhs))
                rep.fail(where + "^" + h +
                         ": not natural in the output along " + e);
            }
          }
        }
      }
    }
}

void check_partial_f_associativity(const PartialFPresentation& q,
                                   Report& rep) {
  const LinearCat& cat = q.cat();
  const NsCollection& ns = q.carrier.ns;
  auto compose_f = [&](const ColorScheme& outer, const SVec& a, int i,
                       const std::string& f, const ColorScheme& inner,
                       const SVec& b) {
    return lin_apply(q.get_comp_f(outer, i, f, inner),
                     svec_tensor(a, b, q.dim(inner)));
  };
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces)
      for (const auto& [t, tsp] : ns.spaces) {
        int n = s.arity(), m = r.arity(), k = t.arity();
        if (n < 1 || n + m + k - 2 > q.max_arity ||
            n + m - 1 > q.max_arity)
          continue;
        for (int j = 1; j <= n; ++j)
          for (const std::string& f : cat.hom_ids(r.output, s.inputs[j - 1])) {
            ColorScheme sr = scheme_merge(s, j, r);
            for (int i = 1; i <= n + m - 1; ++i) {
              // Skip when the other route overflows the truncation bound.
              int inter = (i >= j && i < j + m) ? m + k - 1 : n + k - 1;
              if (inter > q.max_arity) continue;
              for (const std::string& g :
                   cat.hom_ids(t.output, sr.inputs[i - 1])) {
                for (int a = 0; a < ssp.dim(); ++a)
                  for (int b = 0; b < rsp.dim(); ++b)
                    for (int c = 0; c < tsp.dim(); ++c) {
                      SVec ab =
                          compose_f(s, svec_unit(a), j, f, r, svec_unit(b));
                      SVec lhs = compose_f(sr, ab, i, g, t, svec_unit(c));
                      SVec rhs;
                      if (i < j) {
                        SVec ac = compose_f(s, svec_unit(a), i, g, t,
                                            svec_unit(c));
                        rhs = compose_f(scheme_merge(s, i, t), ac, j + k - 1,
                                        f, r, svec_unit(b));
                      } else if (i < j + m) {
                        SVec bc = compose_f(r, svec_unit(b), i - j + 1, g, t,
                                            svec_unit(c));
                        rhs = compose_f(s, svec_unit(a), j, f,
                                        scheme_merge(r, i - j + 1, t), bc);
                      } else {
                        SVec ac = compose_f(s, svec_unit(a), i - m + 1, g, t,
                                            svec_unit(c));
                        rhs = compose_f(scheme_merge(s, i - m + 1, t), ac, j,
                                        f, r, svec_unit(b));
                      }
                      if (!svec_equal(lhs, rhs))
                        rep.fail("twisted associativity fails at " +
                                 scheme_to_string(s) + " o_" +
                                 std::to_string(j) + "^" + f + " " +
                                 scheme_to_string(r) + ", then o_" +
                                 std::to_string(i) + "^" + g + " " +
                                 scheme_to_string(t));
                    }
              }
            }
          }
      }
}

} // namespace

Report check_partial_f(const PartialFPresentation& q) {
  Report rep = validate_sym(q.carrier);
  if (q.max_arity < 1) rep.fail("nonpositive arity truncation");
  check_partial_f_typing(q, rep);
  if (!rep.ok()) return rep;
  check_partial_f_equivariance(q, rep);
  check_partial_f_twists(q, rep);
  check_partial_f_associativity(q, rep);
  return rep;
}

LinMap Substitude::get_mu(const MuKey& k) const {
  auto it = mu.find(k);
  if (it != mu.end()) return it->second;
  BasedSpace src = carrier.ns.space(k.first);
  for (const ColorScheme& r : k.second)
    src = tensor_space(src, carrier.ns.space(r));
  // Merge right-to-left so earlier slot indices stay valid.
  ColorScheme tgt = k.first;
  for (int i = static_cast<int>(k.second.size()); i >= 1; --i)
    tgt = scheme_merge(tgt, i, k.second[i - 1]);
  return lin_zero(src, carrier.ns.space(tgt));
}

void Substitude::set_mu(const MuKey& k, LinMap m) {
  if (smat_is_zero(m.m)) return;
  mu[k] = std::move(m);
}

Substitude to_substitude(const UnitalCOperad& p) {
  Substitude s;
  s.carrier = p.base.carrier;
  s.max_arity = p.base.max_arity;
  s.eta = p.units;
  const NsCollection& ns = p.base.carrier.ns;

  for (const auto& [outer, osp] : ns.spaces) {
    int n = outer.arity();
    if (n < 1) continue;
    // Enumerate supported inner scheme tuples with matching outputs and
    // total arity within the truncation.
    std::vector<std::vector<ColorScheme>> tuples{{}};
    for (int slot = 1; slot <= n; ++slot) {
      std::vector<std::vector<ColorScheme>> next;
      for (const auto& prefix : tuples) {
        int used = 0;
        for (const auto& r : prefix) used += r.arity();
        for (const auto& [r, rsp] : ns.spaces) {
          if (r.output != outer.inputs[slot - 1]) continue;
          if (used + r.arity() > s.max_arity) continue;
          auto ext = prefix;
          ext.push_back(r);
          next.push_back(std::move(ext));
        }
      }
      tuples = std::move(next);
    }
    for (const auto& tuple : tuples) {
      // Skip profiles whose right-to-left evaluation passes through an
      // arity above the truncation (possible only with arity-0 slots).
      bool within = true;
      {
        int arity = n;
        for (int slot = n; slot >= 1; --slot) {
          arity += tuple[static_cast<size_t>(slot - 1)].arity() - 1;
          if (arity > s.max_arity) within = false;
        }
      }
      if (!within) continue;
      // Evaluate the iterated composition on every basis tuple.
      std::vector<int> dims{osp.dim()};
      for (const auto& r : tuple) dims.push_back(ns.dim(r));
      int total = 1;
      for (int d : dims) total *= d;
      std::vector<SVec> cols;
      cols.reserve(static_cast<size_t>(total));
      std::vector<int> idx(dims.size(), 0);
      for (int flat = 0; flat < total; ++flat) {
        int rem = flat;
        for (int pos = static_cast<int>(dims.size()) - 1; pos >= 0; --pos) {
          idx[static_cast<size_t>(pos)] = rem % dims[static_cast<size_t>(pos)];
          rem /= dims[static_cast<size_t>(pos)];
        }
        SVec z = svec_unit(idx[0]);
        ColorScheme cur = outer;
        for (int slot = n; slot >= 1; --slot) {
          z = p.base.compose(cur, z, slot, tuple[static_cast<size_t>(slot - 1)],
                             svec_unit(idx[static_cast<size_t>(slot)]));
          cur = scheme_merge(cur, slot, tuple[static_cast<size_t>(slot - 1)]);
        }
        cols.push_back(std::move(z));
      }
      BasedSpace src = osp;
      for (const auto& r : tuple) src = tensor_space(src, ns.space(r));
      ColorScheme tgt = outer;
      for (int slot = n; slot >= 1; --slot)
        tgt = scheme_merge(tgt, slot, tuple[static_cast<size_t>(slot - 1)]);
      s.set_mu({outer, tuple}, lin_from_cols(src, ns.space(tgt), cols));
    }
  }
  return s;
}

UnitalCOperad from_substitude(const Substitude& s) {
  UnitalCOperad p;
  p.base.carrier = s.carrier;
  p.base.max_arity = s.max_arity;
  p.units = s.eta;
  const LinearCat& cat = s.cat();
  const NsCollection& ns = s.carrier.ns;
  for (const auto& [outer, osp] : ns.spaces) {
    int n = outer.arity();
    if (n < 1) continue;
    for (const auto& [inner, isp] : ns.spaces) {
      if (n + inner.arity() - 1 > s.max_arity) continue;
      for (int i = 1; i <= n; ++i) {
        if (outer.inputs[i - 1] != inner.output) continue;
        std::vector<ColorScheme> tuple;
        for (int k = 1; k <= n; ++k)
          tuple.push_back(k == i ? inner
                                 : ColorScheme{{outer.inputs[k - 1]},
                                               outer.inputs[k - 1]});
        LinMap m = s.get_mu({outer, tuple});
        // Contract the unit vectors into all slots except i.
        SMat embed = smat_identity(osp.dim());
        for (int k = 1; k <= n; ++k) {
          if (k == i) {
            embed = smat_tensor(embed, smat_identity(isp.dim()));
          } else {
            const SVec& u = s.eta.at(cat.identity.at(outer.inputs[k - 1]));
            embed = smat_tensor(
                embed, SMat{ns.dim(tuple[static_cast<size_t>(k - 1)]), 1,
                            {u}});
          }
        }
        p.base.set_comp(outer, i, inner,
                        LinMap{tensor_space(osp, isp), m.target,
                               smat_mul(m.m, embed)});
      }
    }
  }
  return p;
}

OperadicIdeal ideal_closure(
    const COperad& p, const std::vector<std::pair<ColorScheme, SVec>>& gens,
    int weight_bound) {
  (void)weight_bound;
  const LinearCat& cat = p.cat();
  const NsCollection& ns = p.carrier.ns;
  OperadicIdeal ideal;
  std::map<ColorScheme, SpanBuilder> spans;
  int total_dim = 0;
  for (const auto& [s, sp] : ns.spaces) {
    spans.emplace(s, SpanBuilder(sp.dim()));
    total_dim += sp.dim();
  }
  std::deque<std::pair<ColorScheme, SVec>> queue;
  auto push = [&](const ColorScheme& s, const SVec& v) {
    if (v.terms.empty() || !ns.supported(s)) return;
    if (spans.at(s).add(v)) {
      ideal.span[s].push_back(v);
      queue.push_back({s, v});
    }
  };
  for (const auto& [s, v] : gens) {
    if (!ns.supported(s))
      throw std::invalid_argument("ideal generator in unsupported component " +
                                  scheme_to_string(s));
    for (const auto& [idx, c] : v.terms)
      if (idx < 0 || idx >= ns.dim(s))
        throw std::invalid_argument("ideal generator index out of range at " +
                                    scheme_to_string(s));
    push(s, v);
  }
  std::vector<CompKey> keys = comp_domain(p.carrier.ns, p.max_arity);
  int grown = 0;
  while (!queue.empty()) {
    auto [s, v] = queue.front();
    queue.pop_front();
    if (++grown > total_dim + 1)
      throw std::logic_error("ideal saturation failed to stabilize");
    // Compositions with arbitrary basis elements on the other side.
    for (const CompKey& key : keys) {
      const auto& [outer, i, inner] = key;
      if (outer == s)
        for (int b = 0; b < ns.dim(inner); ++b)
          push(scheme_merge(outer, i, inner),
               p.compose(outer, v, i, inner, svec_unit(b)));
      if (inner == s)
        for (int a = 0; a < ns.dim(outer); ++a)
          push(scheme_merge(outer, i, inner),
               p.compose(outer, svec_unit(a), i, inner, v));
    }
    // Input, output, and permutation actions.
    for (const std::string& f : cat.nonidentity_basis()) {
      const auto& fi = cat.info(f);
      for (int i = 1; i <= s.arity(); ++i)
        if (s.inputs[i - 1] == fi.tgt)
          push(scheme_replace_input(s, i, fi.src),
               lin_apply(ns.get_in_act(s, i, f), v));
      if (s.output == fi.src)
        push(scheme_replace_output(s, fi.tgt),
             lin_apply(ns.get_out_act(s, f), v));
    }
    for (const Perm& sg : all_perms(s.arity()))
      if (!is_identity(sg))
        push(scheme_act(s, sg), lin_apply(p.carrier.get_sigma(s, sg), v));
  }
  return ideal;
}

COperad quotient_operad(const COperad& p, const OperadicIdeal& ideal) {
  const NsCollection& ns = p.carrier.ns;
  std::map<ColorScheme, QuotientSpace> qs;
  COperad out;
  out.carrier.ns.cat = ns.cat;
  out.max_arity = p.max_arity;
  auto rels = [&](const ColorScheme& s) {
    auto it = ideal.span.find(s);
    return it == ideal.span.end() ? std::vector<SVec>{} : it->second;
  };
  for (const auto& [s, sp] : ns.spaces) {
    QuotientSpace q = quotient_by(sp, rels(s));
    if (q.quotient.dim() > 0) out.carrier.ns.set_space(s, q.quotient);
    qs.emplace(s, std::move(q));
  }
  // A map out of P(s) descends iff it kills the ideal span of s; the
  // projected composite is then independent of the section.
  auto assert_kills = [&](const LinMap& proj_map, const ColorScheme& s,
                          const std::string& what) {
    for (const SVec& rel : rels(s))
      if (!lin_apply(proj_map, rel).terms.empty())
        throw std::logic_error("quotient " + what +
                               " is not well defined at " +
                               scheme_to_string(s));
  };
  for (const auto& [key, m] : ns.in_act) {
    const auto& [s, i, f] = key;
    ColorScheme t = in_act_target(*ns.cat, s, i, f);
    if (!qs.count(t)) continue;
    LinMap down = lin_compose(qs.at(t).projection, m);
    assert_kills(down, s, "input action");
    if (!out.carrier.ns.supported(s) || !out.carrier.ns.supported(t)) continue;
    LinMap ind = lin_compose(down, qs.at(s).section);
    if (!smat_is_zero(ind.m)) out.carrier.ns.set_in_act(s, i, f, ind);
  }
  for (const auto& [key, m] : ns.out_act) {
    const auto& [s, f] = key;
    ColorScheme t = out_act_target(*ns.cat, s, f);
    if (!qs.count(t)) continue;
    LinMap down = lin_compose(qs.at(t).projection, m);
    assert_kills(down, s, "output action");
    if (!out.carrier.ns.supported(s) || !out.carrier.ns.supported(t)) continue;
    LinMap ind = lin_compose(down, qs.at(s).section);
    if (!smat_is_zero(ind.m)) out.carrier.ns.set_out_act(s, f, ind);
  }
  for (const auto& [key, m] : p.carrier.sigma) {
    const auto& [s, sg] = key;
    ColorScheme t = scheme_act(s, sg);
    if (!qs.count(t)) continue;
    LinMap down = lin_compose(qs.at(t).projection, m);
    assert_kills(down, s, "permutation action");
    if (is_identity(sg)) continue;
    if (!out.carrier.ns.supported(s) || !out.carrier.ns.supported(t)) continue;
    out.carrier.set_sigma(s, sg, lin_compose(down, qs.at(s).section));
  }
  for (const auto& [key, m] : p.comp) {
    const auto& [s, i, r] = key;
    ColorScheme t = scheme_merge(s, i, r);
    if (!qs.count(t)) continue;
    LinMap down = lin_compose(qs.at(t).projection, m);
    // Bilinearity: killing span (x) basis and basis (x) span suffices.
    for (const SVec& rel : rels(s))
      for (int b = 0; b < ns.dim(r); ++b)
        if (!lin_apply(down, svec_tensor(rel, svec_unit(b), ns.dim(r)))
                 .terms.empty())
          throw std::logic_error(
              "quotient composition is not well defined at " +
              scheme_to_string(s));
    for (const SVec& rel : rels(r))
      for (int a = 0; a < ns.dim(s); ++a)
        if (!lin_apply(down, svec_tensor(svec_unit(a), rel, ns.dim(r)))
                 .terms.empty())
          throw std::logic_error(
              "quotient composition is not well defined at " +
              scheme_to_string(r));
    if (!out.carrier.ns.supported(s) || !out.carrier.ns.supported(r) ||
        !out.carrier.ns.supported(t))
      continue;
    LinMap ind = lin_compose(
        down, lin_tensor(qs.at(s).section, qs.at(r).section));
    out.set_comp(s, i, r, ind);
  }
  return out;
}

int WeightGrading::weight_of(const ColorScheme& s, int idx) const {
  for (const auto& [key, range] : ranges)
    if (key.first == s && idx >= range.first &&
        idx < range.first + range.second)
      return key.second;
  return -1;
}

Report check_weight_grading(const COperad& p, const WeightGrading& g) {
  Report rep;
  const NsCollection& ns = p.carrier.ns;
  // The ranges must tile each graded component: every basis index covered
  // exactly once.
  std::map<ColorScheme, std::vector<int>> hits;
  for (const auto& [key, range] : g.ranges) {
    if (range.first < 0 || range.second < 0 ||
        range.first + range.second > ns.dim(key.first))
      rep.fail("range out of bounds at " + scheme_to_string(key.first) +
               " weight " + std::to_string(key.second));
    auto& h = hits[key.first];
    h.resize(static_cast<size_t>(ns.dim(key.first)), 0);
    for (int i = range.first;
         i < range.first + range.second && i < ns.dim(key.first); ++i)
      ++h[static_cast<size_t>(i)];
  }
  std::map<ColorScheme, int> covered;
  for (const auto& [s, h] : hits) {
    covered[s] = 1;
    for (int c : h)
      if (c != 1) {
        rep.fail("ranges do not tile the component at " + scheme_to_string(s));
        break;
      }
  }
  auto homogeneous = [&](const ColorScheme& s, const SVec& v) {
    int w = -2;
    for (const auto& [idx, c] : v.terms) {
      int wi = g.weight_of(s, idx);
      if (w == -2) w = wi;
      if (wi != w) return -3;
    }
    return w == -2 ? -1 : w;
  };
  // Compositions add weights.
  for (const auto& [key, m] : p.comp) {
    const auto& [s, i, r] = key;
    ColorScheme t = scheme_merge(s, i, r);
    if (!covered.count(s) || !covered.count(r) || !covered.count(t)) continue;
    for (int a = 0; a < ns.dim(s); ++a)
      for (int b = 0; b < ns.dim(r); ++b) {
        SVec img = p.compose(s, svec_unit(a), i, r, svec_unit(b));
        if (img.terms.empty()) continue;
        int w = homogeneous(t, img);
        if (w != g.weight_of(s, a) + g.weight_of(r, b))
          rep.fail("composition does not add weights at " +
                   scheme_to_string(s) + " o_" + std::to_string(i) + " " +
                   scheme_to_string(r));
      }
  }
  // Actions preserve weight.
  auto check_action = [&](const ColorScheme& src, const ColorScheme& tgt,
                          const LinMap& m, const std::string& what) {
    if (!covered.count(src) || !covered.count(tgt)) return;
    for (int a = 0; a < ns.dim(src); ++a) {
      SVec img = lin_apply(m, svec_unit(a));
      if (img.terms.empty()) continue;
      if (homogeneous(tgt, img) != g.weight_of(src, a))
        rep.fail(what + " does not preserve weight at " +
                 scheme_to_string(src));
    }
  };
  for (const auto& [key, m] : ns.in_act)
    check_action(std::get<0>(key),
                 in_act_target(*ns.cat, std::get<0>(key), std::get<1>(key),
                               std::get<2>(key)),
                 m, "input action");
  for (const auto& [key, m] : ns.out_act)
    check_action(key.first, out_act_target(*ns.cat, key.first, key.second), m,
                 "output action");
  for (const auto& [key, m] : p.carrier.sigma)
    check_action(key.first, scheme_act(key.first, key.second), m,
                 "permutation action");
  return rep;
}

bool is_quadratic_binary(const OperadPresentation& pres) {
  for (const auto& [s, sp] : pres.generators.ns.spaces)
    if (s.arity() != 2) return false;
  for (const auto& rel : pres.relations) {
    for (const auto& [idx, c] : rel.vec.terms)
      if (pres.grading.weight_of(rel.scheme, idx) != 2) return false;
  }
  return true;
}

} // namespace oforge
