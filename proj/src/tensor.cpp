#include "oforge/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace oforge {

namespace {

int single_arity(const NsCollection& x, const char* who) {
  auto ars = x.arities();
  if (ars.size() > 1)
    throw std::invalid_argument(std::string(who) + ": mixed-arity collection");
  return ars.empty() ? -1 : *ars.begin();
}

/// Block row placement: dst gets src as rows row0.., columns col0...
void place_block(SMat& dst, const SMat& src, int row0, int col0) {
  for (int j = 0; j < src.cols; ++j) {
    auto& c = dst.col[col0 + j];
    for (const auto& [r, v] : src.col[j].terms)
      c.terms.push_back({row0 + r, v});
  }
}

const CoendBlock* find_block(const std::vector<CoendBlock>& blocks,
                             const Obj& c) {
  for (const auto& b : blocks)
    if (b.color == c) return &b;
  return nullptr;
}

/// Decomposes an ambient index into its block and in-block coordinates.
struct BlockCoord {
  const CoendBlock* block;
  int xi, yi;
};

BlockCoord locate(const std::vector<CoendBlock>& blocks, int idx) {
  for (const auto& b : blocks)
    if (idx >= b.offset && idx < b.offset + b.dim()) {
      int rel = idx - b.offset;
      return {&b, rel / b.ydim, rel % b.ydim};
    }
  throw std::logic_error("coend: ambient index outside all blocks");
}

/// Greedy last-pivot elimination; deliberately distinct from linalg's rref
/// (different pivot rule, no normalization) so the oracle shares no
/// reduction code with the main path.
int span_rank(const std::vector<SVec>& vecs, int ncols) {
  std::vector<std::vector<Rat>> basis;
  for (const auto& sv : vecs) {
    std::vector<Rat> v = svec_to_dense(sv, ncols);
    for (const auto& b : basis) {
      int p = -1;
      for (int j = ncols - 1; j >= 0; --j)
        if (b[j] != 0) {
          p = j;
          break;
        }
      if (p >= 0 && v[p] != 0) {
        Rat c = v[p] / b[p];
        for (int j = 0; j < ncols; ++j) v[j] -= c * b[j];
      }
    }
    if (std::any_of(v.begin(), v.end(), [](const Rat& x) { return x != 0; }))
      basis.push_back(std::move(v));
  }
  return static_cast<int>(basis.size());
}

} // namespace

ColorScheme coend_x_scheme(const ColorScheme& t, int i, int m, const Obj& c) {
  ColorScheme s;
  s.output = t.output;
  for (int k = 0; k < i - 1; ++k) s.inputs.push_back(t.inputs[k]);
  s.inputs.push_back(c);
  for (int k = i - 1 + m; k < t.arity(); ++k) s.inputs.push_back(t.inputs[k]);
  return s;
}

ColorScheme coend_y_scheme(const ColorScheme& t, int i, int m, const Obj& c) {
  ColorScheme s;
  s.output = c;
  for (int k = i - 1; k < i - 1 + m; ++k) s.inputs.push_back(t.inputs[k]);
  return s;
}

namespace {

/// Output schemes of X (x)_i Y together with their ambient block layout.
std::map<ColorScheme, std::vector<CoendBlock>> coend_blocks(
    const NsCollection& x, const NsCollection& y, int i, int m) {
  std::set<ColorScheme> outs;
  for (const auto& [sx, spx] : x.spaces)
    for (const auto& [sy, spy] : y.spaces)
      if (sx.inputs[i - 1] == sy.output) outs.insert(scheme_merge(sx, i, sy));

  std::map<ColorScheme, std::vector<CoendBlock>> layout;
  for (const auto& t : outs) {
    std::vector<CoendBlock> blocks;
    int off = 0;
    for (const auto& c : x.cat->objects) {
      int dx = x.dim(coend_x_scheme(t, i, m, c));
      int dy = y.dim(coend_y_scheme(t, i, m, c));
      if (dx == 0 || dy == 0) continue;
      blocks.push_back({c, off, dx, dy});
      off += dx * dy;
    }
    if (!blocks.empty()) layout.emplace(t, std::move(blocks));
  }
  return layout;
}

BasedSpace ambient_space(const NsCollection& x, const NsCollection& y, int i,
                         int m, const ColorScheme& t,
                         const std::vector<CoendBlock>& blocks) {
  BasedSpace amb;
  for (const auto& b : blocks) {
    const auto& xb = x.space(coend_x_scheme(t, i, m, b.color)).basis;
    const auto& yb = y.space(coend_y_scheme(t, i, m, b.color)).basis;
    for (const auto& xl : xb)
      for (const auto& yl : yb)
        amb.basis.push_back(pair_label(b.color, pair_label(xl, yl)));
  }
  return amb;
}

} // namespace

std::map<ColorScheme, std::vector<SVec>> coend_relations(const NsCollection& x,
                                                         const NsCollection& y,
                                                         int i) {
  int m = single_arity(y, "coend_relations");
  auto layout = coend_blocks(x, y, i, m);
  auto nonid = x.cat->nonidentity_basis();

  std::map<ColorScheme, std::vector<SVec>> rels;
  for (const auto& [t, blocks] : layout) {
    std::vector<SVec> rv;
    for (const auto& f : nonid) {
      const auto& fm = x.cat->info(f);
      const Obj& c = fm.src;
      const Obj& d = fm.tgt;
      ColorScheme sxd = coend_x_scheme(t, i, m, d);
      ColorScheme syc = coend_y_scheme(t, i, m, c);
      int dxd = x.dim(sxd), dyc = y.dim(syc);
      if (dxd == 0 || dyc == 0) continue;
      const CoendBlock* bc = find_block(blocks, c);
      const CoendBlock* bd = find_block(blocks, d);
      LinMap xa = x.get_in_act(sxd, i, f);
      LinMap ya = y.get_out_act(syc, f);
      for (int a = 0; a < dxd; ++a)
        for (int b = 0; b < dyc; ++b) {
          SVec rel;
          if (bc != nullptr) {
            // (a.f) (x) b placed in block c.
            SVec xf = xa.m.col[a];
            for (const auto& [r, v] : xf.terms)
              rel.terms.push_back({bc->offset + r * bc->ydim + b, v});
          }
          if (bd != nullptr) {
            // - a (x) (f.b) placed in block d.
            SVec yf = ya.m.col[b];
            for (const auto& [r, v] : yf.terms)
              rel.terms.push_back({bd->offset + a * bd->ydim + r, -v});
          }
          rel = svec_collect(std::move(rel.terms));
          if (!rel.is_zero()) rv.push_back(std::move(rel));
        }
    }
    rels.emplace(t, std::move(rv));
  }
  return rels;
}

CoendResult otimes_i(const NsCollection& x, const NsCollection& y, int i) {
  if (x.cat == nullptr || x.cat != y.cat)
    throw std::invalid_argument("otimes_i: ambient-category mismatch");
  int n = single_arity(x, "otimes_i");
  int m = single_arity(y, "otimes_i");
  CoendResult r;
  r.result.cat = x.cat;
  r.slot = i;
  if (n < 0 || m < 0) return r; // a zero factor gives the zero collection
  if (i < 1 || i > n) throw std::out_of_range("otimes_i: slot index");
  r.outer_arity = n;
  r.inner_arity = m;
  r.middle_colors = x.cat->objects;
  r.blocks = coend_blocks(x, y, i, m);
  auto rels = coend_relations(x, y, i);

  for (const auto& [t, blocks] : r.blocks) {
    BasedSpace amb = ambient_space(x, y, i, m, t, blocks);
    QuotientSpace q = quotient_by(amb, rels.at(t));
    if (q.quotient.dim() > 0) r.result.set_space(t, q.quotient);
    for (const auto& b : blocks) {
      // Block inclusion followed by the projection: the cowedge leg.
      BasedSpace src = tensor_space(x.space(coend_x_scheme(t, i, m, b.color)),
                                    y.space(coend_y_scheme(t, i, m, b.color)));
      SMat inc = smat_zero(amb.dim(), b.dim());
      for (int k = 0; k < b.dim(); ++k)
        inc.col[k] = svec_unit(b.offset + k);
      LinMap incl{src, amb, inc};
      r.injections.emplace(std::make_pair(t, b.color),
                           lin_compose(q.projection, incl));
    }
    r.quotients.emplace(t, std::move(q));
  }

  // Induced actions: lift a representative, act blockwise on the ambient
  // sum, project. Well-definedness is certified by checking the ambient
  // action maps every relation into the kernel of the target projection.
  auto nonid = x.cat->nonidentity_basis();
  for (const auto& [t, blocks] : r.blocks) {
    const QuotientSpace& q = r.quotients.at(t);
    if (q.quotient.dim() == 0) continue;
    int nm = t.arity();

    auto ambient_in_action = [&](int k, const std::string& f) -> SMat {
      ColorScheme t2 = scheme_replace_input(t, k, x.cat->info(f).src);
      auto it2 = r.blocks.find(t2);
      int tdim = 0;
      const std::vector<CoendBlock>* tblocks = nullptr;
      if (it2 != r.blocks.end()) {
        tblocks = &it2->second;
        for (const auto& b : *tblocks) tdim += b.dim();
      }
      SMat act = smat_zero(tdim, q.ambient.dim());
      if (tblocks == nullptr) return act;
      for (const auto& b : blocks) {
        const CoendBlock* b2 = find_block(*tblocks, b.color);
        if (b2 == nullptr) continue;
        ColorScheme sx = coend_x_scheme(t, i, m, b.color);
        ColorScheme sy = coend_y_scheme(t, i, m, b.color);
        SMat sub;
        if (k < i) {
          sub = smat_tensor(x.get_in_act(sx, k, f).m, smat_identity(b.ydim));
        } else if (k < i + m) {
          sub = smat_tensor(smat_identity(b.xdim),
                            y.get_in_act(sy, k - i + 1, f).m);
        } else {
          sub = smat_tensor(x.get_in_act(sx, k - m + 1, f).m,
                            smat_identity(b.ydim));
        }
        place_block(act, sub, b2->offset, b.offset);
      }
      for (auto& c : act.col) c = svec_collect(std::move(c.terms));
      return act;
    };

    for (int k = 1; k <= nm; ++k)
      for (const auto& f : nonid) {
        if (x.cat->info(f).tgt != t.inputs[k - 1]) continue;
        ColorScheme t2 = scheme_replace_input(t, k, x.cat->info(f).src);
        SMat act = ambient_in_action(k, f);
        auto qt2 = r.quotients.find(t2);
        // Absent target scheme means every target component is zero, so
        // the induced map is zero and well-definedness is vacuous.
        if (qt2 == r.quotients.end() || qt2->second.quotient.dim() == 0)
          continue;
        const QuotientSpace& q2 = qt2->second;
        for (const auto& rel : rels.at(t))
          if (!lin_apply(q2.projection, smat_apply(act, rel)).is_zero())
            throw std::logic_error("otimes_i: induced action not well-defined");
        SMat ind = smat_mul(q2.projection.m, smat_mul(act, q.section.m));
        if (!smat_is_zero(ind))
          r.result.set_in_act(t, k, f,
                              LinMap{q.quotient, q2.quotient, ind});
      }

    for (const auto& g : nonid) {
      if (x.cat->info(g).src != t.output) continue;
      ColorScheme t2 = scheme_replace_output(t, x.cat->info(g).tgt);
      auto it2 = r.blocks.find(t2);
      int tdim = 0;
      const std::vector<CoendBlock>* tblocks = nullptr;
      if (it2 != r.blocks.end()) {
        tblocks = &it2->second;
        for (const auto& b : *tblocks) tdim += b.dim();
      }
      SMat act = smat_zero(tdim, q.ambient.dim());
      if (tblocks != nullptr)
        for (const auto& b : blocks) {
          const CoendBlock* b2 = find_block(*tblocks, b.color);
          if (b2 == nullptr) continue;
          ColorScheme sx = coend_x_scheme(t, i, m, b.color);
          SMat sub =
              smat_tensor(x.get_out_act(sx, g).m, smat_identity(b.ydim));
          place_block(act, sub, b2->offset, b.offset);
        }
      for (auto& c : act.col) c = svec_collect(std::move(c.terms));
      auto qt2 = r.quotients.find(t2);
      if (qt2 == r.quotients.end() || qt2->second.quotient.dim() == 0) {
        continue;
      }
      const QuotientSpace& q2 = qt2->second;
      for (const auto& rel : rels.at(t))
        if (!lin_apply(q2.projection, smat_apply(act, rel)).is_zero())
          throw std::logic_error("otimes_i: induced action not well-defined");
      SMat ind = smat_mul(q2.projection.m, smat_mul(act, q.section.m));
      if (!smat_is_zero(ind))
        r.result.set_out_act(t, g, LinMap{q.quotient, q2.quotient, ind});
    }
  }
  return r;
}

Report check_cowedge(const NsCollection& x, const NsCollection& y, int i,
                     const CoendResult& r) {
  Report rep;
  int m = r.inner_arity;
  auto nonid = x.cat->nonidentity_basis();
  for (const auto& [t, blocks] : r.blocks) {
    for (const auto& f : nonid) {
      const auto& fm = x.cat->info(f);
      const Obj& c = fm.src;
      const Obj& d = fm.tgt;
      ColorScheme sxd = coend_x_scheme(t, i, m, d);
      ColorScheme sxc = coend_x_scheme(t, i, m, c);
      ColorScheme syc = coend_y_scheme(t, i, m, c);
      ColorScheme syd = coend_y_scheme(t, i, m, d);
      if (x.dim(sxd) == 0 || y.dim(syc) == 0) continue;

      LinMap via_c, via_d;
      {
        LinMap xa = x.get_in_act(sxd, i, f);
        LinMap step = lin_tensor(xa, lin_identity(y.space(syc)));
        auto inj = r.injections.find({t, c});
        via_c = inj == r.injections.end()
                    ? lin_zero(step.source, r.result.space(t))
                    : lin_compose(inj->second, step);
      }
      {
        LinMap ya = y.get_out_act(syc, f);
        LinMap step = lin_tensor(lin_identity(x.space(sxd)), ya);
        auto inj = r.injections.find({t, d});
        via_d = inj == r.injections.end()
                    ? lin_zero(step.source, r.result.space(t))
                    : lin_compose(inj->second, step);
      }
      if (!smat_equal(via_c.m, via_d.m))
        rep.fail("cowedge fails at " + scheme_to_string(t) + " via " + f);
    }
  }
  return rep;
}

CoendOracle otimes_i_oracle(const NsCollection& x, const NsCollection& y,
                            int i) {
  int m = single_arity(y, "otimes_i_oracle");
  auto layout = coend_blocks(x, y, i, m);
  auto nonid = x.cat->nonidentity_basis();

  CoendOracle o;
  for (const auto& [t, blocks] : layout) {
    int adim = 0;
    for (const auto& b : blocks) adim += b.dim();

    // Relation source: one block per generating morphism.
    struct RBlock {
      std::string f;
      int off, dx, dy;
    };
    std::vector<RBlock> rblocks;
    int rdim = 0;
    for (const auto& f : nonid) {
      const auto& fm = x.cat->info(f);
      int dx = x.dim(coend_x_scheme(t, i, m, fm.tgt));
      int dy = y.dim(coend_y_scheme(t, i, m, fm.src));
      if (dx == 0 || dy == 0) continue;
      rblocks.push_back({f, rdim, dx, dy});
      rdim += dx * dy;
    }

    SMat u = smat_zero(adim, rdim), v = smat_zero(adim, rdim);
    for (const auto& rb : rblocks) {
      const auto& fm = x.cat->info(rb.f);
      ColorScheme sxd = coend_x_scheme(t, i, m, fm.tgt);
      ColorScheme syc = coend_y_scheme(t, i, m, fm.src);
      if (const CoendBlock* bc = find_block(blocks, fm.src)) {
        SMat sub = smat_tensor(x.get_in_act(sxd, i, rb.f).m,
                               smat_identity(rb.dy));
        place_block(u, sub, bc->offset, rb.off);
      }
      if (const CoendBlock* bd = find_block(blocks, fm.tgt)) {
        SMat sub = smat_tensor(smat_identity(rb.dx),
                               y.get_out_act(syc, rb.f).m);
        place_block(v, sub, bd->offset, rb.off);
      }
    }
    for (auto& c : u.col) c = svec_collect(std::move(c.terms));
    for (auto& c : v.col) c = svec_collect(std::move(c.terms));

    SMat diff = smat_add(u, smat_scale(Rat(-1), v));
    std::vector<SVec> span;
    for (const auto& c : diff.col)
      if (!c.is_zero()) span.push_back(c);
    o.ambient_dim[t] = adim;
    o.result_dim[t] = adim - span_rank(span, adim);
    o.relation_span[t] = std::move(span);
  }
  return o;
}

Report coend_matches_oracle(const CoendResult& main,
                            const CoendOracle& oracle) {
  Report rep;
  std::set<ColorScheme> mains, oras;
  for (const auto& [t, q] : main.quotients) mains.insert(t);
  for (const auto& [t, d] : oracle.ambient_dim) oras.insert(t);
  if (mains != oras) {
    rep.fail("scheme sets differ between coend and oracle");
    return rep;
  }
  for (const auto& t : mains) {
    const QuotientSpace& q = main.quotients.at(t);
    if (q.ambient.dim() != oracle.ambient_dim.at(t))
      rep.fail("ambient dimension mismatch at " + scheme_to_string(t));
    if (q.quotient.dim() != oracle.result_dim.at(t))
      rep.fail("result dimension mismatch at " + scheme_to_string(t));
    for (const auto& rel : oracle.relation_span.at(t))
      if (!lin_apply(q.projection, rel).is_zero())
        rep.fail("projection does not kill an oracle relation at " +
                 scheme_to_string(t));
  }
  return rep;
}

Report check_collection_iso(const NsCollection& a, const NsCollection& b,
                            const std::map<ColorScheme, LinMap>& iso) {
  Report rep;
  std::set<ColorScheme> sa, sb;
  for (const auto& [s, sp] : a.spaces)
    if (sp.dim() > 0) sa.insert(s);
  for (const auto& [s, sp] : b.spaces)
    if (sp.dim() > 0) sb.insert(s);
  if (sa != sb) {
    rep.fail("supported scheme sets differ");
    return rep;
  }
  for (const auto& s : sa) {
    auto it = iso.find(s);
    if (it == iso.end()) {
      rep.fail("missing iso component at " + scheme_to_string(s));
      continue;
    }
    if (it->second.source.dim() != a.dim(s) ||
        it->second.target.dim() != b.dim(s) || !is_iso(it->second))
      rep.fail("component not an isomorphism at " + scheme_to_string(s));
  }
  if (!rep.ok()) return rep;

  auto get = [&](const ColorScheme& s) -> LinMap {
    auto it = iso.find(s);
    return it != iso.end() ? it->second : lin_zero(a.space(s), b.space(s));
  };
  auto nonid = a.cat->nonidentity_basis();
  for (const auto& s : sa) {
    for (int k = 1; k <= s.arity(); ++k)
      for (const auto& f : nonid) {
        if (a.cat->info(f).tgt != s.inputs[k - 1]) continue;
        ColorScheme s2 = scheme_replace_input(s, k, a.cat->info(f).src);
        LinMap lhs = lin_compose(get(s2), a.get_in_act(s, k, f));
        LinMap rhs = lin_compose(b.get_in_act(s, k, f), get(s));
        if (!smat_equal(lhs.m, rhs.m))
          rep.fail("iso not natural at " + scheme_to_string(s) + " slot " +
                   std::to_string(k) + " via " + f);
      }
    for (const auto& g : nonid) {
      if (a.cat->info(g).src != s.output) continue;
      ColorScheme s2 = scheme_replace_output(s, a.cat->info(g).tgt);
      LinMap lhs = lin_compose(get(s2), a.get_out_act(s, g));
      LinMap rhs = lin_compose(b.get_out_act(s, g), get(s));
      if (!smat_equal(lhs.m, rhs.m))
        rep.fail("iso not natural at " + scheme_to_string(s) + " output via " +
                 g);
    }
  }
  return rep;
}

AssocIso assoc_iso(const NsCollection& x, const NsCollection& y,
                   const NsCollection& z, int i, int j) {
  int n = single_arity(x, "assoc_iso");
  int m = single_arity(y, "assoc_iso");
  int k = single_arity(z, "assoc_iso");
  if (n < 0 || m < 0 || k < 0)
    throw std::invalid_argument("assoc_iso: zero collection");
  if (j < 1 || j > n || i < 1 || i > n + m - 1)
    throw std::out_of_range("assoc_iso: slot indices");

  AssocIso a;
  a.inner_lhs = otimes_i(x, y, j);
  a.lhs = otimes_i(a.inner_lhs.result, z, i);

  if (i < j) {
    a.case_id = 1;
    a.inner_rhs = otimes_i(x, z, i);
    a.rhs = otimes_i(a.inner_rhs.result, y, j + k - 1);
  } else if (i < j + m) {
    a.case_id = 2;
    a.inner_rhs = otimes_i(y, z, i - j + 1);
    a.rhs = otimes_i(x, a.inner_rhs.result, j);
  } else {
    a.case_id = 3;
    a.inner_rhs = otimes_i(x, z, i - m + 1);
    a.rhs = otimes_i(a.inner_rhs.result, y, j);
  }

  // Per scheme: raw space = (+) over (outer mid d, inner mid c) of
  // X (x) Y (x) Z; the iso factors through it.
  std::set<ColorScheme> lset, rset;
  for (const auto& [t, q] : a.lhs.quotients)
    if (q.quotient.dim() > 0) lset.insert(t);
  for (const auto& [t, q] : a.rhs.quotients)
    if (q.quotient.dim() > 0) rset.insert(t);
  if (lset != rset) {
    a.report.fail("lhs and rhs support different schemes");
    return a;
  }

  auto inner_rels_lhs = coend_relations(x, y, j);

  for (const auto& t : lset) {
    const QuotientSpace& ql = a.lhs.quotients.at(t);
    const QuotientSpace& qr = a.rhs.quotients.at(t);
    const auto& oblocks = a.lhs.blocks.at(t);

    // phi on a raw summand: decompose the (X (x)_j Y) index into its inner
    // block (inner mid color c, x index, y index), regroup the triple
    // tensor per the case, and push through the rhs injections. A raw
    // summand whose rhs component vanishes maps to zero (missing
    // injection).
    auto phi_term = [&](const Obj& d, const ColorScheme& sxy, int xyidx,
                        int iz) -> SVec {
      BlockCoord bc = locate(a.inner_lhs.blocks.at(sxy), xyidx);
      const Obj& c = bc.block->color;
      int ix = bc.xi, iy = bc.yi;
      ColorScheme sz = coend_y_scheme(t, i, k, d);
      ColorScheme sy = coend_y_scheme(sxy, j, m, c);
      ColorScheme sx = coend_x_scheme(sxy, j, m, c);
      if (a.case_id == 2) {
        ColorScheme syz = scheme_merge(sy, i - j + 1, sz);
        auto inj1 = a.inner_rhs.injections.find({syz, d});
        if (inj1 == a.inner_rhs.injections.end()) return SVec{};
        SVec w = inj1->second.m.col[iy * z.dim(sz) + iz];
        auto inj2 = a.rhs.injections.find({t, c});
        if (inj2 == a.rhs.injections.end()) return SVec{};
        int wdim = a.inner_rhs.result.dim(syz);
        return smat_apply(inj2->second.m,
                          svec_tensor(svec_unit(ix), w, wdim));
      }
      int xz_slot = a.case_id == 1 ? i : i - m + 1;
      ColorScheme sxz = scheme_merge(sx, xz_slot, sz);
      auto inj1 = a.inner_rhs.injections.find({sxz, d});
      if (inj1 == a.inner_rhs.injections.end()) return SVec{};
      SVec w = inj1->second.m.col[ix * z.dim(sz) + iz];
      auto inj2 = a.rhs.injections.find({t, c});
      if (inj2 == a.rhs.injections.end()) return SVec{};
      int ydim = y.dim(sy);
      // (w (x) e_iy): index iw * ydim + iy.
      SVec tv;
      for (const auto& [iw, vv] : w.terms)
        tv.terms.push_back({iw * ydim + iy, vv});
      return smat_apply(inj2->second.m, tv);
    };

    // Map from the lhs ambient ((+)_d (XY)(sxy) (x) Z(sz)) to rhs(t),
    // lifting the (XY) coordinate through the inner section.
    auto phibar_on_ambient = [&](const SVec& av) -> SVec {
      SVec out;
      for (const auto& [idx, coeff] : av.terms) {
        BlockCoord ob = locate(oblocks, idx);
        const Obj& d = ob.block->color;
        ColorScheme sxy = coend_x_scheme(t, i, k, d);
        SVec lifted =
            a.inner_lhs.quotients.at(sxy).section.m.col[ob.xi];
        for (const auto& [xyidx, c2] : lifted.terms) {
          SVec term = phi_term(d, sxy, xyidx, ob.yi);
          out = svec_axpy(out, coeff * c2, term);
        }
      }
      return out;
    };

    // Certify phi kills the presentation kernel: inner relations tensored
    // with z basis vectors, and outer relations lifted.
    bool ok = true;
    for (const auto& ob : oblocks) {
      ColorScheme sxy = coend_x_scheme(t, i, k, ob.color);
      auto irels = inner_rels_lhs.find(sxy);
      if (irels == inner_rels_lhs.end()) continue;
      for (const auto& rel : irels->second)
        for (int iz = 0; iz < ob.ydim; ++iz) {
          SVec img;
          for (const auto& [xyidx, c2] : rel.terms)
            img = svec_axpy(img, c2, phi_term(ob.color, sxy, xyidx, iz));
          if (!img.is_zero()) {
            a.report.fail("inner relation not killed at " +
                          scheme_to_string(t));
            ok = false;
          }
        }
    }
    {
      auto outer_rels = coend_relations(a.inner_lhs.result, z, i);
      auto orit = outer_rels.find(t);
      if (orit != outer_rels.end())
        for (const auto& rel : orit->second)
          if (!phibar_on_ambient(rel).is_zero()) {
            a.report.fail("outer relation not killed at " +
                          scheme_to_string(t));
            ok = false;
          }
    }
    if (!ok) continue;

    // iso_t = phibar . section.
    std::vector<SVec> cols;
    for (int r2 = 0; r2 < ql.quotient.dim(); ++r2)
      cols.push_back(phibar_on_ambient(ql.section.m.col[r2]));
    SMat mm = smat_from_cols(qr.quotient.dim(), cols);
    a.iso.emplace(t, LinMap{ql.quotient, qr.quotient, mm});
  }

  if (a.report.ok()) {
    Report nat = check_collection_iso(a.lhs.result, a.rhs.result, a.iso);
    for (auto& v : nat.violations) a.report.fail(std::move(v));
  }
  return a;
}

EquivIso equiv_iso(const NsCollection& x, const NsCollection& y,
                   const Perm& sigma, const Perm& tau, int i) {
  EquivIso e;
  NsCollection xs = sigma_act(x, sigma);
  NsCollection yt = sigma_act(y, tau);
  e.lhs = otimes_i(xs, yt, i);
  e.plain_slot = perm_inverse(sigma)(i);
  CoendResult w = otimes_i(x, y, e.plain_slot);
  e.rho = perm_insert(sigma, e.plain_slot, tau);
  e.rhs = sigma_act(w.result, e.rho);
  e.strict = (e.lhs.result == e.rhs);
  if (!e.strict)
    e.report.fail("lhs and rhs are not strictly equal as data");
  for (const auto& [t, sp] : e.lhs.result.spaces)
    e.iso.emplace(t, lin_identity(sp));
  Report nat = check_collection_iso(e.lhs.result, e.rhs, e.iso);
  for (auto& v : nat.violations) e.report.fail(std::move(v));
  return e;
}

NsCollection otimes_unit(const LinearCat& cat) {
  NsCollection u;
  u.cat = &cat;
  for (const auto& obja : cat.objects)
    for (const auto& objb : cat.objects) {
      BasedSpace h = cat.hom_space(obja, objb);
      if (h.dim() == 0) continue;
      ColorScheme s{{obja}, objb};
      u.set_space(s, h);
    }
  for (const auto& f : cat.nonidentity_basis()) {
    const auto& fm = cat.info(f);
    // Precomposition: Hom(tgt f, b) -> Hom(src f, b).
    for (const auto& objb : cat.objects) {
      auto gs = cat.hom_ids(fm.tgt, objb);
      if (gs.empty()) continue;
      ColorScheme s{{fm.tgt}, objb};
      BasedSpace srch = cat.hom_space(fm.tgt, objb);
      BasedSpace tgth = cat.hom_space(fm.src, objb);
      auto tg = cat.hom_ids(fm.src, objb);
      std::map<std::string, int> tpos;
      for (size_t p = 0; p < tg.size(); ++p) tpos[tg[p]] = (int)p;
      SMat mm = smat_zero(tgth.dim(), srch.dim());
      bool nonzero = false;
      for (size_t col = 0; col < gs.size(); ++col) {
        for (const auto& [h, cv] : cat.compose_basis(gs[col], f)) {
          mm.col[col].terms.push_back({tpos.at(h), cv});
          nonzero = true;
        }
        mm.col[col] = svec_collect(std::move(mm.col[col].terms));
      }
      if (nonzero)
        u.set_in_act(s, 1, f, LinMap{srch, tgth, mm});
    }
    // Postcomposition: Hom(a, src f) -> Hom(a, tgt f).
    for (const auto& obja : cat.objects) {
      auto gs = cat.hom_ids(obja, fm.src);
      if (gs.empty()) continue;
      ColorScheme s{{obja}, fm.src};
      BasedSpace srch = cat.hom_space(obja, fm.src);
      BasedSpace tgth = cat.hom_space(obja, fm.tgt);
      auto tg = cat.hom_ids(obja, fm.tgt);
      std::map<std::string, int> tpos;
      for (size_t p = 0; p < tg.size(); ++p) tpos[tg[p]] = (int)p;
      SMat mm = smat_zero(tgth.dim(), srch.dim());
      bool nonzero = false;
      for (size_t col = 0; col < gs.size(); ++col) {
        for (const auto& [h, cv] : cat.compose_basis(f, gs[col])) {
          mm.col[col].terms.push_back({tpos.at(h), cv});
          nonzero = true;
        }
        mm.col[col] = svec_collect(std::move(mm.col[col].terms));
      }
      if (nonzero)
        u.set_out_act(s, f, LinMap{srch, tgth, mm});
    }
  }
  return u;
}

UnitIso unit_iso(const NsCollection& x, int i) {
  UnitIso u;
  NsCollection unit = otimes_unit(*x.cat);
  int n = single_arity(x, "unit_iso");
  if (n < 0) return u;
  if (i < 1 || i > n) throw std::out_of_range("unit_iso: slot index");

  // X (x)_i I -> X: evaluate x (x) g to x.g via the slot-i action.
  u.right = otimes_i(x, unit, i);
  auto right_rels = coend_relations(x, unit, i);
  for (const auto& [t, q] : u.right.quotients) {
    SMat eval = smat_zero(x.dim(t), q.ambient.dim());
    for (const auto& b : u.right.blocks.at(t)) {
      ColorScheme sx = coend_x_scheme(t, i, 1, b.color);
      auto gs = x.cat->hom_ids(t.inputs[i - 1], b.color);
      for (int xi = 0; xi < b.xdim; ++xi)
        for (int gi = 0; gi < b.ydim; ++gi) {
          SVec img = x.get_in_act(sx, i, gs[gi]).m.col[xi];
          eval.col[b.offset + xi * b.ydim + gi] = img;
        }
    }
    bool welldef = true;
    for (const auto& rel : right_rels.at(t))
      if (!smat_apply(eval, rel).is_zero()) {
        u.report.fail("right unit evaluation not well-defined at " +
                      scheme_to_string(t));
        welldef = false;
      }
    if (!welldef) continue;
    SMat iso = smat_mul(eval, q.section.m);
    if (q.quotient.dim() > 0 || x.dim(t) > 0)
      u.right_iso.emplace(t, LinMap{q.quotient, x.space(t), iso});
  }
  if (u.report.ok()) {
    Report nat = check_collection_iso(u.right.result, x, u.right_iso);
    for (auto& v : nat.violations)
      u.report.fail("right unit: " + std::move(v));
  }

  // I (x)_1 X -> X: evaluate g (x) x to g.x via the output action.
  u.left = otimes_i(unit, x, 1);
  auto left_rels = coend_relations(unit, x, 1);
  for (const auto& [t, q] : u.left.quotients) {
    SMat eval = smat_zero(x.dim(t), q.ambient.dim());
    for (const auto& b : u.left.blocks.at(t)) {
      ColorScheme sy = coend_y_scheme(t, 1, n, b.color);
      auto gs = x.cat->hom_ids(b.color, t.output);
      int dy = x.dim(sy);
      for (int gi = 0; gi < b.xdim; ++gi)
        for (int yi = 0; yi < dy; ++yi) {
          SVec img = x.get_out_act(sy, gs[gi]).m.col[yi];
          eval.col[b.offset + gi * b.ydim + yi] = img;
        }
    }
    bool welldef = true;
    for (const auto& rel : left_rels.at(t))
      if (!smat_apply(eval, rel).is_zero()) {
        u.report.fail("left unit evaluation not well-defined at " +
                      scheme_to_string(t));
        welldef = false;
      }
    if (!welldef) continue;
    SMat iso = smat_mul(eval, q.section.m);
    if (q.quotient.dim() > 0 || x.dim(t) > 0)
      u.left_iso.emplace(t, LinMap{q.quotient, x.space(t), iso});
  }
  if (u.report.ok()) {
    Report nat = check_collection_iso(u.left.result, x, u.left_iso);
    for (auto& v : nat.violations) u.report.fail("left unit: " + std::move(v));
  }
  return u;
}

} // namespace oforge
