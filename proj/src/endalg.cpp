#include "oforge/endalg.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace oforge {

namespace {

const BasedSpace& zero_space() {
  static const BasedSpace z{};
  return z;
}

std::vector<std::vector<Obj>> all_tuples(const std::vector<Obj>& os, int n) {
  std::vector<std::vector<Obj>> out{{}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<Obj>> next;
    for (const auto& t : out)
      for (const Obj& o : os) {
        std::vector<Obj> u = t;
        u.push_back(o);
        next.push_back(std::move(u));
      }
    out = std::move(next);
  }
  return out;
}

int product(const std::vector<int>& dims) {
  int p = 1;
  for (int d : dims) p *= d;
  return p;
}

/// Row-major flattening, slot 1 slowest.
int flat_index(const std::vector<int>& q, const std::vector<int>& dims) {
  int idx = 0;
  for (size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + q[k];
  return idx;
}

bool next_multi_index(std::vector<int>& q, const std::vector<int>& dims) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    if (++q[static_cast<size_t>(k)] < dims[static_cast<size_t>(k)]) return true;
    q[static_cast<size_t>(k)] = 0;
  }
  return false;
}

/// Sparse rows of a matrix, for the row lookups the slot actions need.
std::vector<std::vector<std::pair<int, Rat>>> rows_of(const SMat& m) {
  std::vector<std::vector<std::pair<int, Rat>>> rows(
      static_cast<size_t>(m.rows));
  for (int c = 0; c < m.cols; ++c)
    for (const auto& [r, v] : m.col[static_cast<size_t>(c)].terms)
      rows[static_cast<size_t>(r)].push_back({c, v});
  return rows;
}

} // namespace

const BasedSpace& CFunctor::space(const Obj& o) const {
  auto it = spaces.find(o);
  return it == spaces.end() ? zero_space() : it->second;
}

LinMap CFunctor::action(const std::string& id) const {
  if (!cat || !cat->basis_index.count(id))
    throw std::invalid_argument("CFunctor::action: unknown morphism " + id);
  auto it = actions.find(id);
  if (it != actions.end()) return it->second;
  const LinearCat::HomBasis& hb = cat->info(id);
  if (cat->is_identity(id)) return lin_identity(space(hb.src));
  return lin_zero(space(hb.src), space(hb.tgt));
}

void CFunctor::set_space(const Obj& o, BasedSpace b) {
  spaces[o] = std::move(b);
}

void CFunctor::set_action(const std::string& id, LinMap m) {
  actions[id] = std::move(m);
}

Report check_cfunctor(const CFunctor& a) {
  Report rep;
  if (!a.cat) {
    rep.fail("carrier has no category");
    return rep;
  }
  const LinearCat& cat = *a.cat;
  for (const auto& [o, sp] : a.spaces)
    if (!cat.has_object(o)) rep.fail("space at unknown object " + o);
  for (const auto& [id, m] : a.actions) {
    if (!cat.basis_index.count(id)) {
      rep.fail("action at unknown morphism " + id);
      continue;
    }
    const LinearCat::HomBasis& hb = cat.info(id);
    if (m.source.dim() != a.dim(hb.src) || m.target.dim() != a.dim(hb.tgt))
      rep.fail("action of " + id + " is mistyped");
    else if (cat.is_identity(id) && !lin_equal(m, lin_identity(a.space(hb.src))))
      rep.fail("identity " + id + " does not act as the identity");
  }
  if (!rep.ok()) return rep;
  for (const auto& f : cat.basis)
    for (const auto& g : cat.basis) {
      if (g.src != f.tgt) continue;
      LinMap lhs = lin_compose(a.action(g.id), a.action(f.id));
      LinMap rhs = lin_zero(a.space(f.src), a.space(g.tgt));
      for (const auto& [h, c] : cat.compose_basis(g.id, f.id))
        rhs = lin_add(rhs, lin_scale(c, a.action(h)));
      if (!lin_equal(lhs, rhs))
        rep.fail("functoriality fails on " + g.id + " . " + f.id);
    }
  return rep;
}

namespace {

std::vector<int> input_dims(const CFunctor& a, const ColorScheme& s) {
  std::vector<int> dims;
  for (const Obj& c : s.inputs) dims.push_back(a.dim(c));
  return dims;
}

BasedSpace end_space(const CFunctor& a, const ColorScheme& s) {
  const BasedSpace& out_sp = a.space(s.output);
  if (s.arity() == 0) return out_sp;
  std::vector<int> dims = input_dims(a, s);
  if (out_sp.dim() == 0 || product(dims) == 0) return BasedSpace{};
  BasedSpace sp;
  for (const std::string& rl : out_sp.basis) {
    std::vector<int> q(dims.size(), 0);
    do {
      std::string lbl = rl + "<-";
      for (size_t k = 0; k < q.size(); ++k) {
        if (k > 0) lbl += ".";
        lbl += a.space(s.inputs[k]).basis[static_cast<size_t>(q[k])];
      }
      sp.basis.push_back(lbl);
    } while (next_multi_index(q, dims));
  }
  return sp;
}

} // namespace

UnitalCOperad end_operad(const CFunctor& a, int arity_bound) {
  Report chk = check_cfunctor(a);
  if (!chk.ok())
    throw std::invalid_argument("end_operad: carrier is not a functor: " +
                                chk.violations.front());
  const LinearCat& cat = *a.cat;
  UnitalCOperad out;
  out.base.max_arity = arity_bound;
  NsCollection& ns = out.base.carrier.ns;
  ns.cat = &cat;

  std::vector<ColorScheme> schemes;
  for (int n = 0; n <= arity_bound; ++n)
    for (const auto& ins : all_tuples(cat.objects, n))
      for (const Obj& c : cat.objects) {
        ColorScheme s{ins, c};
        BasedSpace sp = end_space(a, s);
        if (sp.dim() == 0) continue;
        ns.set_space(s, sp);
        schemes.push_back(s);
      }

  // Input actions precompose with A(f) in one slot; output actions
  // postcompose with A(f).
  for (const ColorScheme& s : schemes) {
    int n = s.arity();
    std::vector<int> dims = input_dims(a, s);
    int prod = product(dims);
    int dout = a.dim(s.output);
    for (const std::string& fid : cat.nonidentity_basis()) {
      const LinearCat::HomBasis& hb = cat.info(fid);
      if (s.output == hb.src) {
        ColorScheme t = scheme_replace_output(s, hb.tgt);
        if (ns.dim(t) > 0) {
          LinMap af = a.action(fid);
          std::vector<SVec> cols(static_cast<size_t>(dout * prod));
          for (int r = 0; r < dout; ++r)
            for (int q = 0; q < prod; ++q) {
              SVec v;
              for (const auto& [tr, c] : af.m.col[static_cast<size_t>(r)].terms)
                v.terms.push_back({tr * prod + q, c});
              cols[static_cast<size_t>(r * prod + q)] = svec_collect(std::move(v.terms));
            }
          ns.set_out_act(s, fid, lin_from_cols(ns.space(s), ns.space(t), cols));
        }
      }
      for (int i = 1; i <= n; ++i) {
        if (s.inputs[static_cast<size_t>(i - 1)] != hb.tgt) continue;
        ColorScheme t = scheme_replace_input(s, i, hb.src);
        if (ns.dim(t) == 0) continue;
        LinMap af = a.action(fid);
        auto rows = rows_of(af.m);
        std::vector<int> tdims = dims;
        tdims[static_cast<size_t>(i - 1)] = a.dim(hb.src);
        std::vector<SVec> cols(static_cast<size_t>(dout * prod));
        for (int r = 0; r < dout; ++r) {
          std::vector<int> q(dims.size(), 0);
          int qi = 0;
          do {
            SVec v;
            std::vector<int> tq = q;
            for (const auto& [sidx, c] :
                 rows[static_cast<size_t>(q[static_cast<size_t>(i - 1)])]) {
              tq[static_cast<size_t>(i - 1)] = sidx;
              v.terms.push_back({r * product(tdims) + flat_index(tq, tdims), c});
            }
            cols[static_cast<size_t>(r * prod + qi)] = svec_collect(std::move(v.terms));
            ++qi;
          } while (next_multi_index(q, dims));
        }
        ns.set_in_act(s, i, fid, lin_from_cols(ns.space(s), ns.space(t), cols));
      }
    }
  }

  // Permutations reindex the input slots.
  for (const ColorScheme& s : schemes) {
    int n = s.arity();
    if (n < 2) continue;
    std::vector<int> dims = input_dims(a, s);
    int prod = product(dims);
    int dout = a.dim(s.output);
    for (const Perm& sg : all_perms(n)) {
      if (is_identity(sg)) continue;
      ColorScheme t = scheme_act(s, sg);
      std::vector<int> tdims(dims.size());
      for (int k = 1; k <= n; ++k)
        tdims[static_cast<size_t>(k - 1)] = dims[static_cast<size_t>(sg(k) - 1)];
      std::vector<SVec> cols(static_cast<size_t>(dout * prod));
      for (int r = 0; r < dout; ++r) {
        std::vector<int> q(dims.size(), 0);
        int qi = 0;
        do {
          std::vector<int> tq(dims.size());
          for (int k = 1; k <= n; ++k)
            tq[static_cast<size_t>(k - 1)] = q[static_cast<size_t>(sg(k) - 1)];
          cols[static_cast<size_t>(r * prod + qi)] =
              svec_unit(r * prod + flat_index(tq, tdims));
          ++qi;
        } while (next_multi_index(q, dims));
      }
      out.base.carrier.set_sigma(s, sg,
                                 lin_from_cols(ns.space(s), ns.space(t), cols));
    }
  }

  // Compositions substitute the inner map into one slot.
  for (const ColorScheme& s : schemes) {
    int n = s.arity();
    if (n == 0) continue;
    std::vector<int> dims = input_dims(a, s);
    int prod = product(dims);
    int dout = a.dim(s.output);
    for (const ColorScheme& r : schemes) {
      int m = r.arity();
      if (n + m - 1 > arity_bound) continue;
      std::vector<int> rdims = input_dims(a, r);
      int rprod = product(rdims);
      int rdout = a.dim(r.output);
      for (int i = 1; i <= n; ++i) {
        if (s.inputs[static_cast<size_t>(i - 1)] != r.output) continue;
        ColorScheme t = scheme_merge(s, i, r);
        std::vector<int> tdims;
        for (int k = 0; k < i - 1; ++k) tdims.push_back(dims[static_cast<size_t>(k)]);
        for (int k = 0; k < m; ++k) tdims.push_back(rdims[static_cast<size_t>(k)]);
        for (int k = i; k < n; ++k) tdims.push_back(dims[static_cast<size_t>(k)]);
        int tprod = product(tdims);
        int rdim = rdout * rprod;
        std::vector<SVec> cols(static_cast<size_t>(dout * prod * rdim));
        for (int rr = 0; rr < dout; ++rr) {
          std::vector<int> q(dims.size(), 0);
          int qi = 0;
          do {
            for (int ss = 0; ss < rdout; ++ss) {
              if (ss != q[static_cast<size_t>(i - 1)]) continue;
              std::vector<int> p(rdims.size(), 0);
              int pi = 0;
              do {
                std::vector<int> tq;
                for (int k = 0; k < i - 1; ++k)
                  tq.push_back(q[static_cast<size_t>(k)]);
                for (int k = 0; k < m; ++k)
                  tq.push_back(p[static_cast<size_t>(k)]);
                for (int k = i; k < n; ++k)
                  tq.push_back(q[static_cast<size_t>(k)]);
                cols[static_cast<size_t>((rr * prod + qi) * rdim +
                                         (ss * rprod + pi))] =
                    svec_unit(rr * tprod + flat_index(tq, tdims));
                ++pi;
              } while (next_multi_index(p, rdims));
            }
            ++qi;
          } while (next_multi_index(q, dims));
        }
        out.base.set_comp(s, i, r,
                          lin_from_cols(tensor_space(ns.space(s), ns.space(r)),
                                        ns.space(t), cols));
      }
    }
  }

  // Units are the vectorized actions.
  for (const auto& b : cat.basis) {
    LinMap af = a.action(b.id);
    SVec u;
    for (int sidx = 0; sidx < af.m.cols; ++sidx)
      for (const auto& [tr, c] : af.m.col[static_cast<size_t>(sidx)].terms)
        u.terms.push_back({tr * af.m.cols + sidx, c});
    out.units[b.id] = svec_collect(std::move(u.terms));
  }
  return out;
}

Report check_algebra(const FreePresentation& p, const AlgebraMap& alg) {
  Report rep;
  Report fc = check_cfunctor(alg.carrier);
  for (const std::string& v : fc.violations) rep.fail("carrier: " + v);
  if (!rep.ok()) return rep;
  UnitalCOperad e = end_operad(alg.carrier, p.arity_bound);
  const NsCollection& ens = e.base.carrier.ns;
  NsOperad target = ns_view(e.base);

  // Typed image per generator scheme; zero-dimensional schemes default to
  // the zero map so the intertwining squares below are total.
  auto image_at = [&](const ColorScheme& s) -> LinMap {
    auto it = alg.images.find(s);
    if (it != alg.images.end()) {
      if (it->second.m.cols != p.generators.dim(s) ||
          it->second.m.rows != ens.dim(s))
        throw std::invalid_argument("check_algebra: image at " +
                                    scheme_to_string(s) + " is mistyped");
      return it->second;
    }
    if (p.generators.dim(s) > 0)
      throw std::invalid_argument("check_algebra: missing image at " +
                                  scheme_to_string(s));
    return lin_zero(p.generators.space(s), ens.space(s));
  };
  for (const auto& [s, sp] : p.generators.spaces) image_at(s);

  // The images must intertwine the category actions on the generators;
  // the evaluation of tree classes respects the edge identifications only
  // under these squares, so they are checked first, with located
  // witnesses.
  for (const auto& [key, m] : p.generators.in_act) {
    const auto& [s, slot, fid] = key;
    ColorScheme t =
        scheme_replace_input(s, slot, p.generators.cat->info(fid).src);
    auto it = ens.in_act.find({s, slot, fid});
    LinMap ea = it != ens.in_act.end()
                    ? it->second
                    : lin_zero(ens.space(s), ens.space(t));
    if (!lin_equal(lin_compose(image_at(t), m), lin_compose(ea, image_at(s))))
      rep.fail("images do not intertwine the slot " + std::to_string(slot) +
               " action of " + fid + " at " + scheme_to_string(s));
  }
  for (const auto& [key, m] : p.generators.out_act) {
    const auto& [s, fid] = key;
    ColorScheme t =
        scheme_replace_output(s, p.generators.cat->info(fid).tgt);
    auto it = ens.out_act.find({s, fid});
    LinMap ea = it != ens.out_act.end()
                    ? it->second
                    : lin_zero(ens.space(s), ens.space(t));
    if (!lin_equal(lin_compose(image_at(t), m), lin_compose(ea, image_at(s))))
      rep.fail("images do not intertwine the output action of " + fid +
               " at " + scheme_to_string(s));
  }
  if (!rep.ok()) return rep;

  FreeNsOperad f = free_ns(p.generators, p.arity_bound, p.weight_bound);
  std::map<ColorScheme, LinMap> phi = universal_map(f, target, alg.images);
  Report fm = check_free_morphism(f, target, alg.images, phi);
  for (const std::string& v : fm.violations) rep.fail(v);
  for (size_t k = 0; k < p.ns_relations.size(); ++k) {
    const auto& [s, v] = p.ns_relations[k];
    SVec w = phi.count(s) ? lin_apply(phi.at(s), v) : SVec{};
    if (!w.is_zero())
      rep.fail("relation " + std::to_string(k) + " at " + scheme_to_string(s) +
               " maps to a nonzero endomorphism");
  }
  if (!p.sym_relations.empty()) {
    std::map<ColorScheme, LinMap> psym =
        symmetrize_morphism(f.op, f.grading, e.base, phi);
    for (size_t k = 0; k < p.sym_relations.size(); ++k) {
      const auto& [s, v] = p.sym_relations[k];
      SVec w = psym.count(s) ? lin_apply(psym.at(s), v) : SVec{};
      if (!w.is_zero())
        rep.fail("symmetric relation " + std::to_string(k) + " at " +
                 scheme_to_string(s) + " maps to a nonzero endomorphism");
    }
  }
  return rep;
}

bool MonoidalStructure::has_sum(const Obj& a, const Obj& b) const {
  return obj_sum.count({a, b}) > 0;
}

Obj MonoidalStructure::sum(const Obj& a, const Obj& b) const {
  auto it = obj_sum.find({a, b});
  if (it == obj_sum.end())
    throw std::invalid_argument("monoidal structure: missing object sum (" +
                                a + ", " + b + ")");
  return it->second;
}

bool MonoidalStructure::has_sum_list(const std::vector<Obj>& os) const {
  Obj acc = unit;
  for (const Obj& o : os) {
    if (!has_sum(acc, o)) return false;
    acc = sum(acc, o);
  }
  return true;
}

Obj MonoidalStructure::sum_list(const std::vector<Obj>& os) const {
  Obj acc = unit;
  for (const Obj& o : os) acc = sum(acc, o);
  return acc;
}

std::map<std::string, Rat> MonoidalStructure::id_vec(const Obj& a) const {
  return {{cat->identity.at(a), Rat(1)}};
}

std::map<std::string, Rat> MonoidalStructure::sum_vec(
    const std::map<std::string, Rat>& f,
    const std::map<std::string, Rat>& g) const {
  std::map<std::string, Rat> out;
  for (const auto& [fid, cf] : f)
    for (const auto& [gid, cg] : g) {
      auto it = mor_sum.find({fid, gid});
      if (it == mor_sum.end()) continue;
      for (const auto& [h, ch] : it->second) {
        Rat v = out[h] + cf * cg * ch;
        if (v == 0)
          out.erase(h);
        else
          out[h] = v;
      }
    }
  return out;
}

std::map<std::string, Rat> MonoidalStructure::sym_vec(const Obj& a,
                                                      const Obj& b) const {
  auto it = symmetry.find({a, b});
  if (it == symmetry.end())
    throw std::invalid_argument("monoidal structure: missing symmetry (" + a +
                                ", " + b + ")");
  return it->second;
}

MonoidalStructure terminal_monoidal(const LinearCat& c) {
  if (c.objects.size() != 1)
    throw std::invalid_argument("terminal_monoidal: category must have one object");
  MonoidalStructure mon;
  mon.cat = &c;
  mon.unit = c.objects.front();
  const std::string id = c.identity.at(mon.unit);
  mon.obj_sum[{mon.unit, mon.unit}] = mon.unit;
  mon.mor_sum[{id, id}] = {{id, Rat(1)}};
  mon.symmetry[{mon.unit, mon.unit}] = {{id, Rat(1)}};
  return mon;
}

MonoidalStructure chain_monoidal(const LinearCat& d) {
  MonoidalStructure mon;
  mon.cat = &d;
  mon.unit = "0";
  if (!d.has_object("0"))
    throw std::invalid_argument("chain_monoidal: degree 0 is not in the window");
  auto sign = [](int k) { return Rat(k % 2 == 0 ? 1 : -1); };
  for (const Obj& a : d.objects)
    for (const Obj& b : d.objects) {
      int da = obj_degree(a), db = obj_degree(b);
      Obj c = std::to_string(da + db);
      if (!d.has_object(c)) continue;
      mon.obj_sum[{a, b}] = c;
      mon.symmetry[{a, b}] = {{d.identity.at(c), sign(da * db)}};
      mon.mor_sum[{d.identity.at(a), d.identity.at(b)}] = {
          {d.identity.at(c), Rat(1)}};
      std::string dc = "d_" + c;
      if (d.basis_index.count(dc)) {
        if (d.basis_index.count("d_" + a))
          mon.mor_sum[{"d_" + a, d.identity.at(b)}] = {{dc, Rat(1)}};
        if (d.basis_index.count("d_" + b))
          mon.mor_sum[{d.identity.at(a), "d_" + b}] = {{dc, sign(da)}};
      }
    }
  return mon;
}

std::map<std::string, Rat> block_symmetry(const MonoidalStructure& mon,
                                          const std::vector<Obj>& blocks,
                                          const Perm& sigma) {
  const LinearCat& cat = *mon.cat;
  int n = static_cast<int>(blocks.size());
  if (sigma.n() != n)
    throw std::invalid_argument("block_symmetry: size mismatch");
  std::vector<int> arr(static_cast<size_t>(n));
  std::vector<Obj> cur(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    arr[static_cast<size_t>(k)] = sigma(k + 1);
    cur[static_cast<size_t>(k)] = blocks[static_cast<size_t>(sigma(k + 1) - 1)];
  }
  std::map<std::string, Rat> acc = mon.id_vec(mon.sum_list(cur));
  bool moved = true;
  while (moved) {
    moved = false;
    for (int j = 0; j + 1 < n; ++j)
      if (arr[static_cast<size_t>(j)] > arr[static_cast<size_t>(j + 1)]) {
        std::vector<Obj> left(cur.begin(), cur.begin() + j);
        std::vector<Obj> right(cur.begin() + j + 2, cur.end());
        auto step = mon.sum_vec(
            mon.sum_vec(mon.id_vec(mon.sum_list(left)),
                        mon.sym_vec(cur[static_cast<size_t>(j)],
                                    cur[static_cast<size_t>(j + 1)])),
            mon.id_vec(mon.sum_list(right)));
        acc = cat.compose_vec(step, acc);
        std::swap(arr[static_cast<size_t>(j)], arr[static_cast<size_t>(j + 1)]);
        std::swap(cur[static_cast<size_t>(j)], cur[static_cast<size_t>(j + 1)]);
        moved = true;
        break;
      }
  }
  return acc;
}

namespace {

/// One coend component of the transform: ambient blocks indexed by
/// (coend object r, hom-basis id, P-basis index).
struct PCComp {
  BasedSpace ambient;
  std::vector<SVec> relations;
  QuotientSpace q;
  std::vector<std::tuple<Obj, std::string, int>> info;
  std::map<std::tuple<Obj, std::string, int>, int> index;
};

/// The action of P(n) at a basis morphism, typed by the component spaces;
/// absent actions are zero.
LinMap p_action(const CFunctor& pn, const std::string& id) {
  return pn.action(id);
}

/// The permutation action of P at (n, sigma) on the component at r;
/// absent entries are the identity.
LinMap p_sigma(const FunctorOperad& p, int n, const Perm& sg, const Obj& r) {
  auto it = p.sigma.find({n, sg});
  if (it != p.sigma.end()) {
    auto jt = it->second.find(r);
    if (jt != it->second.end()) return jt->second;
  }
  return lin_identity(p.components.at(n).space(r));
}

LinMap induce_pc(const PCComp& src, const PCComp& tgt,
                 const std::vector<SVec>& ambient_cols, const char* what) {
  LinMap amb = lin_from_cols(src.ambient, tgt.ambient, ambient_cols);
  for (const SVec& rel : src.relations)
    if (!lin_apply(tgt.q.projection, lin_apply(amb, rel)).is_zero())
      throw std::logic_error(std::string("pC_transform: ") + what +
                             " does not descend to the coend");
  return lin_compose(tgt.q.projection, lin_compose(amb, src.q.section));
}

} // namespace

COperad pC_transform(const FunctorOperad& p, int arity_bound) {
  if (!p.mon || !p.mon->cat)
    throw std::invalid_argument("pC_transform: missing monoidal structure");
  const MonoidalStructure& mon = *p.mon;
  const LinearCat& cat = *mon.cat;
  COperad out;
  out.max_arity = arity_bound;
  out.carrier.ns.cat = &cat;

  std::map<ColorScheme, PCComp> comps;
  std::map<ColorScheme, Obj> bsum;
  for (const auto& [n, pn] : p.components) {
    if (n > arity_bound || n < 0) continue;
    for (const auto& ins : all_tuples(cat.objects, n)) {
      if (!mon.has_sum_list(ins)) continue;
      Obj b = mon.sum_list(ins);
      for (const Obj& c : cat.objects) {
        ColorScheme s{ins, c};
        PCComp comp;
        for (const Obj& r : cat.objects) {
          if (!mon.has_sum(b, r)) continue;
          int pd = pn.dim(r);
          if (pd == 0) continue;
          for (const std::string& g : cat.hom_ids(mon.sum(b, r), c))
            for (int x = 0; x < pd; ++x) {
              comp.index[{r, g, x}] = comp.ambient.dim();
              comp.info.push_back({r, g, x});
              comp.ambient.basis.push_back(
                  pair_label(g, pn.space(r).basis[static_cast<size_t>(x)]) +
                  "@" + r);
            }
        }
        if (comp.ambient.dim() == 0) continue;
        for (const std::string& u : cat.nonidentity_basis()) {
          const LinearCat::HomBasis& ub = cat.info(u);
          int pd = pn.dim(ub.src);
          if (pd == 0 || !mon.has_sum(b, ub.tgt)) continue;
          LinMap pu = p_action(pn, u);
          for (const std::string& g :
               cat.hom_ids(mon.sum(b, ub.tgt), c)) {
            auto precomp = mon.sum_vec(mon.id_vec(b), {{u, Rat(1)}});
            auto lhs = cat.compose_vec({{g, Rat(1)}}, precomp);
            for (int x = 0; x < pd; ++x) {
              SVec rel;
              for (const auto& [h, cv] : lhs) {
                auto it = comp.index.find({ub.src, h, x});
                if (it != comp.index.end())
                  rel = svec_add(rel, svec_scale(cv, svec_unit(it->second)));
              }
              for (const auto& [y, cv] :
                   pu.m.col[static_cast<size_t>(x)].terms) {
                auto it = comp.index.find({ub.tgt, g, y});
                if (it != comp.index.end())
                  rel = svec_sub(rel, svec_scale(cv, svec_unit(it->second)));
              }
              if (!rel.is_zero()) comp.relations.push_back(rel);
            }
          }
        }
        comp.q = quotient_by(comp.ambient, comp.relations);
        if (comp.q.quotient.dim() > 0)
          out.carrier.ns.set_space(s, comp.q.quotient);
        bsum[s] = b;
        comps[s] = std::move(comp);
      }
    }
  }

  // Input and output actions: pre- and postcomposition on the hom factor.
  for (const auto& [s, comp] : comps) {
    if (comp.q.quotient.dim() == 0) continue;
    int n = s.arity();
    const CFunctor& pn = p.components.at(n);
    for (const std::string& fid : cat.nonidentity_basis()) {
      const LinearCat::HomBasis& hb = cat.info(fid);
      if (s.output == hb.src) {
        ColorScheme t = scheme_replace_output(s, hb.tgt);
        auto it = comps.find(t);
        if (it != comps.end() && it->second.q.quotient.dim() > 0) {
          std::vector<SVec> cols(static_cast<size_t>(comp.ambient.dim()));
          for (size_t ia = 0; ia < comp.info.size(); ++ia) {
            const auto& [r, g, x] = comp.info[ia];
            SVec v;
            for (const auto& [h, cv] :
                 cat.compose_vec({{fid, Rat(1)}}, {{g, Rat(1)}}))
              v = svec_add(v, svec_scale(cv, svec_unit(it->second.index.at(
                                                 {r, h, x}))));
            cols[ia] = v;
          }
          out.carrier.ns.set_out_act(
              s, fid, induce_pc(comp, it->second, cols, "output action"));
        }
      }
      for (int i = 1; i <= n; ++i) {
        if (s.inputs[static_cast<size_t>(i - 1)] != hb.tgt) continue;
        ColorScheme t = scheme_replace_input(s, i, hb.src);
        auto it = comps.find(t);
        if (it == comps.end() || it->second.q.quotient.dim() == 0) continue;
        std::map<std::string, Rat> mid;
        for (int k = 1; k <= n; ++k) {
          std::map<std::string, Rat> piece =
              k == i ? std::map<std::string, Rat>{{fid, Rat(1)}}
                     : mon.id_vec(s.inputs[static_cast<size_t>(k - 1)]);
          mid = k == 1 ? piece : mon.sum_vec(mid, piece);
        }
        std::vector<SVec> cols(static_cast<size_t>(comp.ambient.dim()));
        for (size_t ia = 0; ia < comp.info.size(); ++ia) {
          const auto& [r, g, x] = comp.info[ia];
          auto pre = mon.sum_vec(mid, mon.id_vec(r));
          SVec v;
          for (const auto& [h, cv] :
               cat.compose_vec({{g, Rat(1)}}, pre)) {
            auto jt = it->second.index.find({r, h, x});
            if (jt != it->second.index.end())
              v = svec_add(v, svec_scale(cv, svec_unit(jt->second)));
          }
          cols[ia] = v;
        }
        out.carrier.ns.set_in_act(
            s, i, fid, induce_pc(comp, it->second, cols, "input action"));
      }
    }
  }

  // Permutations: block symmetry on the hom factor, the action of P on
  // the functor factor.
  for (const auto& [s, comp] : comps) {
    if (comp.q.quotient.dim() == 0) continue;
    int n = s.arity();
    if (n < 2) continue;
    for (const Perm& sg : all_perms(n)) {
      if (is_identity(sg)) continue;
      ColorScheme t = scheme_act(s, sg);
      auto it = comps.find(t);
      if (it == comps.end() || it->second.q.quotient.dim() == 0) {
        if (comp.q.quotient.dim() > 0 && it == comps.end())
          throw std::logic_error(
              "pC_transform: permuted component missing from the truncation");
        continue;
      }
      auto sbar = block_symmetry(mon, s.inputs, sg);
      std::vector<SVec> cols(static_cast<size_t>(comp.ambient.dim()));
      for (size_t ia = 0; ia < comp.info.size(); ++ia) {
        const auto& [r, g, x] = comp.info[ia];
        auto pre = mon.sum_vec(sbar, mon.id_vec(r));
        auto hv = cat.compose_vec({{g, Rat(1)}}, pre);
        LinMap ps = p_sigma(p, n, sg, r);
        SVec v;
        for (const auto& [h, ch] : hv)
          for (const auto& [y, cy] :
               ps.m.col[static_cast<size_t>(x)].terms)
            v = svec_add(v, svec_scale(ch * cy,
                                       svec_unit(it->second.index.at(
                                           {r, h, y}))));
        cols[ia] = v;
      }
      out.carrier.set_sigma(
          s, sg, induce_pc(comp, it->second, cols, "permutation action"));
    }
  }

  // Compositions: composition in the category, with the inner coend block
  // moved into place by a symmetry, paired with the compositions of P.
  for (const auto& [s, scomp] : comps) {
    int n = s.arity();
    if (n == 0 || scomp.q.quotient.dim() == 0) continue;
    for (const auto& [r, rcomp] : comps) {
      int m = r.arity();
      if (n + m - 1 > arity_bound || rcomp.q.quotient.dim() == 0) continue;
      if (!p.components.count(n + m - 1)) continue;
      for (int i = 1; i <= n; ++i) {
        if (s.inputs[static_cast<size_t>(i - 1)] != r.output) continue;
        ColorScheme t = scheme_merge(s, i, r);
        auto mt = comps.find(t);
        if (mt == comps.end() || mt->second.q.quotient.dim() == 0) continue;
        std::vector<Obj> prefix(s.inputs.begin(), s.inputs.begin() + (i - 1));
        std::vector<Obj> suffix(s.inputs.begin() + i, s.inputs.end());
        if (!mon.has_sum_list(prefix) || !mon.has_sum_list(suffix)) continue;
        Obj bl = mon.sum_list(prefix);
        Obj br = mon.sum_list(suffix);
        Obj e = bsum.at(r);
        // Ambient images of basis pairs.
        std::vector<std::vector<SVec>> pairs(
            static_cast<size_t>(scomp.ambient.dim()),
            std::vector<SVec>(static_cast<size_t>(rcomp.ambient.dim())));
        for (size_t ia = 0; ia < scomp.info.size(); ++ia) {
          const auto& [pr, g, x] = scomp.info[ia];
          for (size_t ib = 0; ib < rcomp.info.size(); ++ib) {
            const auto& [qr, h, y] = rcomp.info[ib];
            if (!mon.has_sum(pr, qr)) continue;
            Obj rq = mon.sum(pr, qr);
            auto ct = p.comp.find({n, m, i, pr, qr});
            if (ct == p.comp.end()) continue;
            int pmd = p.components.at(m).dim(qr);
            const SVec& pcol =
                ct->second.m.col[static_cast<size_t>(x * pmd + y)];
            if (pcol.is_zero()) continue;
            auto chi = block_symmetry(mon, {bl, e, qr, br, pr},
                                      perm_from_one_line({1, 2, 4, 5, 3}));
            auto midv = mon.sum_vec(
                mon.sum_vec(mon.sum_vec(mon.id_vec(bl), {{h, Rat(1)}}),
                            mon.id_vec(br)),
                mon.id_vec(pr));
            auto total = cat.compose_vec(
                {{g, Rat(1)}}, cat.compose_vec(midv, chi));
            SVec v;
            for (const auto& [hm, chm] : total)
              for (const auto& [z, cz] : pcol.terms)
                v = svec_add(v, svec_scale(chm * cz,
                                           svec_unit(mt->second.index.at(
                                               {rq, hm, z}))));
            pairs[ia][ib] = v;
          }
        }
        // Both partial evaluations must descend.
        for (const SVec& rel : scomp.relations)
          for (size_t ib = 0; ib < rcomp.info.size(); ++ib) {
            SVec img;
            for (const auto& [ia, cv] : rel.terms)
              img = svec_add(img, svec_scale(cv, pairs[static_cast<size_t>(ia)][ib]));
            if (!lin_apply(mt->second.q.projection, img).is_zero())
              throw std::logic_error(
                  "pC_transform: composition does not descend to the coend");
          }
        for (const SVec& rel : rcomp.relations)
          for (size_t ia = 0; ia < scomp.info.size(); ++ia) {
            SVec img;
            for (const auto& [ib, cv] : rel.terms)
              img = svec_add(img, svec_scale(cv, pairs[ia][static_cast<size_t>(ib)]));
            if (!lin_apply(mt->second.q.projection, img).is_zero())
              throw std::logic_error(
                  "pC_transform: composition does not descend to the coend");
          }
        int dq = scomp.q.quotient.dim();
        int dr = rcomp.q.quotient.dim();
        std::vector<SVec> cols(static_cast<size_t>(dq * dr));
        for (int qa = 0; qa < dq; ++qa)
          for (int qb = 0; qb < dr; ++qb) {
            SVec img;
            for (const auto& [ia, ca] :
                 scomp.q.section.m.col[static_cast<size_t>(qa)].terms)
              for (const auto& [ib, cb] :
                   rcomp.q.section.m.col[static_cast<size_t>(qb)].terms)
                img = svec_add(img, svec_scale(ca * cb,
                                               pairs[static_cast<size_t>(ia)]
                                                    [static_cast<size_t>(ib)]));
            cols[static_cast<size_t>(qa * dr + qb)] =
                lin_apply(mt->second.q.projection, img);
          }
        out.set_comp(s, i, r,
                     lin_from_cols(tensor_space(scomp.q.quotient,
                                                rcomp.q.quotient),
                                   mt->second.q.quotient, cols));
      }
    }
  }
  return out;
}

DgaOperad build_dga_operad(int degree_lo, int degree_hi, int weight_bound) {
  if (weight_bound < 2)
    throw std::invalid_argument(
        "build_dga_operad: weight_bound must be at least 2");
  DgaOperad out;
  out.cat = std::make_unique<LinearCat>(build_D_truncated(degree_lo, degree_hi));
  const LinearCat& cat = *out.cat;
  auto obj = [](int k) { return std::to_string(k); };
  auto in_window = [&](int k) { return k >= degree_lo && k <= degree_hi; };

  NsCollection x;
  x.cat = &cat;
  for (int m = degree_lo; m <= degree_hi; ++m)
    for (int n = degree_lo; n <= degree_hi; ++n) {
      if (in_window(m + n))
        x.set_space(ColorScheme{{obj(m), obj(n)}, obj(m + n)},
                    make_space({"mu_" + obj(m) + "_" + obj(n)}));
      if (in_window(m + n - 1))
        x.set_space(ColorScheme{{obj(m), obj(n)}, obj(m + n - 1)},
                    make_space({"mu1_" + obj(m) + "_" + obj(n),
                                "mu2_" + obj(m) + "_" + obj(n)}));
    }
  for (int m = degree_lo; m <= degree_hi; ++m)
    for (int n = degree_lo; n <= degree_hi; ++n) {
      ColorScheme drop{{obj(m), obj(n)}, obj(m + n - 1)};
      if (!x.supported(drop)) continue;
      ColorScheme top1{{obj(m - 1), obj(n)}, obj(m + n - 1)};
      if (in_window(m - 1) && x.supported(top1))
        x.set_in_act(top1, 1, "d_" + obj(m),
                     lin_from_cols(x.space(top1), x.space(drop),
                                   {svec_unit(0)}));
      ColorScheme top2{{obj(m), obj(n - 1)}, obj(m + n - 1)};
      if (in_window(n - 1) && x.supported(top2))
        x.set_in_act(top2, 2, "d_" + obj(n),
                     lin_from_cols(x.space(top2), x.space(drop),
                                   {svec_unit(1)}));
      ColorScheme top{{obj(m), obj(n)}, obj(m + n)};
      if (x.supported(top))
        x.set_out_act(
            top, "d_" + obj(m + n),
            lin_from_cols(x.space(top), x.space(drop),
                          {svec_add(svec_unit(0),
                                    svec_unit(1, Rat(n % 2 == 0 ? 1 : -1)))}));
    }

  FreeNsOperad fns = free_ns(x, 3, weight_bound);
  out.free_sym = symmetrize(fns);

  out.presented.generators = x;
  out.presented.arity_bound = 3;
  out.presented.weight_bound = weight_bound;
  for (int m = degree_lo; m <= degree_hi; ++m)
    for (int n = degree_lo; n <= degree_hi; ++n)
      for (int k = degree_lo; k <= degree_hi; ++k) {
        ColorScheme top_mn{{obj(m), obj(n)}, obj(m + n)};
        ColorScheme top_nk{{obj(n), obj(k)}, obj(n + k)};
        ColorScheme outer1{{obj(m + n), obj(k)}, obj(m + n + k)};
        ColorScheme outer2{{obj(m), obj(n + k)}, obj(m + n + k)};
        if (!x.supported(top_mn) || !x.supported(top_nk) ||
            !x.supported(outer1) || !x.supported(outer2))
          continue;
        ColorScheme s3{{obj(m), obj(n), obj(k)}, obj(m + n + k)};
        SVec rel_ns = svec_sub(
            fns.op.compose(outer1, generator_class(fns, outer1, 0), 1, top_mn,
                           generator_class(fns, top_mn, 0)),
            fns.op.compose(outer2, generator_class(fns, outer2, 0), 2, top_nk,
                           generator_class(fns, top_nk, 0)));
        if (rel_ns.is_zero()) continue;
        SVec rel = symmetrize_embed(fns.op, fns.grading, s3, rel_ns);
        out.presented.sym_relations.push_back({s3, rel});
        out.presentation.relations.push_back({s3, rel});
      }

  OperadicIdeal ideal =
      ideal_closure(out.free_sym.op, out.presented.sym_relations, weight_bound);
  out.quotient = quotient_operad(out.free_sym.op, ideal);
  out.presentation.generators.ns = x;
  out.presentation.grading = out.free_sym.grading;
  return out;
}

CFunctor chain_functor(const LinearCat& d,
                       const std::map<int, BasedSpace>& spaces,
                       const std::map<int, SMat>& diff) {
  CFunctor a;
  a.cat = &d;
  for (const auto& [k, sp] : spaces) {
    if (sp.dim() == 0) continue;
    if (!d.has_object(std::to_string(k)))
      throw std::invalid_argument("chain_functor: degree " +
                                  std::to_string(k) + " is out of the window");
    a.set_space(std::to_string(k), sp);
  }
  for (const auto& [k, m] : diff) {
    std::string id = "d_" + std::to_string(k);
    if (!d.basis_index.count(id)) continue;
    const BasedSpace& src = a.space(std::to_string(k));
    const BasedSpace& tgt = a.space(std::to_string(k - 1));
    if (src.dim() == 0 || tgt.dim() == 0) continue;
    if (m.rows != tgt.dim() || m.cols != src.dim())
      throw std::invalid_argument("chain_functor: differential at degree " +
                                  std::to_string(k) + " is mistyped");
    a.set_action(id, LinMap{src, tgt, m});
  }
  return a;
}

AlgebraMap dga_algebra(const DgaOperad& p, const CFunctor& a,
                       const std::map<std::pair<int, int>, LinMap>& mult) {
  AlgebraMap out;
  out.carrier = a;
  UnitalCOperad e = end_operad(a, 2);
  const NsCollection& ens = e.base.carrier.ns;
  auto getmult = [&](int m, int n) -> LinMap {
    BasedSpace src = tensor_space(a.space(std::to_string(m)),
                                  a.space(std::to_string(n)));
    const BasedSpace& tgt = a.space(std::to_string(m + n));
    auto it = mult.find({m, n});
    if (it == mult.end()) return lin_zero(src, tgt);
    if (it->second.m.rows != tgt.dim() || it->second.m.cols != src.dim())
      throw std::invalid_argument("dga_algebra: multiplication at (" +
                                  std::to_string(m) + ", " +
                                  std::to_string(n) + ") is mistyped");
    return LinMap{src, tgt, it->second.m};
  };
  auto dmap = [&](int m) -> LinMap {
    std::string id = "d_" + std::to_string(m);
    if (a.cat->basis_index.count(id)) return a.action(id);
    return lin_zero(a.space(std::to_string(m)),
                    a.space(std::to_string(m - 1)));
  };
  auto vec = [](const LinMap& f) {
    SVec v;
    for (int q = 0; q < f.m.cols; ++q)
      for (const auto& [r, c] : f.m.col[static_cast<size_t>(q)].terms)
        v.terms.push_back({r * f.m.cols + q, c});
    return svec_collect(std::move(v.terms));
  };
  for (const auto& [s, sp] : p.presented.generators.spaces) {
    int m = obj_degree(s.inputs[0]);
    int n = obj_degree(s.inputs[1]);
    int c = obj_degree(s.output);
    std::vector<SVec> cols;
    if (c == m + n) {
      cols = {vec(getmult(m, n))};
    } else {
      LinMap mu1 = lin_compose(
          getmult(m - 1, n),
          lin_tensor(dmap(m), lin_identity(a.space(s.inputs[1]))));
      LinMap mu2 = lin_compose(
          getmult(m, n - 1),
          lin_tensor(lin_identity(a.space(s.inputs[0])), dmap(n)));
      cols = {vec(mu1), vec(mu2)};
    }
    out.images[s] = lin_from_cols(sp, ens.space(s), std::move(cols));
  }
  return out;
}

} // namespace oforge
