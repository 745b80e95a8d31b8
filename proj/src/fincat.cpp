#include "oforge/fincat.hpp"

#include <algorithm>
#include <stdexcept>

namespace oforge {

bool FinCat::has_object(const Obj& o) const {
  return std::find(objects.begin(), objects.end(), o) != objects.end();
}

const FinCat::Mor* FinCat::find_mor(const std::string& id) const {
  for (const auto& m : morphisms)
    if (m.id == id) return &m;
  return nullptr;
}

std::optional<std::string> FinCat::compose(const std::string& g,
                                           const std::string& f) const {
  auto it = compose_table.find({g, f});
  if (it == compose_table.end()) return std::nullopt;
  return it->second;
}

Report validate_category(const FinCat& c) {
  Report rep;
  for (const auto& m : c.morphisms) {
    if (!c.has_object(m.src) || !c.has_object(m.tgt))
      rep.fail("morphism " + m.id + " has unknown endpoint");
  }
  for (const auto& o : c.objects) {
    auto it = c.identity.find(o);
    if (it == c.identity.end()) {
      rep.fail("object " + o + " has no identity");
      continue;
    }
    const auto* id_m = c.find_mor(it->second);
    if (!id_m || id_m->src != o || id_m->tgt != o)
      rep.fail("identity of " + o + " is not an endomorphism of " + o);
  }
  // Totality of the table on composable pairs, endpoint consistency.
  for (const auto& g : c.morphisms) {
    for (const auto& f : c.morphisms) {
      if (f.tgt != g.src) continue;
      auto gf = c.compose(g.id, f.id);
      if (!gf) {
        rep.fail("missing composite (" + g.id + "," + f.id + ")");
        continue;
      }
      const auto* m = c.find_mor(*gf);
      if (!m || m->src != f.src || m->tgt != g.tgt)
        rep.fail("composite (" + g.id + "," + f.id + ") has wrong endpoints");
    }
  }
  if (!rep.ok()) return rep;
  // Unit laws.
  for (const auto& f : c.morphisms) {
    const std::string& id_s = c.identity.at(f.src);
    const std::string& id_t = c.identity.at(f.tgt);
    if (c.compose(f.id, id_s) != std::optional<std::string>(f.id))
      rep.fail("unit law fails: " + f.id + " . " + id_s);
    if (c.compose(id_t, f.id) != std::optional<std::string>(f.id))
      rep.fail("unit law fails: " + id_t + " . " + f.id);
  }
  // Associativity, exhaustive over composable triples.
  for (const auto& h : c.morphisms)
    for (const auto& g : c.morphisms) {
      if (g.tgt != h.src) continue;
      for (const auto& f : c.morphisms) {
        if (f.tgt != g.src) continue;
        auto hg = c.compose(h.id, g.id);
        auto gf = c.compose(g.id, f.id);
        if (!hg || !gf) continue;
        auto left = c.compose(*hg, f.id);
        auto right = c.compose(h.id, *gf);
        if (left != right)
          rep.fail("associativity fails on (" + h.id + "," + g.id + "," +
                   f.id + ")");
      }
    }
  return rep;
}

FinCat terminal_category() {
  FinCat c;
  c.objects = {"*"};
  c.morphisms = {{"id_*", "*", "*"}};
  c.identity["*"] = "id_*";
  c.compose_table[{"id_*", "id_*"}] = "id_*";
  return c;
}

FinCat walking_arrow() {
  FinCat c;
  c.objects = {"a", "b"};
  c.morphisms = {{"id_a", "a", "a"}, {"id_b", "b", "b"}, {"f", "a", "b"}};
  c.identity["a"] = "id_a";
  c.identity["b"] = "id_b";
  c.compose_table[{"id_a", "id_a"}] = "id_a";
  c.compose_table[{"id_b", "id_b"}] = "id_b";
  c.compose_table[{"f", "id_a"}] = "f";
  c.compose_table[{"id_b", "f"}] = "f";
  return c;
}

FinCat discrete_category(std::vector<Obj> objects) {
  FinCat c;
  c.objects = std::move(objects);
  for (const auto& o : c.objects) {
    std::string id = "id_" + o;
    c.morphisms.push_back({id, o, o});
    c.identity[o] = id;
    c.compose_table[{id, id}] = id;
  }
  return c;
}

std::string sigma_mor_id(const Perm& p) {
  return "s" + std::to_string(p.n()) + ":" + perm_to_string(p);
}

FinCat sigma_category(int N, bool flip) {
  FinCat c;
  for (int n = 0; n <= N; ++n) {
    Obj o = std::to_string(n);
    c.objects.push_back(o);
    auto perms = all_perms(n);
    for (const auto& p : perms) c.morphisms.push_back({sigma_mor_id(p), o, o});
    c.identity[o] = sigma_mor_id(perm_identity(n));
    for (const auto& g : perms)
      for (const auto& f : perms) {
        Perm gf = flip ? perm_compose(f, g) : perm_compose(g, f);
        c.compose_table[{sigma_mor_id(g), sigma_mor_id(f)}] = sigma_mor_id(gf);
      }
  }
  return c;
}

FinCat opposite_category(const FinCat& c) {
  FinCat o = c;
  for (auto& m : o.morphisms) std::swap(m.src, m.tgt);
  o.compose_table.clear();
  for (const auto& [key, val] : c.compose_table)
    o.compose_table[{key.second, key.first}] = val;
  return o;
}

bool LinearCat::has_object(const Obj& o) const {
  return std::find(objects.begin(), objects.end(), o) != objects.end();
}

const LinearCat::HomBasis& LinearCat::info(const std::string& id) const {
  auto it = basis_index.find(id);
  if (it == basis_index.end())
    throw std::invalid_argument("unknown hom basis element: " + id);
  return basis[it->second];
}

bool LinearCat::is_identity(const std::string& id) const {
  const auto& b = info(id);
  auto it = identity.find(b.src);
  return it != identity.end() && it->second == id;
}

BasedSpace LinearCat::hom_space(const Obj& a, const Obj& b) const {
  BasedSpace s;
  auto it = hom.find({a, b});
  if (it == hom.end()) return s;
  for (int i : it->second) s.basis.push_back(basis[i].id);
  return s;
}

std::vector<std::string> LinearCat::hom_ids(const Obj& a, const Obj& b) const {
  return hom_space(a, b).basis;
}

std::map<std::string, Rat> LinearCat::compose_basis(
    const std::string& g, const std::string& f) const {
  const auto& bf = info(f);
  const auto& bg = info(g);
  if (bf.tgt != bg.src)
    throw std::invalid_argument("compose_basis: not composable: " + g + " . " +
                                f);
  auto it = comp.find({g, f});
  if (it == comp.end()) return {};
  return it->second;
}

std::map<std::string, Rat> LinearCat::compose_vec(
    const std::map<std::string, Rat>& g,
    const std::map<std::string, Rat>& f) const {
  std::map<std::string, Rat> out;
  for (const auto& [gi, gc] : g)
    for (const auto& [fi, fc] : f) {
      auto term = compose_basis(gi, fi);
      for (const auto& [id, c] : term) {
        Rat v = gc * fc * c;
        if (v == 0) continue;
        auto [pos, inserted] = out.try_emplace(id, v);
        if (!inserted) pos->second += v;
      }
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

std::vector<std::string> LinearCat::nonidentity_basis() const {
  std::vector<std::string> out;
  for (const auto& b : basis)
    if (!is_identity(b.id)) out.push_back(b.id);
  return out;
}

static bool vec_eq(const std::map<std::string, Rat>& a,
                   const std::map<std::string, Rat>& b) {
  return a == b;
}

Report validate_linear_cat(const LinearCat& c) {
  Report rep;
  for (const auto& b : c.basis) {
    if (!c.has_object(b.src) || !c.has_object(b.tgt))
      rep.fail("hom basis " + b.id + " has unknown endpoint");
  }
  for (const auto& o : c.objects) {
    auto it = c.identity.find(o);
    if (it == c.identity.end()) {
      rep.fail("object " + o + " has no identity");
      continue;
    }
    const auto& b = c.info(it->second);
    if (b.src != o || b.tgt != o) rep.fail("identity of " + o + " mistyped");
  }
  if (!rep.ok()) return rep;
  for (const auto& b : c.basis) {
    std::map<std::string, Rat> f{{b.id, Rat(1)}};
    if (!vec_eq(c.compose_vec({{c.identity.at(b.tgt), Rat(1)}}, f), f))
      rep.fail("left unit law fails on " + b.id);
    if (!vec_eq(c.compose_vec(f, {{c.identity.at(b.src), Rat(1)}}), f))
      rep.fail("right unit law fails on " + b.id);
  }
  for (const auto& h : c.basis)
    for (const auto& g : c.basis) {
      if (g.tgt != h.src) continue;
      for (const auto& f : c.basis) {
        if (f.tgt != g.src) continue;
        auto hg = c.compose_basis(h.id, g.id);
        auto gf = c.compose_basis(g.id, f.id);
        auto left = c.compose_vec(hg, {{f.id, Rat(1)}});
        auto right = c.compose_vec({{h.id, Rat(1)}}, gf);
        if (!vec_eq(left, right))
          rep.fail("bilinear associativity fails on (" + h.id + "," + g.id +
                   "," + f.id + ")");
      }
    }
  return rep;
}

LinearCat linearize(const FinCat& c) {
  LinearCat l;
  l.objects = c.objects;
  for (const auto& m : c.morphisms) {
    l.basis_index[m.id] = static_cast<int>(l.basis.size());
    l.basis.push_back({m.id, m.src, m.tgt});
    l.hom[{m.src, m.tgt}].push_back(l.basis_index[m.id]);
  }
  for (const auto& [key, val] : c.compose_table)
    l.comp[key] = {{val, Rat(1)}};
  l.identity = c.identity;
  return l;
}

LinearCat build_D_truncated(int lo, int hi) {
  if (lo >= hi) throw std::invalid_argument("build_D_truncated: lo < hi required");
  LinearCat l;
  for (int n = lo; n <= hi; ++n) {
    Obj o = std::to_string(n);
    l.objects.push_back(o);
    std::string idm = "id_" + o;
    l.basis_index[idm] = static_cast<int>(l.basis.size());
    l.basis.push_back({idm, o, o});
    l.hom[{o, o}].push_back(l.basis_index[idm]);
    l.identity[o] = idm;
  }
  for (int n = lo + 1; n <= hi; ++n) {
    Obj src = std::to_string(n), tgt = std::to_string(n - 1);
    std::string d = "d_" + src;
    l.basis_index[d] = static_cast<int>(l.basis.size());
    l.basis.push_back({d, src, tgt});
    l.hom[{src, tgt}].push_back(l.basis_index[d]);
  }
  for (const auto& b : l.basis) {
    l.comp[{l.identity.at(b.tgt), b.id}] = {{b.id, Rat(1)}};
    l.comp[{b.id, l.identity.at(b.src)}] = {{b.id, Rat(1)}};
  }
  // d_{n-1} . d_n lands in hom(n, n-2) = 0: entry stays absent.
  return l;
}

int obj_degree(const Obj& o) { return std::stoi(o); }

bool operator<(const ColorScheme& a, const ColorScheme& b) {
  if (a.inputs.size() != b.inputs.size())
    return a.inputs.size() < b.inputs.size();
  if (a.inputs != b.inputs) return a.inputs < b.inputs;
  return a.output < b.output;
}

std::string scheme_to_string(const ColorScheme& s) {
  std::string out = "(";
  for (size_t i = 0; i < s.inputs.size(); ++i) {
    if (i) out += ",";
    out += s.inputs[i];
  }
  out += ";" + s.output + ")";
  return out;
}

ColorScheme scheme_act(const ColorScheme& s, const Perm& sigma) {
  if (sigma.n() != s.arity())
    throw std::invalid_argument("scheme_act: arity mismatch");
  ColorScheme r;
  r.inputs.resize(s.inputs.size());
  for (int k = 1; k <= s.arity(); ++k) r.inputs[k - 1] = s.inputs[sigma(k) - 1];
  r.output = s.output;
  return r;
}

ColorScheme scheme_merge(const ColorScheme& s, int i, const ColorScheme& r) {
  if (i < 1 || i > s.arity())
    throw std::invalid_argument("scheme_merge: slot range");
  ColorScheme out;
  out.inputs.insert(out.inputs.end(), s.inputs.begin(),
                    s.inputs.begin() + (i - 1));
  out.inputs.insert(out.inputs.end(), r.inputs.begin(), r.inputs.end());
  out.inputs.insert(out.inputs.end(), s.inputs.begin() + i, s.inputs.end());
  out.output = s.output;
  return out;
}

ColorScheme scheme_replace_input(const ColorScheme& s, int i, const Obj& o) {
  ColorScheme r = s;
  r.inputs[i - 1] = o;
  return r;
}

ColorScheme scheme_replace_output(const ColorScheme& s, const Obj& o) {
  ColorScheme r = s;
  r.output = o;
  return r;
}

SchemeMorphism identity_scheme_morphism(const FinCat& c,
                                        const ColorScheme& s) {
  SchemeMorphism m;
  m.dom = s;
  m.cod = s;
  m.sigma = perm_identity(s.arity());
  for (const auto& o : s.inputs) m.input_maps.push_back(c.identity.at(o));
  m.output_map = c.identity.at(s.output);
  return m;
}

Report validate_scheme_morphism(const FinCat& c, const SchemeMorphism& m) {
  Report rep;
  int n = m.dom.arity();
  if (m.cod.arity() != n || m.sigma.n() != n ||
      static_cast<int>(m.input_maps.size()) != n) {
    rep.fail("scheme morphism: arity mismatch");
    return rep;
  }
  for (int i = 1; i <= n; ++i) {
    const auto* f = c.find_mor(m.input_maps[i - 1]);
    if (!f) {
      rep.fail("unknown input map " + m.input_maps[i - 1]);
      continue;
    }
    if (f->src != m.dom.inputs[i - 1] ||
        f->tgt != m.cod.inputs[m.sigma(i) - 1])
      rep.fail("input map " + f->id + " mistyped at slot " +
               std::to_string(i));
  }
  const auto* f = c.find_mor(m.output_map);
  if (!f || f->src != m.dom.output || f->tgt != m.cod.output)
    rep.fail("output map mistyped");
  return rep;
}

SchemeMorphism compose_scheme_morphisms(const FinCat& c,
                                        const SchemeMorphism& second,
                                        const SchemeMorphism& first) {
  if (!(first.cod == second.dom))
    throw std::invalid_argument("compose_scheme_morphisms: middle scheme mismatch");
  SchemeMorphism out;
  out.dom = first.dom;
  out.cod = second.cod;
  out.sigma = perm_compose(second.sigma, first.sigma);
  int n = first.dom.arity();
  out.input_maps.resize(n);
  for (int i = 1; i <= n; ++i) {
    const std::string& fi = first.input_maps[i - 1];
    const std::string& gi = second.input_maps[first.sigma(i) - 1];
    auto comp = c.compose(gi, fi);
    if (!comp)
      throw std::invalid_argument("compose_scheme_morphisms: missing composite");
    out.input_maps[i - 1] = *comp;
  }
  auto comp = c.compose(second.output_map, first.output_map);
  if (!comp)
    throw std::invalid_argument("compose_scheme_morphisms: missing output composite");
  out.output_map = *comp;
  return out;
}

} // namespace oforge
