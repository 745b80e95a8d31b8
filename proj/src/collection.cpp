#include "oforge/collection.hpp"

#include <stdexcept>

namespace oforge {

namespace {

const BasedSpace kZeroSpace{};

void check_slot(const ColorScheme& s, int slot) {
  if (slot < 1 || slot > s.arity())
    throw std::out_of_range("collection: slot " + std::to_string(slot) +
                            " out of range for " + scheme_to_string(s));
}

} // namespace

const BasedSpace& NsCollection::space(const ColorScheme& s) const {
  auto it = spaces.find(s);
  return it == spaces.end() ? kZeroSpace : it->second;
}

bool NsCollection::supported(const ColorScheme& s) const {
  return spaces.count(s) != 0;
}

std::set<int> NsCollection::arities() const {
  std::set<int> r;
  for (const auto& [s, sp] : spaces) r.insert(s.arity());
  return r;
}

void NsCollection::set_space(const ColorScheme& s, BasedSpace b) {
  spaces[s] = std::move(b);
}

void NsCollection::set_in_act(const ColorScheme& s, int slot,
                              const std::string& f, LinMap m) {
  check_slot(s, slot);
  in_act[{s, slot, f}] = std::move(m);
}

void NsCollection::set_out_act(const ColorScheme& s, const std::string& f,
                               LinMap m) {
  out_act[{s, f}] = std::move(m);
}

ColorScheme in_act_target(const LinearCat& cat, const ColorScheme& s, int slot,
                          const std::string& f) {
  check_slot(s, slot);
  const auto& mor = cat.info(f);
  if (s.inputs[slot - 1] != mor.tgt)
    throw std::invalid_argument("in_act: slot color " + s.inputs[slot - 1] +
                                " is not the target of " + f);
  return scheme_replace_input(s, slot, mor.src);
}

ColorScheme out_act_target(const LinearCat& cat, const ColorScheme& s,
                           const std::string& f) {
  const auto& mor = cat.info(f);
  if (s.output != mor.src)
    throw std::invalid_argument("out_act: output color " + s.output +
                                " is not the source of " + f);
  return scheme_replace_output(s, mor.tgt);
}

LinMap NsCollection::get_in_act(const ColorScheme& s, int slot,
                                const std::string& f) const {
  ColorScheme t = in_act_target(*cat, s, slot, f);
  if (auto it = in_act.find({s, slot, f}); it != in_act.end())
    return it->second;
  if (cat->is_identity(f)) return lin_identity(space(s));
  return lin_zero(space(s), space(t));
}

LinMap NsCollection::get_out_act(const ColorScheme& s,
                                 const std::string& f) const {
  ColorScheme t = out_act_target(*cat, s, f);
  if (auto it = out_act.find({s, f}); it != out_act.end()) return it->second;
  if (cat->is_identity(f)) return lin_identity(space(s));
  return lin_zero(space(s), space(t));
}

LinMap NsCollection::in_act_vec(const ColorScheme& s, int slot, const Obj& src,
                                const Obj& tgt,
                                const std::map<std::string, Rat>& v) const {
  check_slot(s, slot);
  if (s.inputs[slot - 1] != tgt)
    throw std::invalid_argument("in_act_vec: slot color mismatch");
  LinMap r = lin_zero(space(s), space(scheme_replace_input(s, slot, src)));
  for (const auto& [f, c] : v) {
    const auto& mor = cat->info(f);
    if (mor.src != src || mor.tgt != tgt)
      throw std::invalid_argument("in_act_vec: mixed hom-space vector");
    r = lin_add(r, lin_scale(c, get_in_act(s, slot, f)));
  }
  return r;
}

LinMap NsCollection::out_act_vec(const ColorScheme& s, const Obj& src,
                                 const Obj& tgt,
                                 const std::map<std::string, Rat>& v) const {
  if (s.output != src)
    throw std::invalid_argument("out_act_vec: output color mismatch");
  LinMap r = lin_zero(space(s), space(scheme_replace_output(s, tgt)));
  for (const auto& [f, c] : v) {
    const auto& mor = cat->info(f);
    if (mor.src != src || mor.tgt != tgt)
      throw std::invalid_argument("out_act_vec: mixed hom-space vector");
    r = lin_add(r, lin_scale(c, get_out_act(s, f)));
  }
  return r;
}

Report validate_functor(const NsCollection& x) {
  Report r;
  if (x.cat == nullptr) {
    r.fail("collection has no category");
    return r;
  }
  const LinearCat& cat = *x.cat;

  for (const auto& [s, sp] : x.spaces) {
    if (!cat.has_object(s.output))
      r.fail("unknown output color in " + scheme_to_string(s));
    for (const auto& c : s.inputs)
      if (!cat.has_object(c))
        r.fail("unknown input color in " + scheme_to_string(s));
  }

  for (const auto& [key, m] : x.in_act) {
    const auto& [s, slot, f] = key;
    ColorScheme t;
    try {
      t = in_act_target(cat, s, slot, f);
    } catch (const std::exception& e) {
      r.fail(std::string("ill-typed input action: ") + e.what());
      continue;
    }
    if (m.source.dim() != x.dim(s) || m.target.dim() != x.dim(t))
      r.fail("input action dimension mismatch at " + scheme_to_string(s) +
             " slot " + std::to_string(slot) + " via " + f);
    if (cat.is_identity(f) && !lin_equal(m, lin_identity(x.space(s))))
      r.fail("identity morphism acts non-identically at " +
             scheme_to_string(s) + " slot " + std::to_string(slot));
  }
  for (const auto& [key, m] : x.out_act) {
    const auto& [s, f] = key;
    ColorScheme t;
    try {
      t = out_act_target(cat, s, f);
    } catch (const std::exception& e) {
      r.fail(std::string("ill-typed output action: ") + e.what());
      continue;
    }
    if (m.source.dim() != x.dim(s) || m.target.dim() != x.dim(t))
      r.fail("output action dimension mismatch at " + scheme_to_string(s) +
             " via " + f);
    if (cat.is_identity(f) && !lin_equal(m, lin_identity(x.space(s))))
      r.fail("identity morphism acts non-identically on output of " +
             scheme_to_string(s));
  }
  if (!r.ok()) return r;

  auto nonid = cat.nonidentity_basis();

  for (const auto& [s, sp] : x.spaces) {
    int n = s.arity();

    // Slotwise composition: act(f) . act(g) = act(g.f) for g into the slot
    // color and f into the source of g.
    for (int i = 1; i <= n; ++i) {
      for (const auto& g : nonid) {
        const auto& gm = cat.info(g);
        if (gm.tgt != s.inputs[i - 1]) continue;
        LinMap ag = x.get_in_act(s, i, g);
        ColorScheme sd = scheme_replace_input(s, i, gm.src);
        for (const auto& f : nonid) {
          const auto& fm = cat.info(f);
          if (fm.tgt != gm.src) continue;
          LinMap lhs = lin_compose(x.get_in_act(sd, i, f), ag);
          LinMap rhs =
              x.in_act_vec(s, i, fm.src, gm.tgt, cat.compose_basis(g, f));
          if (!lin_equal(lhs, rhs))
            r.fail("input composition fails at " + scheme_to_string(s) +
                   " slot " + std::to_string(i) + " via (" + g + ", " + f +
                   ")");
        }
      }
    }

    // Output composition: act(g) . act(f) = act(g.f), covariantly.
    for (const auto& f : nonid) {
      const auto& fm = cat.info(f);
      if (fm.src != s.output) continue;
      LinMap af = x.get_out_act(s, f);
      ColorScheme sd = scheme_replace_output(s, fm.tgt);
      for (const auto& g : nonid) {
        const auto& gm = cat.info(g);
        if (gm.src != fm.tgt) continue;
        LinMap lhs = lin_compose(x.get_out_act(sd, g), af);
        LinMap rhs = x.out_act_vec(s, fm.src, gm.tgt, cat.compose_basis(g, f));
        if (!lin_equal(lhs, rhs))
          r.fail("output composition fails at " + scheme_to_string(s) +
                 " via (" + g + ", " + f + ")");
      }
    }

    // Distinct input slots commute.
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (const auto& f : nonid) {
          const auto& fm = cat.info(f);
          if (fm.tgt != s.inputs[i - 1]) continue;
          ColorScheme si = scheme_replace_input(s, i, fm.src);
          for (const auto& g : nonid) {
            const auto& gm = cat.info(g);
            if (gm.tgt != s.inputs[j - 1]) continue;
            ColorScheme sj = scheme_replace_input(s, j, gm.src);
            LinMap lhs =
                lin_compose(x.get_in_act(si, j, g), x.get_in_act(s, i, f));
            LinMap rhs =
                lin_compose(x.get_in_act(sj, i, f), x.get_in_act(s, j, g));
            if (!lin_equal(lhs, rhs))
              r.fail("slot actions do not commute at " + scheme_to_string(s) +
                     " slots " + std::to_string(i) + "," + std::to_string(j) +
                     " via (" + f + ", " + g + ")");
          }
        }

    // Input and output actions commute.
    for (int i = 1; i <= n; ++i)
      for (const auto& f : nonid) {
        const auto& fm = cat.info(f);
        if (fm.tgt != s.inputs[i - 1]) continue;
        ColorScheme si = scheme_replace_input(s, i, fm.src);
        for (const auto& g : nonid) {
          const auto& gm = cat.info(g);
          if (gm.src != s.output) continue;
          ColorScheme so = scheme_replace_output(s, gm.tgt);
          LinMap lhs =
              lin_compose(x.get_out_act(si, g), x.get_in_act(s, i, f));
          LinMap rhs = lin_compose(x.get_in_act(so, i, f), x.get_out_act(s, g));
          if (!lin_equal(lhs, rhs))
            r.fail("input and output actions do not commute at " +
                   scheme_to_string(s) + " slot " + std::to_string(i) +
                   " via (" + f + ", " + g + ")");
        }
      }
  }
  return r;
}

NsCollection partial_eval(const NsCollection& x, int i, const Obj& c) {
  auto ars = x.arities();
  if (ars.size() > 1)
    throw std::invalid_argument("partial_eval: mixed-arity collection");
  int n = ars.empty() ? 0 : *ars.begin();
  if (i < 1 || i > n) throw std::out_of_range("partial_eval: slot index");

  auto drop = [&](const ColorScheme& s) {
    ColorScheme t;
    t.output = s.output;
    for (int k = 0; k < n; ++k)
      if (k != i - 1) t.inputs.push_back(s.inputs[k]);
    return t;
  };

  NsCollection res;
  res.cat = x.cat;
  for (const auto& [s, sp] : x.spaces)
    if (s.inputs[i - 1] == c) res.set_space(drop(s), sp);
  for (const auto& [key, m] : x.in_act) {
    const auto& [s, j, f] = key;
    if (s.inputs[i - 1] != c || j == i) continue;
    res.set_in_act(drop(s), j < i ? j : j - 1, f, m);
  }
  for (const auto& [key, m] : x.out_act) {
    const auto& [s, f] = key;
    if (s.inputs[i - 1] == c) res.set_out_act(drop(s), f, m);
  }
  return res;
}

NsCollection output_eval(const NsCollection& y, const Obj& c) {
  NsCollection res;
  res.cat = y.cat;
  for (const auto& [s, sp] : y.spaces)
    if (s.output == c) res.set_space(s, sp);
  for (const auto& [key, m] : y.in_act) {
    const auto& [s, j, f] = key;
    if (s.output == c) res.set_in_act(s, j, f, m);
  }
  return res;
}

std::map<ColorScheme, LinMap> partial_eval_nat(const NsCollection& x, int i,
                                               const std::string& f) {
  auto ars = x.arities();
  if (ars.size() > 1)
    throw std::invalid_argument("partial_eval_nat: mixed-arity collection");
  int n = ars.empty() ? 0 : *ars.begin();
  if (i < 1 || i > n) throw std::out_of_range("partial_eval_nat: slot index");
  const auto& mor = x.cat->info(f);

  std::map<ColorScheme, LinMap> fam;
  for (const auto& [s, sp] : x.spaces) {
    if (s.inputs[i - 1] != mor.tgt) continue;
    ColorScheme t;
    t.output = s.output;
    for (int k = 0; k < n; ++k)
      if (k != i - 1) t.inputs.push_back(s.inputs[k]);
    fam.emplace(t, x.get_in_act(s, i, f));
  }
  return fam;
}

NsCollection sigma_act(const NsCollection& x, const Perm& sigma) {
  auto ars = x.arities();
  if (ars.size() > 1)
    throw std::invalid_argument("sigma_act: mixed-arity collection");
  if (!ars.empty() && *ars.begin() != sigma.n())
    throw std::invalid_argument("sigma_act: permutation size mismatch");
  Perm inv = perm_inverse(sigma);

  NsCollection res;
  res.cat = x.cat;
  for (const auto& [s, sp] : x.spaces) res.set_space(scheme_act(s, inv), sp);
  for (const auto& [key, m] : x.in_act) {
    const auto& [s, j, f] = key;
    res.set_in_act(scheme_act(s, inv), sigma(j), f, m);
  }
  for (const auto& [key, m] : x.out_act) {
    const auto& [s, f] = key;
    res.set_out_act(scheme_act(s, inv), f, m);
  }
  return res;
}

LinMap SymCollection::get_sigma(const ColorScheme& s, const Perm& sigma) const {
  if (sigma.n() != s.arity())
    throw std::invalid_argument("get_sigma: permutation size mismatch");
  if (auto it = this->sigma.find({s, sigma}); it != this->sigma.end())
    return it->second;
  if (is_identity(sigma)) return lin_identity(ns.space(s));
  return lin_zero(ns.space(s), ns.space(scheme_act(s, sigma)));
}

void SymCollection::set_sigma(const ColorScheme& s, const Perm& sg, LinMap m) {
  sigma[{s, sg}] = std::move(m);
}

Report validate_sym(const SymCollection& p) {
  Report r = validate_functor(p.ns);
  if (!r.ok()) return r;
  const LinearCat& cat = *p.ns.cat;
  auto nonid = cat.nonidentity_basis();

  for (const auto& [key, m] : p.sigma) {
    const auto& [s, sg] = key;
    if (sg.n() != s.arity()) {
      r.fail("sigma action arity mismatch at " + scheme_to_string(s));
      continue;
    }
    if (m.source.dim() != p.ns.dim(s) ||
        m.target.dim() != p.ns.dim(scheme_act(s, sg)))
      r.fail("sigma action dimension mismatch at " + scheme_to_string(s) +
             " by " + perm_to_string(sg));
  }
  if (!r.ok()) return r;

  for (const auto& [s, sp] : p.ns.spaces) {
    if (sp.dim() == 0) continue;
    int n = s.arity();
    auto perms = all_perms(n);

    for (const auto& sg : perms) {
      if (is_identity(sg)) {
        if (auto it = p.sigma.find({s, sg});
            it != p.sigma.end() && !lin_equal(it->second, lin_identity(sp)))
          r.fail("identity permutation acts non-identically at " +
                 scheme_to_string(s));
        continue;
      }
      if (!p.sigma.count({s, sg})) {
        r.fail("missing sigma action at " + scheme_to_string(s) + " by " +
               perm_to_string(sg));
        continue;
      }
      LinMap fwd = p.get_sigma(s, sg);
      LinMap bwd = p.get_sigma(scheme_act(s, sg), perm_inverse(sg));
      if (!lin_equal(lin_compose(bwd, fwd), lin_identity(sp)))
        r.fail("sigma action not invertible at " + scheme_to_string(s) +
               " by " + perm_to_string(sg));
    }
    if (!r.ok()) continue;

    // ((x)tau)sigma = (x)(tau o sigma).
    for (const auto& tau : perms)
      for (const auto& sg : perms) {
        LinMap lhs = lin_compose(p.get_sigma(scheme_act(s, tau), sg),
                                 p.get_sigma(s, tau));
        LinMap rhs = p.get_sigma(s, perm_compose(tau, sg));
        if (!lin_equal(lhs, rhs))
          r.fail("right action law fails at " + scheme_to_string(s) + " for " +
                 perm_to_string(tau) + " then " + perm_to_string(sg));
      }

    // Compatibility with input actions:
    // sigma . (f at slot i) = (f at slot sigma^{-1}(i)) . sigma.
    for (const auto& sg : perms) {
      Perm inv = perm_inverse(sg);
      ColorScheme ss = scheme_act(s, sg);
      for (int i = 1; i <= n; ++i)
        for (const auto& f : nonid) {
          const auto& fm = cat.info(f);
          if (fm.tgt != s.inputs[i - 1]) continue;
          ColorScheme si = scheme_replace_input(s, i, fm.src);
          LinMap lhs =
              lin_compose(p.get_sigma(si, sg), p.ns.get_in_act(s, i, f));
          LinMap rhs =
              lin_compose(p.ns.get_in_act(ss, inv(i), f), p.get_sigma(s, sg));
          if (!lin_equal(lhs, rhs))
            r.fail("sigma/input compatibility fails at " +
                   scheme_to_string(s) + " slot " + std::to_string(i) +
                   " via " + f + " by " + perm_to_string(sg));
        }
      for (const auto& g : nonid) {
        const auto& gm = cat.info(g);
        if (gm.src != s.output) continue;
        ColorScheme so = scheme_replace_output(s, gm.tgt);
        LinMap lhs = lin_compose(p.get_sigma(so, sg), p.ns.get_out_act(s, g));
        LinMap rhs = lin_compose(p.ns.get_out_act(ss, g), p.get_sigma(s, sg));
        if (!lin_equal(lhs, rhs))
          r.fail("sigma/output compatibility fails at " + scheme_to_string(s) +
                 " via " + g + " by " + perm_to_string(sg));
      }
    }
  }
  return r;
}

} // namespace oforge
