#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oforge/endalg.hpp"
#include "oforge/words.hpp"

#include <string>
#include <vector>

using namespace oforge;

namespace {

ColorScheme sch(std::vector<Obj> in, Obj out) {
  return ColorScheme{std::move(in), std::move(out)};
}

const LinearCat& terminal_cat() {
  static LinearCat cat = linearize(terminal_category());
  return cat;
}

const LinearCat& warrow_cat() {
  static LinearCat cat = linearize(walking_arrow());
  return cat;
}

ColorScheme allstar(int n) {
  return sch(std::vector<Obj>(static_cast<size_t>(n), "*"), "*");
}

/// Constant functor on the terminal category with a d-dimensional value.
CFunctor constant_carrier(int d) {
  CFunctor a;
  a.cat = &terminal_cat();
  a.set_space("*", numbered_space(d, "v"));
  return a;
}

/// A(a) = Q{x}, A(b) = Q{y0, y1}, A(f) x = y0 + y1.
CFunctor arrow_carrier() {
  CFunctor a;
  a.cat = &warrow_cat();
  a.set_space("a", make_space({"x"}));
  a.set_space("b", make_space({"y0", "y1"}));
  a.set_action("f", lin_from_cols(a.space("a"), a.space("b"),
                                  {svec_add(svec_unit(0), svec_unit(1))}));
  return a;
}

/// One binary generator over the terminal category, with the associativity
/// relation mu o_1 mu - mu o_2 mu in the free operad.
FreePresentation as_presentation() {
  FreePresentation p;
  p.generators.cat = &terminal_cat();
  p.generators.set_space(allstar(2), make_space({"mu"}));
  p.arity_bound = 3;
  p.weight_bound = 2;
  FreeNsOperad f = free_ns(p.generators, p.arity_bound, p.weight_bound);
  SVec g = generator_class(f, allstar(2), 0);
  p.ns_relations.push_back(
      {allstar(3), svec_sub(f.op.compose(allstar(2), g, 1, allstar(2), g),
                            f.op.compose(allstar(2), g, 2, allstar(2), g))});
  return p;
}

/// Image of a binary multiplication table on a d-dimensional carrier as a
/// map into End(*, *; *): table[i][j] is the product of basis i and j.
LinMap binary_image(const CFunctor& a, const std::vector<std::vector<SVec>>& t) {
  const BasedSpace& v = a.space("*");
  int d = v.dim();
  SVec img;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (const auto& [r, c] : t[static_cast<size_t>(i)][static_cast<size_t>(j)].terms)
        img.terms.push_back({r * d * d + i * d + j, c});
  UnitalCOperad e = end_operad(a, 2);
  return lin_from_cols(make_space({"mu"}),
                       e.base.carrier.ns.space(allstar(2)),
                       {svec_collect(std::move(img.terms))});
}

/// The associative word operad packaged as an operad in functors, with its
/// single component placed at the given object.
FunctorOperad as_functor_operad(const MonoidalStructure& mon, const Obj& at,
                                int max_arity) {
  static std::map<int, UnitalCOperad> cache;
  if (!cache.count(max_arity))
    cache[max_arity] = build_as_operad(terminal_cat(), max_arity);
  const UnitalCOperad& as = cache[max_arity];
  FunctorOperad p;
  p.mon = &mon;
  p.max_arity = max_arity;
  for (int n = 1; n <= max_arity; ++n) {
    CFunctor pn;
    pn.cat = mon.cat;
    pn.set_space(at, as.base.carrier.ns.space(allstar(n)));
    p.components[n] = pn;
    for (const Perm& sg : all_perms(n)) {
      if (is_identity(sg)) continue;
      p.sigma[{n, sg}][at] = as.base.carrier.get_sigma(allstar(n), sg);
    }
  }
  for (int n = 1; n <= max_arity; ++n)
    for (int m = 1; m <= max_arity; ++m) {
      if (n + m - 1 > max_arity) continue;
      for (int i = 1; i <= n; ++i)
        p.comp[{n, m, i, at, at}] =
            as.base.get_comp(allstar(n), i, allstar(m));
    }
  return p;
}

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

} // namespace

TEST_CASE("check_cfunctor accepts lawful carriers and locates breaks") {
  CHECK(check_cfunctor(arrow_carrier()).ok());
  CHECK(check_cfunctor(constant_carrier(3)).ok());

  CFunctor bad = arrow_carrier();
  bad.set_space("c", make_space({"z"}));
  REQUIRE_FALSE(check_cfunctor(bad).ok());
  CHECK(check_cfunctor(bad).violations.front().find("unknown object") !=
        std::string::npos);

  bad = arrow_carrier();
  bad.set_action("g", lin_identity(bad.space("a")));
  CHECK_FALSE(check_cfunctor(bad).ok());

  bad = arrow_carrier();
  bad.set_action("f", lin_identity(bad.space("b")));
  REQUIRE_FALSE(check_cfunctor(bad).ok());
  CHECK(check_cfunctor(bad).violations.front().find("mistyped") !=
        std::string::npos);

  bad = arrow_carrier();
  bad.set_action("id_b", lin_scale(Rat(2), lin_identity(bad.space("b"))));
  CHECK_FALSE(check_cfunctor(bad).ok());

  // dd must act as zero: a carrier with A(d_1) A(d_2) != 0 is not a functor.
  LinearCat d = build_D_truncated(0, 2);
  CFunctor chain;
  chain.cat = &d;
  for (int k = 0; k <= 2; ++k)
    chain.set_space(std::to_string(k), make_space({"e" + std::to_string(k)}));
  chain.set_action("d_1", lin_from_cols(chain.space("1"), chain.space("0"),
                                        {svec_unit(0)}));
  chain.set_action("d_2", lin_from_cols(chain.space("2"), chain.space("1"),
                                        {svec_unit(0)}));
  Report rep = check_cfunctor(chain);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations.front().find("functoriality") != std::string::npos);
}

TEST_CASE("end_operad of a one-dimensional carrier is everywhere scalar") {
  UnitalCOperad e = end_operad(constant_carrier(1), 3);
  for (int n = 0; n <= 3; ++n) CHECK(e.base.dim(allstar(n)) == 1);
  CHECK(check_operad(e.base).ok());
  CHECK(check_unital(e).ok());
  CHECK(cowedge_from_unital(e).ok());
  LinMap c = e.base.get_comp(allstar(2), 2, allstar(2));
  CHECK(c.m.col[0] == svec_unit(0));
}

TEST_CASE("end_operad dims over a two-dimensional carrier double per arity") {
  UnitalCOperad e = end_operad(constant_carrier(2), 3);
  for (int n = 0; n <= 3; ++n)
    CHECK(e.base.dim(allstar(n)) == (1 << (n + 1)));
  CHECK(check_operad(e.base).ok());
  CHECK(check_unital(e).ok());
  CHECK(cowedge_from_unital(e).ok());

  // The slot permutation reindexes the input multi-index: the map at
  // (1 2) sends the (r, (q1, q2)) matrix unit to (r, (q2, q1)).
  LinMap sg = e.base.carrier.get_sigma(allstar(2), transposition(2, 1, 2));
  CHECK(sg.m.col[0 * 4 + 1] == svec_unit(0 * 4 + 2));
  CHECK(sg.m.col[1 * 4 + 2] == svec_unit(1 * 4 + 1));
  CHECK(sg.m.col[1 * 4 + 3] == svec_unit(1 * 4 + 3));
}

TEST_CASE("end_operad actions are pre- and postcomposition on the carrier") {
  CFunctor a = arrow_carrier();
  UnitalCOperad e = end_operad(a, 2);
  const NsCollection& ns = e.base.carrier.ns;
  CHECK(check_operad(e.base).ok());
  CHECK(check_unital(e).ok());
  CHECK(cowedge_from_unital(e).ok());

  // Precomposition: phi in End(b; b) pulls back along A(f) x = y0 + y1,
  // so the matrix unit (r, q) maps to (r, 0) for either q.
  LinMap in = ns.in_act.at({sch({"b"}, "b"), 1, "f"});
  for (int r = 0; r < 2; ++r)
    for (int q = 0; q < 2; ++q)
      CHECK(in.m.col[static_cast<size_t>(r * 2 + q)] == svec_unit(r));

  // Postcomposition: id_{A(a)} maps to A(f) itself.
  LinMap outm = ns.out_act.at({sch({"a"}, "a"), "f"});
  CHECK(outm.m.col[0] == svec_add(svec_unit(0), svec_unit(1)));

  // Units are the vectorized actions.
  CHECK(e.units.at("f") == svec_add(svec_unit(0), svec_unit(1)));
  CHECK(e.units.at("id_b") == svec_add(svec_unit(0), svec_unit(3)));
  CHECK(e.units.at("id_a") == svec_unit(0));
}

TEST_CASE("check_algebra certifies associative tables and rejects the rest") {
  FreePresentation p = as_presentation();

  // Q[t] / (t^2): 1 is a unit and t t = 0.
  CFunctor a = constant_carrier(2);
  SVec one = svec_unit(0), t = svec_unit(1), zero;
  AlgebraMap good;
  good.carrier = a;
  good.images[allstar(2)] = binary_image(a, {{one, t}, {t, zero}});
  CHECK(check_algebra(p, good).ok());

  // 1 t = 0 but t 1 = t breaks associativity: (1 t) t = 0, 1 (t t) = 1.
  AlgebraMap bad;
  bad.carrier = a;
  bad.images[allstar(2)] = binary_image(a, {{one, zero}, {t, one}});
  Report rep = check_algebra(p, bad);
  REQUIRE_FALSE(rep.ok());
  CHECK(rep.violations.front().find("relation 0") != std::string::npos);

  // The verdict agrees with evaluating the relation directly.
  UnitalCOperad e = end_operad(a, p.arity_bound);
  NsOperad target = ns_view(e.base);
  FreeNsOperad f = free_ns(p.generators, p.arity_bound, p.weight_bound);
  for (const AlgebraMap* alg : {&good, &bad}) {
    std::map<ColorScheme, LinMap> phi = universal_map(f, target, alg->images);
    bool vanish =
        lin_apply(phi.at(allstar(3)), p.ns_relations[0].second).is_zero();
    CHECK(vanish == check_algebra(p, *alg).ok());
  }

  // Without the relation every image is an algebra of the free operad.
  FreePresentation free_p = p;
  free_p.ns_relations.clear();
  CHECK(check_algebra(free_p, bad).ok());

  // A mistyped image is a spec error, not a violation.
  AlgebraMap typo;
  typo.carrier = a;
  typo.images[allstar(2)] = lin_identity(a.space("*"));
  CHECK_THROWS_AS(check_algebra(p, typo), std::invalid_argument);

  // A broken carrier is reported with the carrier prefix.
  AlgebraMap broken = good;
  broken.carrier.set_action("id_*",
                            lin_scale(Rat(2), lin_identity(a.space("*"))));
  Report crep = check_algebra(p, broken);
  REQUIRE_FALSE(crep.ok());
  CHECK(crep.violations.front().find("carrier") != std::string::npos);
}

TEST_CASE("build_dga_operad lays out the generators and action values") {
  DgaOperad p = build_dga_operad(0, 2, 2);
  const NsCollection& x = p.presented.generators;
  CHECK(validate_functor(x).ok());

  // Product generators in every in-window total degree.
  int tops = 0, drops = 0;
  for (const auto& [s, sp] : x.spaces) {
    int m = obj_degree(s.inputs[0]), n = obj_degree(s.inputs[1]);
    if (obj_degree(s.output) == m + n) {
      CHECK(sp.dim() == 1);
      ++tops;
    } else {
      CHECK(obj_degree(s.output) == m + n - 1);
      CHECK(sp.dim() == 2);
      ++drops;
    }
  }
  CHECK(tops == 6);
  CHECK(drops == 7);

  // Differential in slot 1 hits the first derivative product, slot 2 the
  // second, and the output differential the signed sum.
  LinMap s1 = x.in_act.at({sch({"0", "1"}, "1"), 1, "d_1"});
  CHECK(s1.m.col[0] == svec_unit(0));
  LinMap s2 = x.in_act.at({sch({"1", "0"}, "1"), 2, "d_1"});
  CHECK(s2.m.col[0] == svec_unit(1));
  LinMap o11 = x.out_act.at({sch({"1", "1"}, "2"), "d_2"});
  CHECK(o11.m.col[0] == svec_add(svec_unit(0), svec_unit(1, Rat(-1))));
  LinMap o02 = x.out_act.at({sch({"0", "2"}, "2"), "d_2"});
  CHECK(o02.m.col[0] == svec_add(svec_unit(0), svec_unit(1)));
  LinMap o01 = x.out_act.at({sch({"0", "1"}, "1"), "d_1"});
  CHECK(o01.m.col[0] == svec_add(svec_unit(0), svec_unit(1, Rat(-1))));

  CHECK(is_quadratic_binary(p.presentation));
  CHECK(p.presentation.relations.size() == 10);
  CHECK(check_operad(p.quotient).ok());

  // The free symmetrization keeps both derivative products per order.
  CHECK(p.free_sym.grading.ranges.at({sch({"1", "1"}, "1"), 1}).second == 4);
  CHECK(p.free_sym.grading.ranges.at({sch({"1", "1"}, "2"), 1}).second == 2);

  // Associativity cuts the all-degree-zero ternary component from twelve
  // tree classes to the six orderings of an associative product.
  CHECK(p.free_sym.op.dim(sch({"0", "0", "0"}, "0")) == 12);
  CHECK(p.quotient.dim(sch({"0", "0", "0"}, "0")) == 6);

  CHECK_THROWS_AS(build_dga_operad(0, 2, 1), std::invalid_argument);
}

TEST_CASE("dga algebras: trivial products and a strict algebra pass, a "
          "Leibniz break is located") {
  DgaOperad p = build_dga_operad(0, 2, 2);
  const LinearCat& d = *p.cat;

  // Two-term complex with d u = v and all products zero.
  std::map<int, BasedSpace> sp{{0, make_space({"v"})}, {1, make_space({"u"})}};
  SMat d1;
  d1.rows = 1;
  d1.cols = 1;
  d1.col = {svec_unit(0)};
  CFunctor two_term = chain_functor(d, sp, {{1, d1}});
  CHECK(check_cfunctor(two_term).ok());
  AlgebraMap trivial = dga_algebra(p, two_term, {});
  CHECK(check_algebra(p.presented, trivial).ok());

  // Q[t] / (t^2) concentrated in degree zero.
  CFunctor qt = chain_functor(d, {{0, make_space({"one", "t"})}}, {});
  std::map<std::pair<int, int>, LinMap> mult;
  BasedSpace sq = tensor_space(qt.space("0"), qt.space("0"));
  mult[{0, 0}] = lin_from_cols(
      sq, qt.space("0"),
      {svec_unit(0), svec_unit(1), svec_unit(1), SVec{}});
  AlgebraMap strict = dga_algebra(p, qt, mult);
  CHECK(check_algebra(p.presented, strict).ok());

  // v v = v with d u = v and no product on degree one: the differential of
  // the (1, 0) product is zero but the slot-1 derivative is not.
  std::map<std::pair<int, int>, LinMap> square;
  square[{0, 0}] = lin_from_cols(
      tensor_space(two_term.space("0"), two_term.space("0")),
      two_term.space("0"), {svec_unit(0)});
  AlgebraMap broken = dga_algebra(p, two_term, square);
  Report rep = check_algebra(p.presented, broken);
  REQUIRE_FALSE(rep.ok());
  bool located = false;
  for (const std::string& v : rep.violations)
    if (v.find("intertwine") != std::string::npos &&
        (v.find("(1,0;1)") != std::string::npos ||
         v.find("(0,1;1)") != std::string::npos))
      located = true;
  CHECK(located);

  // A mistyped multiplication is rejected up front.
  std::map<std::pair<int, int>, LinMap> wrong;
  wrong[{0, 0}] = lin_identity(qt.space("0"));
  CHECK_THROWS_AS(dga_algebra(p, qt, wrong), std::invalid_argument);
}

TEST_CASE("chain_functor guards degrees and matrix shapes") {
  LinearCat d = build_D_truncated(0, 2);
  CHECK_THROWS_AS(chain_functor(d, {{5, make_space({"w"})}}, {}),
                  std::invalid_argument);
  SMat wrong;
  wrong.rows = 2;
  wrong.cols = 1;
  wrong.col = {svec_unit(0)};
  CHECK_THROWS_AS(
      chain_functor(d, {{0, make_space({"v"})}, {1, make_space({"u"})}},
                    {{1, wrong}}),
      std::invalid_argument);
  // Differentials whose endpoints vanish are ignored.
  SMat empty;
  CFunctor a = chain_functor(d, {{0, make_space({"v"})}}, {{2, empty}});
  CHECK(a.actions.empty());
}

TEST_CASE("monoidal tables: terminal and chain structures cohere") {
  MonoidalStructure tm = terminal_monoidal(terminal_cat());
  CHECK(tm.sum("*", "*") == "*");
  CHECK(tm.sym_vec("*", "*") == tm.id_vec("*"));
  CHECK_THROWS_AS(terminal_monoidal(warrow_cat()), std::invalid_argument);

  LinearCat d = build_D_truncated(0, 2);
  MonoidalStructure cm = chain_monoidal(d);
  CHECK(cm.sum("1", "1") == "2");
  CHECK_FALSE(cm.has_sum("1", "2"));
  CHECK(cm.sum_vec({{"d_1", Rat(1)}}, cm.id_vec("1")) ==
        std::map<std::string, Rat>{{"d_2", Rat(1)}});
  CHECK(cm.sum_vec(cm.id_vec("1"), {{"d_1", Rat(1)}}) ==
        std::map<std::string, Rat>{{"d_2", Rat(-1)}});
  CHECK(cm.sum_vec(cm.id_vec("0"), {{"d_1", Rat(1)}}) ==
        std::map<std::string, Rat>{{"d_1", Rat(1)}});
  CHECK(cm.sym_vec("1", "1") ==
        std::map<std::string, Rat>{{"id_2", Rat(-1)}});
  CHECK(cm.sym_vec("0", "1") == cm.id_vec("1"));
  CHECK(cm.sum_vec({{"d_1", Rat(1)}}, {{"d_1", Rat(1)}}).empty());

  LinearCat shifted = build_D_truncated(1, 2);
  CHECK_THROWS_AS(chain_monoidal(shifted), std::invalid_argument);
}

TEST_CASE("block_symmetry composes like the underlying permutations") {
  LinearCat d = build_D_truncated(0, 2);
  MonoidalStructure cm = chain_monoidal(d);

  CHECK(block_symmetry(cm, {"1", "1"}, transposition(2, 1, 2)) ==
        std::map<std::string, Rat>{{"id_2", Rat(-1)}});
  CHECK(block_symmetry(cm, {"0", "1"}, transposition(2, 1, 2)) ==
        cm.id_vec("1"));

  std::vector<Obj> blocks{"0", "1", "1"};
  for (const Perm& sg : all_perms(3))
    for (const Perm& tau : all_perms(3)) {
      std::vector<Obj> permuted;
      for (int k = 1; k <= 3; ++k)
        permuted.push_back(blocks[static_cast<size_t>(sg(k) - 1)]);
      auto lhs = d.compose_vec(block_symmetry(cm, blocks, sg),
                               block_symmetry(cm, permuted, tau));
      CHECK(lhs == block_symmetry(cm, blocks, perm_compose(sg, tau)));
    }
}

TEST_CASE("pC_transform over the terminal category returns the operad "
          "itself") {
  MonoidalStructure tm = terminal_monoidal(terminal_cat());
  FunctorOperad p = as_functor_operad(tm, "*", 3);
  COperad q = pC_transform(p, 3);
  UnitalCOperad as = build_as_operad(terminal_cat(), 3);
  for (int n = 1; n <= 3; ++n)
    CHECK(q.dim(allstar(n)) == factorial(n));
  CHECK(check_operad(q).ok());
  CHECK(q.get_comp(allstar(2), 1, allstar(2)).m ==
        as.base.get_comp(allstar(2), 1, allstar(2)).m);
  CHECK(q.get_comp(allstar(2), 2, allstar(2)).m ==
        as.base.get_comp(allstar(2), 2, allstar(2)).m);
  CHECK(q.carrier.get_sigma(allstar(2), transposition(2, 1, 2)).m ==
        as.base.carrier.get_sigma(allstar(2), transposition(2, 1, 2)).m);

  FunctorOperad none;
  none.mon = &tm;
  none.max_arity = 2;
  CHECK(pC_transform(none, 2).carrier.ns.spaces.empty());
}

TEST_CASE("pC_transform computes hom coends over the chain window") {
  LinearCat d = build_D_truncated(0, 1);
  MonoidalStructure cm = chain_monoidal(d);
  FunctorOperad p;
  p.mon = &cm;
  p.max_arity = 1;
  CFunctor p1;
  p1.cat = &d;
  p1.set_space("0", make_space({"p0"}));
  p1.set_space("1", make_space({"p1"}));
  p1.set_action("d_1", lin_from_cols(p1.space("1"), p1.space("0"),
                                     {svec_unit(0)}));
  p.components[1] = p1;
  COperad q = pC_transform(p, 1);

  // At (0; 0) the summands id (x) p0 and d (x) p1 are identified; the
  // classes at (1; 1) and (1; 0) are killed because their identifications
  // pass through the missing degree two.
  CHECK(q.dim(sch({"0"}, "0")) == 1);
  CHECK(q.dim(sch({"0"}, "1")) == 1);
  CHECK(q.dim(sch({"1"}, "1")) == 0);
  CHECK(q.dim(sch({"1"}, "0")) == 0);
  CHECK(check_operad(q).ok());

  // The output action by the differential survives the quotient.
  LinMap o = q.carrier.ns.out_act.at({sch({"0"}, "1"), "d_1"});
  CHECK(o.m.col[0].terms.size() == 1);
}

TEST_CASE("pC_transform of the word operad over chains identifies the two "
          "derivative directions") {
  LinearCat d = build_D_truncated(0, 2);
  MonoidalStructure cm = chain_monoidal(d);
  FunctorOperad p = as_functor_operad(cm, "0", 3);
  p.mon = &cm;
  for (auto& [n, pn] : p.components) pn.cat = &d;
  COperad q = pC_transform(p, 3);
  CHECK(check_operad(q).ok());

  // Product components match the symmetrized presented operad...
  DgaOperad dga = build_dga_operad(0, 2, 2);
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n) {
      if (m + n > 2) continue;
      ColorScheme top = sch({std::to_string(m), std::to_string(n)},
                            std::to_string(m + n));
      CHECK(q.dim(top) == 2);
      CHECK(dga.quotient.dim(top) == 2);
    }

  // ... but the transform has one derivative class where the presented
  // operad keeps two: both slot differentials land on the same classes,
  // with the sign of the slot-2 route.
  CHECK(q.dim(sch({"1", "1"}, "1")) == 2);
  CHECK(dga.quotient.dim(sch({"1", "1"}, "1")) == 4);
  LinMap im1 = q.carrier.ns.in_act.at({sch({"0", "1"}, "1"), 1, "d_1"});
  LinMap im2 = q.carrier.ns.in_act.at({sch({"1", "0"}, "1"), 2, "d_1"});
  for (int j = 0; j < 2; ++j) {
    CHECK(im1.m.col[static_cast<size_t>(j)] == svec_unit(j));
    CHECK(im2.m.col[static_cast<size_t>(j)] == svec_unit(j, Rat(-1)));
  }

  // Ternary components carry all six orderings when every degree is zero.
  CHECK(q.dim(sch({"0", "0", "0"}, "0")) == 6);
}
