#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oforge/freeop.hpp"
#include "oforge/words.hpp"

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

const LinearCat& disc_cat() {
  static LinearCat cat = linearize(discrete_category({"a", "b"}));
  return cat;
}

/// One binary generator over the terminal category.
NsCollection one_binary() {
  NsCollection x;
  x.cat = &terminal_cat();
  x.set_space(sch({"*", "*"}, "*"), make_space({"mu"}));
  return x;
}

/// One generator in every binary scheme, every morphism acting by the
/// identity matrix on the one-dimensional components.
NsCollection all_binary_generators(const LinearCat& cat) {
  NsCollection x;
  x.cat = &cat;
  for (const Obj& c1 : cat.objects)
    for (const Obj& c2 : cat.objects)
      for (const Obj& d : cat.objects) {
        ColorScheme s = sch({c1, c2}, d);
        x.set_space(s, make_space({"g" + scheme_to_string(s)}));
      }
  for (const auto& [s, sp] : std::map<ColorScheme, BasedSpace>(x.spaces)) {
    for (const std::string& fid : cat.nonidentity_basis()) {
      const auto& hb = cat.info(fid);
      for (int i = 1; i <= s.arity(); ++i)
        if (s.inputs[i - 1] == hb.tgt) {
          ColorScheme t = scheme_replace_input(s, i, hb.src);
          x.set_in_act(s, i, fid,
                       LinMap{x.space(s), x.space(t), smat_identity(1)});
        }
      if (s.output == hb.src) {
        ColorScheme t = scheme_replace_output(s, hb.tgt);
        x.set_out_act(s, fid,
                      LinMap{x.space(s), x.space(t), smat_identity(1)});
      }
    }
  }
  return x;
}

int find_label(const BasedSpace& sp, const std::string& label) {
  for (int k = 0; k < sp.dim(); ++k)
    if (sp.basis[k] == label) return k;
  return -1;
}

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

} // namespace

TEST_CASE("strand counts and tree validation") {
  LeveledTree good{4, {{1, 2}, {2, 2}, {1, 2}}};
  CHECK(strand_counts(good) == std::vector<int>{4, 3, 2, 1});
  CHECK(validate_tree(good).ok());
  CHECK(good.height() == 3);
  CHECK(tree_to_string(good) == "4[(1,2)(2,2)(1,2)]");

  LeveledTree nullary{1, {{2, 0}, {1, 2}}};
  CHECK(strand_counts(nullary) == std::vector<int>{1, 2, 1});
  CHECK(validate_tree(nullary).ok());

  CHECK(!validate_tree(LeveledTree{2, {}}).ok());
  CHECK(!validate_tree(LeveledTree{2, {{1, 1}}}).ok());
  CHECK(!validate_tree(LeveledTree{3, {{1, 2}}}).ok());
  CHECK(!validate_tree(LeveledTree{2, {{2, 2}}}).ok());
  CHECK_THROWS_AS(strand_counts(LeveledTree{2, {{1, 1}}}),
                  std::invalid_argument);
}

TEST_CASE("binary tree enumeration counts levels factorially") {
  CHECK(enumerate_trees(2, 1, {2}).size() == 1);
  CHECK(enumerate_trees(3, 2, {2}).size() == 2);
  auto t4 = enumerate_trees(4, 3, {2});
  CHECK(t4.size() == 6);
  for (size_t k = 0; k < t4.size(); ++k) {
    CHECK(validate_tree(t4[k]).ok());
    if (k > 0) CHECK(t4[k - 1] < t4[k]);
  }
  // A tighter vertex bound leaves the list empty.
  CHECK(enumerate_trees(4, 2, {2}).empty());
}

TEST_CASE("nullary levels insert strands") {
  auto ts = enumerate_trees(1, 3, {0, 2});
  REQUIRE(ts.size() == 2);
  CHECK(ts[0] == LeveledTree{1, {{1, 0}, {1, 2}}});
  CHECK(ts[1] == LeveledTree{1, {{2, 0}, {1, 2}}});
  // The root level never interchanges, so the two insertion slots stay
  // distinct classes.
  CHECK(normal_form(ts[0]) != normal_form(ts[1]));

  auto t0 = enumerate_trees(0, 3, {0, 2});
  REQUIRE(t0.size() == 3);
  CHECK(t0[0] == LeveledTree{0, {{1, 0}}});
  std::set<LeveledTree> classes;
  for (const auto& t : t0) classes.insert(normal_form(t));
  CHECK(classes.size() == 2);
}

TEST_CASE("interchange is an involution preserving validity and height") {
  for (int n : {3, 4}) {
    for (const auto& t : enumerate_trees(n, 4, {0, 2})) {
      for (int j = 1; j + 1 <= t.height(); ++j) {
        if (!interchange_applicable(t, j)) {
          CHECK_THROWS_AS(interchange(t, j), std::invalid_argument);
          continue;
        }
        LeveledTree s = interchange(t, j);
        CHECK(validate_tree(s).ok());
        CHECK(s.height() == t.height());
        CHECK(s != t);
        CHECK(interchange(s, j) == t);
      }
    }
  }
}

TEST_CASE("normal form is idempotent and constant on orbits") {
  for (const auto& t : enumerate_trees(4, 3, {2})) {
    LeveledTree nf = normal_form(t);
    CHECK(normal_form(nf) == nf);
    std::set<LeveledTree> orbit = interchange_orbit(t);
    CHECK(orbit.count(t) == 1);
    CHECK(orbit.count(nf) == 1);
    for (const auto& s : orbit) CHECK(normal_form(s) == nf);
  }
  LeveledTree comb{5, {{1, 2}, {1, 2}, {1, 2}, {1, 2}}};
  CHECK(interchange_orbit(comb).size() == 1);
  CHECK(normal_form(comb) == comb);
}

TEST_CASE("interchange classes of binary trees count Catalan numbers") {
  const int expect[] = {0, 0, 1, 2, 5, 14, 42};
  for (int n = 2; n <= 6; ++n) {
    auto ts = enumerate_trees(n, n - 1, {2});
    CHECK(static_cast<int>(ts.size()) == factorial(n - 1));
    std::set<LeveledTree> classes;
    for (const auto& t : ts) classes.insert(normal_form(t));
    CHECK(static_cast<int>(classes.size()) == expect[n]);
  }
}

TEST_CASE("grafting stacks levels above the chosen leaf") {
  LeveledTree s{2, {{1, 2}}};
  CHECK(graft(s, 1, s) == LeveledTree{3, {{1, 2}, {1, 2}}});
  CHECK(graft(s, 2, s) == LeveledTree{3, {{2, 2}, {1, 2}}});
  CHECK_THROWS_AS(graft(s, 3, s), std::invalid_argument);

  // Grafting into disjoint slots in either order gives interchange-
  // equivalent trees that differ on the nose.
  LeveledTree t1 = graft(graft(s, 1, s), 3, s);
  LeveledTree t2 = graft(graft(s, 2, s), 1, s);
  CHECK(t1.leaves == 4);
  CHECK(t1.height() == 3);
  CHECK(validate_tree(t1).ok());
  CHECK(validate_tree(t2).ok());
  CHECK(t1 != t2);
  CHECK(normal_form(t1) == normal_form(t2));
}

TEST_CASE("free operad on one binary generator has Catalan dimensions") {
  NsCollection x = one_binary();
  FreeNsOperad f = free_ns(x, 4, 3);
  ColorScheme two = sch({"*", "*"}, "*");
  ColorScheme three = sch({"*", "*", "*"}, "*");
  ColorScheme four = sch({"*", "*", "*", "*"}, "*");

  CHECK(f.op.dim(two) == 1);
  CHECK(f.op.dim(three) == 2);
  CHECK(f.op.dim(four) == 5);
  CHECK(f.op.dim(sch({"*"}, "*")) == 0);
  CHECK(f.op.dim(sch({}, "*")) == 0);
  CHECK(f.trees.at(4).size() == 6);
  CHECK(f.components.at(four).ambient.dim() == 6);
  CHECK(f.components.at(four).relations.size() == 1);

  CHECK(f.grading.ranges.at({two, 1}) == std::pair<int, int>{0, 1});
  CHECK(f.grading.ranges.at({three, 2}) == std::pair<int, int>{0, 2});
  CHECK(f.grading.ranges.at({four, 3}) == std::pair<int, int>{0, 5});

  CHECK(check_ns_operad(f.op).ok());

  SVec g = generator_class(f, two, 0);
  CHECK(g == svec_unit(0));
  SVec left = f.op.compose(two, g, 1, two, g);
  SVec right = f.op.compose(two, g, 2, two, g);
  CHECK(!left.is_zero());
  CHECK(!right.is_zero());
  CHECK(left != right);

  // All five arity-four classes arise as compositions of lower classes.
  SpanBuilder sb(5);
  for (const SVec& a : {left, right})
    for (int i = 1; i <= 3; ++i) sb.add(f.op.compose(three, a, i, two, g));
  CHECK(sb.rank() == 5);
}

TEST_CASE("weight truncation sends overflow compositions to zero") {
  NsCollection x = one_binary();
  FreeNsOperad f = free_ns(x, 5, 3);
  ColorScheme two = sch({"*", "*"}, "*");
  ColorScheme three = sch({"*", "*", "*"}, "*");
  ColorScheme four = sch({"*", "*", "*", "*"}, "*");
  ColorScheme five = sch({"*", "*", "*", "*", "*"}, "*");

  CHECK(f.op.dim(four) == 5);
  CHECK(f.op.dim(five) == 0);
  CHECK(check_ns_operad(f.op).ok());

  SVec g = generator_class(f, two, 0);
  SVec w3 = f.op.compose(three, f.op.compose(two, g, 1, two, g), 1, two, g);
  CHECK(!w3.is_zero());
  CHECK(f.op.compose(four, w3, 1, two, g).is_zero());
}

TEST_CASE("edge morphisms identify internal colors across the arrow") {
  NsCollection x = all_binary_generators(warrow_cat());
  FreeNsOperad f = free_ns(x, 3, 2);
  for (const Obj& c1 : std::vector<Obj>{"a", "b"})
    for (const Obj& c2 : std::vector<Obj>{"a", "b"})
      for (const Obj& c3 : std::vector<Obj>{"a", "b"})
        for (const Obj& d : std::vector<Obj>{"a", "b"}) {
          CHECK(f.op.dim(sch({c1, c2, c3}, d)) == 2);
        }
  CHECK(check_ns_operad(f.op).ok());

  // Routing the internal edge through either end of the arrow gives the
  // same class.
  auto gen = [&](const ColorScheme& s) { return generator_class(f, s, 0); };
  ColorScheme root_a = sch({"a", "a"}, "b");
  ColorScheme inner_a = sch({"a", "a"}, "a");
  ColorScheme root_b = sch({"b", "a"}, "b");
  ColorScheme inner_b = sch({"a", "a"}, "b");
  SVec via_a = f.op.compose(root_a, gen(root_a), 1, inner_a, gen(inner_a));
  SVec via_b = f.op.compose(root_b, gen(root_b), 1, inner_b, gen(inner_b));
  CHECK(!via_a.is_zero());
  CHECK(via_a == via_b);

  // Over the discrete category the same two composites stay independent.
  NsCollection y = all_binary_generators(disc_cat());
  FreeNsOperad fd = free_ns(y, 3, 2);
  CHECK(fd.op.dim(sch({"a", "a", "a"}, "b")) == 4);
  CHECK(check_ns_operad(fd.op).ok());
  auto gend = [&](const ColorScheme& s) { return generator_class(fd, s, 0); };
  SVec da = fd.op.compose(root_a, gend(root_a), 1, inner_a, gend(inner_a));
  SVec db = fd.op.compose(root_b, gend(root_b), 1, inner_b, gend(inner_b));
  CHECK(!da.is_zero());
  CHECK(!db.is_zero());
  CHECK(da != db);
}

TEST_CASE("nullary generators populate low arities") {
  NsCollection x = one_binary();
  x.set_space(sch({}, "*"), make_space({"c"}));
  FreeNsOperad f = free_ns(x, 3, 3);
  // Constant and squared constant.
  CHECK(f.op.dim(sch({}, "*")) == 2);
  // The constant plugged into either slot of the product.
  CHECK(f.op.dim(sch({"*"}, "*")) == 2);
  CHECK(check_ns_operad(f.op).ok());

  SVec c = generator_class(f, sch({}, "*"), 0);
  SVec g = generator_class(f, sch({"*", "*"}, "*"), 0);
  SVec lplug = f.op.compose(sch({"*", "*"}, "*"), g, 1, sch({}, "*"), c);
  SVec rplug = f.op.compose(sch({"*", "*"}, "*"), g, 2, sch({}, "*"), c);
  CHECK(!lplug.is_zero());
  CHECK(!rplug.is_zero());
  CHECK(lplug != rplug);
  // Filling the remaining slot either way reaches the same class of the
  // doubly plugged product.
  ColorScheme one = sch({"*"}, "*");
  CHECK(f.op.compose(one, lplug, 1, sch({}, "*"), c) ==
        f.op.compose(one, rplug, 1, sch({}, "*"), c));
}

TEST_CASE("arity-one generators are rejected") {
  NsCollection x = one_binary();
  x.set_space(sch({"*"}, "*"), make_space({"h"}));
  CHECK_THROWS_AS(free_ns(x, 3, 3), std::invalid_argument);
}

TEST_CASE("the free operad on the empty collection is zero") {
  NsCollection x;
  x.cat = &terminal_cat();
  FreeNsOperad f = free_ns(x, 3, 3);
  CHECK(f.op.carrier.spaces.empty());
  CHECK(f.op.comp.empty());
  CHECK(check_ns_operad(f.op).ok());
}

TEST_CASE("symmetrization multiplies dimensions by the symmetric group") {
  NsCollection x = one_binary();
  FreeNsOperad f = free_ns(x, 4, 3);
  SymmetrizedOperad sf = symmetrize(f);
  ColorScheme two = sch({"*", "*"}, "*");
  ColorScheme three = sch({"*", "*", "*"}, "*");
  ColorScheme four = sch({"*", "*", "*", "*"}, "*");
  CHECK(sf.op.dim(two) == 2);
  CHECK(sf.op.dim(three) == 12);
  CHECK(sf.op.dim(four) == 120);
  CHECK(check_operad(sf.op).ok());
  CHECK(check_weight_grading(sf.op, sf.grading).ok());
  CHECK(sf.grading.ranges.at({three, 2}) == std::pair<int, int>{0, 12});

  // The trivial-grading overload agrees on dimensions.
  COperad plain = symmetrize(f.op);
  CHECK(plain.dim(three) == 12);

  NsOperad zero;
  zero.carrier.cat = &terminal_cat();
  zero.max_arity = 3;
  CHECK(check_operad(symmetrize(zero)).ok());
}

TEST_CASE("adjoining units extends arity one by the hom spaces") {
  COperad z;
  z.carrier.ns.cat = &terminal_cat();
  z.max_arity = 3;
  UnitalCOperad u = adjoin_unit(z);
  ColorScheme one = sch({"*"}, "*");
  CHECK(u.base.dim(one) == 1);
  CHECK(u.units.count("id_*") == 1);
  CHECK(check_operad(u.base).ok());
  CHECK(check_unital(u).ok());

  // Not idempotent: a second unit adjunction grows arity one again.
  UnitalCOperad uu = adjoin_unit(u.base);
  CHECK(uu.base.dim(one) == 2);
  CHECK(check_unital(uu).ok());
}

TEST_CASE("adjoined units compose like the category") {
  COperad z;
  z.carrier.ns.cat = &warrow_cat();
  z.max_arity = 2;
  UnitalCOperad w = adjoin_unit(z);
  CHECK(w.base.dim(sch({"a"}, "a")) == 1);
  CHECK(w.base.dim(sch({"b"}, "b")) == 1);
  CHECK(w.base.dim(sch({"a"}, "b")) == 1);
  CHECK(w.base.dim(sch({"b"}, "a")) == 0);
  CHECK(check_operad(w.base).ok());
  CHECK(check_unital(w).ok());

  const SVec& uf = w.units.at("f");
  SVec lhs = w.base.compose(sch({"a"}, "b"), uf, 1, sch({"a"}, "a"),
                            w.units.at("id_a"));
  SVec rhs = w.base.compose(sch({"b"}, "b"), w.units.at("id_b"), 1,
                            sch({"a"}, "b"), uf);
  CHECK(lhs == uf);
  CHECK(rhs == uf);
}

TEST_CASE("units adjoined to a symmetrized free operad satisfy the axioms") {
  NsCollection x = one_binary();
  FreeNsOperad f = free_ns(x, 3, 2);
  UnitalCOperad u = adjoin_unit(symmetrize(f).op);
  CHECK(u.base.dim(sch({"*"}, "*")) == 1);
  CHECK(check_operad(u.base).ok());
  CHECK(check_unital(u).ok());
  CHECK(cowedge_from_unital(u).ok());
}

TEST_CASE("the universal map with identity images is the identity") {
  NsCollection x = one_binary();
  FreeNsOperad f = free_ns(x, 4, 3);
  ColorScheme two = sch({"*", "*"}, "*");
  std::map<ColorScheme, LinMap> images;
  images[two] = LinMap{x.space(two), f.op.carrier.space(two),
                       smat_from_cols(1, {generator_class(f, two, 0)})};
  auto phi = universal_map(f, f.op, images);
  for (const auto& [s, sp] : f.op.carrier.spaces) {
    REQUIRE(phi.count(s) == 1);
    CHECK(lin_equal(phi.at(s), lin_identity(sp)));
  }
  CHECK(check_free_morphism(f, f.op, images, phi).ok());
}

TEST_CASE("the universal map to the word operad folds both associations") {
  NsCollection x = one_binary();
  FreeNsOperad f = free_ns(x, 4, 3);
  ColorScheme two = sch({"*", "*"}, "*");
  ColorScheme three = sch({"*", "*", "*"}, "*");
  NsOperad target = ns_view(build_as_operad(terminal_cat(), 4).base);

  const BasedSpace& as2 = target.carrier.space(two);
  int idx12 = find_label(as2, "w1.2");
  REQUIRE(idx12 >= 0);
  std::map<ColorScheme, LinMap> images;
  images[two] =
      LinMap{x.space(two), as2, smat_from_cols(as2.dim(), {svec_unit(idx12)})};
  auto phi = universal_map(f, target, images);
  CHECK(check_free_morphism(f, target, images, phi).ok());

  SVec g = generator_class(f, two, 0);
  CHECK(lin_apply(phi.at(two), g) == svec_unit(idx12));

  int idx123 = find_label(target.carrier.space(three), "w1.2.3");
  REQUIRE(idx123 >= 0);
  SVec lc = f.op.compose(two, g, 1, two, g);
  SVec rc = f.op.compose(two, g, 2, two, g);
  CHECK(lin_apply(phi.at(three), lc) == svec_unit(idx123));
  CHECK(lin_apply(phi.at(three), rc) == svec_unit(idx123));
  // The kernel at arity three is exactly the associator line.
  CHECK(kernel(phi.at(three)).m.cols == 1);

  // Missing and mistyped images are rejected.
  CHECK_THROWS_AS(universal_map(f, target, {}), std::invalid_argument);
  std::map<ColorScheme, LinMap> bad;
  bad[two] = LinMap{x.space(two), as2, smat_zero(3, 1)};
  CHECK_THROWS_AS(universal_map(f, target, bad), std::invalid_argument);

  // Zero images induce the zero morphism.
  std::map<ColorScheme, LinMap> zimages;
  zimages[two] = lin_zero(x.space(two), as2);
  auto zphi = universal_map(f, target, zimages);
  CHECK(smat_is_zero(zphi.at(three).m));
  CHECK(check_free_morphism(f, target, zimages, zphi).ok());
}

TEST_CASE("the associator ideal cuts the free operad down to words") {
  NsCollection x = one_binary();
  FreeNsOperad f = free_ns(x, 4, 3);
  SymmetrizedOperad sf = symmetrize(f);
  ColorScheme two = sch({"*", "*"}, "*");
  ColorScheme three = sch({"*", "*", "*"}, "*");
  ColorScheme four = sch({"*", "*", "*", "*"}, "*");

  SVec g = svec_unit(0);
  SVec assoc = svec_sub(sf.op.compose(two, g, 1, two, g),
                        sf.op.compose(two, g, 2, two, g));
  OperadicIdeal ideal = ideal_closure(sf.op, {{three, assoc}}, 4);
  COperad q = quotient_operad(sf.op, ideal);
  CHECK(q.dim(two) == 2);
  CHECK(q.dim(three) == 6);
  CHECK(q.dim(four) == 24);
  CHECK(check_operad(q).ok());

  OperadPresentation pres;
  pres.generators.ns.cat = &terminal_cat();
  pres.generators.ns.set_space(two, make_space({"m12", "m21"}));
  pres.relations.push_back({three, assoc});
  pres.grading = sf.grading;
  CHECK(is_quadratic_binary(pres));
}
