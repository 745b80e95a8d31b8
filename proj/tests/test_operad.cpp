#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oforge/operad.hpp"
#include "oforge/tensor.hpp"
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

} // namespace

TEST_CASE("word model self-check") {
  CHECK(validate_word_model(4).ok());
}

TEST_CASE("the zero operad is valid") {
  COperad p;
  p.carrier.ns.cat = &terminal_cat();
  p.max_arity = 3;
  CHECK(check_operad(p).ok());
}

TEST_CASE("associative operad passes all axiom checks") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 4);
  CHECK(as.base.dim(sch({"*", "*", "*"}, "*")) == 6);
  CHECK(check_operad(as.base).ok());
  CHECK(check_unital(as).ok());
  CHECK(cowedge_from_unital(as).ok());
}

TEST_CASE("associative operad with constants exercises arity zero") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 3, true);
  CHECK(as.base.dim(sch({}, "*")) == 1);
  CHECK(check_operad(as.base).ok());
  CHECK(check_unital(as).ok());
}

TEST_CASE("a perturbed composition matrix is reported") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 4);
  ColorScheme two = sch({"*", "*"}, "*");
  CompKey key{two, 1, two};
  REQUIRE(as.base.comp.count(key) == 1);
  LinMap& m = as.base.comp.at(key);
  m.m.col[0] = svec_scale(Rat(2), m.m.col[0]);
  Report r = check_operad(as.base);
  CHECK(!r.ok());
  bool assoc_hit = false;
  for (const auto& v : r.violations)
    if (v.find("associativity") != std::string::npos) assoc_hit = true;
  CHECK(assoc_hit);
}

TEST_CASE("a scaled unit breaks both unit axioms") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 3);
  for (auto& [f, u] : as.units) u = svec_scale(Rat(2), u);
  Report r = check_unital(as);
  bool left = false, right = false;
  for (const auto& v : r.violations) {
    if (v.find("left unit") != std::string::npos) left = true;
    if (v.find("right unit") != std::string::npos) right = true;
  }
  CHECK(left);
  CHECK(right);
}

TEST_CASE("hom operads of small categories are valid unital operads") {
  for (const FinCat& c :
       {terminal_category(), walking_arrow(), discrete_category({"p", "q"}),
        sigma_category(3), sigma_category(2, true)}) {
    LinearCat lc = linearize(c);
    UnitalCOperad h = hom_operad(lc);
    CHECK(check_operad(h.base).ok());
    CHECK(check_unital(h.base.carrier.ns.cat == &lc ? h : h).ok());
    CHECK(cowedge_from_unital(h).ok());
  }
  LinearCat d = build_D_truncated(0, 3);
  UnitalCOperad h = hom_operad(d);
  CHECK(check_operad(h.base).ok());
  CHECK(check_unital(h).ok());
}

TEST_CASE("a composition family with a broken cowedge square is reported") {
  LinearCat cat = linearize(walking_arrow());
  UnitalCOperad p;
  p.base.max_arity = 1;
  NsCollection& ns = p.base.carrier.ns;
  ns.cat = &cat;
  ColorScheme saa = sch({"a"}, "a"), sbb = sch({"b"}, "b"),
              sab = sch({"a"}, "b");
  ns.set_space(saa, make_space({"r"}));
  ns.set_space(sbb, make_space({"q"}));
  ns.set_space(sab, make_space({"p"}));
  ns.set_in_act(sbb, 1, "f", LinMap{ns.space(sbb), ns.space(sab),
                                    smat_identity(1)});
  ns.set_out_act(saa, "f", LinMap{ns.space(saa), ns.space(sab),
                                  smat_identity(1)});
  auto one = [&](const ColorScheme& s, const ColorScheme& r, const Rat& c) {
    return LinMap{tensor_space(ns.space(s), ns.space(r)),
                  ns.space(scheme_merge(s, 1, r)),
                  smat_from_dense({{c}})};
  };
  // The two routes around the square differ by a factor of 2.
  p.base.set_comp(sab, 1, saa, one(sab, saa, Rat(1)));
  p.base.set_comp(sbb, 1, sab, one(sbb, sab, Rat(2)));
  p.base.set_comp(saa, 1, saa, one(saa, saa, Rat(1)));
  p.base.set_comp(sbb, 1, sbb, one(sbb, sbb, Rat(1)));
  p.base.set_comp(sab, 1, sbb, one(sab, sbb, Rat(1)));
  p.base.set_comp(saa, 1, sab, one(saa, sab, Rat(1)));
  Report r = cowedge_from_unital(p);
  CHECK(!r.ok());
  REQUIRE(!r.violations.empty());
  CHECK(r.violations[0].find("cowedge") != std::string::npos);
}

TEST_CASE("partial-f presentation: round trips and axiom check") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 3);
  PartialFPresentation q = to_partial_f(as.base);
  // Over the one-object category the only twist is the identity, so the
  // twisted family coincides with the plain compositions.
  CHECK(q.comp_f.size() == as.base.comp.size());
  CHECK(check_partial_f(q).ok());
  CHECK(from_partial_f(q) == as.base);

  LinearCat arrow = linearize(walking_arrow());
  UnitalCOperad h = hom_operad(arrow);
  PartialFPresentation qh = to_partial_f(h.base);
  CHECK(check_partial_f(qh).ok());
  CHECK(from_partial_f(qh) == h.base);
  CHECK(to_partial_f(from_partial_f(qh)) == qh);

  // The twisted composition along f agrees with composing after pushing
  // the inner factor forward along f, here id_b o^f id_a = f.
  ColorScheme sbb = sch({"b"}, "b"), saa = sch({"a"}, "a");
  LinMap tw = qh.get_comp_f(sbb, 1, "f", saa);
  SVec img = lin_apply(tw, svec_unit(0));
  auto ids = arrow.hom_ids("a", "b");
  REQUIRE(ids.size() == 1);
  CHECK(svec_equal(img, svec_unit(0)));
}

TEST_CASE("partial-f equivariance catches a planted violation") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 3);
  PartialFPresentation q = to_partial_f(as.base);
  ColorScheme two = sch({"*", "*"}, "*");
  PartialFKey key{two, 2, terminal_cat().identity.at("*"), two};
  REQUIRE(q.comp_f.count(key) == 1);
  q.comp_f.at(key).m.col[1] = svec_scale(Rat(3), q.comp_f.at(key).m.col[1]);
  CHECK(!check_partial_f(q).ok());
}

TEST_CASE("substitude round trips are the identity on data") {
  // Arity bound 4 so the profile (2; 2, 2) with final arity 4 is present.
  UnitalCOperad as = build_as_operad(terminal_cat(), 4);
  Substitude s = to_substitude(as);
  CHECK(from_substitude(s) == as);
  CHECK(to_substitude(from_substitude(s)) == s);

  // Substitution at the identity profile reproduces iterated composition:
  // mu(w; v1, v2) on the top binary word agrees with (w o_2 v2) o_1 v1.
  ColorScheme two = sch({"*", "*"}, "*");
  MuKey key{two, {two, two}};
  REQUIRE(s.mu.count(key) == 1);
  const LinMap& mu = s.mu.at(key);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        SVec arg = svec_tensor(svec_tensor(svec_unit(a), svec_unit(b), 2),
                               svec_unit(c), 2);
        SVec via_mu = lin_apply(mu, arg);
        SVec w2 = as.base.compose(two, svec_unit(a), 2, two, svec_unit(c));
        SVec direct = as.base.compose(sch({"*", "*", "*"}, "*"), w2, 1, two,
                                      svec_unit(b));
        CHECK(svec_equal(via_mu, direct));
      }

  LinearCat arrow = linearize(walking_arrow());
  UnitalCOperad h = hom_operad(arrow);
  Substitude sh = to_substitude(h);
  CHECK(from_substitude(sh) == h);
  CHECK(to_substitude(from_substitude(sh)) == sh);
}

TEST_CASE("ideal closure: trivial cases on the associative operad") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 4);
  ColorScheme two = sch({"*", "*"}, "*");

  // Empty generators give back the original operad.
  OperadicIdeal empty = ideal_closure(as.base, {}, 4);
  CHECK(empty.span.empty());
  COperad same = quotient_operad(as.base, empty);
  CHECK(same.carrier.ns.spaces == as.base.carrier.ns.spaces);
  CHECK(check_operad(same).ok());

  // The whole binary component kills everything of arity >= 2.
  OperadicIdeal full = ideal_closure(
      as.base, {{two, svec_unit(0)}, {two, svec_unit(1)}}, 4);
  COperad q = quotient_operad(as.base, full);
  CHECK(q.dim(two) == 0);
  CHECK(q.dim(sch({"*", "*", "*"}, "*")) == 0);
  CHECK(q.dim(sch({"*", "*", "*", "*"}, "*")) == 0);
  CHECK(q.dim(sch({"*"}, "*")) == 1);
  CHECK(check_operad(q).ok());
}

TEST_CASE("ideal closure is permutation and composition stable") {
  UnitalCOperad as = build_as_operad(terminal_cat(), 4);
  ColorScheme two = sch({"*", "*"}, "*");
  ColorScheme three = sch({"*", "*", "*"}, "*");
  // One generator: the difference of the two binary words.
  SVec gen = svec_sub(svec_unit(0), svec_unit(1));
  OperadicIdeal ideal = ideal_closure(as.base, {{two, gen}}, 4);
  // Closure under the transposition action is automatic.
  const SymCollection& car = as.base.carrier;
  SVec swapped = lin_apply(car.get_sigma(two, perm_from_one_line({2, 1})), gen);
  SpanBuilder sb(2);
  for (const SVec& v : ideal.span.at(two)) sb.add(v);
  CHECK(!sb.add(swapped));
  // In arity 3 the commutator ideal of As has dimension 4 (the quotient is
  // the 2-dimensional space of products in fixed bracketing order up to
  // commutativity; for As mod commutativity every word class is determined
  // by nothing, so the quotient is 1-dimensional... verified numerically
  // below against the quotient construction instead of a closed form).
  COperad q = quotient_operad(as.base, ideal);
  CHECK(check_operad(q).ok());
  CHECK(q.dim(two) == 1);
  // Commutative quotient of As: one basis class per arity.
  CHECK(q.dim(three) == 1);
  CHECK(q.dim(sch({"*", "*", "*", "*"}, "*")) == 1);
}

TEST_CASE("weight grading bookkeeping") {
  // Hand-graded toy: the associative operad truncated at 3 with weights
  // n - 1 per arity (number of binary vertices needed); compositions add
  // these weights since (n) + (m) compose to arity n + m - 1.
  UnitalCOperad as = build_as_operad(terminal_cat(), 3);
  WeightGrading g;
  g.weight_bound = 2;
  for (int n = 1; n <= 3; ++n) {
    ColorScheme s(std::vector<Obj>(static_cast<size_t>(n), "*"), "*");
    g.ranges[{s, n - 1}] = {0, as.base.dim(s)};
  }
  CHECK(check_weight_grading(as.base, g).ok());
  // Breaking a range is reported.
  WeightGrading bad = g;
  bad.ranges[{sch({"*", "*"}, "*"), 5}] = {0, 1};
  CHECK(!check_weight_grading(as.base, bad).ok());
}

TEST_CASE("quadratic binary recognition") {
  OperadPresentation pres;
  pres.generators.ns.cat = &terminal_cat();
  pres.generators.ns.set_space(sch({"*", "*"}, "*"), numbered_space(1, "mu"));
  ColorScheme three = sch({"*", "*", "*"}, "*");
  pres.grading.ranges[{three, 2}] = {0, 3};
  pres.grading.ranges[{three, 3}] = {3, 2};
  pres.relations.push_back({three, svec_sub(svec_unit(0), svec_unit(1))});
  CHECK(is_quadratic_binary(pres));

  // A relation mixing weights is not quadratic.
  OperadPresentation mixed = pres;
  mixed.relations.push_back({three, svec_sub(svec_unit(0), svec_unit(3))});
  CHECK(!is_quadratic_binary(mixed));

  // A ternary generator is not binary.
  OperadPresentation ternary = pres;
  ternary.generators.ns.set_space(three, numbered_space(1, "t"));
  CHECK(!is_quadratic_binary(ternary));

  // No relations at all still counts as quadratic binary.
  OperadPresentation free_binary;
  free_binary.generators.ns.cat = &terminal_cat();
  free_binary.generators.ns.set_space(sch({"*", "*"}, "*"),
                                      numbered_space(2));
  CHECK(is_quadratic_binary(free_binary));
}
