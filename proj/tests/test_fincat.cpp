#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oforge/fincat.hpp"

using namespace oforge;

TEST_CASE("builtin categories validate") {
  CHECK(validate_category(terminal_category()).ok());
  CHECK(validate_category(walking_arrow()).ok());
  CHECK(validate_category(discrete_category({"x", "y", "z"})).ok());
  CHECK(validate_category(sigma_category(3)).ok());
  CHECK(validate_category(sigma_category(3, true)).ok());
  CHECK(validate_category(opposite_category(walking_arrow())).ok());
}

TEST_CASE("validate_category reports planted violations") {
  FinCat c = walking_arrow();
  c.compose_table[{"f", "id_a"}] = "id_a";
  Report r = validate_category(c);
  CHECK(!r.ok());

  FinCat d = walking_arrow();
  d.compose_table.erase({"f", "id_a"});
  CHECK(!validate_category(d).ok());
}

TEST_CASE("sigma category composition orientation") {
  FinCat plain = sigma_category(2);
  FinCat flip = sigma_category(2, true);
  Perm s = perm_from_one_line({2, 1});
  Perm t = perm_from_one_line({2, 1});
  // As functions s.t = identity either way for an involution; use a 3-cycle
  // at N = 3 to see the orientation.
  FinCat plain3 = sigma_category(3);
  FinCat flip3 = sigma_category(3, true);
  Perm a = perm_from_one_line({2, 3, 1});
  Perm b = perm_from_one_line({2, 1, 3});
  std::string ab = sigma_mor_id(perm_compose(a, b));
  std::string ba = sigma_mor_id(perm_compose(b, a));
  CHECK(plain3.compose(sigma_mor_id(a), sigma_mor_id(b)).value() == ab);
  CHECK(flip3.compose(sigma_mor_id(a), sigma_mor_id(b)).value() == ba);
  CHECK(plain.compose(sigma_mor_id(s), sigma_mor_id(t)).value() ==
        sigma_mor_id(perm_identity(2)));
}

TEST_CASE("linearize produces a valid linear category") {
  for (const FinCat& c : {terminal_category(), walking_arrow(),
                          discrete_category({"p", "q"}), sigma_category(3),
                          sigma_category(2, true)}) {
    LinearCat lc = linearize(c);
    CHECK(validate_linear_cat(lc).ok());
  }
}

TEST_CASE("linearized hom spaces and composition") {
  LinearCat lc = linearize(walking_arrow());
  CHECK(lc.hom_space("a", "b").dim() == 1);
  CHECK(lc.hom_space("b", "a").dim() == 0);
  CHECK(lc.hom_space("a", "a").dim() == 1);
  CHECK(lc.is_identity("id_a"));
  CHECK(!lc.is_identity("f"));
  auto gf = lc.compose_basis("f", "id_a");
  REQUIRE(gf.size() == 1);
  CHECK(gf.begin()->first == "f");
  CHECK(gf.begin()->second == Rat(1));
  CHECK(lc.nonidentity_basis() == std::vector<std::string>{"f"});

  LinearCat sig = linearize(sigma_category(3));
  CHECK(sig.hom_space("3", "3").dim() == 6);
  CHECK(sig.hom_space("2", "3").dim() == 0);
  CHECK(sig.hom_space("0", "0").dim() == 1);
}

TEST_CASE("chain category: one generator per degree, composite zero") {
  LinearCat d = build_D_truncated(0, 3);
  CHECK(validate_linear_cat(d).ok());
  CHECK(d.objects == std::vector<Obj>{"0", "1", "2", "3"});
  CHECK(obj_degree("2") == 2);
  for (int n = 0; n <= 3; ++n) {
    Obj o = std::to_string(n);
    CHECK(d.hom_space(o, o).dim() == 1);
    if (n > 0) {
      CHECK(d.hom_space(o, std::to_string(n - 1)).dim() == 1);
      CHECK(d.hom_space(std::to_string(n - 1), o).dim() == 0);
    }
  }
  // d.d = 0: the composite expansion is empty.
  CHECK(d.compose_basis("d_1", "d_2").empty());
  CHECK(d.hom_space("2", "0").dim() == 0);
  CHECK(d.nonidentity_basis() == std::vector<std::string>{"d_1", "d_2", "d_3"});
}

TEST_CASE("color scheme ordering is arity-major, then inputs, then output") {
  ColorScheme s1{{"a"}, "b"};
  ColorScheme s2{{"a", "a"}, "a"};
  ColorScheme s3{{"a", "b"}, "a"};
  ColorScheme s4{{"a", "a"}, "b"};
  CHECK(s1 < s2);
  CHECK(s2 < s3);
  CHECK(s2 < s4);
  CHECK(s4 < s3);
  CHECK(!(s1 < s1));
  CHECK(scheme_to_string(s3) == "(a,b;a)");
  CHECK(scheme_to_string(ColorScheme{{}, "c"}) == "(;c)");
}

TEST_CASE("scheme permutation action and merging") {
  ColorScheme s{{"p", "q", "r"}, "o"};
  Perm sg = perm_from_one_line({2, 3, 1});
  ColorScheme t = scheme_act(s, sg);
  // Slot k of (S sigma) is S_{sigma(k)}.
  CHECK(t.inputs == std::vector<Obj>{"q", "r", "p"});
  // Right action: (S sigma) tau = S (sigma tau).
  Perm tau = perm_from_one_line({2, 1, 3});
  CHECK(scheme_act(t, tau) == scheme_act(s, perm_compose(sg, tau)));

  ColorScheme r{{"x", "y"}, "q"};
  ColorScheme m = scheme_merge(s, 2, r);
  CHECK(m.inputs == std::vector<Obj>{"p", "x", "y", "r"});
  CHECK(m.output == "o");
  ColorScheme empty_inner{{}, "q"};
  CHECK(scheme_merge(s, 2, empty_inner).inputs ==
        std::vector<Obj>{"p", "r"});
  CHECK(scheme_replace_input(s, 3, "w").inputs ==
        std::vector<Obj>{"p", "q", "w"});
  CHECK(scheme_replace_output(s, "w").output == "w");
}

TEST_CASE("scheme morphisms compose with permuted input indexing") {
  FinCat c = walking_arrow();
  ColorScheme dom{{"a", "a"}, "a"};
  ColorScheme mid{{"a", "b"}, "b"};
  ColorScheme cod{{"b", "b"}, "b"};
  // first: slot 1 -> slot 2 via f, slot 2 -> slot 1 via id_a.
  SchemeMorphism first{dom, mid, perm_from_one_line({2, 1}),
                       {"f", "id_a"}, "f"};
  REQUIRE(validate_scheme_morphism(c, first).ok());
  SchemeMorphism second{mid, cod, perm_from_one_line({2, 1}),
                        {"f", "id_b"}, "id_b"};
  REQUIRE(validate_scheme_morphism(c, second).ok());
  SchemeMorphism comp = compose_scheme_morphisms(c, second, first);
  CHECK(validate_scheme_morphism(c, comp).ok());
  CHECK(comp.sigma == perm_identity(2));
  // h_i = g_{sigma(i)} . f_i: slot 1 composes f after f's landing slot 2 map.
  CHECK(comp.input_maps == std::vector<std::string>{"f", "f"});
  CHECK(comp.output_map == "f");

  SchemeMorphism idm = identity_scheme_morphism(c, dom);
  CHECK(validate_scheme_morphism(c, idm).ok());
  SchemeMorphism same = compose_scheme_morphisms(c, first, idm);
  CHECK(same.input_maps == first.input_maps);
  CHECK(same.sigma == first.sigma);
}

TEST_CASE("validate_scheme_morphism rejects type errors") {
  FinCat c = walking_arrow();
  ColorScheme dom{{"a"}, "a"};
  ColorScheme cod{{"b"}, "b"};
  SchemeMorphism bad{dom, cod, perm_identity(1), {"id_a"}, "f"};
  CHECK(!validate_scheme_morphism(c, bad).ok());
  SchemeMorphism good{dom, cod, perm_identity(1), {"f"}, "f"};
  CHECK(validate_scheme_morphism(c, good).ok());
}
