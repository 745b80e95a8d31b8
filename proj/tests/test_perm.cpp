#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oforge/perm.hpp"

using namespace oforge;

TEST_CASE("compose, inverse, identity") {
  Perm s = perm_from_one_line({2, 3, 1});
  Perm t = perm_from_one_line({1, 3, 2});
  Perm st = perm_compose(s, t);
  for (int i = 1; i <= 3; ++i) CHECK(st(i) == s(t(i)));
  CHECK(perm_compose(s, perm_inverse(s)) == perm_identity(3));
  CHECK(perm_compose(perm_inverse(s), s) == perm_identity(3));
  CHECK(is_identity(perm_identity(4)));
  CHECK_THROWS(perm_from_one_line({1, 1, 2}));
}

TEST_CASE("all_perms enumerates n! in lexicographic order") {
  auto ps = all_perms(3);
  REQUIRE(ps.size() == 6);
  CHECK(ps.front() == perm_identity(3));
  CHECK(ps.back() == perm_from_one_line({3, 2, 1}));
  for (size_t i = 0; i + 1 < ps.size(); ++i) CHECK(ps[i].img < ps[i + 1].img);
}

TEST_CASE("insertion matches the block-bookkeeping oracle exhaustively") {
  for (int n = 1; n <= 4; ++n)
    for (const auto& s : all_perms(n))
      for (int m = 0; m <= 3; ++m)
        for (const auto& t : all_perms(m))
          for (int i = 1; i <= n; ++i)
            CHECK(perm_insert(s, i, t) == perm_insert_oracle(s, i, t));
}

TEST_CASE("insertion special values") {
  // Inserting the identity at any slot of the identity gives the identity.
  CHECK(perm_insert(perm_identity(3), 2, perm_identity(2)) ==
        perm_identity(4));
  // Inserting the empty permutation deletes a strand.
  CHECK(perm_insert(perm_from_one_line({2, 1}), 1, perm_identity(0)) ==
        perm_identity(1));
  // A concrete value computed by hand: s=[2,1] with t=[2,1] at slot 2.
  // Block 2 of s has size 2 and lands before block 1; within it t swaps.
  CHECK(perm_insert(perm_from_one_line({2, 1}), 2, perm_from_one_line({2, 1}))
            .img == std::vector<int>{3, 2, 1});
}

TEST_CASE("insertion associativity-style coherence") {
  // (s o_i t) o_{i-1+j} u == s o_i (t o_j u) for nested insertion.
  for (const auto& s : all_perms(3))
    for (const auto& t : all_perms(2))
      for (const auto& u : all_perms(2))
        for (int i = 1; i <= 3; ++i)
          for (int j = 1; j <= 2; ++j)
            CHECK(perm_insert(perm_insert(s, i, t), i - 1 + j, u) ==
                  perm_insert(s, i, perm_insert(t, j, u)));
}

TEST_CASE("insertion interchange for disjoint slots") {
  // (s o_i t) o_{j+m-1} u == (s o_j u) o_i t for i < j, |t| = m.
  for (const auto& s : all_perms(3))
    for (const auto& t : all_perms(2))
      for (const auto& u : all_perms(2))
        for (int i = 1; i <= 3; ++i)
          for (int j = i + 1; j <= 3; ++j)
            CHECK(perm_insert(perm_insert(s, i, t), j + 1, u) ==
                  perm_insert(perm_insert(s, j, u), i, t));
}

TEST_CASE("formatting") {
  CHECK(perm_to_string(perm_from_one_line({2, 1, 3})) == "[2,1,3]");
  CHECK(perm_to_string(perm_identity(0)) == "[]");
}
