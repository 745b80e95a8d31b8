#pragma once

#include <string>
#include <vector>

namespace oforge {

/// Permutation in one-line notation: img[k-1] is the image of k (1-based).
/// The empty permutation (n = 0) is allowed.
struct Perm {
  std::vector<int> img;

  int n() const { return static_cast<int>(img.size()); }
  int operator()(int i) const { return img[i - 1]; }
  bool operator==(const Perm&) const = default;
  auto operator<=>(const Perm&) const = default;
};

Perm perm_identity(int n);
/// Validates that v is a bijection of {1..n}.
Perm perm_from_one_line(std::vector<int> v);
bool is_identity(const Perm& p);
/// (s . t)(i) = s(t(i)) — function composition.
Perm perm_compose(const Perm& s, const Perm& t);
Perm perm_inverse(const Perm& p);
/// Transposition (a b) in the symmetric group on n letters.
Perm transposition(int n, int a, int b);
/// All of Sigma_n in lexicographic one-line order (deterministic).
std::vector<Perm> all_perms(int n);
/// "[2,1,3]"; "[]" for the empty permutation.
std::string perm_to_string(const Perm& p);

/// Block insertion sigma o_i tau in Sigma_{n+m-1}: replaces letter i of sigma
/// by the block tau (of size m, possibly 0) and renumbers. Closed form.
Perm perm_insert(const Perm& sigma, int i, const Perm& tau);
/// Independent brute-force evaluation of the same operation by explicit
/// block bookkeeping on {1..n+m-1}; used as the unit-test oracle.
Perm perm_insert_oracle(const Perm& sigma, int i, const Perm& tau);

} // namespace oforge
