#include "oforge/perm.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace oforge {

Perm perm_identity(int n) {
  Perm p;
  p.img.resize(n);
  std::iota(p.img.begin(), p.img.end(), 1);
  return p;
}

Perm perm_from_one_line(std::vector<int> v) {
  int n = static_cast<int>(v.size());
  std::vector<int> seen(n + 1, 0);
  for (int x : v) {
    if (x < 1 || x > n || seen[x]) throw std::invalid_argument("not a permutation");
    seen[x] = 1;
  }
  return Perm{std::move(v)};
}

bool is_identity(const Perm& p) {
  for (int k = 1; k <= p.n(); ++k)
    if (p(k) != k) return false;
  return true;
}

Perm perm_compose(const Perm& s, const Perm& t) {
  if (s.n() != t.n()) throw std::invalid_argument("compose: size mismatch");
  Perm r;
  r.img.resize(s.n());
  for (int i = 1; i <= s.n(); ++i) r.img[i - 1] = s(t(i));
  return r;
}

Perm perm_inverse(const Perm& p) {
  Perm r;
  r.img.resize(p.n());
  for (int i = 1; i <= p.n(); ++i) r.img[p(i) - 1] = i;
  return r;
}

Perm transposition(int n, int a, int b) {
  Perm p = perm_identity(n);
  std::swap(p.img[a - 1], p.img[b - 1]);
  return p;
}

std::vector<Perm> all_perms(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  std::vector<Perm> out;
  do {
    out.push_back(Perm{v});
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

std::string perm_to_string(const Perm& p) {
  std::string s = "[";
  for (int i = 0; i < p.n(); ++i) {
    if (i) s += ",";
    s += std::to_string(p.img[i]);
  }
  return s + "]";
}

Perm perm_insert(const Perm& sigma, int i, const Perm& tau) {
  int n = sigma.n(), m = tau.n();
  if (i < 1 || i > n) throw std::invalid_argument("perm_insert: slot range");
  int si = sigma(i);
  auto adj = [&](int t) { return t < si ? t : t + m - 1; };
  Perm r;
  r.img.resize(n + m - 1);
  for (int s = 1; s <= n + m - 1; ++s) {
    int v;
    if (s < i)
      v = adj(sigma(s));
    else if (s <= i + m - 1)
      v = si - 1 + tau(s - i + 1);
    else
      v = adj(sigma(s - m + 1));
    r.img[s - 1] = v;
  }
  return r;
}

Perm perm_insert_oracle(const Perm& sigma, int i, const Perm& tau) {
  int n = sigma.n(), m = tau.n();
  if (i < 1 || i > n) throw std::invalid_argument("perm_insert_oracle: slot range");
  auto size = [&](int j) { return j == i ? m : 1; };
  // Positions {1..n+m-1} split into n consecutive source blocks; block j is
  // sent to block position sigma(j), with tau permuting the i-th block
  // internally.
  auto target_offset = [&](int b) {
    int off = 0;
    for (int j = 1; j <= n; ++j)
      if (sigma(j) < b) off += size(j);
    return off;
  };
  Perm r;
  r.img.resize(n + m - 1);
  int s = 0;
  for (int j = 1; j <= n; ++j) {
    for (int p = 1; p <= size(j); ++p) {
      ++s;
      int q = (j == i) ? tau(p) : 1;
      r.img[s - 1] = target_offset(sigma(j)) + q;
    }
  }
  return r;
}

} // namespace oforge
