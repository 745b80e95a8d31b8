#include "oforge/words.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace oforge {

std::vector<Word> all_words(int n) {
  Word w(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = i + 1;
  std::vector<Word> out;
  do {
    out.push_back(w);
  } while (std::next_permutation(w.begin(), w.end()));
  return out;
}

Word word_compose(const Word& w, int i, const Word& v) {
  int m = static_cast<int>(v.size());
  Word out;
  out.reserve(w.size() + v.size() - 1);
  for (int t : w) {
    if (t == i) {
      for (int s : v) out.push_back(i - 1 + s);
    } else {
      out.push_back(t < i ? t : t + m - 1);
    }
  }
  return out;
}

Word word_act(const Word& w, const Perm& sigma) {
  Perm inv = perm_inverse(sigma);
  Word out;
  out.reserve(w.size());
  for (int t : w) out.push_back(inv(t));
  return out;
}

std::string word_to_string(const Word& w) {
  std::string s = "w";
  for (size_t k = 0; k < w.size(); ++k) {
    if (k > 0) s += ".";
    s += std::to_string(w[k]);
  }
  return s;
}

Report validate_word_model(int N) {
  Report rep;
  auto words = [](int n) { return all_words(n); };
  // Right-action law and unitality of the action.
  for (int n = 1; n <= N; ++n)
    for (const Word& w : words(n)) {
      if (word_act(w, perm_identity(n)) != w)
        rep.fail("identity action moves " + word_to_string(w));
      for (const Perm& tau : all_perms(n))
        for (const Perm& sg : all_perms(n))
          if (word_act(word_act(w, tau), sg) !=
              word_act(w, perm_compose(tau, sg)))
            rep.fail("right-action law fails on " + word_to_string(w));
    }
  // Equivariance against the independent insertion bookkeeping.
  for (int n = 1; n <= N; ++n)
    for (int m = 0; n + m - 1 <= N && m <= N; ++m)
      for (const Word& w : words(n))
        for (const Word& v : words(m))
          for (int i = 1; i <= n; ++i)
            for (const Perm& sg : all_perms(n))
              for (const Perm& tau : all_perms(m)) {
                Word lhs =
                    word_compose(word_act(w, sg), i, word_act(v, tau));
                Word rhs = word_act(word_compose(w, sg(i), v),
                                    perm_insert_oracle(sg, i, tau));
                if (lhs != rhs)
                  rep.fail("equivariance fails on " + word_to_string(w) +
                           " o_" + std::to_string(i) + " " +
                           word_to_string(v) + " with sigma=" +
                           perm_to_string(sg) + ", tau=" +
                           perm_to_string(tau));
              }
  // Associativity, all three cases.
  for (int n = 1; n <= N; ++n)
    for (int m = 0; m <= N; ++m)
      for (int k = 0; k <= N; ++k) {
        if (n + m + k - 2 > N || n + m - 1 < 1) continue;
        for (const Word& w : words(n))
          for (const Word& v : words(m))
            for (const Word& u : words(k))
              for (int j = 1; j <= n; ++j)
                for (int i = 1; i <= n + m - 1; ++i) {
                  Word lhs = word_compose(word_compose(w, j, v), i, u);
                  Word rhs;
                  if (i < j)
                    rhs = word_compose(word_compose(w, i, u), j + k - 1, v);
                  else if (i < j + m)
                    rhs = word_compose(w, j, word_compose(v, i - j + 1, u));
                  else
                    rhs = word_compose(word_compose(w, i - m + 1, u), j, v);
                  if (lhs != rhs)
                    rep.fail("associativity fails on " + word_to_string(w) +
                             ", " + word_to_string(v) + ", " +
                             word_to_string(u) + ", j=" + std::to_string(j) +
                             ", i=" + std::to_string(i));
                }
      }
  // Unit laws.
  Word unit{1};
  for (int n = 1; n <= N; ++n)
    for (const Word& w : words(n)) {
      if (word_compose(unit, 1, w) != w)
        rep.fail("left unit fails on " + word_to_string(w));
      for (int i = 1; i <= n; ++i)
        if (word_compose(w, i, unit) != w)
          rep.fail("right unit fails on " + word_to_string(w));
    }
  return rep;
}

UnitalCOperad build_as_operad(const LinearCat& terminal, int N,
                              bool with_constants) {
  if (terminal.objects.size() != 1)
    throw std::invalid_argument("associative operad needs one color");
  const Obj& star = terminal.objects[0];
  auto scheme = [&](int n) {
    return ColorScheme{std::vector<Obj>(static_cast<size_t>(n), star), star};
  };

  UnitalCOperad p;
  p.base.max_arity = N;
  p.base.carrier.ns.cat = &terminal;
  std::map<int, std::vector<Word>> words;
  std::map<int, std::map<Word, int>> index;
  int lo = with_constants ? 0 : 1;
  for (int n = lo; n <= N; ++n) {
    words[n] = all_words(n);
    std::vector<std::string> labels;
    for (size_t k = 0; k < words[n].size(); ++k) {
      index[n][words[n][k]] = static_cast<int>(k);
      labels.push_back(word_to_string(words[n][k]));
    }
    p.base.carrier.ns.set_space(scheme(n), make_space(labels));
  }
  const NsCollection& ns = p.base.carrier.ns;
  for (int n = lo; n <= N; ++n) {
    const BasedSpace& sp_n = ns.space(scheme(n));
    for (const Perm& sg : all_perms(n)) {
      if (is_identity(sg)) continue;
      std::vector<SVec> cols;
      for (const Word& w : words[n])
        cols.push_back(svec_unit(index[n].at(word_act(w, sg))));
      p.base.carrier.set_sigma(scheme(n), sg,
                               lin_from_cols(sp_n, sp_n, cols));
    }
    for (int m = lo; n >= 1 && n + m - 1 <= N; ++m) {
      int t = n + m - 1;
      if (t < lo) continue;
      for (int i = 1; i <= n; ++i) {
        std::vector<SVec> cols;
        for (const Word& w : words[n])
          for (const Word& v : words[m])
            cols.push_back(svec_unit(index[t].at(word_compose(w, i, v))));
        p.base.set_comp(scheme(n), i, scheme(m),
                        lin_from_cols(tensor_space(sp_n, ns.space(scheme(m))),
                                      ns.space(scheme(t)), cols));
      }
    }
  }
  p.units[terminal.identity.at(star)] = svec_unit(0);
  return p;
}

} // namespace oforge
