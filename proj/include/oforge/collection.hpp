#pragma once

#include "oforge/fincat.hpp"
#include "oforge/linalg.hpp"
#include "oforge/perm.hpp"

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace oforge {

/// A finitely supported functor assigning a vector space to each color
/// scheme, with slotwise contravariant input actions and a covariant output
/// action. Schemes absent from `spaces` denote the zero space; absent action
/// keys denote the zero map (or the identity for identity morphisms).
///
/// Action conventions, for a basis morphism f: c -> d of the category:
///   in_act keyed (S, i, f), defined when S.inputs[i-1] == d, is the map
///     X(S) -> X(S with slot i changed to c);
///   out_act keyed (S, f), defined when S.output == c, is the map
///     X(S) -> X(S with output changed to d).
/// Only actions of single basis morphisms are stored; the action of a
/// general tuple is the composite of its slot actions, and the action of a
/// hom-space vector extends linearly.
struct NsCollection {
  const LinearCat* cat = nullptr;
  std::map<ColorScheme, BasedSpace> spaces;
  std::map<std::tuple<ColorScheme, int, std::string>, LinMap> in_act;
  std::map<std::pair<ColorScheme, std::string>, LinMap> out_act;

  /// The component at S; the zero space when unsupported.
  const BasedSpace& space(const ColorScheme& s) const;
  int dim(const ColorScheme& s) const { return space(s).dim(); }
  bool supported(const ColorScheme& s) const;
  /// Set of arities with at least one supported scheme.
  std::set<int> arities() const;

  void set_space(const ColorScheme& s, BasedSpace b);
  void set_in_act(const ColorScheme& s, int slot, const std::string& f,
                  LinMap m);
  void set_out_act(const ColorScheme& s, const std::string& f, LinMap m);

  /// Action of basis morphism f at input slot `slot` of source scheme s.
  /// Returns the stored map, the identity when f is an identity, and the
  /// zero map with correctly typed endpoints otherwise.
  LinMap get_in_act(const ColorScheme& s, int slot, const std::string& f) const;
  LinMap get_out_act(const ColorScheme& s, const std::string& f) const;

  /// Linear extension of the slot action to a vector in Hom(src, tgt)
  /// (coefficients keyed by basis morphism id). Endpoint colors are given
  /// explicitly so the zero vector still types correctly.
  LinMap in_act_vec(const ColorScheme& s, int slot, const Obj& src,
                    const Obj& tgt, const std::map<std::string, Rat>& v) const;
  LinMap out_act_vec(const ColorScheme& s, const Obj& src, const Obj& tgt,
                     const std::map<std::string, Rat>& v) const;

  bool operator==(const NsCollection&) const = default;
};

/// Target scheme of get_in_act(s, slot, f).
ColorScheme in_act_target(const LinearCat& cat, const ColorScheme& s, int slot,
                          const std::string& f);
/// Target scheme of get_out_act(s, f).
ColorScheme out_act_target(const LinearCat& cat, const ColorScheme& s,
                           const std::string& f);

/// Exhaustive functoriality check over the supported schemes: identity
/// actions are identities, slotwise and output actions compose per the
/// category's composition (linearly extended), and actions at distinct
/// slots, or at a slot and the output, commute.
Report validate_functor(const NsCollection& x);

/// The (n-1)-ary collection with input slot i frozen at color c:
/// result(d_1...d_{n-1}; d) = x(d_1...d_{i-1} c d_i...d_{n-1}; d).
/// Only schemes of arity >= 1 contribute; actions on remaining slots carry
/// over with indices above i shifted down.
NsCollection partial_eval(const NsCollection& x, int i, const Obj& c);

/// The collection with output frozen at color c, keeping all input slots:
/// result components are x's components with output c, reindexed by the
/// input-only scheme. The output action family is dropped (the output is no
/// longer a functor argument); inputs still act.
NsCollection output_eval(const NsCollection& y, const Obj& c);

/// The induced natural family X^i_f for a basis morphism f: c -> d.
/// Component at each (n-1)-scheme S' of a map
///   partial_eval(x, i, d)(S') -> partial_eval(x, i, c)(S'),
/// given by x's slot-i action of f.
std::map<ColorScheme, LinMap> partial_eval_nat(const NsCollection& x, int i,
                                               const std::string& f);

/// Left permutation action on arity-n collections, transferred from the
/// right scheme action: sigma_act(x, s).space(S) = x.space(S s), and
/// sigma_act(x, s).in_act(S, i, f) = x.in_act(S s, s^{-1}(i), f).
/// Strictly unital and associative: sigma_act(sigma_act(x, s), t) equals
/// sigma_act(x, compose(t, s)) as data.
NsCollection sigma_act(const NsCollection& x, const Perm& sigma);

/// A collection together with a right permutation action: for each
/// supported S of arity n and each sigma in Sigma_n, an isomorphism
///   P(S) -> P(S sigma),  (S sigma)_k = S_{sigma(k)}.
struct SymCollection {
  NsCollection ns;
  std::map<std::pair<ColorScheme, Perm>, LinMap> sigma;

  /// The right action map P(s) -> P(s sigma); identity for sigma = id,
  /// zero-typed when the component is zero.
  LinMap get_sigma(const ColorScheme& s, const Perm& sigma) const;
  void set_sigma(const ColorScheme& s, const Perm& sg, LinMap m);

  bool operator==(const SymCollection&) const = default;
};

/// validate_functor on the underlying collection, plus the right-action
/// laws ((x)tau)sigma = (x)(tau o sigma), unitality, invertibility, and the
/// compatibility square with input and output actions:
///   sigma after slot-i action = slot-sigma^{-1}(i) action after sigma.
Report validate_sym(const SymCollection& p);

} // namespace oforge
