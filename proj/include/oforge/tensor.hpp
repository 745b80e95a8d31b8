#pragma once

#include "oforge/collection.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oforge {

/// One middle-color summand of a coend ambient space.
struct CoendBlock {
  Obj color;
  int offset = 0;
  int xdim = 0;
  int ydim = 0;

  int dim() const { return xdim * ydim; }
};

/// The slot product X (x)_i Y computed as a coend over the middle color:
/// per output scheme T, the ambient space is the direct sum over objects c
/// of X(T with slots i..i+m-1 replaced by c) (x) Y(inner scheme; c), blocks
/// ordered by the category's object order, and the result is the quotient
/// by the span of (a.f (x) b) - (a (x) f.b) over basis morphisms f and
/// basis vectors a, b.
struct CoendResult {
  int outer_arity = 0;
  int inner_arity = 0;
  int slot = 1;
  NsCollection result;
  /// Ambient block layout per output scheme, in middle-color order.
  std::map<ColorScheme, std::vector<CoendBlock>> blocks;
  std::map<ColorScheme, QuotientSpace> quotients;
  /// injections[(T, c)]: X(..c..) (x) Y(..; c) -> result(T), the cowedge leg.
  std::map<std::pair<ColorScheme, Obj>, LinMap> injections;
  /// Middle colors the coend ranged over (the truncation assumption).
  std::vector<Obj> middle_colors;
};

/// Scheme of the x factor of X (x)_i Y at output scheme T and middle color c
/// (slots i..i+m-1 of T collapsed to c), and of the y factor (slots
/// i..i+m-1 of T as inputs, output c).
ColorScheme coend_x_scheme(const ColorScheme& t, int i, int m, const Obj& c);
ColorScheme coend_y_scheme(const ColorScheme& t, int i, int m, const Obj& c);

/// Cowedge relation vectors per output scheme, in deterministic order
/// (basis morphism, then x index, then y index).
std::map<ColorScheme, std::vector<SVec>> coend_relations(const NsCollection& x,
                                                         const NsCollection& y,
                                                         int i);

/// The coend X (x)_i Y with induced actions (computed on representatives
/// and certified well-defined) and cowedge injections.
CoendResult otimes_i(const NsCollection& x, const NsCollection& y, int i);

/// Exhaustive cowedge check: for every generating morphism f: c -> d,
/// injection_c . (X^i_f (x) 1) = injection_d . (1 (x) f.Y).
Report check_cowedge(const NsCollection& x, const NsCollection& y, int i,
                     const CoendResult& r);

/// Independent coequalizer: the two parallel maps out of the relation
/// source ((+) over f of X(..tgt f..) (x) Y(..; src f)) are materialized as
/// block matrices and the quotient rank is computed by a separate
/// elimination (greedy last-pivot), sharing no code with quotient_by.
struct CoendOracle {
  std::map<ColorScheme, int> ambient_dim;
  std::map<ColorScheme, int> result_dim;
  std::map<ColorScheme, std::vector<SVec>> relation_span;
};

CoendOracle otimes_i_oracle(const NsCollection& x, const NsCollection& y,
                            int i);

/// Certifies main-vs-oracle agreement: equal scheme sets and dimensions,
/// and the main projection kills the oracle's relation span (rank equality
/// then forces the kernels to coincide).
Report coend_matches_oracle(const CoendResult& main, const CoendOracle& oracle);

/// Checks that iso is a family of isomorphisms a -> b commuting with all
/// C-actions of both collections (exhaustive over supported schemes and
/// generating morphisms).
Report check_collection_iso(const NsCollection& a, const NsCollection& b,
                            const std::map<ColorScheme, LinMap>& iso);

/// Canonical associativity isomorphism for (X (x)_j Y) (x)_i Z, where X, Y,
/// Z have arities n, m, k. The target shape depends on where slot i lands
/// relative to the copy of Y:
///   case 1 (i < j):      (X (x)_i Z) (x)_{j+k-1} Y
///   case 2 (j <= i < j+m): X (x)_j (Y (x)_{i-j+1} Z)
///   case 3 (i >= j+m):   (X (x)_{i-m+1} Z) (x)_j Y
/// The iso is induced on representatives by regrouping the triple tensor
/// and certified: it kills the presentation kernel, is invertible, and
/// commutes with all actions. Failures are collected in `report`.
struct AssocIso {
  int case_id = 0;
  CoendResult inner_lhs;
  CoendResult lhs;
  CoendResult inner_rhs;
  CoendResult rhs;
  std::map<ColorScheme, LinMap> iso;
  Report report;
};

AssocIso assoc_iso(const NsCollection& x, const NsCollection& y,
                   const NsCollection& z, int i, int j);

/// Canonical equivariance isomorphism
///   sigma(X) (x)_i tau(Y)  ->  rho(X (x)_{sigma^{-1}(i)} Y),
/// rho = insert(sigma, sigma^{-1}(i), tau). Both sides are built
/// independently; the construction makes them strictly equal as data, so
/// the iso is the identity family. `strict` records the data equality and
/// `report` the certification.
struct EquivIso {
  CoendResult lhs;
  NsCollection rhs;
  Perm rho;
  int plain_slot = 1;
  std::map<ColorScheme, LinMap> iso;
  bool strict = false;
  Report report;
};

EquivIso equiv_iso(const NsCollection& x, const NsCollection& y,
                   const Perm& sigma, const Perm& tau, int i);

/// The unit for the slot products: the linearized hom functor, with
/// component Hom(a, b) at scheme (a; b), inputs acting by precomposition
/// and outputs by postcomposition.
NsCollection otimes_unit(const LinearCat& cat);

/// The canonical isomorphisms X (x)_i I -> X (evaluation x (x) g -> x.g)
/// and I (x)_1 X -> X (g (x) x -> g.x), certified invertible and natural.
struct UnitIso {
  CoendResult right;
  std::map<ColorScheme, LinMap> right_iso;
  CoendResult left;
  std::map<ColorScheme, LinMap> left_iso;
  Report report;
};

UnitIso unit_iso(const NsCollection& x, int i);

} // namespace oforge
