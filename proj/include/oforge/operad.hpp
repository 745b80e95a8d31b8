#pragma once

#include "oforge/collection.hpp"

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oforge {

/// One composition component: (outer scheme, slot, inner scheme).
using CompKey = std::tuple<ColorScheme, int, ColorScheme>;

/// Colored operad presented by its cowedge family: for every pair of
/// supported schemes S, R with R.output == S.inputs[i-1], a map
///   P(S) (x) P(R) -> P(merge(S, i, R)).
/// Zero maps are never stored. Compositions are kept only where the merged
/// arity stays within max_arity.
struct COperad {
  SymCollection carrier;
  int max_arity = 0;
  std::map<CompKey, LinMap> comp;

  const LinearCat& cat() const { return *carrier.ns.cat; }
  int dim(const ColorScheme& s) const { return carrier.ns.dim(s); }

  /// Stored map or the zero map with correctly typed endpoints.
  LinMap get_comp(const ColorScheme& outer, int i,
                  const ColorScheme& inner) const;
  void set_comp(const ColorScheme& outer, int i, const ColorScheme& inner,
                LinMap m);
  /// a o_i b for a in P(outer), b in P(inner).
  SVec compose(const ColorScheme& outer, const SVec& a, int i,
               const ColorScheme& inner, const SVec& b) const;

  bool operator==(const COperad&) const = default;
};

/// Exhaustive axiom check within the truncation: carrier laws, key typing,
/// naturality of the composition family in the spectator inputs and the
/// output, the cowedge condition in the connecting color, equivariance for
/// all permutation pairs, and all three associativity cases on all basis
/// triples. Every violation is reported with the witnessing schemes and
/// basis labels.
Report check_operad(const COperad& p);

/// Non-symmetric operad: the same composition family over a plain
/// collection, with no permutation actions.
struct NsOperad {
  NsCollection carrier;
  int max_arity = 0;
  std::map<CompKey, LinMap> comp;

  const LinearCat& cat() const { return *carrier.cat; }
  int dim(const ColorScheme& s) const { return carrier.dim(s); }

  LinMap get_comp(const ColorScheme& outer, int i,
                  const ColorScheme& inner) const;
  void set_comp(const ColorScheme& outer, int i, const ColorScheme& inner,
                LinMap m);
  SVec compose(const ColorScheme& outer, const SVec& a, int i,
               const ColorScheme& inner, const SVec& b) const;

  bool operator==(const NsOperad&) const = default;
};

/// check_operad without the permutation clauses: functoriality, typing,
/// naturality, cowedge squares, and associativity.
Report check_ns_operad(const NsOperad& p);

/// The underlying non-symmetric operad (shared composition data).
NsOperad ns_view(const COperad& p);

/// Unital operad: one unit vector u_f in P(a; b) per basis morphism
/// f: a -> b of the category (identities included).
struct UnitalCOperad {
  COperad base;
  std::map<std::string, SVec> units;

  bool operator==(const UnitalCOperad&) const = default;
};

/// Verifies unit naturality (acting on u_g by f slotwise and h on the output
/// gives u_{h g f}, linearly extended) and both unit axioms
///   u_f o_1 x = (output action of f)(x),  x o_i u_f = (slot i action of f)(x)
/// on every basis element.
Report check_unital(const UnitalCOperad& p);

/// Checks only the cowedge squares of the composition family. For an operad
/// passing check_unital and the associativity clause, these commute
/// automatically; this op replays that redundancy numerically on every
/// instance, and reports genuine violations for families that lack units.
Report cowedge_from_unital(const UnitalCOperad& p);

/// The arity-one operad of the category itself: P(a; b) = hom(a, b),
/// composition and units those of the category.
UnitalCOperad hom_operad(const LinearCat& cat);

/// Key (outer scheme, slot, connecting basis morphism, inner scheme) of a
/// twisted composition component.
using PartialFKey = std::tuple<ColorScheme, int, std::string, ColorScheme>;

/// Alternative presentation with compositions along a connecting morphism
/// f: R.output -> S.inputs[i-1]:
///   comp_f(S, i, f, R): P(S) (x) P(R) -> P(merge(S, i, R)).
struct PartialFPresentation {
  SymCollection carrier;
  int max_arity = 0;
  std::map<PartialFKey, LinMap> comp_f;

  const LinearCat& cat() const { return *carrier.ns.cat; }
  int dim(const ColorScheme& s) const { return carrier.ns.dim(s); }

  LinMap get_comp_f(const ColorScheme& outer, int i, const std::string& f,
                    const ColorScheme& inner) const;
  void set_comp_f(const ColorScheme& outer, int i, const std::string& f,
                  const ColorScheme& inner, LinMap m);
  /// Linear extension of the connecting-morphism index to a hom vector.
  LinMap comp_f_vec(const ColorScheme& outer, int i,
                    const std::map<std::string, Rat>& f,
                    const ColorScheme& inner) const;

  bool operator==(const PartialFPresentation&) const = default;
};

/// Exhaustive axiom check of the twisted presentation: typing, carrier laws,
/// equivariance of each twisted family for all permutation pairs, absorption
/// of output actions of the inner factor and slot-i actions of the outer
/// factor into the twist, naturality in all spectator slots and the output,
/// and the three twisted associativity cases. General scheme morphisms
/// factor into these generators through the carrier functoriality, so the
/// generator instances certify the full equivariance law.
Report check_partial_f(const PartialFPresentation& q);

/// comp_f(S, i, f, R) = comp(S, i, R') after pushing the inner factor
/// forward along f; the identity twists reproduce comp.
PartialFPresentation to_partial_f(const COperad& p);
/// Restriction to identity twists.
COperad from_partial_f(const PartialFPresentation& q);

/// Key (outer scheme, inner schemes, one per slot) of one substitution
/// component.
using MuKey = std::pair<ColorScheme, std::vector<ColorScheme>>;

/// Substitude: simultaneous substitution family mu plus a unit family eta
/// (one vector per basis morphism, as for units of an operad).
struct Substitude {
  SymCollection carrier;
  int max_arity = 0;
  std::map<MuKey, LinMap> mu;
  std::map<std::string, SVec> eta;

  const LinearCat& cat() const { return *carrier.ns.cat; }
  LinMap get_mu(const MuKey& k) const;
  void set_mu(const MuKey& k, LinMap m);

  bool operator==(const Substitude&) const = default;
};

/// mu at profile (R_1..R_n) = iterated o_i in right-to-left slot order; eta
/// = units. Components are materialized for all supported scheme tuples
/// whose right-to-left evaluation stays within the arity truncation (with
/// arity-0 slots an intermediate arity can exceed the bound even when the
/// final one fits; such profiles are omitted rather than stored wrong).
Substitude to_substitude(const UnitalCOperad& p);
/// o_i recovered from mu by inserting identity units into the other slots;
/// units recovered from eta. Round trips are the identity on data.
UnitalCOperad from_substitude(const Substitude& s);

/// Operadic ideal as reduced spanning sets per scheme.
struct OperadicIdeal {
  std::map<ColorScheme, std::vector<SVec>> span;
};

/// Saturation closure of the generators under compositions with arbitrary
/// basis elements on either side and under all permutation, input, and
/// output actions. Breadth-first and deterministic; weight_bound documents
/// the truncation of the ambient carrier (stabilization is guaranteed by
/// finite dimensionality, and failure to stabilize is an internal error).
OperadicIdeal ideal_closure(
    const COperad& p, const std::vector<std::pair<ColorScheme, SVec>>& gens,
    int weight_bound);

/// Componentwise quotient with induced compositions and actions. Every
/// induced map is checked to be well defined on representatives; a failure
/// (impossible for a closed ideal) throws logic_error.
COperad quotient_operad(const COperad& p, const OperadicIdeal& ideal);

/// Split of each component's basis into weight-homogeneous index ranges,
/// keyed (scheme, weight) -> (offset, dim). Produced by the free operad,
/// where the weight counts tree vertices.
struct WeightGrading {
  int weight_bound = 0;
  std::map<std::pair<ColorScheme, int>, std::pair<int, int>> ranges;

  /// Weight of basis index idx in the component at s; -1 if ungraded there.
  int weight_of(const ColorScheme& s, int idx) const;
};

/// Checks that the ranges tile each graded component, that compositions add
/// weights, and that permutation, input, and output actions preserve weight.
Report check_weight_grading(const COperad& p, const WeightGrading& g);

/// Presentation of a quotient operad: generating collection, relation
/// vectors inside weighted free components, and the grading of the ambient
/// free operad.
struct OperadPresentation {
  struct Relation {
    ColorScheme scheme;
    SVec vec;
  };

  SymCollection generators;
  std::vector<Relation> relations;
  WeightGrading grading;
};

/// True iff every generator sits in arity 2 and every relation vector is
/// weight-homogeneous of weight 2.
bool is_quadratic_binary(const OperadPresentation& pres);

} // namespace oforge
