#pragma once

#include "oforge/collection.hpp"
#include "oforge/fincat.hpp"
#include "oforge/freeop.hpp"
#include "oforge/linalg.hpp"
#include "oforge/operad.hpp"
#include "oforge/perm.hpp"

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oforge {

/// A finite-dimensional functor from a linear category to vector spaces:
/// a chosen basis per object and an action matrix per basis morphism.
/// Objects absent from `spaces` carry the zero space; actions absent from
/// `actions` are zero, except identities, which act as the identity.
struct CFunctor {
  const LinearCat* cat = nullptr;
  std::map<Obj, BasedSpace> spaces;
  std::map<std::string, LinMap> actions;

  const BasedSpace& space(const Obj& o) const;
  int dim(const Obj& o) const { return space(o).dim(); }
  /// Action of the basis morphism with the given id, typed by its
  /// endpoints. Throws std::invalid_argument on an unknown id.
  LinMap action(const std::string& id) const;
  void set_space(const Obj& o, BasedSpace b);
  void set_action(const std::string& id, LinMap m);
};

/// Functoriality, exhaustively: action endpoints are the declared spaces,
/// stored identities act as the identity, and action(g).action(f) agrees
/// with the linear extension of the composition table on every composable
/// basis pair.
Report check_cfunctor(const CFunctor& a);

/// The endomorphism operad of a carrier functor: the component at
/// (c_1 ... c_n; c) is Hom(A(c_1) (x) ... (x) A(c_n), A(c)) on the
/// matrix-unit basis, indexed row-major (output index first, then the
/// input multi-index, slot 1 slowest); the component at (; c) is A(c).
/// Input actions precompose with A(f) in one slot, output actions
/// postcompose, permutations reindex the input slots, and compositions
/// substitute a map into one slot. Units are the vectorized A(f).
/// Throws std::invalid_argument when the carrier fails check_cfunctor.
UnitalCOperad end_operad(const CFunctor& a, int arity_bound);

/// Generators-and-relations data for a presented operad. Relation vectors
/// live in components of free_ns(generators, arity_bound, weight_bound)
/// (ns_relations) or of its symmetrization (sym_relations).
struct FreePresentation {
  NsCollection generators;
  std::vector<std::pair<ColorScheme, SVec>> ns_relations;
  std::vector<std::pair<ColorScheme, SVec>> sym_relations;
  int arity_bound = 0;
  int weight_bound = 0;
};

/// Algebra data for a presented operad: a carrier functor and one image
/// map per generator scheme, landing in the matching component of the
/// endomorphism operad of the carrier.
struct AlgebraMap {
  CFunctor carrier;
  std::map<ColorScheme, LinMap> images;
};

/// Certifies that the images define an algebra: the carrier is a functor,
/// the images intertwine the category actions of the generators (checked
/// first, with located witnesses, since evaluating tree classes respects
/// the edge identifications only under these squares), the induced
/// morphism from the free operad intertwines compositions and actions
/// (via universal_map/check_free_morphism), and every relation vector
/// maps to the zero endomorphism. Throws std::invalid_argument when an
/// image is missing or mistyped.
Report check_algebra(const FreePresentation& p, const AlgebraMap& alg);

/// Symmetric monoidal data on a linear category, given by finite tables:
/// sums of objects, sums of basis morphisms expanded over the hom basis,
/// and the symmetry isomorphisms. Absent mor_sum entries denote the zero
/// morphism; absent obj_sum entries mean the sum leaves the truncation.
struct MonoidalStructure {
  const LinearCat* cat = nullptr;
  Obj unit;
  std::map<std::pair<Obj, Obj>, Obj> obj_sum;
  std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>>
      mor_sum;
  /// symmetry[(a, b)]: the iso a (+) b -> b (+) a over the hom basis.
  std::map<std::pair<Obj, Obj>, std::map<std::string, Rat>> symmetry;

  bool has_sum(const Obj& a, const Obj& b) const;
  /// Throws std::invalid_argument when the table has no entry.
  Obj sum(const Obj& a, const Obj& b) const;
  bool has_sum_list(const std::vector<Obj>& os) const;
  /// Left fold of sum; the unit for the empty list.
  Obj sum_list(const std::vector<Obj>& os) const;
  std::map<std::string, Rat> id_vec(const Obj& a) const;
  /// Bilinear extension of mor_sum to hom-vectors.
  std::map<std::string, Rat> sum_vec(const std::map<std::string, Rat>& f,
                                     const std::map<std::string, Rat>& g) const;
  /// Throws std::invalid_argument when the table has no entry.
  std::map<std::string, Rat> sym_vec(const Obj& a, const Obj& b) const;
};

/// The one-object monoidal structure on a linearized terminal category.
MonoidalStructure terminal_monoidal(const LinearCat& c);

/// Monoidal structure of the chain category built by build_D_truncated:
/// degrees add, d_a (+) 1_b = d_{a+b}, 1_a (+) d_b = (-1)^a d_{a+b}, and
/// the symmetry on (a, b) is (-1)^{ab} times the identity — the tensor
/// product of chain complexes restricted to one-generator complexes. Sums
/// leaving the degree window are absent from the table.
MonoidalStructure chain_monoidal(const LinearCat& d);

/// The canonical symmetry (+)_k blocks[sigma(k)] -> (+)_k blocks[k],
/// assembled from adjacent transpositions (path-independent by the
/// coherence of the table). Throws std::invalid_argument when a needed
/// table entry is missing.
std::map<std::string, Rat> block_symmetry(const MonoidalStructure& mon,
                                          const std::vector<Obj>& blocks,
                                          const Perm& sigma);

/// An operad in functors C -> Vect: per arity a functor P(n), a right
/// permutation action per (n, sigma) given objectwise (absent entries act
/// as the identity), and partial compositions given objectwise as maps
/// P(n)(p) (x) P(m)(q) -> P(n+m-1)(p (+) q), keyed (n, m, i, p, q) with
/// tensor index x * dim P(m)(q) + y; absent entries are zero.
struct FunctorOperad {
  const MonoidalStructure* mon = nullptr;
  int max_arity = 0;
  std::map<int, CFunctor> components;
  std::map<std::pair<int, Perm>, std::map<Obj, LinMap>> sigma;
  std::map<std::tuple<int, int, int, Obj, Obj>, LinMap> comp;
};

/// Transform of an operad in C-functors into a C-colored operad: the
/// component at (c_1 ... c_n; c) is the coend over r of
/// C(c_1 (+) ... (+) c_n (+) r, c) (x) P(n)(r), permutations act by
/// precomposing with block symmetries paired with the action of P, input
/// and output actions act by pre- and postcomposition, and compositions
/// pair composition in C (with the block of the inner result moved into
/// place by a symmetry) with the compositions of P.
COperad pC_transform(const FunctorOperad& p, int arity_bound);

/// The presented operad of differential graded associative multiplication
/// over the chain category on degrees [lo, hi]: one product generator
/// mu_{m,n} in each component (m n; m+n), a two-dimensional component at
/// (m n; m+n-1) spanned by the one-sided derivative products mu1, mu2,
/// action values mu_{m-1,n} -> mu1 (differential in slot 1), mu_{m,n-1} ->
/// mu2 (slot 2), and mu_{m,n} -> mu1 + (-1)^n mu2 (differential on the
/// output, the sign a literal scalar with n read from the scheme), and the
/// quadratic associativity ideal mu o_1 mu - mu o_2 mu.
struct DgaOperad {
  std::unique_ptr<LinearCat> cat;
  /// Generating collection X plus the associativity relations, placed in
  /// the symmetrized free operad; bounds as passed to free_ns.
  FreePresentation presented;
  /// The symmetrized free operad on the generators.
  SymmetrizedOperad free_sym;
  /// free_sym.op modulo the ideal closure of the relations.
  COperad quotient;
  /// The same data in presentation form; is_quadratic_binary holds.
  OperadPresentation presentation;
};

/// Builds the dga operad on the degree window [degree_lo, degree_hi],
/// quotienting up to weight_bound (>= 2 so the relations exist). The free
/// operad is truncated at arity 3, where the quadratic relations live.
DgaOperad build_dga_operad(int degree_lo, int degree_hi, int weight_bound);

/// Chain-complex carrier over a category built by build_D_truncated: one
/// space per degree present in `spaces`, with diff[n] the matrix of the
/// action of d_n (columns over the degree-n basis). Degrees absent from
/// `spaces` are zero; entries of diff whose endpoint spaces are zero or
/// out of window are ignored.
CFunctor chain_functor(const LinearCat& d,
                       const std::map<int, BasedSpace>& spaces,
                       const std::map<int, SMat>& diff);

/// Generator images of the dga operad determined by a chain-complex
/// carrier and per-degree multiplication maps mult[(m, n)]:
/// A_m (x) A_n -> A_{m+n} (tensor index row-major, slot 1 slowest). The
/// images at the derivative components are the two one-sided composites
/// with the differential, matching the collection's action values; pairs
/// absent from mult are zero maps.
AlgebraMap dga_algebra(const DgaOperad& p, const CFunctor& a,
                       const std::map<std::pair<int, int>, LinMap>& mult);

} // namespace oforge
