#pragma once

#include "oforge/operad.hpp"

#include <set>

namespace oforge {

/// A leveled planar tree on `leaves` leaves, encoded as the sequence of
/// elementary order-preserving maps that carries the leaf row down to a
/// single root strand. Level j records the target position i_j of its one
/// nontrivial fiber and the fiber size t_j (t_j >= 0, t_j != 1, so a level
/// is never the identity); strand counts obey n_{j+1} = n_j - t_j + 1 with
/// n_1 = leaves and n_{height+1} = 1. Levels are listed leaf-most first.
/// Nullary levels (t = 0) insert a fresh strand, so counts may grow before
/// they shrink back to one.
struct LeveledTree {
  int leaves = 0;
  std::vector<std::pair<int, int>> levels;

  int height() const { return static_cast<int>(levels.size()); }
  bool operator==(const LeveledTree&) const = default;
  bool operator<(const LeveledTree& o) const {
    if (leaves != o.leaves) return leaves < o.leaves;
    return levels < o.levels;
  }
};

/// Strand counts n_1 .. n_{height+1}. Throws std::invalid_argument when a
/// level is malformed (fiber size 1 or negative, position out of range).
std::vector<int> strand_counts(const LeveledTree& t);

/// Structural validity: well-formed levels, at least one level, and the
/// final strand count equal to one.
Report validate_tree(const LeveledTree& t);

/// "4[(1,2)(2,2)(1,2)]" -- leaves then the level list.
std::string tree_to_string(const LeveledTree& t);

/// Every tree with the given leaf count, at most max_vertices levels, and
/// all fiber sizes drawn from the given set; duplicate-free and sorted by
/// (height, levels).
std::vector<LeveledTree> enumerate_trees(int leaves, int max_vertices,
                                         const std::set<int>& fiber_sizes);

/// Whether levels j and j+1 (1-based) commute: the image point of level j
/// lies outside the fiber interval of level j+1.
bool interchange_applicable(const LeveledTree& t, int j);

/// The tree with levels j and j+1 swapped past each other; applying the
/// move at j twice returns the original. Throws when not applicable.
LeveledTree interchange(const LeveledTree& t, int j);

/// All trees reachable by interchange moves. Level count is constant on
/// the orbit.
std::set<LeveledTree> interchange_orbit(const LeveledTree& t);

/// The least element of the interchange orbit; idempotent, and equal on two
/// trees iff they are connected by moves.
LeveledTree normal_form(const LeveledTree& t);

/// t2 stacked above leaf i of t1: t2's levels come first with positions
/// shifted by i-1, then t1's levels unchanged. Throws on slot range errors.
LeveledTree graft(const LeveledTree& t1, int i, const LeveledTree& t2);

/// Per-level color schemes induced by a labeling: leaf colors fill the first
/// strand row, `internal` gives the output color of each non-root level, and
/// `output` is the root color. Schemes are listed leaf-most first.
std::vector<ColorScheme> vertex_schemes(const LeveledTree& t,
                                        const std::vector<Obj>& leaf_colors,
                                        const std::vector<Obj>& internal,
                                        const Obj& output);

/// The level and slot consuming the strand born at the given level's output
/// (levels are 1-based); {0, 0} for the root edge.
std::pair<int, int> edge_consumer(const LeveledTree& t, int level);
/// The level and slot consuming leaf `leaf`.
std::pair<int, int> leaf_consumer(const LeveledTree& t, int leaf);

/// Ambient-basis bookkeeping of one free-operad component: the tree, the
/// internal edge colors (output color of each non-root level, leaf-most
/// first), and the chosen generator basis index per level in tensor order
/// (root level first).
struct FreeBasisInfo {
  int tree_index = 0;
  std::vector<Obj> internal;
  std::vector<int> vertex_basis;

  bool operator==(const FreeBasisInfo&) const = default;
};

/// One component of the free operad: the labeled-tree direct sum, the
/// interchange and edge-morphism identifications, and the quotient.
struct FreeComponent {
  BasedSpace ambient;
  std::vector<SVec> relations;
  QuotientSpace q;
  std::vector<FreeBasisInfo> info;

  bool operator==(const FreeComponent&) const = default;
};

/// The free non-symmetric non-unital operad on a collection, truncated in
/// arity and in weight (tree vertex count). Compositions whose combined
/// weight overflows the bound land in the weight-truncation ideal and are
/// mapped to zero, so the result is a genuine operad quotient.
struct FreeNsOperad {
  NsOperad op;
  int weight_bound = 0;
  WeightGrading grading;
  std::map<int, std::vector<LeveledTree>> trees;
  std::map<ColorScheme, FreeComponent> components;
};

/// Builds the free operad on x: per scheme, the direct sum over labeled
/// leveled trees of the tensor of generator components (tensor factors in
/// root-first level order), modulo interchange and edge-morphism
/// identifications; composition is grafting on representatives. Requires x
/// supported only in arities other than one (levels of fiber size one do
/// not exist); throws std::invalid_argument otherwise.
FreeNsOperad free_ns(const NsCollection& x, int arity_bound,
                     int weight_bound);

/// Class of the single-vertex tree labeled by generator basis_index of the
/// component at s.
SVec generator_class(const FreeNsOperad& f, const ColorScheme& s,
                     int basis_index);

/// The operad morphism induced by generator images (one map x(S) ->
/// target(S) per generator scheme): each class evaluates by composing the
/// vertex images in root-first level order. Throws std::invalid_argument
/// when an image is missing or mistyped, and std::logic_error if the
/// evaluation fails to kill a relation (impossible when the target is a
/// certified operad).
std::map<ColorScheme, LinMap> universal_map(
    const FreeNsOperad& f, const NsOperad& target,
    const std::map<ColorScheme, LinMap>& images);

/// Certifies that phi (per-scheme maps on free classes) restricts to the
/// images on generators, commutes with every composition, and intertwines
/// the input and output actions.
Report check_free_morphism(const FreeNsOperad& f, const NsOperad& target,
                           const std::map<ColorScheme, LinMap>& images,
                           const std::map<ColorScheme, LinMap>& phi);

/// Symmetrization together with the transferred weight grading.
struct SymmetrizedOperad {
  COperad op;
  WeightGrading grading;
};

/// The free symmetric operad on a non-symmetric one: component at S is the
/// direct sum over permutations pi of the components at S pi, with the
/// right action permuting summands, and composition landing in the summand
/// of the slotwise-inserted permutation. Basis order is weight-major (per
/// the given grading of a), then permutation, so the transferred grading
/// ranges stay contiguous.
SymmetrizedOperad symmetrize(const NsOperad& a, const WeightGrading& g);
/// Symmetrization with the trivial single-weight grading.
COperad symmetrize(const NsOperad& a);
/// Symmetrization of a free operad, carrying its grading.
SymmetrizedOperad symmetrize(const FreeNsOperad& f);

/// Embeds a vector of the component of a at scheme s into the symmetrized
/// component at s (the identity-permutation block of the layout used by
/// symmetrize(a, g)).
SVec symmetrize_embed(const NsOperad& a, const WeightGrading& g,
                      const ColorScheme& s, const SVec& v);

/// Embeds a vector of the component of a at s pi into the block at pi of the
/// symmetrized component at s.
SVec symmetrize_embed_at(const NsOperad& a, const WeightGrading& g,
                         const ColorScheme& s, const Perm& pi, const SVec& v);

/// Extends a morphism out of a to a morphism out of symmetrize(a, g) into a
/// symmetric target: the block at permutation pi of the component at S maps
/// through phi at S pi followed by the target's action by the inverse
/// permutation. Schemes where the target component is zero get typed zero
/// maps.
std::map<ColorScheme, LinMap> symmetrize_morphism(
    const NsOperad& a, const WeightGrading& g, const COperad& target,
    const std::map<ColorScheme, LinMap>& phi);

/// Freely adjoins units: every arity-one component is extended by the
/// linearized hom space, units are the images of basis morphisms, and the
/// new compositions act by the stored input and output actions. Not
/// idempotent: adjoining twice extends arity one again.
UnitalCOperad adjoin_unit(const COperad& p);

} // namespace oforge
