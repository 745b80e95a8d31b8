#pragma once

#include "oforge/linalg.hpp"
#include "oforge/perm.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace oforge {

using Obj = std::string;

/// Violation report; empty means the checked laws all hold. Checks are
/// exhaustive at this scale, so an empty report is a certificate.
struct Report {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void fail(std::string msg) { violations.push_back(std::move(msg)); }
};

/// Small category with explicit object/morphism sets and a composition table.
struct FinCat {
  struct Mor {
    std::string id;
    Obj src, tgt;
  };

  std::vector<Obj> objects;
  std::vector<Mor> morphisms;
  std::map<Obj, std::string> identity;
  /// (g, f) -> g.f for composable pairs (f first, then g).
  std::map<std::pair<std::string, std::string>, std::string> compose_table;

  bool has_object(const Obj& o) const;
  const Mor* find_mor(const std::string& id) const;
  std::optional<std::string> compose(const std::string& g,
                                     const std::string& f) const;
};

/// Exhaustively checks identity and associativity laws; every violation is
/// reported with the witnessing ids.
Report validate_category(const FinCat& c);

FinCat terminal_category();
/// Objects "a","b"; morphisms "id_a","id_b","f" with f: a -> b.
FinCat walking_arrow();
FinCat discrete_category(std::vector<Obj> objects);
/// Permutation groupoid truncated at N: objects "0".."N", morphisms all
/// permutations; morphism ids are sigma_mor_id(p). flip=false composes as
/// functions (g.f), flip=true builds the opposite groupoid (compose(g,f) =
/// f.g as functions) — the coloring category used for the hyperoperad, where
/// algebra carriers with right symmetric-group actions are covariant.
FinCat sigma_category(int N, bool flip = false);
FinCat opposite_category(const FinCat& c);
std::string sigma_mor_id(const Perm& p);

/// Q-linear category: hom-spaces with chosen bases, bilinear composition.
/// Basis element ids are globally unique.
struct LinearCat {
  struct HomBasis {
    std::string id;
    Obj src, tgt;
  };

  std::vector<Obj> objects;
  std::vector<HomBasis> basis;
  std::map<std::string, int> basis_index;
  std::map<std::pair<Obj, Obj>, std::vector<int>> hom;
  /// comp[(g, f)] is the expansion of g.f over basis ids; absent means 0.
  std::map<std::pair<std::string, std::string>, std::map<std::string, Rat>>
      comp;
  std::map<Obj, std::string> identity;

  bool has_object(const Obj& o) const;
  const HomBasis& info(const std::string& id) const;
  bool is_identity(const std::string& id) const;
  /// Hom-space (a, b) as a BasedSpace whose labels are the basis ids.
  BasedSpace hom_space(const Obj& a, const Obj& b) const;
  std::vector<std::string> hom_ids(const Obj& a, const Obj& b) const;
  /// Basis-level composition g.f (f: a->b, then g: b->c), as a sparse
  /// combination of basis ids. Throws on non-composable arguments.
  std::map<std::string, Rat> compose_basis(const std::string& g,
                                           const std::string& f) const;
  /// Bilinear extension of compose_basis to hom-vectors.
  std::map<std::string, Rat> compose_vec(
      const std::map<std::string, Rat>& g,
      const std::map<std::string, Rat>& f) const;
  /// All non-identity basis elements in declaration order — the generating
  /// morphisms used for coend relations.
  std::vector<std::string> nonidentity_basis() const;
};

/// Checks unit laws and bilinear associativity on all composable basis
/// triples.
Report validate_linear_cat(const LinearCat& c);

/// Hom(a,b) gets the basis {morphisms a -> b}; composition is the linear
/// extension of the table.
LinearCat linearize(const FinCat& c);

/// The one-generator-per-degree chain category on objects lo..hi: hom(n,n)
/// spanned by the identity, hom(n,n-1) spanned by "d_n", all other homs zero.
/// The composite of two generators lands in a zero hom-space, so dd = 0.
LinearCat build_D_truncated(int lo, int hi);

/// Degree of an object of build_D_truncated (parses the integer id).
int obj_degree(const Obj& o);

/// Input/output color scheme (c_1 ... c_n; c). Ordered by arity first, then
/// inputs lexicographically, then output — the table order used everywhere.
struct ColorScheme {
  std::vector<Obj> inputs;
  Obj output;

  int arity() const { return static_cast<int>(inputs.size()); }
  bool operator==(const ColorScheme&) const = default;
};

bool operator<(const ColorScheme& a, const ColorScheme& b);
std::string scheme_to_string(const ColorScheme& s);
/// (S sigma): slot k becomes S.inputs[sigma(k)].
ColorScheme scheme_act(const ColorScheme& s, const Perm& sigma);
/// Slot i (1-based) of s replaced by the input list of r.
ColorScheme scheme_merge(const ColorScheme& s, int i, const ColorScheme& r);
ColorScheme scheme_replace_input(const ColorScheme& s, int i, const Obj& o);
ColorScheme scheme_replace_output(const ColorScheme& s, const Obj& o);

/// Morphism (sigma, f_1..f_n; f): dom -> cod with f_i: dom.inputs[i] ->
/// cod.inputs[sigma(i)] and f: dom.output -> cod.output.
struct SchemeMorphism {
  ColorScheme dom, cod;
  Perm sigma;
  std::vector<std::string> input_maps;
  std::string output_map;
};

SchemeMorphism identity_scheme_morphism(const FinCat& c, const ColorScheme& s);
Report validate_scheme_morphism(const FinCat& c, const SchemeMorphism& m);
/// Composite second . first; permutation parts compose as sigma'' = sigma'
/// sigma and input maps along the permuted indexing (h_i = g_{sigma(i)} f_i).
SchemeMorphism compose_scheme_morphisms(const FinCat& c,
                                        const SchemeMorphism& second,
                                        const SchemeMorphism& first);

} // namespace oforge
