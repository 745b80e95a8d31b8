#pragma once

#include "oforge/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oforge {

/// Sparse vector over Q: terms sorted by index, zero entries omitted.
struct SVec {
  std::vector<std::pair<int, Rat>> terms;

  bool is_zero() const { return terms.empty(); }
  Rat get(int i) const;
  /// Index of the first nonzero entry, or -1.
  int lead() const { return terms.empty() ? -1 : terms.front().first; }
  /// Entrywise equality; valid because terms are kept collected.
  bool operator==(const SVec&) const = default;
};

SVec svec_unit(int i, const Rat& c = Rat(1));
SVec svec_from_dense(const std::vector<Rat>& v);
std::vector<Rat> svec_to_dense(const SVec& v, int n);
/// Builds a sparse vector from unsorted, possibly repeated (index, value)
/// pairs; repeated indices are summed and zeros dropped.
SVec svec_collect(std::vector<std::pair<int, Rat>> terms);
SVec svec_add(const SVec& a, const SVec& b);
SVec svec_sub(const SVec& a, const SVec& b);
SVec svec_scale(const Rat& c, const SVec& a);
/// a + c*b
SVec svec_axpy(const SVec& a, const Rat& c, const SVec& b);
/// Tensor of coordinate vectors: index (i, j) -> i * bdim + j.
SVec svec_tensor(const SVec& a, const SVec& b, int bdim);
bool svec_equal(const SVec& a, const SVec& b);

/// Ordered basis of a finite-dimensional Q-vector space. Labels are opaque
/// strings, pairwise distinct.
struct BasedSpace {
  std::vector<std::string> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  bool operator==(const BasedSpace&) const = default;
};

BasedSpace make_space(std::vector<std::string> labels);
/// Space of dimension n with labels "<prefix>0" .. "<prefix>n-1".
BasedSpace numbered_space(int n, const std::string& prefix = "e");
/// Tensor product basis; label of e_i (x) e_j is "(left_i,right_j)",
/// enumerated lexicographically in (left index, right index).
BasedSpace tensor_space(const BasedSpace& a, const BasedSpace& b);

/// Column-sparse matrix: col[j] is the j-th column.
struct SMat {
  int rows = 0;
  int cols = 0;
  std::vector<SVec> col;

  bool operator==(const SMat&) const = default;
};

SMat smat_zero(int rows, int cols);
SMat smat_identity(int n);
SMat smat_from_cols(int rows, std::vector<SVec> cols);
SMat smat_from_dense(const std::vector<std::vector<Rat>>& rows);
std::vector<std::vector<Rat>> smat_to_dense(const SMat& m);
bool smat_equal(const SMat& a, const SMat& b);
bool smat_is_zero(const SMat& a);
SVec smat_apply(const SMat& m, const SVec& v);
SMat smat_mul(const SMat& a, const SMat& b);
/// Kronecker product; indices pair lexicographically (left major), matching
/// tensor_space.
SMat smat_tensor(const SMat& a, const SMat& b);
SMat smat_dsum(const std::vector<SMat>& blocks);
SMat smat_add(const SMat& a, const SMat& b);
SMat smat_scale(const Rat& c, const SMat& a);
SMat smat_transpose(const SMat& m);

/// Linear map between based spaces; m is target-dim x source-dim and column
/// j holds the image of the j-th source basis vector.
struct LinMap {
  BasedSpace source;
  BasedSpace target;
  SMat m;

  bool operator==(const LinMap&) const = default;
};

LinMap lin_zero(const BasedSpace& src, const BasedSpace& tgt);
LinMap lin_identity(const BasedSpace& s);
LinMap lin_from_cols(const BasedSpace& src, const BasedSpace& tgt,
                     std::vector<SVec> cols);
/// f after g (requires g.target.dim == f.source.dim).
LinMap lin_compose(const LinMap& f, const LinMap& g);
LinMap lin_tensor(const LinMap& f, const LinMap& g);
LinMap lin_dsum(const std::vector<LinMap>& maps);
LinMap lin_add(const LinMap& f, const LinMap& g);
LinMap lin_scale(const Rat& c, const LinMap& f);
bool lin_equal(const LinMap& f, const LinMap& g);
SVec lin_apply(const LinMap& f, const SVec& v);

/// Row echelon data: rows are fully reduced (RREF), sorted by pivot column,
/// pivot entries are 1. Pivot columns are canonical for the row space
/// (leftmost-nonzero pivoting).
struct Echelon {
  int ncols = 0;
  std::vector<SVec> rows;
  std::vector<int> pivots;

  /// Reduces v against the stored rows; the remainder has no support on
  /// pivot columns.
  SVec reduce(SVec v) const;
  bool contains(const SVec& v) const { return reduce(v).is_zero(); }
  int rank() const { return static_cast<int>(rows.size()); }
};

/// Incrementally maintained RREF span.
struct SpanBuilder {
  Echelon ech;

  explicit SpanBuilder(int ncols = 0) { ech.ncols = ncols; }
  /// Adds v to the span; returns true if the rank grew.
  bool add(SVec v);
  int rank() const { return ech.rank(); }
};

Echelon rref(const std::vector<SVec>& rows, int ncols);
int rank(const SMat& m);

/// Quotient of ambient by the span of the relation vectors. The quotient
/// basis keeps the ambient labels of the non-pivot columns; the section picks
/// those basis vectors as representatives, so projection . section = id.
struct QuotientSpace {
  BasedSpace ambient;
  BasedSpace quotient;
  LinMap projection; // ambient -> quotient
  LinMap section;    // quotient -> ambient
  std::vector<int> pivot_cols;
};

QuotientSpace quotient_by(const BasedSpace& ambient,
                          const std::vector<SVec>& relations);

/// Basis of ker(f) with its inclusion into f.source; f . inclusion = 0.
/// Kernel basis labels are "k0", "k1", ...
LinMap kernel(const LinMap& f);

std::optional<SMat> smat_inverse(const SMat& m);
bool is_iso(const LinMap& f);
/// Inverse of a certified iso; throws std::invalid_argument otherwise.
LinMap lin_inverse(const LinMap& f);

/// "(a,b)" — the tensor-basis label convention.
std::string pair_label(const std::string& a, const std::string& b);

} // namespace oforge
