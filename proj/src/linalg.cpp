#include "oforge/linalg.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace oforge {

Rat SVec::get(int i) const {
  auto it = std::lower_bound(
      terms.begin(), terms.end(), i,
      [](const std::pair<int, Rat>& t, int k) { return t.first < k; });
  if (it != terms.end() && it->first == i) return it->second;
  return Rat(0);
}

SVec svec_unit(int i, const Rat& c) {
  SVec v;
  if (c != 0) v.terms.emplace_back(i, c);
  return v;
}

SVec svec_from_dense(const std::vector<Rat>& v) {
  SVec r;
  for (int i = 0; i < static_cast<int>(v.size()); ++i)
    if (v[i] != 0) r.terms.emplace_back(i, v[i]);
  return r;
}

std::vector<Rat> svec_to_dense(const SVec& v, int n) {
  std::vector<Rat> r(n, Rat(0));
  for (const auto& [i, c] : v.terms) r[i] = c;
  return r;
}

SVec svec_collect(std::vector<std::pair<int, Rat>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SVec r;
  for (auto& [i, c] : terms) {
    if (!r.terms.empty() && r.terms.back().first == i)
      r.terms.back().second += c;
    else
      r.terms.emplace_back(i, c);
  }
  std::erase_if(r.terms, [](const auto& t) { return t.second == 0; });
  return r;
}

SVec svec_axpy(const SVec& a, const Rat& c, const SVec& b) {
  if (c == 0) return a;
  SVec r;
  r.terms.reserve(a.terms.size() + b.terms.size());
  size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() ||
        (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      r.terms.push_back(a.terms[i++]);
    } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
      Rat v = c * b.terms[j].second;
      if (v != 0) r.terms.emplace_back(b.terms[j].first, v);
      ++j;
    } else {
      Rat v = a.terms[i].second + c * b.terms[j].second;
      if (v != 0) r.terms.emplace_back(a.terms[i].first, v);
      ++i;
      ++j;
    }
  }
  return r;
}

SVec svec_add(const SVec& a, const SVec& b) { return svec_axpy(a, Rat(1), b); }
SVec svec_sub(const SVec& a, const SVec& b) { return svec_axpy(a, Rat(-1), b); }

SVec svec_tensor(const SVec& a, const SVec& b, int bdim) {
  SVec r;
  r.terms.reserve(a.terms.size() * b.terms.size());
  for (const auto& [i, u] : a.terms)
    for (const auto& [j, v] : b.terms) r.terms.push_back({i * bdim + j, u * v});
  return svec_collect(std::move(r.terms));
}

SVec svec_scale(const Rat& c, const SVec& a) {
  SVec r;
  if (c == 0) return r;
  r.terms.reserve(a.terms.size());
  for (const auto& [i, v] : a.terms) r.terms.emplace_back(i, c * v);
  return r;
}

bool svec_equal(const SVec& a, const SVec& b) { return a.terms == b.terms; }

BasedSpace make_space(std::vector<std::string> labels) {
  return BasedSpace{std::move(labels)};
}

BasedSpace numbered_space(int n, const std::string& prefix) {
  BasedSpace s;
  s.basis.reserve(n);
  for (int i = 0; i < n; ++i) s.basis.push_back(prefix + std::to_string(i));
  return s;
}

std::string pair_label(const std::string& a, const std::string& b) {
  return "(" + a + "," + b + ")";
}

BasedSpace tensor_space(const BasedSpace& a, const BasedSpace& b) {
  BasedSpace s;
  s.basis.reserve(static_cast<size_t>(a.dim()) * b.dim());
  for (const auto& x : a.basis)
    for (const auto& y : b.basis) s.basis.push_back(pair_label(x, y));
  return s;
}

SMat smat_zero(int rows, int cols) {
  SMat m;
  m.rows = rows;
  m.cols = cols;
  m.col.resize(cols);
  return m;
}

SMat smat_identity(int n) {
  SMat m = smat_zero(n, n);
  for (int i = 0; i < n; ++i) m.col[i] = svec_unit(i);
  return m;
}

SMat smat_from_cols(int rows, std::vector<SVec> cols) {
  SMat m;
  m.rows = rows;
  m.cols = static_cast<int>(cols.size());
  m.col = std::move(cols);
  return m;
}

SMat smat_from_dense(const std::vector<std::vector<Rat>>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
  SMat m = smat_zero(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw std::invalid_argument("ragged dense matrix");
    for (int j = 0; j < c; ++j)
      if (rows[i][j] != 0) m.col[j].terms.emplace_back(i, rows[i][j]);
  }
  return m;
}

std::vector<std::vector<Rat>> smat_to_dense(const SMat& m) {
  std::vector<std::vector<Rat>> d(m.rows, std::vector<Rat>(m.cols, Rat(0)));
  for (int j = 0; j < m.cols; ++j)
    for (const auto& [i, v] : m.col[j].terms) d[i][j] = v;
  return d;
}

bool smat_equal(const SMat& a, const SMat& b) {
  return a.rows == b.rows && a.cols == b.cols && a.col == b.col;
}

bool smat_is_zero(const SMat& a) {
  for (const auto& c : a.col)
    if (!c.is_zero()) return false;
  return true;
}

SVec smat_apply(const SMat& m, const SVec& v) {
  SVec r;
  for (const auto& [j, c] : v.terms) {
    if (j < 0 || j >= m.cols) throw std::invalid_argument("apply: index range");
    r = svec_axpy(r, c, m.col[j]);
  }
  return r;
}

SMat smat_mul(const SMat& a, const SMat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mul: shape mismatch");
  SMat m = smat_zero(a.rows, b.cols);
  for (int j = 0; j < b.cols; ++j) m.col[j] = smat_apply(a, b.col[j]);
  return m;
}

SMat smat_tensor(const SMat& a, const SMat& b) {
  SMat m = smat_zero(a.rows * b.rows, a.cols * b.cols);
  for (int ja = 0; ja < a.cols; ++ja)
    for (int jb = 0; jb < b.cols; ++jb) {
      SVec& c = m.col[ja * b.cols + jb];
      std::vector<std::pair<int, Rat>> terms;
      terms.reserve(a.col[ja].terms.size() * b.col[jb].terms.size());
      for (const auto& [ia, va] : a.col[ja].terms)
        for (const auto& [ib, vb] : b.col[jb].terms)
          terms.emplace_back(ia * b.rows + ib, va * vb);
      c = svec_collect(std::move(terms));
    }
  return m;
}

SMat smat_dsum(const std::vector<SMat>& blocks) {
  int r = 0, c = 0;
  for (const auto& b : blocks) {
    r += b.rows;
    c += b.cols;
  }
  SMat m = smat_zero(r, c);
  int ro = 0, co = 0;
  for (const auto& b : blocks) {
    for (int j = 0; j < b.cols; ++j) {
      SVec col;
      col.terms.reserve(b.col[j].terms.size());
      for (const auto& [i, v] : b.col[j].terms)
        col.terms.emplace_back(i + ro, v);
      m.col[co + j] = std::move(col);
    }
    ro += b.rows;
    co += b.cols;
  }
  return m;
}

SMat smat_add(const SMat& a, const SMat& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("add: shape mismatch");
  SMat m = smat_zero(a.rows, a.cols);
  for (int j = 0; j < a.cols; ++j) m.col[j] = svec_add(a.col[j], b.col[j]);
  return m;
}

SMat smat_scale(const Rat& c, const SMat& a) {
  SMat m = smat_zero(a.rows, a.cols);
  for (int j = 0; j < a.cols; ++j) m.col[j] = svec_scale(c, a.col[j]);
  return m;
}

SMat smat_transpose(const SMat& m) {
  SMat t = smat_zero(m.cols, m.rows);
  for (int j = 0; j < m.cols; ++j)
    for (const auto& [i, v] : m.col[j].terms) t.col[i].terms.emplace_back(j, v);
  return t;
}

LinMap lin_zero(const BasedSpace& src, const BasedSpace& tgt) {
  return LinMap{src, tgt, smat_zero(tgt.dim(), src.dim())};
}

LinMap lin_identity(const BasedSpace& s) {
  return LinMap{s, s, smat_identity(s.dim())};
}

LinMap lin_from_cols(const BasedSpace& src, const BasedSpace& tgt,
                     std::vector<SVec> cols) {
  if (static_cast<int>(cols.size()) != src.dim())
    throw std::invalid_argument("lin_from_cols: column count");
  return LinMap{src, tgt, smat_from_cols(tgt.dim(), std::move(cols))};
}

LinMap lin_compose(const LinMap& f, const LinMap& g) {
  if (g.target.dim() != f.source.dim())
    throw std::invalid_argument("compose: shape mismatch");
  return LinMap{g.source, f.target, smat_mul(f.m, g.m)};
}

LinMap lin_tensor(const LinMap& f, const LinMap& g) {
  return LinMap{tensor_space(f.source, g.source),
                tensor_space(f.target, g.target), smat_tensor(f.m, g.m)};
}

LinMap lin_dsum(const std::vector<LinMap>& maps) {
  BasedSpace src, tgt;
  std::vector<SMat> blocks;
  blocks.reserve(maps.size());
  for (const auto& f : maps) {
    src.basis.insert(src.basis.end(), f.source.basis.begin(),
                     f.source.basis.end());
    tgt.basis.insert(tgt.basis.end(), f.target.basis.begin(),
                     f.target.basis.end());
    blocks.push_back(f.m);
  }
  return LinMap{std::move(src), std::move(tgt), smat_dsum(blocks)};
}

LinMap lin_add(const LinMap& f, const LinMap& g) {
  return LinMap{f.source, f.target, smat_add(f.m, g.m)};
}

LinMap lin_scale(const Rat& c, const LinMap& f) {
  return LinMap{f.source, f.target, smat_scale(c, f.m)};
}

bool lin_equal(const LinMap& f, const LinMap& g) {
  return smat_equal(f.m, g.m);
}

SVec lin_apply(const LinMap& f, const SVec& v) { return smat_apply(f.m, v); }

SVec Echelon::reduce(SVec v) const {
  for (size_t r = 0; r < rows.size(); ++r) {
    Rat c = v.get(pivots[r]);
    if (c != 0) v = svec_axpy(v, -c, rows[r]);
  }
  return v;
}

bool SpanBuilder::add(SVec v) {
  v = ech.reduce(std::move(v));
  if (v.is_zero()) return false;
  int p = v.lead();
  v = svec_scale(Rat(1) / v.get(p), v);
  for (auto& row : ech.rows) {
    Rat c = row.get(p);
    if (c != 0) row = svec_axpy(row, -c, v);
  }
  auto pos = std::lower_bound(ech.pivots.begin(), ech.pivots.end(), p);
  size_t idx = pos - ech.pivots.begin();
  ech.pivots.insert(pos, p);
  ech.rows.insert(ech.rows.begin() + idx, std::move(v));
  return true;
}

Echelon rref(const std::vector<SVec>& rows, int ncols) {
  SpanBuilder b(ncols);
  for (const auto& r : rows) b.add(r);
  return b.ech;
}

int rank(const SMat& m) {
  SpanBuilder b(m.rows);
  for (const auto& c : m.col) b.add(c);
  return b.rank();
}

QuotientSpace quotient_by(const BasedSpace& ambient,
                          const std::vector<SVec>& relations) {
  int n = ambient.dim();
  for (const auto& r : relations)
    if (!r.terms.empty() && r.terms.back().first >= n)
      throw std::invalid_argument("quotient_by: relation exceeds ambient dim");
  Echelon e = rref(relations, n);

  std::vector<int> is_pivot(n, 0);
  for (int p : e.pivots) is_pivot[p] = 1;
  std::vector<int> free_cols;
  std::vector<int> pos(n, -1);
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) {
      pos[j] = static_cast<int>(free_cols.size());
      free_cols.push_back(j);
    }

  QuotientSpace q;
  q.ambient = ambient;
  q.pivot_cols = e.pivots;
  for (int j : free_cols) q.quotient.basis.push_back(ambient.basis[j]);

  int qd = static_cast<int>(free_cols.size());
  std::vector<SVec> proj_cols(n);
  for (int j = 0; j < n; ++j)
    if (!is_pivot[j]) proj_cols[j] = svec_unit(pos[j]);
  for (size_t r = 0; r < e.rows.size(); ++r) {
    int p = e.pivots[r];
    SVec img;
    for (const auto& [j, c] : e.rows[r].terms)
      if (j != p) img = svec_axpy(img, -c, svec_unit(pos[j]));
    proj_cols[p] = std::move(img);
  }
  q.projection = LinMap{ambient, q.quotient,
                        smat_from_cols(qd, std::move(proj_cols))};

  std::vector<SVec> sec_cols(qd);
  for (int k = 0; k < qd; ++k) sec_cols[k] = svec_unit(free_cols[k]);
  q.section = LinMap{q.quotient, ambient, smat_from_cols(n, std::move(sec_cols))};
  return q;
}

LinMap kernel(const LinMap& f) {
  int n = f.source.dim();
  std::vector<SVec> eq_rows;
  {
    SMat t = smat_transpose(f.m);
    eq_rows = t.col;
  }
  Echelon e = rref(eq_rows, n);
  std::vector<int> is_pivot(n, 0);
  for (int p : e.pivots) is_pivot[p] = 1;

  std::vector<SVec> basis_vecs;
  for (int j = 0; j < n; ++j) {
    if (is_pivot[j]) continue;
    std::vector<std::pair<int, Rat>> terms;
    terms.emplace_back(j, Rat(1));
    for (size_t r = 0; r < e.rows.size(); ++r) {
      Rat c = e.rows[r].get(j);
      if (c != 0) terms.emplace_back(e.pivots[r], -c);
    }
    basis_vecs.push_back(svec_collect(std::move(terms)));
  }
  BasedSpace ker = numbered_space(static_cast<int>(basis_vecs.size()), "k");
  return LinMap{ker, f.source, smat_from_cols(n, std::move(basis_vecs))};
}

std::optional<SMat> smat_inverse(const SMat& m) {
  if (m.rows != m.cols) return std::nullopt;
  int n = m.rows;
  // Gauss-Jordan on rows of [m | I].
  std::vector<SVec> rows(n), aug(n);
  {
    SMat t = smat_transpose(m);
    rows = t.col;
  }
  for (int i = 0; i < n; ++i) aug[i] = svec_unit(i);

  std::vector<int> pivot_of_col(n, -1);
  std::vector<int> done(n, 0);
  for (int j = 0; j < n; ++j) {
    int pr = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && rows[i].get(j) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) return std::nullopt;
    Rat inv = Rat(1) / rows[pr].get(j);
    rows[pr] = svec_scale(inv, rows[pr]);
    aug[pr] = svec_scale(inv, aug[pr]);
    for (int i = 0; i < n; ++i) {
      if (i == pr) continue;
      Rat c = rows[i].get(j);
      if (c != 0) {
        rows[i] = svec_axpy(rows[i], -c, rows[pr]);
        aug[i] = svec_axpy(aug[i], -c, aug[pr]);
      }
    }
    done[pr] = 1;
    pivot_of_col[j] = pr;
  }
  // Row pivot_of_col[j] of the reduced system is e_j; its augmented part is
  // row j of the inverse.
  SMat inv = smat_zero(n, n);
  for (int j = 0; j < n; ++j)
    for (const auto& [k, v] : aug[pivot_of_col[j]].terms)
      inv.col[k].terms.emplace_back(j, v);
  for (auto& c : inv.col)
    std::sort(c.terms.begin(), c.terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  return inv;
}

bool is_iso(const LinMap& f) {
  if (f.source.dim() != f.target.dim()) return false;
  return smat_inverse(f.m).has_value();
}

LinMap lin_inverse(const LinMap& f) {
  auto inv = smat_inverse(f.m);
  if (!inv) throw std::invalid_argument("lin_inverse: not invertible");
  return LinMap{f.target, f.source, *inv};
}

} // namespace oforge
