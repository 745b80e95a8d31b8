#include "oforge/freeop.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace oforge {

namespace {

void check_level(int n, int pos, int t) {
  if (t < 0 || t == 1)
    throw std::invalid_argument("leveled tree: fiber size " +
                                std::to_string(t));
  if (t > n || pos < 1 || pos > n - t + 1)
    throw std::invalid_argument("leveled tree: level (" + std::to_string(pos) +
                                "," + std::to_string(t) + ") on " +
                                std::to_string(n) + " strands");
}

} // namespace

std::vector<int> strand_counts(const LeveledTree& t) {
  std::vector<int> counts{t.leaves};
  int n = t.leaves;
  for (const auto& [pos, size] : t.levels) {
    check_level(n, pos, size);
    n = n - size + 1;
    counts.push_back(n);
  }
  return counts;
}

Report validate_tree(const LeveledTree& t) {
  Report rep;
  if (t.leaves < 0) rep.fail("negative leaf count");
  if (t.levels.empty()) rep.fail("a tree has at least one level");
  int n = t.leaves;
  for (size_t j = 0; j < t.levels.size(); ++j) {
    auto [pos, size] = t.levels[j];
    std::string where = "level " + std::to_string(j + 1);
    if (size < 0 || size == 1) {
      rep.fail(where + ": fiber size " + std::to_string(size));
      return rep;
    }
    if (size > n || pos < 1 || pos > n - size + 1) {
      rep.fail(where + ": position " + std::to_string(pos) + " invalid on " +
               std::to_string(n) + " strands");
      return rep;
    }
    n = n - size + 1;
  }
  if (!t.levels.empty() && n != 1)
    rep.fail("composite ends at " + std::to_string(n) + " strands, not 1");
  return rep;
}

std::string tree_to_string(const LeveledTree& t) {
  std::ostringstream os;
  os << t.leaves << "[";
  for (const auto& [pos, size] : t.levels) os << "(" << pos << "," << size
                                              << ")";
  os << "]";
  return os.str();
}

std::vector<LeveledTree> enumerate_trees(int leaves, int max_vertices,
                                         const std::set<int>& fiber_sizes) {
  std::vector<LeveledTree> out;
  LeveledTree cur{leaves, {}};
  auto dfs = [&](auto&& self, int n) -> void {
    if (n == 1 && !cur.levels.empty()) out.push_back(cur);
    if (static_cast<int>(cur.levels.size()) >= max_vertices) return;
    for (int t : fiber_sizes) {
      if (t < 0 || t == 1 || t > n) continue;
      for (int pos = 1; pos <= n - t + 1; ++pos) {
        cur.levels.push_back({pos, t});
        self(self, n - t + 1);
        cur.levels.pop_back();
      }
    }
  };
  dfs(dfs, leaves);
  std::sort(out.begin(), out.end(), [](const LeveledTree& a,
                                       const LeveledTree& b) {
    if (a.height() != b.height()) return a.height() < b.height();
    return a < b;
  });
  return out;
}

bool interchange_applicable(const LeveledTree& t, int j) {
  if (j < 1 || j >= t.height()) return false;
  auto [a, tj] = t.levels[static_cast<size_t>(j - 1)];
  auto [b, u] = t.levels[static_cast<size_t>(j)];
  (void)tj;
  return a < b || a >= b + u;
}

LeveledTree interchange(const LeveledTree& t, int j) {
  if (!interchange_applicable(t, j))
    throw std::invalid_argument("interchange not applicable at level " +
                                std::to_string(j));
  auto [a, tt] = t.levels[static_cast<size_t>(j - 1)];
  auto [b, u] = t.levels[static_cast<size_t>(j)];
  LeveledTree out = t;
  if (a < b) {
    out.levels[static_cast<size_t>(j - 1)] = {b + tt - 1, u};
    out.levels[static_cast<size_t>(j)] = {a, tt};
  } else {
    out.levels[static_cast<size_t>(j - 1)] = {b, u};
    out.levels[static_cast<size_t>(j)] = {a - u + 1, tt};
  }
  return out;
}

std::set<LeveledTree> interchange_orbit(const LeveledTree& t) {
  std::set<LeveledTree> seen{t};
  std::deque<LeveledTree> queue{t};
  while (!queue.empty()) {
    LeveledTree cur = queue.front();
    queue.pop_front();
    for (int j = 1; j < cur.height(); ++j) {
      if (!interchange_applicable(cur, j)) continue;
      LeveledTree next = interchange(cur, j);
      if (next.height() != t.height())
        throw std::logic_error("interchange changed the level count");
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

LeveledTree normal_form(const LeveledTree& t) {
  return *interchange_orbit(t).begin();
}

LeveledTree graft(const LeveledTree& t1, int i, const LeveledTree& t2) {
  if (i < 1 || i > t1.leaves)
    throw std::invalid_argument("graft slot " + std::to_string(i) +
                                " out of range");
  LeveledTree out;
  out.leaves = t1.leaves + t2.leaves - 1;
  for (const auto& [pos, size] : t2.levels)
    out.levels.push_back({pos + i - 1, size});
  out.levels.insert(out.levels.end(), t1.levels.begin(), t1.levels.end());
  return out;
}

std::vector<ColorScheme> vertex_schemes(const LeveledTree& t,
                                        const std::vector<Obj>& leaf_colors,
                                        const std::vector<Obj>& internal,
                                        const Obj& output) {
  int k = t.height();
  if (static_cast<int>(leaf_colors.size()) != t.leaves ||
      static_cast<int>(internal.size()) != k - 1)
    throw std::invalid_argument("vertex_schemes: label counts do not match");
  std::vector<ColorScheme> out;
  std::vector<Obj> row = leaf_colors;
  for (int j = 1; j <= k; ++j) {
    auto [pos, size] = t.levels[static_cast<size_t>(j - 1)];
    std::vector<Obj> fiber(row.begin() + (pos - 1),
                           row.begin() + (pos - 1) + size);
    Obj o = j < k ? internal[static_cast<size_t>(j - 1)] : output;
    out.push_back(ColorScheme{fiber, o});
    row.erase(row.begin() + (pos - 1), row.begin() + (pos - 1) + size);
    row.insert(row.begin() + (pos - 1), o);
  }
  return out;
}

namespace {

/// Walks a strand from just above the given level; returns the consuming
/// (level, slot), or {0, 0} for the root edge.
std::pair<int, int> consume_walk(const LeveledTree& t, int from_level,
                                 int pos) {
  for (int l = from_level; l <= t.height(); ++l) {
    auto [il, tl] = t.levels[static_cast<size_t>(l - 1)];
    if (pos >= il && pos <= il + tl - 1) return {l, pos - il + 1};
    if (pos > il) pos = pos - tl + 1;
  }
  return {0, 0};
}

} // namespace

std::pair<int, int> edge_consumer(const LeveledTree& t, int level) {
  if (level < 1 || level > t.height())
    throw std::invalid_argument("edge_consumer: no level " +
                                std::to_string(level));
  if (level == t.height()) return {0, 0};
  int pos = t.levels[static_cast<size_t>(level - 1)].first;
  return consume_walk(t, level + 1, pos);
}

std::pair<int, int> leaf_consumer(const LeveledTree& t, int leaf) {
  if (leaf < 1 || leaf > t.leaves)
    throw std::invalid_argument("leaf_consumer: no leaf " +
                                std::to_string(leaf));
  return consume_walk(t, 1, leaf);
}

namespace {

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/// Lookup key of one ambient basis element.
using AmbKey = std::tuple<int, std::vector<Obj>, std::vector<int>>;

struct ComponentBuild {
  FreeComponent comp;
  std::map<AmbKey, int> index;
};

/// Root-first tensor index of a leaf-first basis choice per level.
std::vector<int> root_first(std::vector<int> leaf_first) {
  std::reverse(leaf_first.begin(), leaf_first.end());
  return leaf_first;
}

} // namespace

FreeNsOperad free_ns(const NsCollection& x, int arity_bound,
                     int weight_bound) {
  Report xr = validate_functor(x);
  if (!xr.ok())
    throw std::invalid_argument("free_ns: generators fail functoriality: " +
                                xr.violations.front());
  const LinearCat& cat = *x.cat;
  std::set<int> fiber_sizes;
  for (const auto& [s, sp] : x.spaces) {
    if (s.arity() == 1)
      throw std::invalid_argument(
          "free_ns: arity-one generators are not representable");
    fiber_sizes.insert(s.arity());
  }

  FreeNsOperad f;
  f.op.carrier.cat = &cat;
  f.op.max_arity = arity_bound;
  f.weight_bound = weight_bound;
  f.grading.weight_bound = weight_bound;

  std::map<int, std::map<LeveledTree, int>> tree_index;
  for (int n = 0; n <= arity_bound; ++n) {
    f.trees[n] = enumerate_trees(n, weight_bound, fiber_sizes);
    for (size_t i = 0; i < f.trees[n].size(); ++i)
      tree_index[n][f.trees[n][i]] = static_cast<int>(i);
  }

  // Ambient spaces: per scheme, all labeled trees with supported vertex
  // spaces, grouped weight-major by the (height, levels) tree order.
  std::map<ColorScheme, ComponentBuild> builds;
  std::vector<ColorScheme> all_schemes;
  {
    std::vector<std::vector<Obj>> tuples{{}};
    for (int n = 0; n <= arity_bound; ++n) {
      for (const std::vector<Obj>& ins : tuples)
        for (const auto& out_obj : cat.objects)
          all_schemes.push_back(ColorScheme{ins, out_obj});
      std::vector<std::vector<Obj>> next;
      for (const std::vector<Obj>& ins : tuples)
        for (const auto& o : cat.objects) {
          std::vector<Obj> w = ins;
          w.push_back(o);
          next.push_back(std::move(w));
        }
      tuples = std::move(next);
    }
  }

  for (const ColorScheme& s : all_schemes) {
    ComponentBuild b;
    int n = s.arity();
    for (int tidx = 0; tidx < static_cast<int>(f.trees[n].size()); ++tidx) {
      const LeveledTree& t = f.trees[n][tidx];
      int k = t.height();
      // Enumerate internal labels level by level, pruning unsupported
      // vertex schemes as soon as they are fixed.
      std::vector<Obj> internal(static_cast<size_t>(k - 1));
      std::vector<ColorScheme> schemes(static_cast<size_t>(k));
      std::vector<Obj> row = s.inputs;
      auto lab = [&](auto&& self, int j, std::vector<Obj> cur_row) -> void {
        auto [pos, size] = t.levels[static_cast<size_t>(j - 1)];
        std::vector<Obj> fiber(cur_row.begin() + (pos - 1),
                               cur_row.begin() + (pos - 1) + size);
        auto descend = [&](const Obj& o) {
          schemes[static_cast<size_t>(j - 1)] = ColorScheme{fiber, o};
          if (x.dim(schemes[static_cast<size_t>(j - 1)]) == 0) return;
          if (j == k) {
            // Complete labeling: emit all vertex basis tuples, root level
            // slowest to match the root-first tensor order.
            std::vector<int> dims;
            for (int l = k; l >= 1; --l)
              dims.push_back(x.dim(schemes[static_cast<size_t>(l - 1)]));
            std::vector<int> tup(dims.size(), 0);
            while (true) {
              std::vector<std::string> vlabels;
              for (size_t q = 0; q < tup.size(); ++q) {
                int level = k - static_cast<int>(q);
                vlabels.push_back(
                    x.space(schemes[static_cast<size_t>(level - 1)])
                        .basis[static_cast<size_t>(tup[q])]);
              }
              std::vector<std::string> icolors(internal.begin(),
                                               internal.end());
              std::string label = tree_to_string(t) + "|" +
                                  join(icolors, ',') + "|" +
                                  join(vlabels, ',');
              b.comp.ambient.basis.push_back(label);
              b.comp.info.push_back(FreeBasisInfo{tidx, internal, tup});
              b.index[{tidx, internal, tup}] =
                  static_cast<int>(b.comp.ambient.basis.size()) - 1;
              int q2 = static_cast<int>(tup.size()) - 1;
              while (q2 >= 0 && tup[static_cast<size_t>(q2)] + 1 ==
                                    dims[static_cast<size_t>(q2)]) {
                tup[static_cast<size_t>(q2)] = 0;
                --q2;
              }
              if (q2 < 0) break;
              ++tup[static_cast<size_t>(q2)];
            }
            return;
          }
          std::vector<Obj> next_row = cur_row;
          next_row.erase(next_row.begin() + (pos - 1),
                         next_row.begin() + (pos - 1) + size);
          next_row.insert(next_row.begin() + (pos - 1), o);
          self(self, j + 1, std::move(next_row));
        };
        if (j == k) {
          if (cur_row.size() != static_cast<size_t>(size))
            throw std::logic_error("free_ns: root level fiber mismatch");
          descend(s.output);
        } else {
          for (const Obj& o : cat.objects) {
            internal[static_cast<size_t>(j - 1)] = o;
            descend(o);
          }
        }
      };
      if (k >= 1) lab(lab, 1, row);
    }
    if (b.comp.ambient.dim() > 0) builds[s] = std::move(b);
  }

  // Relations: interchange and edge-morphism identifications.
  for (auto& [s, b] : builds) {
    int n = s.arity();
    const std::vector<LeveledTree>& ts = f.trees[n];
    // Interchange: identify an element with its level-swapped twin.
    for (int idx = 0; idx < b.comp.ambient.dim(); ++idx) {
      const FreeBasisInfo& info = b.comp.info[static_cast<size_t>(idx)];
      const LeveledTree& t = ts[static_cast<size_t>(info.tree_index)];
      int k = t.height();
      for (int j = 1; j + 1 <= k - 1; ++j) {
        if (!interchange_applicable(t, j)) continue;
        LeveledTree t2 = interchange(t, j);
        std::vector<Obj> internal2 = info.internal;
        std::swap(internal2[static_cast<size_t>(j - 1)],
                  internal2[static_cast<size_t>(j)]);
        std::vector<int> vb2 = info.vertex_basis;
        std::swap(vb2[static_cast<size_t>(k - j - 1)],
                  vb2[static_cast<size_t>(k - j)]);
        auto it = b.index.find({tree_index[n][t2], internal2, vb2});
        if (it == b.index.end())
          throw std::logic_error("free_ns: interchange image missing");
        if (it->second > idx)
          b.comp.relations.push_back(svec_sub(svec_unit(idx),
                                              svec_unit(it->second)));
      }
    }
    // Edge identifications: the producing vertex's output action along f
    // matches the consuming vertex's slot action.
    for (int tidx = 0; tidx < static_cast<int>(ts.size()); ++tidx) {
      const LeveledTree& t = ts[static_cast<size_t>(tidx)];
      int k = t.height();
      for (int p = 1; p <= k - 1; ++p) {
        auto [l, slot] = edge_consumer(t, p);
        for (const std::string& fid : cat.nonidentity_basis()) {
          const auto& fi = cat.info(fid);
          // Enumerate labels of the other edges and bases of the other
          // vertices; prune on the support of unchanged vertices.
          std::vector<Obj> internal(static_cast<size_t>(k - 1));
          auto emit = [&](const std::vector<ColorScheme>& sch_c,
                          const std::vector<ColorScheme>& sch_d) {
            int dim_p_c = x.dim(sch_c[static_cast<size_t>(p - 1)]);
            int dim_l_d = x.dim(sch_d[static_cast<size_t>(l - 1)]);
            if (dim_p_c == 0 || dim_l_d == 0) return;
            LinMap inact =
                x.get_in_act(sch_d[static_cast<size_t>(l - 1)], slot, fid);
            LinMap outact =
                x.get_out_act(sch_c[static_cast<size_t>(p - 1)], fid);
            // Other vertices share schemes between the two labelings.
            std::vector<int> others;
            for (int v = 1; v <= k; ++v)
              if (v != p && v != l) others.push_back(v);
            std::vector<int> dims;
            for (int v : others)
              dims.push_back(x.dim(sch_c[static_cast<size_t>(v - 1)]));
            std::vector<int> rest(dims.size(), 0);
            std::vector<Obj> int_c = internal, int_d = internal;
            int_c[static_cast<size_t>(p - 1)] = fi.src;
            int_d[static_cast<size_t>(p - 1)] = fi.tgt;
            while (true) {
              for (int bq = 0; bq < dim_l_d; ++bq)
                for (int bp = 0; bp < dim_p_c; ++bp) {
                  SVec rel;
                  auto assemble = [&](const std::vector<Obj>& icol, int pv,
                                      int lv, const Rat& c) {
                    std::vector<int> vb(static_cast<size_t>(k));
                    for (size_t q = 0; q < others.size(); ++q)
                      vb[static_cast<size_t>(k - others[q])] = rest[q];
                    vb[static_cast<size_t>(k - p)] = pv;
                    vb[static_cast<size_t>(k - l)] = lv;
                    auto it = b.index.find({tidx, icol, vb});
                    if (it == b.index.end())
                      throw std::logic_error("free_ns: edge image missing");
                    rel = svec_add(rel, svec_scale(c, svec_unit(it->second)));
                  };
                  for (const auto& [row, c] :
                       inact.m.col[static_cast<size_t>(bq)].terms)
                    assemble(int_c, bp, row, c);
                  for (const auto& [row, c] :
                       outact.m.col[static_cast<size_t>(bp)].terms)
                    assemble(int_d, row, bq, -c);
                  if (!rel.terms.empty()) b.comp.relations.push_back(rel);
                }
              int q2 = static_cast<int>(rest.size()) - 1;
              while (q2 >= 0 && rest[static_cast<size_t>(q2)] + 1 ==
                                    dims[static_cast<size_t>(q2)]) {
                rest[static_cast<size_t>(q2)] = 0;
                --q2;
              }
              if (q2 < 0) break;
              ++rest[static_cast<size_t>(q2)];
            }
          };
          // DFS over internal labels; the edge color at p-1 is set to both
          // endpoints of f, and only vertices other than p and l prune.
          auto lab = [&](auto&& self, int j) -> void {
            if (j == k) {
              internal[static_cast<size_t>(p - 1)] = fi.src;
              std::vector<ColorScheme> sch_c;
              try {
                sch_c = vertex_schemes(t, s.inputs, internal, s.output);
              } catch (const std::invalid_argument&) {
                return;
              }
              internal[static_cast<size_t>(p - 1)] = fi.tgt;
              std::vector<ColorScheme> sch_d =
                  vertex_schemes(t, s.inputs, internal, s.output);
              bool ok = true;
              for (int v = 1; v <= k && ok; ++v)
                if (v != p && v != l &&
                    x.dim(sch_c[static_cast<size_t>(v - 1)]) == 0)
                  ok = false;
              if (ok) emit(sch_c, sch_d);
              return;
            }
            if (j == p) {
              self(self, j + 1);
              return;
            }
            for (const Obj& o : cat.objects) {
              internal[static_cast<size_t>(j - 1)] = o;
              self(self, j + 1);
            }
          };
          lab(lab, 1);
        }
      }
    }
    b.comp.q = quotient_by(b.comp.ambient, b.comp.relations);
  }

  // Carrier spaces and the weight grading from the quotient bases.
  for (auto& [s, b] : builds) {
    if (b.comp.q.quotient.dim() == 0) continue;
    f.op.carrier.set_space(s, b.comp.q.quotient);
    std::set<int> pivots(b.comp.q.pivot_cols.begin(),
                         b.comp.q.pivot_cols.end());
    int qi = 0, last_w = -1;
    for (int ai = 0; ai < b.comp.ambient.dim(); ++ai) {
      if (pivots.count(ai)) continue;
      int w = f.trees[s.arity()]
                  [static_cast<size_t>(
                       b.comp.info[static_cast<size_t>(ai)].tree_index)]
                      .height();
      if (w < last_w)
        throw std::logic_error("free_ns: quotient basis not weight sorted");
      auto& range = f.grading.ranges[{s, w}];
      if (w > last_w) range = {qi, 0};
      ++range.second;
      last_w = w;
      ++qi;
    }
  }

  // Input and output actions, induced on classes from the action of the
  // consuming (or root) vertex.
  auto induced = [](const LinMap& amb, const QuotientSpace& src,
                    const QuotientSpace& tgt) {
    return lin_compose(tgt.projection, lin_compose(amb, src.section));
  };
  auto assert_descends = [](const LinMap& amb,
                            const std::vector<SVec>& src_rels,
                            const QuotientSpace& tgt, const char* what) {
    for (const SVec& r : src_rels)
      if (!lin_apply(tgt.projection, lin_apply(amb, r)).terms.empty())
        throw std::logic_error(std::string("free_ns: ") + what +
                               " is not well defined on classes");
  };

  for (auto& [s, b] : builds) {
    if (b.comp.q.quotient.dim() == 0) continue;
    int n = s.arity();
    const std::vector<LeveledTree>& ts = f.trees[n];
    for (const std::string& fid : cat.nonidentity_basis()) {
      const auto& fi = cat.info(fid);
      // Slot actions.
      for (int slot = 1; slot <= n; ++slot) {
        if (s.inputs[static_cast<size_t>(slot - 1)] != fi.tgt) continue;
        ColorScheme s2 = scheme_replace_input(s, slot, fi.src);
        auto tit = builds.find(s2);
        if (tit == builds.end()) continue;
        ComponentBuild& tb = tit->second;
        std::vector<SVec> cols;
        for (int ai = 0; ai < b.comp.ambient.dim(); ++ai) {
          const FreeBasisInfo& info = b.comp.info[static_cast<size_t>(ai)];
          const LeveledTree& t = ts[static_cast<size_t>(info.tree_index)];
          auto [l, vslot] = leaf_consumer(t, slot);
          std::vector<ColorScheme> sch =
              vertex_schemes(t, s.inputs, info.internal, s.output);
          LinMap act =
              x.get_in_act(sch[static_cast<size_t>(l - 1)], vslot, fid);
          int k = t.height();
          int bl = info.vertex_basis[static_cast<size_t>(k - l)];
          SVec col;
          for (const auto& [row, c] :
               act.m.col[static_cast<size_t>(bl)].terms) {
            std::vector<int> vb = info.vertex_basis;
            vb[static_cast<size_t>(k - l)] = row;
            auto it = tb.index.find({info.tree_index, info.internal, vb});
            if (it == tb.index.end())
              throw std::logic_error("free_ns: action image missing");
            col = svec_add(col, svec_scale(c, svec_unit(it->second)));
          }
          cols.push_back(col);
        }
        LinMap amb = lin_from_cols(b.comp.ambient, tb.comp.ambient, cols);
        assert_descends(amb, b.comp.relations, tb.comp.q, "a slot action");
        LinMap ind = induced(amb, b.comp.q, tb.comp.q);
        if (!smat_is_zero(ind.m)) f.op.carrier.set_in_act(s, slot, fid, ind);
      }
      // Output action on the root vertex.
      if (s.output == fi.src) {
        ColorScheme s2 = scheme_replace_output(s, fi.tgt);
        auto tit = builds.find(s2);
        if (tit == builds.end()) continue;
        ComponentBuild& tb = tit->second;
        std::vector<SVec> cols;
        for (int ai = 0; ai < b.comp.ambient.dim(); ++ai) {
          const FreeBasisInfo& info = b.comp.info[static_cast<size_t>(ai)];
          const LeveledTree& t = ts[static_cast<size_t>(info.tree_index)];
          std::vector<ColorScheme> sch =
              vertex_schemes(t, s.inputs, info.internal, s.output);
          int k = t.height();
          LinMap act = x.get_out_act(sch[static_cast<size_t>(k - 1)], fid);
          int br = info.vertex_basis[0];
          SVec col;
          for (const auto& [row, c] :
               act.m.col[static_cast<size_t>(br)].terms) {
            std::vector<int> vb = info.vertex_basis;
            vb[0] = row;
            auto it = tb.index.find({info.tree_index, info.internal, vb});
            if (it == tb.index.end())
              throw std::logic_error("free_ns: action image missing");
            col = svec_add(col, svec_scale(c, svec_unit(it->second)));
          }
          cols.push_back(col);
        }
        LinMap amb = lin_from_cols(b.comp.ambient, tb.comp.ambient, cols);
        assert_descends(amb, b.comp.relations, tb.comp.q, "an output action");
        LinMap ind = induced(amb, b.comp.q, tb.comp.q);
        if (!smat_is_zero(ind.m)) f.op.carrier.set_out_act(s, fid, ind);
      }
    }
  }

  // Compositions by grafting representatives.
  for (const auto& [s, sb] : builds) {
    if (sb.comp.q.quotient.dim() == 0) continue;
    for (const auto& [r, rb] : builds) {
      if (rb.comp.q.quotient.dim() == 0) continue;
      if (s.arity() < 1 || s.arity() + r.arity() - 1 > arity_bound) continue;
      for (int i = 1; i <= s.arity(); ++i) {
        if (s.inputs[static_cast<size_t>(i - 1)] != r.output) continue;
        ColorScheme tgt_scheme = scheme_merge(s, i, r);
        auto tit = builds.find(tgt_scheme);
        const ComponentBuild* tb =
            tit == builds.end() ? nullptr : &tit->second;
        int tgt_amb_dim = tb ? tb->comp.ambient.dim() : 0;
        BasedSpace tgt_amb = tb ? tb->comp.ambient : BasedSpace{};
        (void)tgt_amb_dim;
        std::vector<SVec> cols;
        bool any = false;
        for (int ai = 0; ai < sb.comp.ambient.dim(); ++ai)
          for (int bi = 0; bi < rb.comp.ambient.dim(); ++bi) {
            const FreeBasisInfo& ia = sb.comp.info[static_cast<size_t>(ai)];
            const FreeBasisInfo& ib = rb.comp.info[static_cast<size_t>(bi)];
            const LeveledTree& t1 =
                f.trees[s.arity()][static_cast<size_t>(ia.tree_index)];
            const LeveledTree& t2 =
                f.trees[r.arity()][static_cast<size_t>(ib.tree_index)];
            LeveledTree tg = graft(t1, i, t2);
            if (tg.height() > weight_bound) {
              cols.push_back(SVec{});
              continue;
            }
            if (!tb) throw std::logic_error("free_ns: graft image missing");
            auto trit = tree_index[tg.leaves].find(tg);
            if (trit == tree_index[tg.leaves].end())
              throw std::logic_error("free_ns: grafted tree missing");
            std::vector<Obj> internal = ib.internal;
            internal.push_back(r.output);
            internal.insert(internal.end(), ia.internal.begin(),
                            ia.internal.end());
            std::vector<int> vb = ia.vertex_basis;
            vb.insert(vb.end(), ib.vertex_basis.begin(),
                      ib.vertex_basis.end());
            auto it = tb->index.find({trit->second, internal, vb});
            if (it == tb->index.end())
              throw std::logic_error("free_ns: graft image missing");
            cols.push_back(svec_unit(it->second));
            any = true;
          }
        if (!any || !tb) continue;
        LinMap amb =
            lin_from_cols(tensor_space(sb.comp.ambient, rb.comp.ambient),
                          tb->comp.ambient, cols);
        // Well-definedness in both factors.
        for (const SVec& rel : sb.comp.relations)
          for (int bi = 0; bi < rb.comp.ambient.dim(); ++bi) {
            SVec v = lin_apply(
                amb, svec_tensor(rel, svec_unit(bi), rb.comp.ambient.dim()));
            if (!lin_apply(tb->comp.q.projection, v).terms.empty())
              throw std::logic_error(
                  "free_ns: composition not well defined in the outer factor");
          }
        for (int ai = 0; ai < sb.comp.ambient.dim(); ++ai)
          for (const SVec& rel : rb.comp.relations) {
            SVec v = lin_apply(
                amb, svec_tensor(svec_unit(ai), rel, rb.comp.ambient.dim()));
            if (!lin_apply(tb->comp.q.projection, v).terms.empty())
              throw std::logic_error(
                  "free_ns: composition not well defined in the inner factor");
          }
        LinMap ind = lin_compose(
            tb->comp.q.projection,
            lin_compose(amb, LinMap{tensor_space(sb.comp.q.quotient,
                                                 rb.comp.q.quotient),
                                    tensor_space(sb.comp.ambient,
                                                 rb.comp.ambient),
                                    smat_tensor(sb.comp.q.section.m,
                                                rb.comp.q.section.m)}));
        f.op.set_comp(s, i, r, ind);
      }
    }
  }

  for (auto& [s, b] : builds) f.components[s] = std::move(b.comp);
  return f;
}

SVec generator_class(const FreeNsOperad& f, const ColorScheme& s,
                     int basis_index) {
  auto cit = f.components.find(s);
  if (cit == f.components.end())
    throw std::invalid_argument("generator_class: no component at " +
                                scheme_to_string(s));
  LeveledTree single{s.arity(), {{1, s.arity()}}};
  const std::vector<LeveledTree>& ts = f.trees.at(s.arity());
  int tidx = -1;
  for (size_t i = 0; i < ts.size(); ++i)
    if (ts[i] == single) tidx = static_cast<int>(i);
  if (tidx < 0)
    throw std::invalid_argument("generator_class: single-vertex tree absent");
  FreeBasisInfo want{tidx, {}, {basis_index}};
  for (size_t i = 0; i < cit->second.info.size(); ++i)
    if (cit->second.info[i] == want)
      return lin_apply(cit->second.q.projection,
                       svec_unit(static_cast<int>(i)));
  throw std::invalid_argument("generator_class: basis index out of range");
}

std::map<ColorScheme, LinMap> universal_map(
    const FreeNsOperad& f, const NsOperad& target,
    const std::map<ColorScheme, LinMap>& images) {
  for (const auto& [g, m] : images)
    if (m.m.rows != m.target.dim() || m.m.cols != m.source.dim() ||
        (m.source.dim() != 0 && m.target.dim() != target.dim(g)))
      throw std::invalid_argument("universal_map: image at " +
                                  scheme_to_string(g) + " is mistyped");
  std::map<ColorScheme, LinMap> phi;
  for (const auto& [s, comp] : f.components) {
    if (comp.q.quotient.dim() == 0) continue;
    std::vector<SVec> cols;
    for (int ai = 0; ai < comp.ambient.dim(); ++ai) {
      const FreeBasisInfo& info = comp.info[static_cast<size_t>(ai)];
      const LeveledTree& t =
          f.trees.at(s.arity())[static_cast<size_t>(info.tree_index)];
      std::vector<ColorScheme> sch =
          vertex_schemes(t, s.inputs, info.internal, s.output);
      int k = t.height();
      auto image_of = [&](int level) {
        const ColorScheme& g = sch[static_cast<size_t>(level - 1)];
        auto it = images.find(g);
        if (it == images.end())
          throw std::invalid_argument("universal_map: missing image at " +
                                      scheme_to_string(g));
        return lin_apply(
            it->second,
            svec_unit(info.vertex_basis[static_cast<size_t>(k - level)]));
      };
      SVec z = image_of(k);
      ColorScheme cur = sch[static_cast<size_t>(k - 1)];
      for (int j = k - 1; j >= 1; --j) {
        int slot = t.levels[static_cast<size_t>(j - 1)].first;
        z = target.compose(cur, z, slot, sch[static_cast<size_t>(j - 1)],
                           image_of(j));
        cur = scheme_merge(cur, slot, sch[static_cast<size_t>(j - 1)]);
      }
      if (!(cur == s))
        throw std::logic_error("universal_map: evaluation scheme mismatch");
      cols.push_back(z);
    }
    LinMap amb = lin_from_cols(comp.ambient, target.carrier.space(s), cols);
    for (const SVec& r : comp.relations)
      if (!lin_apply(amb, r).terms.empty())
        throw std::logic_error(
            "universal_map: images do not respect the identifications");
    phi[s] = lin_compose(amb, comp.q.section);
  }
  return phi;
}

Report check_free_morphism(const FreeNsOperad& f, const NsOperad& target,
                           const std::map<ColorScheme, LinMap>& images,
                           const std::map<ColorScheme, LinMap>& phi) {
  Report rep;
  const NsCollection& ns = f.op.carrier;
  auto phi_at = [&](const ColorScheme& s) -> const LinMap* {
    auto it = phi.find(s);
    return it == phi.end() ? nullptr : &it->second;
  };
  // Generators map to their images.
  for (const auto& [g, m] : images) {
    if (ns.dim(g) == 0) continue;
    const LinMap* pg = phi_at(g);
    if (!pg) {
      rep.fail("no component map at " + scheme_to_string(g));
      continue;
    }
    for (int b = 0; b < m.source.dim(); ++b) {
      SVec got = lin_apply(*pg, generator_class(f, g, b));
      if (!svec_equal(got, lin_apply(m, svec_unit(b))))
        rep.fail("generator " + std::to_string(b) + " at " +
                 scheme_to_string(g) + " does not map to its image");
    }
  }
  // Morphism property on compositions.
  for (const auto& [key, cm] : f.op.comp) {
    const auto& [s, i, r] = key;
    const LinMap *ps = phi_at(s), *pr = phi_at(r), *pm =
        phi_at(scheme_merge(s, i, r));
    if (!ps || !pr) continue;
    for (int a = 0; a < ns.dim(s); ++a)
      for (int b = 0; b < ns.dim(r); ++b) {
        SVec left = f.op.compose(s, svec_unit(a), i, r, svec_unit(b));
        SVec via_phi = pm ? lin_apply(*pm, left) : SVec{};
        SVec right =
            target.compose(s, lin_apply(*ps, svec_unit(a)), i, r,
                           lin_apply(*pr, svec_unit(b)));
        if (!svec_equal(via_phi, right))
          rep.fail("composition not respected at " + scheme_to_string(s) +
                   " o_" + std::to_string(i) + " " + scheme_to_string(r));
      }
  }
  // Action intertwining.
  const LinearCat& cat = *ns.cat;
  for (const auto& [s, sp] : ns.spaces) {
    const LinMap* ps = phi_at(s);
    if (!ps) continue;
    for (const std::string& fid : cat.nonidentity_basis()) {
      const auto& fi = cat.info(fid);
      for (int slot = 1; slot <= s.arity(); ++slot) {
        if (s.inputs[static_cast<size_t>(slot - 1)] != fi.tgt) continue;
        ColorScheme s2 = scheme_replace_input(s, slot, fi.src);
        const LinMap* p2 = phi_at(s2);
        LinMap lhs = lin_compose(
            p2 ? *p2
               : lin_zero(ns.space(s2), target.carrier.space(s2)),
            ns.get_in_act(s, slot, fid));
        LinMap rhs =
            lin_compose(target.carrier.get_in_act(s, slot, fid), *ps);
        if (!lin_equal(lhs, rhs))
          rep.fail("slot action not intertwined at " + scheme_to_string(s) +
                   " slot " + std::to_string(slot) + " along " + fid);
      }
      if (s.output == fi.src) {
        ColorScheme s2 = scheme_replace_output(s, fi.tgt);
        const LinMap* p2 = phi_at(s2);
        LinMap lhs = lin_compose(
            p2 ? *p2
               : lin_zero(ns.space(s2), target.carrier.space(s2)),
            ns.get_out_act(s, fid));
        LinMap rhs = lin_compose(target.carrier.get_out_act(s, fid), *ps);
        if (!lin_equal(lhs, rhs))
          rep.fail("output action not intertwined at " + scheme_to_string(s) +
                   " along " + fid);
      }
    }
  }
  return rep;
}

namespace {

/// Layout of one symmetrized component: weight-major, then permutation.
struct SymLayout {
  // (weight, perm) -> start index in the symmetrized component.
  std::map<std::pair<int, Perm>, int> start;
  BasedSpace space;
};

SymLayout sym_layout(const NsOperad& a, const WeightGrading& g,
                     const ColorScheme& s) {
  SymLayout out;
  int n = s.arity();
  std::set<int> weights;
  for (const auto& [key, range] : g.ranges) weights.insert(key.second);
  for (int w : weights)
    for (const Perm& pi : all_perms(n)) {
      ColorScheme sp = scheme_act(s, pi);
      auto it = g.ranges.find({sp, w});
      if (it == g.ranges.end() || it->second.second == 0) continue;
      out.start[{w, pi}] = out.space.dim();
      for (int t = 0; t < it->second.second; ++t)
        out.space.basis.push_back(
            perm_to_string(pi) + "|" +
            a.carrier.space(sp)
                .basis[static_cast<size_t>(it->second.first + t)]);
    }
  return out;
}

/// Re-expresses a vector of the component at `scheme` inside the layout of
/// the symmetrized component, under the given permutation block.
SVec embed_sym(const NsOperad& a, const WeightGrading& g,
               const SymLayout& layout, const ColorScheme& scheme,
               const Perm& pi, const SVec& v) {
  SVec out;
  for (const auto& [idx, c] : v.terms) {
    int w = g.weight_of(scheme, idx);
    auto sit = layout.start.find({w, pi});
    if (w < 0 || sit == layout.start.end())
      throw std::logic_error("symmetrize: ungraded index in an image");
    int local = idx - g.ranges.at({scheme, w}).first;
    out = svec_add(out, svec_scale(c, svec_unit(sit->second + local)));
  }
  return out;
}

} // namespace

SymmetrizedOperad symmetrize(const NsOperad& a, const WeightGrading& g) {
  SymmetrizedOperad out;
  out.op.max_arity = a.max_arity;
  out.op.carrier.ns.cat = a.carrier.cat;
  out.grading.weight_bound = g.weight_bound;
  const LinearCat& cat = a.cat();

  // Supported schemes: the permutation orbits of a's supported schemes.
  std::set<ColorScheme> schemes;
  for (const auto& [t, sp] : a.carrier.spaces)
    for (const Perm& pi : all_perms(t.arity()))
      schemes.insert(scheme_act(t, pi));

  std::map<ColorScheme, SymLayout> layouts;
  for (const ColorScheme& s : schemes) {
    SymLayout l = sym_layout(a, g, s);
    if (l.space.dim() == 0) continue;
    out.op.carrier.ns.set_space(s, l.space);
    // Transferred grading: the weight blocks stay contiguous.
    int pos = 0;
    std::set<int> weights;
    for (const auto& [key, start] : l.start) weights.insert(key.first);
    for (int w : weights) {
      int len = 0;
      for (const auto& [key, start] : l.start)
        if (key.first == w) {
          ColorScheme sp = scheme_act(s, key.second);
          len += g.ranges.at({sp, w}).second;
        }
      out.grading.ranges[{s, w}] = {pos, len};
      pos += len;
    }
    layouts[s] = std::move(l);
  }

  // Right permutation action: block pi of S moves to block sigma^{-1} pi
  // of S sigma, identically.
  for (const auto& [s, layout] : layouts) {
    int n = s.arity();
    for (const Perm& sg : all_perms(n)) {
      if (is_identity(sg)) continue;
      ColorScheme ss = scheme_act(s, sg);
      const SymLayout& tl = layouts.at(ss);
      Perm sg_inv = perm_inverse(sg);
      std::vector<SVec> cols(static_cast<size_t>(layout.space.dim()));
      for (const auto& [key, start] : layout.start) {
        const auto& [w, pi] = key;
        Perm rho = perm_compose(sg_inv, pi);
        int tstart = tl.start.at({w, rho});
        ColorScheme sp = scheme_act(s, pi);
        int len = g.ranges.at({sp, w}).second;
        for (int t = 0; t < len; ++t)
          cols[static_cast<size_t>(start + t)] = svec_unit(tstart + t);
      }
      out.op.carrier.set_sigma(
          s, sg, lin_from_cols(layout.space, tl.space, cols));
    }
  }

  // Input and output actions, blockwise through the permuted slot.
  for (const auto& [s, layout] : layouts) {
    int n = s.arity();
    for (const std::string& fid : cat.nonidentity_basis()) {
      const auto& fi = cat.info(fid);
      for (int slot = 1; slot <= n; ++slot) {
        if (s.inputs[static_cast<size_t>(slot - 1)] != fi.tgt) continue;
        ColorScheme s2 = scheme_replace_input(s, slot, fi.src);
        auto tit = layouts.find(s2);
        if (tit == layouts.end()) continue;
        std::vector<SVec> cols(static_cast<size_t>(layout.space.dim()));
        for (const auto& [key, start] : layout.start) {
          const auto& [w, pi] = key;
          ColorScheme sp = scheme_act(s, pi);
          ColorScheme sp2 = scheme_act(s2, pi);
          Perm pinv = perm_inverse(pi);
          LinMap act = a.carrier.get_in_act(sp, pinv(slot), fid);
          int first = g.ranges.at({sp, w}).first;
          int len = g.ranges.at({sp, w}).second;
          for (int t = 0; t < len; ++t)
            cols[static_cast<size_t>(start + t)] = embed_sym(
                a, g, tit->second, sp2, pi,
                lin_apply(act, svec_unit(first + t)));
        }
        LinMap m = lin_from_cols(layout.space, tit->second.space, cols);
        if (!smat_is_zero(m.m))
          out.op.carrier.ns.set_in_act(s, slot, fid, m);
      }
      if (s.output == fi.src) {
        ColorScheme s2 = scheme_replace_output(s, fi.tgt);
        auto tit = layouts.find(s2);
        if (tit == layouts.end()) continue;
        std::vector<SVec> cols(static_cast<size_t>(layout.space.dim()));
        for (const auto& [key, start] : layout.start) {
          const auto& [w, pi] = key;
          ColorScheme sp = scheme_act(s, pi);
          ColorScheme sp2 = scheme_act(s2, pi);
          LinMap act = a.carrier.get_out_act(sp, fid);
          int first = g.ranges.at({sp, w}).first;
          int len = g.ranges.at({sp, w}).second;
          for (int t = 0; t < len; ++t)
            cols[static_cast<size_t>(start + t)] = embed_sym(
                a, g, tit->second, sp2, pi,
                lin_apply(act, svec_unit(first + t)));
        }
        LinMap m = lin_from_cols(layout.space, tit->second.space, cols);
        if (!smat_is_zero(m.m)) out.op.carrier.ns.set_out_act(s, fid, m);
      }
    }
  }

  // Composition: block (pi, rho) lands in the slotwise insertion block.
  for (const auto& [s, slay] : layouts)
    for (const auto& [r, rlay] : layouts) {
      int n = s.arity(), m = r.arity();
      if (n < 1 || n + m - 1 > a.max_arity) continue;
      for (int i = 1; i <= n; ++i) {
        if (s.inputs[static_cast<size_t>(i - 1)] != r.output) continue;
        ColorScheme tgt = scheme_merge(s, i, r);
        auto tit = layouts.find(tgt);
        if (tit == layouts.end()) continue;
        std::vector<SVec> cols(
            static_cast<size_t>(slay.space.dim() * rlay.space.dim()));
        for (const auto& [skey, sstart] : slay.start) {
          const auto& [w1, pi] = skey;
          ColorScheme sp = scheme_act(s, pi);
          Perm pinv = perm_inverse(pi);
          int sfirst = g.ranges.at({sp, w1}).first;
          int slen = g.ranges.at({sp, w1}).second;
          for (const auto& [rkey, rstart] : rlay.start) {
            const auto& [w2, rho] = rkey;
            ColorScheme rp = scheme_act(r, rho);
            int rfirst = g.ranges.at({rp, w2}).first;
            int rlen = g.ranges.at({rp, w2}).second;
            Perm ins = perm_insert(pi, pinv(i), rho);
            ColorScheme tgt_p = scheme_merge(sp, pinv(i), rp);
            for (int t1 = 0; t1 < slen; ++t1)
              for (int t2 = 0; t2 < rlen; ++t2) {
                SVec v = a.compose(sp, svec_unit(sfirst + t1), pinv(i), rp,
                                   svec_unit(rfirst + t2));
                cols[static_cast<size_t>((sstart + t1) * rlay.space.dim() +
                                         rstart + t2)] =
                    embed_sym(a, g, tit->second, tgt_p, ins, v);
              }
          }
        }
        out.op.set_comp(s, i, r,
                        lin_from_cols(tensor_space(slay.space, rlay.space),
                                      tit->second.space, cols));
      }
    }
  return out;
}

COperad symmetrize(const NsOperad& a) {
  WeightGrading g0;
  g0.weight_bound = 0;
  for (const auto& [s, sp] : a.carrier.spaces)
    g0.ranges[{s, 0}] = {0, sp.dim()};
  return symmetrize(a, g0).op;
}

SymmetrizedOperad symmetrize(const FreeNsOperad& f) {
  return symmetrize(f.op, f.grading);
}

SVec symmetrize_embed(const NsOperad& a, const WeightGrading& g,
                      const ColorScheme& s, const SVec& v) {
  SymLayout l = sym_layout(a, g, s);
  return embed_sym(a, g, l, s, perm_identity(s.arity()), v);
}

std::map<ColorScheme, LinMap> symmetrize_morphism(
    const NsOperad& a, const WeightGrading& g, const COperad& target,
    const std::map<ColorScheme, LinMap>& phi) {
  std::map<ColorScheme, LinMap> out;
  std::set<ColorScheme> schemes;
  for (const auto& [t, sp] : a.carrier.spaces)
    for (const Perm& pi : all_perms(t.arity()))
      schemes.insert(scheme_act(t, pi));
  for (const ColorScheme& s : schemes) {
    SymLayout l = sym_layout(a, g, s);
    if (l.space.dim() == 0) continue;
    const BasedSpace& tgt = target.carrier.ns.space(s);
    std::vector<SVec> cols(static_cast<size_t>(l.space.dim()));
    for (const auto& [key, start] : l.start) {
      const auto& [w, pi] = key;
      ColorScheme sp = scheme_act(s, pi);
      auto pit = phi.find(sp);
      if (pit == phi.end()) continue;
      LinMap back = target.carrier.get_sigma(sp, perm_inverse(pi));
      LinMap block = lin_compose(back, pit->second);
      auto range = g.ranges.at({sp, w});
      for (int t = 0; t < range.second; ++t)
        cols[static_cast<size_t>(start + t)] =
            block.m.col[static_cast<size_t>(range.first + t)];
    }
    out[s] = lin_from_cols(l.space, tgt, std::move(cols));
  }
  return out;
}

UnitalCOperad adjoin_unit(const COperad& p) {
  UnitalCOperad out;
  out.base = p;
  out.base.max_arity = std::max(p.max_arity, 1);
  const LinearCat& cat = p.cat();
  NsCollection& ns = out.base.carrier.ns;

  // Extend every arity-one component by the hom space.
  std::map<ColorScheme, int> old_dim;
  for (const Obj& a : cat.objects)
    for (const Obj& b : cat.objects) {
      ColorScheme s{{a}, b};
      auto hom = cat.hom_ids(a, b);
      old_dim[s] = p.dim(s);
      if (old_dim[s] + static_cast<int>(hom.size()) == 0) continue;
      BasedSpace sp = ns.space(s);
      for (const std::string& fid : hom) sp.basis.push_back("u_" + fid);
      ns.set_space(s, sp);
      for (size_t h = 0; h < hom.size(); ++h)
        out.units[hom[h]] = svec_unit(old_dim[s] + static_cast<int>(h));
    }

  // Arity-one actions extend by pre- and post-composition on the unit part.
  for (const Obj& a : cat.objects)
    for (const Obj& b : cat.objects) {
      ColorScheme s{{a}, b};
      if (ns.dim(s) == 0) continue;
      auto hom = cat.hom_ids(a, b);
      auto hom_index = [&](const std::vector<std::string>& ids,
                           const std::string& id) {
        for (size_t h = 0; h < ids.size(); ++h)
          if (ids[h] == id) return static_cast<int>(h);
        throw std::logic_error("adjoin_unit: missing hom basis element");
      };
      for (const std::string& fid : cat.nonidentity_basis()) {
        const auto& fi = cat.info(fid);
        if (fi.tgt == a) {
          ColorScheme s2{{fi.src}, b};
          auto hom2 = cat.hom_ids(fi.src, b);
          std::vector<SVec> cols;
          LinMap oldact = p.carrier.ns.get_in_act(s, 1, fid);
          for (int c = 0; c < old_dim[s]; ++c)
            cols.push_back(lin_apply(oldact, svec_unit(c)));
          for (const std::string& gid : hom) {
            SVec col;
            for (const auto& [hid, coef] : cat.compose_basis(gid, fid))
              col = svec_add(
                  col, svec_scale(coef, svec_unit(old_dim[s2] +
                                                  hom_index(hom2, hid))));
            cols.push_back(col);
          }
          LinMap m = lin_from_cols(ns.space(s), ns.space(s2), cols);
          if (!smat_is_zero(m.m)) ns.in_act[{s, 1, fid}] = m;
        }
        if (fi.src == b) {
          ColorScheme s2{{a}, fi.tgt};
          auto hom2 = cat.hom_ids(a, fi.tgt);
          std::vector<SVec> cols;
          LinMap oldact = p.carrier.ns.get_out_act(s, fid);
          for (int c = 0; c < old_dim[s]; ++c)
            cols.push_back(lin_apply(oldact, svec_unit(c)));
          for (const std::string& gid : hom) {
            SVec col;
            for (const auto& [hid, coef] : cat.compose_basis(fid, gid))
              col = svec_add(
                  col, svec_scale(coef, svec_unit(old_dim[s2] +
                                                  hom_index(hom2, hid))));
            cols.push_back(col);
          }
          LinMap m = lin_from_cols(ns.space(s), ns.space(s2), cols);
          if (!smat_is_zero(m.m)) ns.out_act[{s, fid}] = m;
        }
      }
    }

  // Compositions touching an arity-one factor: units act by the stored
  // input and output actions; the old part keeps the old composition.
  std::vector<CompKey> keys;
  for (const auto& [s, ssp] : ns.spaces)
    for (const auto& [r, rsp] : ns.spaces) {
      if (s.arity() < 1 ||
          s.arity() + r.arity() - 1 > out.base.max_arity)
        continue;
      if (s.arity() != 1 && r.arity() != 1) continue;
      for (int i = 1; i <= s.arity(); ++i)
        if (s.inputs[static_cast<size_t>(i - 1)] == r.output)
          keys.push_back({s, i, r});
    }
  for (const CompKey& key : keys) {
    const auto& [s, i, r] = key;
    ColorScheme tgt = scheme_merge(s, i, r);
    auto hom_s = s.arity() == 1 ? cat.hom_ids(s.inputs[0], s.output)
                                : std::vector<std::string>{};
    auto hom_r = r.arity() == 1 ? cat.hom_ids(r.inputs[0], r.output)
                                : std::vector<std::string>{};
    int od_s = s.arity() == 1 ? old_dim[s] : ns.dim(s);
    int od_r = r.arity() == 1 ? old_dim[r] : ns.dim(r);
    LinMap old_comp = p.get_comp(s, i, r);
    std::vector<SVec> cols;
    for (int xa = 0; xa < ns.dim(s); ++xa)
      for (int yb = 0; yb < ns.dim(r); ++yb) {
        if (yb >= od_r) {
          const std::string& gid = hom_r[static_cast<size_t>(yb - od_r)];
          cols.push_back(
              lin_apply(ns.get_in_act(s, i, gid), svec_unit(xa)));
        } else if (xa >= od_s) {
          const std::string& fid = hom_s[static_cast<size_t>(xa - od_s)];
          cols.push_back(lin_apply(ns.get_out_act(r, fid), svec_unit(yb)));
        } else {
          cols.push_back(
              lin_apply(old_comp, svec_tensor(svec_unit(xa), svec_unit(yb),
                                              p.dim(r))));
        }
      }
    LinMap m =
        lin_from_cols(tensor_space(ns.space(s), ns.space(r)), ns.space(tgt),
                      cols);
    out.base.comp.erase(key);
    out.base.set_comp(s, i, r, m);
  }
  return out;
}

} // namespace oforge
