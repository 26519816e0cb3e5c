#pragma once

#include "reso/equation.hpp"
#include "reso/hopf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace testing {

using namespace reso;

inline Tree tree(const std::string& s) { return parse_tree_text(s); }

// Trees as drawn in the coproduct display: the letter with leaves k1 (conj),
// k2, k3 and the nested tree grafting it next to k4 (conj) and k5.
inline Tree letter_t1() { return tree("I[t2,0](-k1+k2+k3; I[t1,1](k1), I[t1,0](k2), I[t1,0](k3))"); }
inline Tree nested() {
  return tree(
      "I[t2,0](-k1+k2+k3-k4+k5; I[t1,1](k4), I[t1,0](k5), "
      "I[t1,0](-k1+k2+k3; I[t2,0](-k1+k2+k3; I[t1,1](k1), I[t1,0](k2), I[t1,0](k3))))");
}
inline Tree root_letter() { return tree("I[t2,0](-k1+k2+k3-k4+k5; I[t1,1](k4), I[t1,0](k5), I[t1,0](-k1+k2+k3))"); }

inline const SeriesTree& series(const std::vector<SeriesTree>& ts, const std::string& name) {
  for (auto& s : ts)
    if (s.name == name) return s;
  throw std::runtime_error("no tree " + name);
}

/// Planar edge-decorated tree without node frequencies, built independently
/// of the library's canonical forms.
struct Plain {
  EdgeDeco edge;
  std::vector<Plain> children;
};

inline int plain_edges(const Plain& p) {
  int n = 1;
  for (auto& c : p.children) n += plain_edges(c);
  return n;
}

inline Tree to_tree(const Plain& p) {
  std::vector<Tree> ch;
  for (auto& c : p.children) ch.push_back(to_tree(c));
  return Tree(p.edge, FreqVector{}, std::move(ch));
}

/// Number of isomorphisms a -> b by trying every child permutation.
inline long long iso_count(const Plain& a, const Plain& b) {
  if (a.edge != b.edge || a.children.size() != b.children.size()) return 0;
  const std::size_t n = a.children.size();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  long long total = 0;
  do {
    long long prod = 1;
    for (std::size_t i = 0; i < n && prod; ++i) prod *= iso_count(a.children[i], b.children[perm[i]]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// All conforming planar trees with at most `max_edges` edges, up to
/// reordering of children (children emitted in nondecreasing index order of
/// a fixed enumeration, so each non-planar tree appears once).
class PlainEnumerator {
 public:
  explicit PlainEnumerator(int max_edges) : max_(max_edges) {
    for (int e = 1; e <= max_; ++e) {
      // t1-planted: leaf or single t2 child
      for (int c = 0; c < 2; ++c) {
        if (e == 1) add(t1_, e, Plain{{EdgeKind::t1, c}, {}});
        for (auto& [idx, sub] : by_size(t2_, e - 1)) add(t1_, e, Plain{{EdgeKind::t1, c}, {sub}});
      }
      // t2-planted: multiset of >= 1 t1-planted children
      for (int c = 0; c < 2; ++c) {
        std::vector<Plain> cur;
        multisets(e - 1, 0, cur, [&](const std::vector<Plain>& ch) {
          if (!ch.empty()) add(t2_, e, Plain{{EdgeKind::t2, c}, ch});
        });
      }
    }
  }

  std::vector<Plain> all() const {
    std::vector<Plain> out;
    for (auto& [s, p] : t1_) out.push_back(p);
    for (auto& [s, p] : t2_) out.push_back(p);
    return out;
  }
  std::vector<Plain> planted_t2() const {
    std::vector<Plain> out;
    for (auto& [s, p] : t2_) out.push_back(p);
    return out;
  }

 private:
  using Pool = std::vector<std::pair<int, Plain>>;

  static void add(Pool& pool, int size, Plain p) { pool.emplace_back(size, std::move(p)); }

  std::vector<std::pair<std::size_t, Plain>> by_size(const Pool& pool, int size) const {
    std::vector<std::pair<std::size_t, Plain>> out;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (pool[i].first == size) out.emplace_back(i, pool[i].second);
    return out;
  }

  void multisets(int budget, std::size_t start, std::vector<Plain>& cur,
                 const std::function<void(const std::vector<Plain>&)>& emit) const {
    if (budget == 0) {
      emit(cur);
      return;
    }
    for (std::size_t i = start; i < t1_.size(); ++i) {
      if (t1_[i].first > budget) continue;
      cur.push_back(t1_[i].second);
      multisets(budget - t1_[i].first, i, cur, emit);
      cur.pop_back();
    }
  }

  int max_;
  Pool t1_, t2_;
};

struct DualityReport {
  long long compared = 0;
  std::vector<std::string> mismatches;
};

/// <s1 (x) s2, adjoint(tau)> = <s1 -> s2, tau> with <F, G> = S(F) [F = G],
/// over all conforming shapes with at most `max_edges` edges, in both
/// directions: every adjoint term against grafting, every grafting term
/// against the adjoint.
inline DualityReport duality_check(int max_edges) {
  PlainEnumerator gen(max_edges);
  std::vector<std::vector<Tree>> by_edges(static_cast<std::size_t>(max_edges) + 1), h2_by_edges = by_edges;
  std::map<Tree, TensorSum> adjoint;
  for (auto& p : gen.all()) {
    Tree t = to_tree(p);
    by_edges[static_cast<std::size_t>(plain_edges(p))].push_back(t);
    if (t.edge().kind == EdgeKind::t2) h2_by_edges[static_cast<std::size_t>(plain_edges(p))].push_back(t);
    adjoint.emplace(t, graft_adjoint(Forest(t)));
  }
  DualityReport rep;
  auto fail = [&](const std::string& what) {
    if (rep.mismatches.size() < 10) rep.mismatches.push_back(what);
  };
  for (auto& [t, adj] : adjoint) {
    Forest ft(t);
    for (auto& [k, c] : adj) {
      if (k.second.is_unit()) continue;
      long long lhs = c * symmetry_factor(k.first) * symmetry_factor(k.second);
      auto g = graft(k.first, k.second);
      long long rhs = g.count(ft) ? g.at(ft) * symmetry_factor(t) : 0;
      if (lhs != rhs) fail(t.text() + " <- " + k.first.text() + " | " + k.second.text());
      ++rep.compared;
    }
  }
  auto against_adjoint = [&](const Forest& a, const Forest& b) {
    for (auto& [g, c] : graft(a, b)) {
      const auto& adj = adjoint.at(g.trees()[0]);
      auto it = adj.find({a, b});
      long long lhs = it == adj.end() ? 0 : it->second * symmetry_factor(a) * symmetry_factor(b);
      if (lhs != c * symmetry_factor(g)) fail(a.text() + " -> " + b.text());
      ++rep.compared;
    }
  };
  for (int eb = 1; eb <= max_edges; ++eb)
    for (auto& b : by_edges[static_cast<std::size_t>(eb)]) {
      against_adjoint(Forest(), Forest(b));
      for (int ea = 1; ea + eb <= max_edges; ++ea)
        for (auto& a : h2_by_edges[static_cast<std::size_t>(ea)]) against_adjoint(Forest(a), Forest(b));
    }
  return rep;
}

}  // namespace testing
