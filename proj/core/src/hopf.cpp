#include "reso/hopf.hpp"

#include <climits>
#include <stdexcept>

namespace reso {

Word Word::prefix(std::size_t j) const {
  return Word(std::vector<Tree>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(j)));
}

Word Word::push_leafward(const Tree& l) const {
  Word w = *this;
  w.letters_.push_back(l);
  return w;
}

std::string Word::text() const {
  if (letters_.empty()) return "e";
  std::string s;
  for (std::size_t i = letters_.size(); i-- > 0;) {
    s += letters_[i].text();
    if (i) s += " . ";
  }
  return s;
}

void add_to(WordSum& s, const Word& w, long long c) {
  if (c == 0) return;
  auto [it, fresh] = s.try_emplace(w, c);
  if (!fresh && (it->second += c) == 0) s.erase(it);
}

void add_to(TensorSum& s, const Forest& a, const Forest& b, long long c) {
  if (c == 0) return;
  auto [it, fresh] = s.try_emplace({a, b}, c);
  if (!fresh && (it->second += c) == 0) s.erase(it);
}

static void add_to(Tensor3& s, const Forest& a, const Forest& b, const Forest& d, long long c) {
  if (c == 0) return;
  auto [it, fresh] = s.try_emplace({a, b, d}, c);
  if (!fresh && (it->second += c) == 0) s.erase(it);
}

static std::string coef_prefix(long long c) { return c == 1 ? "" : std::to_string(c) + " * "; }

std::string text(const WordSum& s) {
  if (s.empty()) return "0";
  std::string out;
  for (auto& [w, c] : s) {
    if (!out.empty()) out += "\n";
    out += coef_prefix(c) + w.text();
  }
  return out;
}

std::string text(const TensorSum& s) {
  if (s.empty()) return "0";
  std::string out;
  for (auto& [k, c] : s) {
    if (!out.empty()) out += "\n";
    out += coef_prefix(c) + k.first.text() + " (x) " + k.second.text();
  }
  return out;
}

namespace {

struct Cut {
  Forest left;
  Forest right;
  int cuts;
};

std::vector<Cut> expand(const Tree& t, int max_cuts);

std::vector<Cut> expand_product(const std::vector<Tree>& ts, int max_cuts) {
  std::vector<Cut> acc{{Forest(), Forest(), 0}};
  for (auto& c : ts) {
    std::vector<Cut> ex = expand(c, max_cuts), next;
    for (auto& a : acc)
      for (auto& b : ex)
        if (a.cuts + b.cuts <= max_cuts) next.push_back({a.left * b.left, a.right * b.right, a.cuts + b.cuts});
    acc = std::move(next);
  }
  return acc;
}

std::vector<Cut> expand(const Tree& t, int max_cuts) {
  std::vector<Cut> out;
  for (auto& a : expand_product(t.children(), max_cuts))
    out.push_back({a.left, Forest(t.with_children(a.right.trees())), a.cuts});
  if (t.edge().kind == EdgeKind::t2 && max_cuts >= 1) out.push_back({Forest(t), Forest(), 1});
  return out;
}

TensorSum collect(const std::vector<Cut>& cuts) {
  TensorSum s;
  for (auto& c : cuts) add_to(s, c.left, c.right, 1);
  return s;
}

}  // namespace

TensorSum coproduct_bck(const Forest& f) { return collect(expand_product(f.trees(), INT_MAX)); }

TensorSum coproduct_bck(const Tree& t) { return coproduct_bck(Forest(t)); }

TensorSum reduced_coproduct(const Tree& t) {
  TensorSum s = coproduct_bck(t);
  add_to(s, Forest(t), Forest(), -1);
  return s;
}

TensorSum graft_adjoint(const Forest& f) { return collect(expand_product(f.trees(), 1)); }

static FreqVector signed_freq(const Tree& t) { return t.edge().conj ? -t.freq() : t.freq(); }

static void graft_tree(const Tree& s, const Tree& t, std::vector<Tree>& out) {
  if (t.is_leaf()) {
    if (signed_freq(t) == signed_freq(s)) out.push_back(t.with_children({s}));
    return;
  }
  const auto& ch = t.children();
  for (std::size_t i = 0; i < ch.size(); ++i) {
    std::vector<Tree> sub;
    graft_tree(s, ch[i], sub);
    for (auto& g : sub) {
      std::vector<Tree> next = ch;
      next[i] = g;
      out.push_back(t.with_children(std::move(next)));
    }
  }
}

ForestSum graft(const Forest& sigma, const Forest& tau) {
  ForestSum out;
  if (sigma.is_unit()) {
    out[tau] = 1;
    return out;
  }
  if (sigma.size() != 1) throw std::invalid_argument("grafting expects a single tree on the left");
  if (tau.is_unit()) {
    out[sigma] = 1;
    return out;
  }
  const Tree& s = sigma.trees()[0];
  const auto& ts = tau.trees();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::vector<Tree> g;
    graft_tree(s, ts[i], g);
    for (auto& r : g) {
      std::vector<Tree> next = ts;
      next[i] = r;
      Forest f(std::move(next));
      if (++out[f] == 0) out.erase(f);
    }
  }
  return out;
}

long long pairing(const Forest& a, const Forest& b) { return a == b ? symmetry_factor(b) : 0; }

static void shuffle_rec(const std::vector<Tree>& u, std::size_t i, const std::vector<Tree>& v, std::size_t j,
                        std::vector<Tree>& cur, WordSum& out) {
  if (i == u.size() && j == v.size()) {
    add_to(out, Word(cur), 1);
    return;
  }
  if (i < u.size()) {
    cur.push_back(u[i]);
    shuffle_rec(u, i + 1, v, j, cur, out);
    cur.pop_back();
  }
  if (j < v.size()) {
    cur.push_back(v[j]);
    shuffle_rec(u, i, v, j + 1, cur, out);
    cur.pop_back();
  }
}

WordSum shuffle(const Word& u, const Word& v) {
  WordSum out;
  std::vector<Tree> cur;
  shuffle_rec(u.letters(), 0, v.letters(), 0, cur, out);
  return out;
}

WordSum shuffle(const WordSum& a, const WordSum& b) {
  WordSum out;
  for (auto& [u, cu] : a)
    for (auto& [v, cv] : b)
      for (auto& [w, c] : shuffle(u, v)) add_to(out, w, cu * cv * c);
  return out;
}

WordSum arborify(const Tree& t) {
  if (!is_planted_t2(t)) throw std::invalid_argument("arborification needs t2-planted trees: " + t.text());
  WordSum out;
  for (auto& [k, c] : graft_adjoint(Forest(t))) {
    const Forest& left = k.first;
    if (left.size() != 1 || !is_letter(left.trees()[0])) continue;
    for (auto& [w, cw] : arborify(k.second)) add_to(out, w.push_leafward(left.trees()[0]), c * cw);
  }
  return out;
}

WordSum arborify(const Forest& f) {
  WordSum acc{{Word(), 1}};
  for (auto& t : f.trees()) acc = shuffle(acc, arborify(t));
  return acc;
}

CoassocReport coassoc_check(const Tree& t) {
  CoassocReport rep;
  for (auto& [k, c] : coproduct_bck(t)) {
    for (auto& [k2, c2] : coproduct_bck(k.first)) {
      const Forest& mid = k2.second;
      if (mid.size() == 1 && is_letter(mid.trees()[0])) add_to(rep.lhs, k2.first, mid, k.second, c * c2);
    }
    for (auto& [k2, c2] : graft_adjoint(k.second)) {
      const Forest& mid = k2.first;
      if (mid.size() == 1 && is_letter(mid.trees()[0])) add_to(rep.rhs, k.first, mid, k2.second, c * c2);
    }
  }
  rep.equal = rep.lhs == rep.rhs;
  return rep;
}

}  // namespace reso
