#include "reso/equation.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

namespace reso {

FreqPoly EquationSpec::dispersion(const EdgeDeco& e, const FreqVector& k) const {
  const FreqPoly& p = e.kind == EdgeKind::t1 ? p_t1 : p_t2;
  if (e.conj == 0) return p.substitute(0, k.poly());
  return -p.substitute(0, -k.poly());
}

FreqPoly EquationSpec::weight(const FreqVector& k) const { return nabla_alpha.substitute(0, k.poly()); }

EquationSpec EquationSpec::cubic_nls() {
  EquationSpec eq;
  eq.p_t1 = FreqPoly::parse("-k^2");
  eq.p_t2 = FreqPoly::parse("k^2");
  eq.nabla_alpha = FreqPoly(1);
  eq.alpha = 0;
  eq.nonlinearity = {1, 0, 0};
  return eq;
}

static void require_univariate(const FreqPoly& p, const char* name) {
  for (int s : p.symbols())
    if (s != 0) throw std::invalid_argument(std::string(name) + " must be a polynomial in k only");
}

EquationSpec EquationSpec::from_json(const nlohmann::json& j) {
  EquationSpec eq;
  eq.p_t1 = FreqPoly::parse(j.at("P_t1").get<std::string>());
  eq.p_t2 = FreqPoly::parse(j.at("P_t2").get<std::string>());
  eq.nabla_alpha = FreqPoly::parse(j.value("nabla_alpha", std::string("1")));
  require_univariate(eq.p_t1, "P_t1");
  require_univariate(eq.p_t2, "P_t2");
  require_univariate(eq.nabla_alpha, "nabla_alpha");
  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    if (a.is_string()) {
      FreqPoly p = FreqPoly::parse(a.get<std::string>());
      if (!p.is_constant()) throw std::invalid_argument("alpha must be a rational constant");
      eq.alpha = p.constant_term();
    } else if (a.is_number_integer()) {
      eq.alpha = Rational(a.get<long long>());
    } else {
      throw std::invalid_argument("alpha must be an integer or a rational string such as \"1/2\"");
    }
  }
  if (eq.alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  eq.nonlinearity = j.at("nonlinearity").get<std::vector<int>>();
  if (eq.nonlinearity.empty()) throw std::invalid_argument("nonlinearity must be nonempty");
  for (int a : eq.nonlinearity)
    if (a != 0 && a != 1) throw std::invalid_argument("nonlinearity entries are conjugation bits 0/1");
  if (eq.p_t2.is_zero()) throw std::invalid_argument("P_t2 must be nonzero");
  return eq;
}

nlohmann::json EquationSpec::to_json() const {
  return {{"P_t1", p_t1.str()},
          {"P_t2", p_t2.str()},
          {"nabla_alpha", nabla_alpha.str()},
          {"alpha", reso::to_string(alpha)},
          {"nonlinearity", nonlinearity}};
}

static long long falling(long long n, long long k) {
  long long r = 1;
  for (long long i = 0; i < k; ++i) r *= n - i;
  return r;
}

static void upsilon_rec(const Tree& t, const EquationSpec& eq, UpsilonTerm& out) {
  if (t.is_leaf()) {
    out.factors.emplace_back(t.freq(), t.edge().conj == 1);
    return;
  }
  if (t.edge().kind == EdgeKind::t1) {
    upsilon_rec(t.children()[0], eq, out);
    return;
  }
  long long deg_v = 0, deg_vbar = 0;
  for (int a : eq.nonlinearity) ((a ^ t.edge().conj) ? deg_vbar : deg_v) += 1;
  long long n_v = 0, n_vbar = 0;
  for (auto& c : t.children()) (c.edge().conj ? n_vbar : n_v) += 1;
  if (n_v != deg_v || n_vbar != deg_vbar)
    throw std::invalid_argument("tree does not match the nonlinearity at " + t.text());
  out.coefficient *= falling(deg_v, n_v) * falling(deg_vbar, n_vbar);
  for (auto& c : t.children()) upsilon_rec(c, eq, out);
}

UpsilonTerm upsilon(const Tree& t, const EquationSpec& eq) {
  UpsilonTerm u;
  u.coefficient = 1;
  upsilon_rec(t, eq, u);
  return u;
}

std::string UpsilonTerm::text() const {
  std::string s = std::to_string(coefficient);
  for (auto& [f, c] : factors) s += std::string(" * ") + (c ? "vbar_" : "v_") + "{" + f.str() + "}";
  return s;
}

namespace {

struct Proto {
  int conj = 0;
  bool leaf = true;
  std::vector<Proto> slots;  // t2 node children in slot order
};

Tree shape_of(const Proto& p) {
  if (p.leaf) return Tree::leaf(p.conj, {});
  std::vector<Tree> ch;
  for (auto& s : p.slots) ch.push_back(shape_of(s));
  return Tree({EdgeKind::t1, p.conj}, {}, {Tree({EdgeKind::t2, p.conj}, {}, std::move(ch))});
}

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(parts), 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == parts - 1) {
      cur[static_cast<std::size_t>(i)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<std::size_t>(i)] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, total);
  // Expansions of later slots come first.
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(b.rbegin(), b.rend(), a.rbegin(), a.rend());
  });
  return out;
}

std::vector<Proto> gen(const EquationSpec& eq, int conj, int ord) {
  if (ord == 0) return {Proto{conj, true, {}}};
  std::vector<Proto> out;
  int n = static_cast<int>(eq.nonlinearity.size());
  for (auto& comp : compositions(ord - 1, n)) {
    std::vector<Proto> acc{Proto{conj, false, {}}};
    for (int j = 0; j < n; ++j) {
      auto subs = gen(eq, eq.nonlinearity[static_cast<std::size_t>(j)] ^ conj, comp[static_cast<std::size_t>(j)]);
      std::vector<Proto> next;
      for (auto& a : acc)
        for (auto& s : subs) {
          Proto b = a;
          b.slots.push_back(s);
          next.push_back(std::move(b));
        }
      acc = std::move(next);
    }
    out.insert(out.end(), acc.begin(), acc.end());
  }
  return out;
}

FreqVector signed_sum(const std::vector<Tree>& ch) {
  FreqVector s;
  for (auto& c : ch) s += c.edge().conj ? -c.freq() : c.freq();
  return s;
}

Tree label(const Proto& p, int& next) {
  if (p.leaf) return Tree::leaf(p.conj, FreqVector::symbol(next++));
  std::vector<Tree> ch(p.slots.size(), Tree::leaf(0, {}));
  for (std::size_t i = 0; i < p.slots.size(); ++i)
    if (!p.slots[i].leaf) ch[i] = label(p.slots[i], next);
  for (std::size_t i = 0; i < p.slots.size(); ++i)
    if (p.slots[i].leaf) ch[i] = label(p.slots[i], next);
  FreqVector s = signed_sum(ch);
  FreqVector f = p.conj ? -s : s;
  return Tree({EdgeKind::t1, p.conj}, f, {Tree({EdgeKind::t2, p.conj}, f, std::move(ch))});
}

}  // namespace

std::vector<SeriesTree> generate_trees(const EquationSpec& eq, int r) {
  if (r < 0) throw std::invalid_argument("order must be nonnegative");
  std::vector<SeriesTree> out;
  for (int ord = 0; ord <= r; ++ord) {
    std::set<std::string> seen;
    for (auto& p : gen(eq, 0, ord)) {
      if (!seen.insert(shape_of(p).shape()).second) continue;
      int next = 1;
      SeriesTree st{"", label(p, next), 0, 0, 0};
      st.name = "T" + std::to_string(out.size());
      st.upsilon = upsilon(st.tree, eq).coefficient;
      st.symmetry = symmetry_factor(st.tree);
      st.weight = Rational(st.upsilon, st.symmetry);
      out.push_back(std::move(st));
    }
  }
  return out;
}

Tree core_of(const Tree& t) {
  if (t.edge().kind == EdgeKind::t2) return t;
  if (t.children().size() == 1 && t.children()[0].edge().kind == EdgeKind::t2) return t.children()[0];
  throw std::invalid_argument("tree has no t2-planted core: " + t.text());
}

}  // namespace reso
