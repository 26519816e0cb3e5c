#include "reso/tree.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace reso {

std::string to_string(const EdgeDeco& e) {
  return std::string(e.kind == EdgeKind::t1 ? "t1" : "t2") + "," + std::to_string(e.conj);
}

Tree::Tree(EdgeDeco edge, FreqVector freq, std::vector<Tree> children)
    : edge_(edge), freq_(std::move(freq)), children_(std::move(children)) {
  if (edge_.conj != 0 && edge_.conj != 1) throw std::invalid_argument("conjugation bit must be 0 or 1");
  std::sort(children_.begin(), children_.end());
  std::string head = "I[" + to_string(edge_) + "]";
  text_ = head + "(" + freq_.str();
  shape_ = head;
  if (!children_.empty()) {
    text_ += "; ";
    shape_ += "(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
      if (i) {
        text_ += ", ";
        shape_ += ",";
      }
      text_ += children_[i].text_;
      shape_ += children_[i].shape_;
    }
    shape_ += ")";
  }
  text_ += ")";
}

bool operator<(const Tree& a, const Tree& b) {
  if (a.edge_ != b.edge_) return a.edge_ < b.edge_;
  if (a.shape_ != b.shape_) return a.shape_ < b.shape_;
  return a.text_ < b.text_;
}

static int edge_count(const Tree& t) {
  int n = 1;
  for (auto& c : t.children()) n += edge_count(c);
  return n;
}

int Tree::node_count() const { return edge_count(*this) + 1; }

Tree Tree::erase_frequencies() const {
  std::vector<Tree> ch;
  ch.reserve(children_.size());
  for (auto& c : children_) ch.push_back(c.erase_frequencies());
  return Tree(edge_, FreqVector{}, std::move(ch));
}

Forest::Forest(std::vector<Tree> trees) : trees_(std::move(trees)) { std::sort(trees_.begin(), trees_.end()); }

std::string Forest::text() const {
  if (trees_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < trees_.size(); ++i) {
    if (i) s += " * ";
    s += trees_[i].text();
  }
  return s;
}

Forest operator*(const Forest& a, const Forest& b) {
  std::vector<Tree> v = a.trees_;
  v.insert(v.end(), b.trees_.begin(), b.trees_.end());
  return Forest(std::move(v));
}

static FreqVector signed_freq(const Tree& t) { return t.edge().conj ? -t.freq() : t.freq(); }

static std::optional<Violation> check(const Tree& t) {
  if (t.is_leaf()) {
    if (t.edge().kind == EdgeKind::t2) return Violation{t.text(), "t2 edge without children"};
    if (!t.freq().is_leaf_admissible())
      return Violation{t.text(), "leaf decoration coefficients outside {-1,0,1}"};
    return std::nullopt;
  }
  if (t.edge().kind == EdgeKind::t1) {
    if (t.children().size() != 1 || t.children()[0].edge().kind != EdgeKind::t2)
      return Violation{t.text(), "t1 edge must end in a leaf or carry exactly one t2 edge"};
  } else {
    for (auto& c : t.children()) {
      if (c.edge().kind == EdgeKind::t2)
        return Violation{t.text(), "t2 edge must hang from the root or from a t1 edge"};
    }
  }
  FreqVector sum;
  for (auto& c : t.children()) sum += signed_freq(c);
  if (sum != signed_freq(t)) return Violation{t.text(), "frequency identity fails: expected " + sum.str()};
  for (auto& c : t.children())
    if (auto v = check(c)) return v;
  return std::nullopt;
}

std::optional<Violation> validate(const Tree& t) { return check(t); }

std::optional<Violation> validate(const Forest& f) {
  for (auto& t : f.trees())
    if (auto v = validate(t)) return v;
  return std::nullopt;
}

int order(const Tree& t) {
  int n = t.edge().kind == EdgeKind::t2 ? 1 : 0;
  for (auto& c : t.children()) n += order(c);
  return n;
}

int order(const Forest& f) {
  int n = 0;
  for (auto& t : f.trees()) n += order(t);
  return n;
}

static long long factorial(int n) {
  long long r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Product over groups of identical shapes of S(child)^g * g!.
static long long group_symmetry(const std::vector<Tree>& ts) {
  long long s = 1;
  std::size_t i = 0;
  while (i < ts.size()) {
    std::size_t j = i;
    while (j < ts.size() && ts[j].shape() == ts[i].shape()) ++j;
    long long si = symmetry_factor(ts[i]);
    for (std::size_t k = i; k < j; ++k) s *= si;
    s *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return s;
}

static std::vector<Tree> by_shape(std::vector<Tree> ts) {
  std::sort(ts.begin(), ts.end(), [](const Tree& a, const Tree& b) { return a.shape() < b.shape(); });
  return ts;
}

long long symmetry_factor(const Tree& t) { return group_symmetry(by_shape(t.children())); }

long long symmetry_factor(const Forest& f) { return group_symmetry(by_shape(f.trees())); }

bool is_letter(const Tree& t) {
  if (t.edge().kind != EdgeKind::t2 || t.is_leaf()) return false;
  for (auto& c : t.children())
    if (c.edge().kind != EdgeKind::t1 || !c.is_leaf()) return false;
  return true;
}

bool is_planted_t2(const Tree& t) { return t.edge().kind == EdgeKind::t2; }

static void collect_leaves(const Tree& t, std::vector<Tree>& out) {
  if (t.is_leaf()) {
    out.push_back(t);
    return;
  }
  for (auto& c : t.children()) collect_leaves(c, out);
}

std::vector<Tree> leaves(const Tree& t) {
  std::vector<Tree> out;
  collect_leaves(t, out);
  return out;
}

StarDecomposition star_decompose(const Tree& t) {
  if (!is_planted_t2(t) || t.is_leaf()) throw std::invalid_argument("star decomposition needs a t2-planted tree");
  std::vector<Tree> subs, root_children;
  for (auto& c : t.children()) {
    if (c.is_leaf()) {
      root_children.push_back(c);
    } else if (c.edge().kind == EdgeKind::t1 && c.children().size() == 1 &&
               c.children()[0].edge().kind == EdgeKind::t2) {
      subs.push_back(c.children()[0]);
      root_children.push_back(Tree::leaf(c.edge().conj, c.freq()));
    } else {
      throw std::invalid_argument("shape mismatch in star decomposition at " + c.text());
    }
  }
  return {subs, Tree(t.edge(), t.freq(), root_children)};
}

Tree star_compose(const std::vector<Tree>& subtrees, const Tree& root_letter) {
  std::vector<Tree> children = root_letter.children();
  std::vector<bool> used(children.size(), false);
  for (auto& s : subtrees) {
    bool placed = false;
    for (std::size_t i = 0; i < children.size() && !placed; ++i) {
      if (used[i] || !children[i].is_leaf()) continue;
      if (signed_freq(children[i]) == signed_freq(s)) {
        children[i] = children[i].with_children({s});
        used[i] = true;
        placed = true;
      }
    }
    if (!placed) throw std::invalid_argument("no compatible leaf for " + s.text());
  }
  return root_letter.with_children(std::move(children));
}

nlohmann::json to_json(const Tree& t) {
  nlohmann::json ch = nlohmann::json::array();
  for (auto& c : t.children()) ch.push_back(to_json(c));
  return {{"edge", {{"kind", t.edge().kind == EdgeKind::t1 ? "t1" : "t2"}, {"conj", t.edge().conj}}},
          {"freq", t.freq().str()},
          {"children", ch}};
}

Tree tree_from_json(const nlohmann::json& j) {
  const auto& e = j.at("edge");
  std::string kind = e.at("kind").get<std::string>();
  if (kind != "t1" && kind != "t2") throw std::invalid_argument("edge kind must be t1 or t2");
  EdgeDeco d{kind == "t1" ? EdgeKind::t1 : EdgeKind::t2, e.at("conj").get<int>()};
  std::vector<Tree> ch;
  if (j.contains("children"))
    for (auto& c : j.at("children")) ch.push_back(tree_from_json(c));
  return Tree(d, FreqVector::parse(j.at("freq").get<std::string>()), std::move(ch));
}

namespace {

struct TextParser {
  std::string_view s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("tree parse error at " + std::to_string(pos) + ": " + what);
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  void expect(char c) {
    skip();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }

  Tree tree() {
    expect('I');
    expect('[');
    skip();
    if (s.substr(pos, 2) != "t1" && s.substr(pos, 2) != "t2") fail("expected t1 or t2");
    EdgeKind k = s[pos + 1] == '1' ? EdgeKind::t1 : EdgeKind::t2;
    pos += 2;
    expect(',');
    skip();
    if (pos >= s.size() || (s[pos] != '0' && s[pos] != '1')) fail("expected conjugation bit");
    int conj = s[pos++] - '0';
    expect(']');
    expect('(');
    std::size_t start = pos;
    while (pos < s.size() && s[pos] != ';' && s[pos] != ')') ++pos;
    FreqVector f = FreqVector::parse(s.substr(start, pos - start));
    std::vector<Tree> ch;
    skip();
    if (pos < s.size() && s[pos] == ';') {
      ++pos;
      ch.push_back(tree());
      skip();
      while (pos < s.size() && s[pos] == ',') {
        ++pos;
        ch.push_back(tree());
        skip();
      }
    }
    expect(')');
    return Tree({k, conj}, std::move(f), std::move(ch));
  }
};

}  // namespace

Tree parse_tree_text(std::string_view text) {
  TextParser p{text};
  Tree t = p.tree();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

}  // namespace reso
