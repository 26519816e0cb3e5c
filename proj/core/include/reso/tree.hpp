#pragma once

#include "reso/freq_poly.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace reso {

enum class EdgeKind { t1, t2 };

struct EdgeDeco {
  EdgeKind kind = EdgeKind::t1;
  int conj = 0;

  friend auto operator<=>(const EdgeDeco&, const EdgeDeco&) = default;
};

std::string to_string(const EdgeDeco& e);

/// Planted tree I_e(lambda_f prod children): the root, its single edge `e`,
/// the node `f` above it and the planted subtrees hanging from that node.
/// Children are kept in canonical order, so equal non-planar trees compare
/// equal.
class Tree {
 public:
  Tree(EdgeDeco edge, FreqVector freq, std::vector<Tree> children = {});

  static Tree leaf(int conj, FreqVector freq) { return Tree({EdgeKind::t1, conj}, std::move(freq)); }

  const EdgeDeco& edge() const { return edge_; }
  const FreqVector& freq() const { return freq_; }
  const std::vector<Tree>& children() const { return children_; }
  bool is_leaf() const { return children_.empty(); }

  /// Compact text form I[t2,0](freq; children...).
  const std::string& text() const { return text_; }
  /// Same encoding with node decorations erased.
  const std::string& shape() const { return shape_; }

  int node_count() const;
  Tree with_children(std::vector<Tree> children) const { return Tree(edge_, freq_, std::move(children)); }
  Tree erase_frequencies() const;

  friend bool operator==(const Tree& a, const Tree& b) { return a.text_ == b.text_; }
  friend bool operator!=(const Tree& a, const Tree& b) { return !(a == b); }
  friend bool operator<(const Tree& a, const Tree& b);

 private:
  EdgeDeco edge_;
  FreqVector freq_;
  std::vector<Tree> children_;
  std::string text_;
  std::string shape_;
};

/// Multiset of trees; the empty forest is the unit.
class Forest {
 public:
  Forest() = default;
  explicit Forest(std::vector<Tree> trees);
  explicit Forest(Tree t) : Forest(std::vector<Tree>{std::move(t)}) {}

  const std::vector<Tree>& trees() const { return trees_; }
  bool is_unit() const { return trees_.empty(); }
  std::size_t size() const { return trees_.size(); }
  std::string text() const;

  friend Forest operator*(const Forest& a, const Forest& b);
  friend bool operator==(const Forest& a, const Forest& b) { return a.trees_ == b.trees_; }
  friend bool operator<(const Forest& a, const Forest& b) { return a.trees_ < b.trees_; }

 private:
  std::vector<Tree> trees_;
};

struct Violation {
  std::string node;
  std::string reason;
};

/// Checks frequency consistency, leaf admissibility and the structural shape
/// (t2 edges hang from the root or as sole child of a t1 edge, t2 edges
/// carry at least one child, t1 edges carry nothing or a single t2 edge).
std::optional<Violation> validate(const Tree& t);
std::optional<Violation> validate(const Forest& f);

int order(const Tree& t);
int order(const Forest& f);

long long symmetry_factor(const Tree& t);
long long symmetry_factor(const Forest& f);

bool is_letter(const Tree& t);
/// t2-planted tree, an element of H_2.
bool is_planted_t2(const Tree& t);

/// Every leaf of the tree, left to right in canonical order.
std::vector<Tree> leaves(const Tree& t);

struct StarDecomposition {
  std::vector<Tree> subtrees;
  Tree root_letter;
};

/// T = prod T_j * T_r for a t2-planted tree: the root letter keeps a leaf in
/// place of every grafted branch.
StarDecomposition star_decompose(const Tree& t);
/// Simultaneous grafting of the subtrees onto the matching leaves of the
/// root letter.
Tree star_compose(const std::vector<Tree>& subtrees, const Tree& root_letter);

nlohmann::json to_json(const Tree& t);
Tree tree_from_json(const nlohmann::json& j);
Tree parse_tree_text(std::string_view text);

}  // namespace reso
