#pragma once

#include "reso/tree.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace reso {

/// Letters indexed from the root side: letters[0] is position 1.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Tree> letters) : letters_(std::move(letters)) {}

  const std::vector<Tree>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  /// Position j, 1-based.
  const Tree& at(std::size_t j) const { return letters_.at(j - 1); }
  /// w_[j] = T_j ... T_1.
  Word prefix(std::size_t j) const;
  /// Word with `l` appended on the leaf side.
  Word push_leafward(const Tree& l) const;

  /// Paper order T_n ... T_1, letters separated by " . "; "e" for the empty word.
  std::string text() const;

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator<(const Word& a, const Word& b) { return a.letters_ < b.letters_; }

 private:
  std::vector<Tree> letters_;
};

using WordSum = std::map<Word, long long>;
using TensorSum = std::map<std::pair<Forest, Forest>, long long>;
using Tensor3 = std::map<std::tuple<Forest, Forest, Forest>, long long>;
using ForestSum = std::map<Forest, long long>;

void add_to(WordSum& s, const Word& w, long long c);
void add_to(TensorSum& s, const Forest& a, const Forest& b, long long c);

std::string text(const WordSum& s);
std::string text(const TensorSum& s);

TensorSum coproduct_bck(const Forest& f);
TensorSum coproduct_bck(const Tree& t);
/// Coproduct without the primitive term T (x) 1.
TensorSum reduced_coproduct(const Tree& t);

/// sigma grafted onto each leaf of tau, keeping frequency-consistent results.
ForestSum graft(const Forest& sigma, const Forest& tau);
/// Adjoint of grafting: at most one admissible cut.
TensorSum graft_adjoint(const Forest& f);

long long pairing(const Forest& a, const Forest& b);

WordSum shuffle(const Word& u, const Word& v);
WordSum shuffle(const WordSum& a, const WordSum& b);

/// Arborification; every tree must be t2-planted.
WordSum arborify(const Forest& f);
WordSum arborify(const Tree& t);

struct CoassocReport {
  bool equal = false;
  Tensor3 lhs;
  Tensor3 rhs;
};

CoassocReport coassoc_check(const Tree& t);

}  // namespace reso
