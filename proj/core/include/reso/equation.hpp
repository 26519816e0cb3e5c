#pragma once

#include "reso/freq_poly.hpp"
#include "reso/tree.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace reso {

/// Dispersion and weight polynomials are univariate in the bare symbol k.
struct EquationSpec {
  FreqPoly p_t1;
  FreqPoly p_t2;
  FreqPoly nabla_alpha{1};
  Rational alpha{0};
  std::vector<int> nonlinearity;

  /// Leading exponent of P_t2.
  int sigma() const { return p_t2.degree(); }

  /// P_(t,p)(k) = (-1)^p P_t((-1)^p k), evaluated at a linear form.
  FreqPoly dispersion(const EdgeDeco& e, const FreqVector& k) const;
  FreqPoly weight(const FreqVector& k) const;

  static EquationSpec cubic_nls();
  static EquationSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct UpsilonTerm {
  long long coefficient = 0;
  /// (leaf frequency, conjugated) in canonical leaf order.
  std::vector<std::pair<FreqVector, bool>> factors;

  std::string text() const;
};

UpsilonTerm upsilon(const Tree& t, const EquationSpec& eq);

struct SeriesTree {
  std::string name;
  Tree tree;
  long long upsilon = 0;
  long long symmetry = 0;
  Rational weight;
};

/// Trees of T_0 up to order r with fresh leaf symbols, ordered by order.
std::vector<SeriesTree> generate_trees(const EquationSpec& eq, int r);

/// The t2-planted subtree of a tree of the series; the tree itself when it is
/// already t2-planted.
Tree core_of(const Tree& t);

}  // namespace reso
