#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reso {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

std::string to_string(const Rational& q);

/// Sparse exponent vector: (symbol index, exponent) pairs sorted by index,
/// exponents strictly positive. Symbol 0 is the bare "k" used by
/// univariate equation data; k1, k2, ... are symbols 1, 2, ...
using Monomial = std::vector<std::pair<int, int>>;

/// Graded lexicographic order, largest first.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

int total_degree(const Monomial& m);
/// Largest single-variable exponent, the per-monomial degree.
int max_exponent(const Monomial& m);

/// Integer assignment of frequency symbols.
using FreqAssignment = std::map<int, long long>;

class FreqPoly {
 public:
  using Terms = std::map<Monomial, Rational, MonomialOrder>;

  FreqPoly() = default;
  FreqPoly(long long c);  // NOLINT(google-explicit-constructor)
  explicit FreqPoly(const Rational& c);

  static FreqPoly symbol(int index);
  static FreqPoly monomial(const Monomial& m, const Rational& c);
  static FreqPoly parse(std::string_view text);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_term() const;
  Rational leading_coefficient() const;

  int degree() const;
  std::set<int> symbols() const;

  FreqPoly operator-() const;
  FreqPoly& operator+=(const FreqPoly& o);
  FreqPoly& operator-=(const FreqPoly& o);
  FreqPoly& operator*=(const FreqPoly& o);
  FreqPoly& operator*=(const Rational& c);
  friend FreqPoly operator+(FreqPoly a, const FreqPoly& b) { return a += b; }
  friend FreqPoly operator-(FreqPoly a, const FreqPoly& b) { return a -= b; }
  friend FreqPoly operator*(FreqPoly a, const FreqPoly& b) { return a *= b; }
  friend FreqPoly operator*(FreqPoly a, const Rational& c) { return a *= c; }
  FreqPoly pow(unsigned e) const;

  /// Replace symbol `sym` by `by` everywhere.
  FreqPoly substitute(int sym, const FreqPoly& by) const;

  Rational eval_exact(const FreqAssignment& fa) const;
  long double eval(const FreqAssignment& fa) const;

  std::string str() const;

  friend bool operator==(const FreqPoly& a, const FreqPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const FreqPoly& a, const FreqPoly& b) { return !(a == b); }
  friend bool operator<(const FreqPoly& a, const FreqPoly& b);

 private:
  void add_term(const Monomial& m, const Rational& c);
  Terms terms_;
};

/// Dominant-part projection: a(sum a_i k_i)^p when the top-degree monomials
/// are pure powers with a common magnitude, zero otherwise.
FreqPoly p_dom(const FreqPoly& p);

std::string symbol_name(int index);

/// Integer linear form in the frequency symbols, used for node decorations.
class FreqVector {
 public:
  FreqVector() = default;
  static FreqVector symbol(int index, int coef = 1);
  static FreqVector parse(std::string_view text);

  const std::map<int, long long>& coefficients() const { return c_; }
  long long coefficient(int index) const;
  bool is_zero() const { return c_.empty(); }
  bool is_leaf_admissible() const;

  FreqVector operator-() const;
  FreqVector& operator+=(const FreqVector& o);
  FreqVector& operator-=(const FreqVector& o);
  friend FreqVector operator+(FreqVector a, const FreqVector& b) { return a += b; }
  friend FreqVector operator-(FreqVector a, const FreqVector& b) { return a -= b; }

  FreqPoly poly() const;
  long long eval(const FreqAssignment& fa) const;
  std::string str() const;

  friend bool operator==(const FreqVector& a, const FreqVector& b) { return a.c_ == b.c_; }
  friend bool operator!=(const FreqVector& a, const FreqVector& b) { return !(a == b); }
  friend bool operator<(const FreqVector& a, const FreqVector& b) { return a.c_ < b.c_; }

 private:
  std::map<int, long long> c_;
};

}  // namespace reso
