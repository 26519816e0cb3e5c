#pragma once

#include "reso/freq_poly.hpp"

#include <nlohmann/json.hpp>

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace reso {

using Complex = std::complex<long double>;

struct ResonanceError : std::runtime_error {
  explicit ResonanceError(const std::string& factor)
      : std::runtime_error("vanishing denominator " + factor + " at the given frequencies"), factor(factor) {}
  std::string factor;
};

/// (re + i*im) / prod D^e with exact polynomial numerator and denominator
/// factors normalised to leading coefficient 1.
class RationalExpr {
 public:
  RationalExpr() = default;
  RationalExpr(const Rational& c);  // NOLINT(google-explicit-constructor)
  explicit RationalExpr(FreqPoly re, FreqPoly im = {});

  static RationalExpr i_power(int k);

  const FreqPoly& re() const { return re_; }
  const FreqPoly& im() const { return im_; }
  const std::map<FreqPoly, int>& denominator() const { return den_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  /// Pure rational constant with trivial denominator.
  bool is_rational() const;

  RationalExpr& divide_by(const FreqPoly& d, int e = 1);
  RationalExpr times_i(int k) const;

  RationalExpr operator-() const;
  RationalExpr& operator+=(const RationalExpr& o);
  RationalExpr& operator*=(const RationalExpr& o);
  friend RationalExpr operator+(RationalExpr a, const RationalExpr& b) { return a += b; }
  friend RationalExpr operator-(RationalExpr a, const RationalExpr& b) { return a += -b; }
  friend RationalExpr operator*(RationalExpr a, const RationalExpr& b) { return a *= b; }

  Complex eval(const FreqAssignment& fa) const;
  std::string str() const;

  friend bool operator==(const RationalExpr& a, const RationalExpr& b) { return (a - b).is_zero(); }

 private:
  void scale(const Rational& c);
  FreqPoly re_, im_;
  std::map<FreqPoly, int> den_;
};

/// Finite sum of coef * t^m * exp(i t phase).
class ExpPoly {
 public:
  using Key = std::pair<int, FreqPoly>;

  ExpPoly() = default;
  ExpPoly(const RationalExpr& c, int tpow = 0, const FreqPoly& phase = {});  // NOLINT

  static ExpPoly exp_it(const FreqPoly& phase) { return ExpPoly(Rational(1), 0, phase); }
  static ExpPoly t_pow(int m) { return ExpPoly(Rational(1), m); }

  const std::map<Key, RationalExpr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int max_tpow() const;

  ExpPoly operator-() const;
  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o) { return *this += -o; }
  ExpPoly& operator*=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(ExpPoly a, const ExpPoly& b) { return a *= b; }

  /// Drops terms whose explicit power of t exceeds p.
  ExpPoly truncate(int p) const;

  Complex eval(const FreqAssignment& fa, long double t) const;
  std::string str() const;
  nlohmann::json to_json() const;

  friend bool operator==(const ExpPoly& a, const ExpPoly& b) { return (a - b).is_zero(); }

 private:
  void add_term(const Key& k, const RationalExpr& c);
  std::map<Key, RationalExpr> terms_;
};

/// Floating-point image of an ExpPoly for repeated evaluation on a grid of
/// integer frequencies (symbol index used directly as array index).
class CompiledExpPoly {
 public:
  CompiledExpPoly() = default;
  explicit CompiledExpPoly(const ExpPoly& e);

  /// k[i] is the value of symbol k_i.
  Complex eval(const long double* k, long double t) const;
  int max_symbol() const { return max_symbol_; }

 private:
  struct Poly {
    std::vector<std::pair<long double, std::vector<std::pair<int, int>>>> terms;
    long double eval(const long double* k) const;
  };
  struct Term {
    Poly re, im, phase;
    std::vector<std::pair<Poly, int>> den;
    std::vector<std::string> den_text;
    int tpow = 0;
  };
  static Poly compile(const FreqPoly& p);
  std::vector<Term> terms_;
  int max_symbol_ = 0;
};

}  // namespace reso
