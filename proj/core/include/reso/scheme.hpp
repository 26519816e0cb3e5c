#pragma once

#include "reso/exppoly.hpp"
#include "reso/phase.hpp"

#include <functional>
#include <string>
#include <vector>

namespace reso {

/// Psi^{n,r}_{m,a}(w).
ExpPoly psi(const Word& w, int m, int a, int n, int r, const EquationSpec& eq, const ZeroTest& zero = nullptr);
ExpPoly psi(const WordSum& ws, int m, int a, int n, int r, const EquationSpec& eq, const ZeroTest& zero = nullptr);

/// exp(i t sum F(T_j)) / prod_m sum_{j<=m} F(T_j); throws ResonanceError on a
/// vanishing partial sum.
ExpPoly psi_tilde(const Word& w, const EquationSpec& eq);
ExpPoly psi_tilde(const WordSum& ws, const EquationSpec& eq);

/// Closed form of the iterated integrals.
ExpPoly pi_exact(const Tree& t, const EquationSpec& eq, const ZeroTest& zero = nullptr);
ExpPoly pi_exact(const Forest& f, const EquationSpec& eq, const ZeroTest& zero = nullptr);

/// int_0^t s^m exp(i s phi) ds for every term.
ExpPoly integrate(const ExpPoly& g, const ZeroTest& zero = nullptr);

/// Low-regularity scheme Pi^{n,r}.
ExpPoly scheme(const Tree& t, int n, int r, const EquationSpec& eq, const ZeroTest& zero = nullptr);
ExpPoly scheme(const Forest& f, int n, int r, const EquationSpec& eq, const ZeroTest& zero = nullptr);

struct ErrorTerm {
  std::vector<std::pair<FreqPoly, int>> factors;  // lower parts with their powers
  FreqPoly weight{1};
  int tpow = 0;

  FreqPoly product() const;
  int degree() const { return product().degree(); }
  std::string str() const;
  friend bool operator<(const ErrorTerm& a, const ErrorTerm& b);
  friend bool operator==(const ErrorTerm& a, const ErrorTerm& b) {
    return a.factors == b.factors && a.weight == b.weight && a.tpow == b.tpow;
  }
};

std::vector<ErrorTerm> local_error_terms(const Tree& t, int n, int r, const EquationSpec& eq);
std::vector<ErrorTerm> local_error_terms(const Forest& f, int n, int r, const EquationSpec& eq);
int required_degree(const std::vector<ErrorTerm>& terms);

/// ZeroTest that treats a polynomial as vanishing when it is zero at `fa`.
ZeroTest vanishes_at(const FreqAssignment& fa);

/// Evaluates an expression generator at integer tuples, re-deriving it when a
/// dominant part or phase vanishes there. Variants are cached by the
/// decisions taken during generation.
class ResonantEvaluator {
 public:
  using Generator = std::function<ExpPoly(const ZeroTest&)>;

  explicit ResonantEvaluator(Generator gen);

  /// k[i] is the value of symbol k_i; `max_symbol` bounds the indices used.
  Complex eval(const long double* k, int max_symbol, long double t);
  Complex eval(const FreqAssignment& fa, long double t);
  std::size_t variant_count() const { return variants_.size(); }

 private:
  struct Decision {
    FreqPoly poly;
    std::vector<std::pair<long double, std::vector<std::pair<int, int>>>> terms;
    bool zero;
  };
  struct Variant {
    std::vector<Decision> decisions;
    CompiledExpPoly compiled;
  };
  const Variant& select(const long double* k, int max_symbol);

  Generator gen_;
  std::vector<Variant> variants_;
};

}  // namespace reso
