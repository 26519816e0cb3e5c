#pragma once

#include "reso/scheme.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace reso {

struct QuadResult {
  Complex value;
  long double error_estimate = 0;
  bool converged = true;
};

/// Nested adaptive Gauss-Kronrod evaluation of the iterated integrals, with
/// initial panels short enough that the phase turns by less than pi/4.
QuadResult quad_pi(const Tree& t, const FreqAssignment& fa, long double time, const EquationSpec& eq,
                   long double tol = 1e-12L);
QuadResult quad_pi(const Forest& f, const FreqAssignment& fa, long double time, const EquationSpec& eq,
                   long double tol = 1e-12L);

Complex eval_exppoly(const ExpPoly& e, const FreqAssignment& fa, long double time);

struct OrderFit {
  std::vector<long double> steps;
  std::vector<long double> errors;
  long double slope = 0;
  long double intercept = 0;
  long double residual = 0;  // root mean square of the log-log residuals
};

/// Least-squares slope of log(error) against log(step).
OrderFit fit_order(const std::vector<std::pair<long double, long double>>& errs);

struct IdentityReport {
  long double max_rel_error = 0;
  int cases = 0;
  bool ok = true;
};

/// Relative error used across the checks: relative where |ref| > 1e-8,
/// absolute otherwise.
long double rel_error(Complex value, Complex ref);

/// Integration-by-parts identity for t^n/n! i^n L^n e^{itD} V(t), n <= n_max,
/// at seeded nonresonant (D, L) and smooth V.
IdentityReport ibp_identity_check(int n_max, std::uint64_t seed, long double tol = 1e-6L);

/// Time derivative of Pi(t) against -i sum Pi(F) e^{itF(l)} |nabla|^alpha(l)
/// over the terms F (x) l of the coproduct whose right slot is a letter.
long double dpi_check(const Tree& t, const FreqAssignment& fa, long double time, const EquationSpec& eq);

}  // namespace reso
