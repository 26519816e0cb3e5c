#pragma once

#include "reso/scheme.hpp"

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

namespace reso {

/// Fourier coefficients u_k, k = -N/2 .. N/2-1, of a function on the torus.
struct GridState {
  int N = 0;
  std::vector<Complex> u;
  long double time = 0;

  explicit GridState(int modes = 0);

  int kmin() const { return -N / 2; }
  int kmax() const { return N / 2 - 1; }
  bool contains(long long k) const { return k >= kmin() && k <= kmax(); }
  Complex& at(long long k) { return u[static_cast<std::size_t>(k + N / 2)]; }
  const Complex& at(long long k) const { return u[static_cast<std::size_t>(k + N / 2)]; }

  long double mass() const;
  long double norm_l2() const;
  long double norm_h1() const;
  bool finite() const;
};

GridState operator-(const GridState& a, const GridState& b);

enum class Profile { smooth, rough };

struct StepperConfig {
  int r = 1;
  int n = 2;
  int N = 32;
  long double tau = 1.0L / 64;
  int steps = 1;
  Profile profile = Profile::smooth;
  long double gamma = 1;  // decay exponent of the rough profile
  std::uint64_t seed = 1;
};

/// Seeded initial data: smooth has |u_k| ~ exp(-|k|/2), rough |u_k| ~
/// (1+|k|)^(-gamma-1/2); both normalised to unit L2 norm.
GridState initial_data(const StepperConfig& cfg);

/// Truncated tree-series integrator: every tree of order <= r contributes
/// its weight times the scheme evaluated over all leaf tuples whose node
/// frequencies stay on the grid.
class Stepper {
 public:
  Stepper(const EquationSpec& eq, int r, int n, int N);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  GridState step(const GridState& s, long double tau);
  /// Per-tree expressions used by the stepper, in series order.
  std::vector<std::pair<std::string, ExpPoly>> schemes() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

GridState one_step(const GridState& s, const StepperConfig& cfg, Stepper& stepper);

/// Right-hand side of the truncated cubic equation in the twisted variable.
class ReferenceSolver {
 public:
  explicit ReferenceSolver(const EquationSpec& eq);
  /// Classical RK4 with step h (must divide the interval).
  GridState rk4(const GridState& s, long double t_final, long double h) const;
  /// Gauss-Legendre collocation (4 stages) with fixed-point stage iteration.
  GridState collocation(const GridState& s, long double t_final, long double h) const;

 private:
  std::vector<Complex> rhs(const std::vector<Complex>& v, long double t, int N) const;
  int sign_ = 0;  // conjugated slot of the cubic nonlinearity
  FreqPoly p_t1_;
};

struct ReferenceResult {
  std::vector<GridState> checkpoints;
  long double cross_check = 0;  // RK4 vs collocation at the last checkpoint
};

/// RK4 reference recorded at each requested time, cross-validated against
/// the collocation integrator; throws when the two disagree by more than
/// `agree`.
ReferenceResult reference_solution(const EquationSpec& eq, const GridState& s, const std::vector<long double>& times,
                                   long double h, long double agree = 1e-8L);

struct StudyRow {
  long double tau = 0;
  long double local_l2 = 0;
  long double local_h1 = 0;
  long double global_l2 = 0;
  long double slope_running = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  long double local_slope = 0;
  long double local_residual = 0;
  long double global_slope = 0;
  long double global_residual = 0;
  long double cross_check = 0;
  bool diverged = false;
};

/// Local errors after one step and global errors at t_final for each tau.
StudyResult convergence_study(const EquationSpec& eq, const StepperConfig& cfg, const std::vector<long double>& taus,
                              long double t_final);

void write_csv(std::ostream& os, const StudyResult& r);

}  // namespace reso
