#include <doctest.h>

#include "support.hpp"

#include "reso/nls.hpp"

#include <cmath>
#include <sstream>

using namespace testing;

namespace {

GridState single_mode(int N, int k, Complex a) {
  GridState s(N);
  s.at(k) = a;
  return s;
}

}  // namespace

TEST_CASE("grid state basics") {
  GridState s(8);
  CHECK(s.kmin() == -4);
  CHECK(s.kmax() == 3);
  CHECK_FALSE(s.contains(4));
  s.at(1) = Complex(3, 4);
  CHECK(s.mass() == doctest::Approx(25));
  CHECK(s.norm_h1() == doctest::Approx(std::sqrt(50.0)));
  CHECK(s.finite());
  CHECK((s - s).norm_l2() == 0);
  CHECK_THROWS(GridState(7));
  CHECK_THROWS(s - GridState(16));
}

TEST_CASE("initial data") {
  StepperConfig cfg;
  auto a = initial_data(cfg), b = initial_data(cfg);
  CHECK(a.norm_l2() == doctest::Approx(1));
  CHECK((a - b).norm_l2() == 0);
  cfg.seed = 2;
  CHECK((a - initial_data(cfg)).norm_l2() > 0);
  cfg.profile = Profile::rough;
  auto r = initial_data(cfg);
  CHECK(r.norm_l2() == doctest::Approx(1));
  CHECK(r.norm_h1() > a.norm_h1());
  cfg.gamma = 0.4L;
  CHECK_THROWS(initial_data(cfg));
}

TEST_CASE("zero data stays zero") {
  auto eq = EquationSpec::cubic_nls();
  Stepper st(eq, 2, 2, 16);
  GridState z(16);
  CHECK(st.step(z, 0.1L).norm_l2() == 0);
}

TEST_CASE("linear flow without nonlinear weight") {
  auto eq = EquationSpec::cubic_nls();
  eq.nabla_alpha = FreqPoly(0);
  Stepper st(eq, 2, 2, 16);
  StepperConfig cfg;
  cfg.N = 16;
  auto s = initial_data(cfg);
  auto out = st.step(s, 0.25L);
  for (int k = s.kmin(); k <= s.kmax(); ++k)
    CHECK(std::abs(out.at(k) - std::polar(1.0L, -0.25L * k * k) * s.at(k)) < 1e-15L);
  CHECK(out.time == doctest::Approx(0.25));
}

// A single mode solves the cubic equation exactly: u = a exp(-it(k^2 + |a|^2)).
TEST_CASE("single mode") {
  auto eq = EquationSpec::cubic_nls();
  const Complex a(0.6L, 0.3L);
  for (int r = 1; r <= 2; ++r) {
    Stepper st(eq, r, 2, 16);
    long double prev = 0;
    for (long double tau : {0.02L, 0.01L}) {
      auto out = st.step(single_mode(16, 1, a), tau);
      Complex exact = a * std::polar(1.0L, -tau * (1 + std::norm(a)));
      long double err = std::abs(out.at(1) - exact);
      if (prev > 0) {
        INFO("r = ", r);
        CHECK(std::log2(prev / err) == doctest::Approx(r + 1).epsilon(0.05));
      }
      prev = err;
    }
  }
}

TEST_CASE("stepper expressions") {
  auto eq = EquationSpec::cubic_nls();
  Stepper st(eq, 2, 2, 16);
  auto sc = st.schemes();
  REQUIRE(sc.size() == 4);
  CHECK(sc[0].first == "T0");
  CHECK(sc[0].second == ExpPoly::exp_it(FreqPoly::parse("-k1^2")));
  CHECK(sc[1].first == "T1");
  CHECK(sc[1].second == ExpPoly::exp_it(FreqPoly::parse("-(-k1+k2+k3)^2")) * scheme(letter_t1(), 2, 2, eq));
  CHECK(sc[2].second.max_tpow() == 2);
}

TEST_CASE("stepper against a brute-force series evaluation") {
  auto eq = EquationSpec::cubic_nls();
  const int N = 8;
  StepperConfig cfg;
  cfg.N = N;
  auto s = initial_data(cfg);
  Stepper st(eq, 2, 2, N);
  const long double tau = 0.05L;
  auto out = st.step(s, tau);
  // Sum every tree over its leaf tuples directly from the full expressions.
  GridState ref(N);
  for (auto& ser : generate_trees(eq, 2)) {
    ResonantEvaluator ev([&](const ZeroTest& z) { return scheme(ser.tree, 2, 2, eq, z); });
    auto ls = leaves(ser.tree);
    const std::size_t L = ls.size();
    std::vector<int> idx(L, s.kmin());
    long double sign = 1;
    std::function<void(const Tree&)> count = [&](const Tree& t) {
      if (t.edge().kind == EdgeKind::t2 && t.edge().conj) sign = -sign;
      for (auto& c : t.children()) count(c);
    };
    count(ser.tree);
    while (true) {
      FreqAssignment fa;
      for (std::size_t i = 0; i < L; ++i) fa[ls[i].freq().coefficients().begin()->first] = idx[i];
      bool inside = true;
      std::function<void(const Tree&)> check = [&](const Tree& t) {
        if (!s.contains(t.freq().eval(fa))) inside = false;
        for (auto& c : t.children()) check(c);
      };
      check(ser.tree);
      if (inside) {
        Complex p = static_cast<long double>(ser.weight.convert_to<long double>()) * sign;
        for (std::size_t i = 0; i < L; ++i) p *= ls[i].edge().conj ? std::conj(s.at(idx[i])) : s.at(idx[i]);
        ref.at(ser.tree.freq().eval(fa)) += p * ev.eval(fa, tau);
      }
      std::size_t i = 0;
      while (i < L && ++idx[i] > s.kmax()) idx[i++] = s.kmin();
      if (i == L) break;
    }
  }
  CHECK((out - ref).norm_l2() < 1e-14L);
}

TEST_CASE("reference solvers agree") {
  auto eq = EquationSpec::cubic_nls();
  StepperConfig cfg;
  cfg.N = 16;
  auto s = initial_data(cfg);
  ReferenceSolver ref(eq);
  auto a = ref.rk4(s, 0.125L, 1.0L / 1024);
  auto b = ref.collocation(s, 0.125L, 1.0L / 256);
  CHECK((a - b).norm_l2() < 1e-10L);
  CHECK(a.mass() == doctest::Approx(s.mass()).epsilon(1e-12));
  auto res = reference_solution(eq, s, {0.0625L, 0.125L}, 1.0L / 1024);
  REQUIRE(res.checkpoints.size() == 2);
  CHECK((res.checkpoints[1] - a).norm_l2() < 1e-15L);
  CHECK(res.cross_check < 1e-10L);
  CHECK_THROWS(ref.rk4(s, 0.1L, 0.03L));
  auto other = eq;
  other.nonlinearity = {0, 0, 0};
  CHECK_THROWS(ReferenceSolver{other});
}

TEST_CASE("small convergence study") {
  auto eq = EquationSpec::cubic_nls();
  StepperConfig cfg;
  cfg.N = 16;
  cfg.r = 1;
  std::vector<long double> taus{1.0L / 16, 1.0L / 32, 1.0L / 64, 1.0L / 128};
  auto res = convergence_study(eq, cfg, taus, 0);
  REQUIRE(res.rows.size() == 4);
  CHECK(res.local_slope == doctest::Approx(2).epsilon(0.1));
  CHECK_FALSE(res.diverged);
  std::ostringstream os;
  write_csv(os, res);
  CHECK(os.str().rfind("tau,local_err_L2,local_err_H1,global_err_L2,slope_running\n", 0) == 0);
  CHECK_THROWS(convergence_study(eq, cfg, {0.1L, 0.05L}, 0));
}
