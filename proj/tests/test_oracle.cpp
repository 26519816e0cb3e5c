#include <doctest.h>

#include "support.hpp"

#include "reso/oracle.hpp"

#include <cmath>
#include <random>

using namespace testing;

TEST_CASE("quadrature of the cubic letter") {
  auto eq = EquationSpec::cubic_nls();
  FreqAssignment fa{{1, 1}, {2, 2}, {3, 3}};
  const long double t = 0.05L;
  auto q = quad_pi(letter_t1(), fa, t, eq);
  Complex expect = -(std::polar(1.0L, 4 * t) - 1.0L) / 4.0L;
  CHECK(q.converged);
  CHECK(std::abs(q.value - expect) < 1e-10L);
  CHECK(q.error_estimate < 1e-10L);
  CHECK(std::abs(quad_pi(letter_t1(), fa, 0, eq).value) == 0);
}

TEST_CASE("quadrature agrees with the exact iterated integrals") {
  auto eq = EquationSpec::cubic_nls();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> d(-3, 3);
  auto ts = generate_trees(eq, 2);
  int done = 0;
  while (done < 10) {
    FreqAssignment fa;
    for (int i = 1; i <= 5; ++i) fa[i] = d(rng);
    const Tree& t = series(ts, done % 2 ? "T2" : "T3").tree;
    Complex exact;
    try {
      exact = pi_exact(t, eq).eval(fa, 0.2L);
    } catch (const ResonanceError&) {
      continue;
    }
    auto q = quad_pi(t, fa, 0.2L, eq);
    INFO(t.text());
    CHECK(q.converged);
    CHECK(rel_error(q.value, exact) < 1e-10L);
    ++done;
  }
}

TEST_CASE("forest quadrature is a product") {
  auto eq = EquationSpec::cubic_nls();
  FreqAssignment fa{{1, 1}, {2, -2}, {3, 3}, {4, 2}, {5, 0}};
  Forest f({letter_t1(), root_letter()});
  Complex a = quad_pi(f, fa, 0.3L, eq).value;
  Complex b = quad_pi(letter_t1(), fa, 0.3L, eq).value * quad_pi(root_letter(), fa, 0.3L, eq).value;
  CHECK(std::abs(a - b) < 1e-14L);
  CHECK(std::abs(eval_exppoly(pi_exact(f, eq), fa, 0.3L) - a) < 1e-10L);
}

TEST_CASE("order fit") {
  std::vector<std::pair<long double, long double>> pts;
  for (int j = 2; j <= 8; ++j) {
    long double h = std::ldexp(1.0L, -j);
    pts.emplace_back(h, 3 * h * h * h);
  }
  auto f = fit_order(pts);
  CHECK(static_cast<double>(f.slope) == doctest::Approx(3).epsilon(1e-12));
  CHECK(static_cast<double>(std::exp(f.intercept)) == doctest::Approx(3).epsilon(1e-10));
  CHECK(f.residual < 1e-12L);
  CHECK(f.steps.size() == 7);

  pts[3].second *= 1.5;
  CHECK(fit_order(pts).residual > 1e-2L);

  CHECK_THROWS(fit_order({pts.begin(), pts.begin() + 3}));
  auto neg = pts;
  neg[0].second = 0;
  CHECK_THROWS(fit_order(neg));
  auto up = pts;
  std::swap(up[0], up[1]);
  CHECK_THROWS(fit_order(up));
}

TEST_CASE("relative error switches to absolute near zero") {
  CHECK(rel_error(Complex(2.2L), Complex(2)) == doctest::Approx(0.1));
  CHECK(rel_error(Complex(1e-9L), Complex(0)) == doctest::Approx(1e-9));
}

TEST_CASE("integration by parts identity") {
  auto rep = ibp_identity_check(4, 7);
  CHECK(rep.cases == 25);
  CHECK(rep.ok);
  CHECK(rep.max_rel_error < 1e-6L);
}

TEST_CASE("time derivative of the iterated integrals") {
  auto eq = EquationSpec::cubic_nls();
  FreqAssignment fa{{1, 1}, {2, -2}, {3, 3}, {4, 2}, {5, 4}};
  CHECK(dpi_check(letter_t1(), fa, 0.4L, eq) < 1e-8L);
  CHECK(dpi_check(nested(), fa, 0.4L, eq) < 1e-8L);
  FreqAssignment g{{1, 2}, {2, -1}, {3, 3}, {4, 1}, {5, -3}, {6, 4}, {7, 0}};
  int checked = 0;
  for (auto& s : generate_trees(eq, 3)) {
    if (order(s.tree) == 0) continue;
    long double e = 0;
    try {
      e = dpi_check(core_of(s.tree), g, 0.3L, eq);
    } catch (const ResonanceError&) {
      continue;
    }
    INFO(s.name);
    CHECK(e < 1e-7L);
    ++checked;
  }
  CHECK(checked >= 4);
}
