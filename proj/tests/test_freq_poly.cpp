#include <doctest.h>

#include "reso/freq_poly.hpp"

#include <random>

using namespace reso;

namespace {

FreqPoly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nterms(0, 6), sym(1, 4), expo(0, 3), num(-9, 9), den(1, 4);
  FreqPoly p;
  for (int i = nterms(rng); i > 0; --i) {
    Monomial m;
    for (int s = 1; s <= 4; ++s) {
      (void)sym;
      int e = expo(rng) - 1;
      if (e > 0) m.emplace_back(s, e);
    }
    p += FreqPoly::monomial(m, Rational(num(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST_CASE("arithmetic matches hand expansion") {
  auto l = FreqPoly::parse("-k1+k2+k3");
  CHECK(l.pow(2) == FreqPoly::parse("k1^2+k2^2+k3^2-2*k1*k2-2*k1*k3+2*k2*k3"));
  CHECK(FreqPoly::parse("2*k1^2") + FreqPoly::parse("-2*k1*k2") == FreqPoly::parse("2*k1^2-2*k1*k2"));
  auto phase = l.pow(2) + FreqPoly::parse("k1^2 - k2^2 - k3^2");
  CHECK(phase == FreqPoly::parse("2*k1^2 - 2*k1*(k2+k3) + 2*k2*k3"));
  CHECK(phase.str() == "2*k1^2 - 2*k1*k2 - 2*k1*k3 + 2*k2*k3");
}

TEST_CASE("degree is the largest single-variable exponent") {
  CHECK(FreqPoly::parse("k1*k2").degree() == 1);
  CHECK(FreqPoly::parse("k1^2").degree() == 2);
  CHECK(FreqPoly().degree() == 0);
  CHECK(FreqPoly::parse("k1*k2*k3 + k4^2").degree() == 2);
}

TEST_CASE("dominant projection") {
  CHECK(p_dom(FreqPoly::parse("2*k1^2-2*k1*k2-2*k1*k3+2*k2*k3")) == FreqPoly::parse("2*k1^2"));
  CHECK(p_dom(FreqPoly::parse("2*k1^2 + 2*k4^2 + 4*k1*k4 - 2*k2*k4 + 3*k3")) == FreqPoly::parse("2*(k1+k4)^2"));
  CHECK(p_dom(FreqPoly::parse("k1*k2+k2*k3")).is_zero());
  SUBCASE("odd exponents keep signs") {
    CHECK(p_dom(FreqPoly::parse("k1^3 - k2^3 + k1*k2")) == FreqPoly::parse("(k1-k2)^3"));
  }
  SUBCASE("even exponents need a common sign") {
    CHECK(p_dom(FreqPoly::parse("k1^2 - k2^2")).is_zero());
    CHECK(p_dom(FreqPoly::parse("k1^2 + 2*k2^2")).is_zero());
  }
  CHECK(p_dom(FreqPoly(7)).is_zero());
}

TEST_CASE("dominant projection invariants on random polynomials") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    FreqPoly p = random_poly(rng);
    FreqPoly d = p_dom(p);
    CHECK(p_dom(d) == d);
    CHECK(d + (p - d) == p);
    if (!d.is_zero()) CHECK(d.degree() == p.degree());
  }
}

TEST_CASE("exact arithmetic round trips") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    FreqPoly a = random_poly(rng), b = random_poly(rng);
    REQUIRE((a + b) - b == a);
  }
}

TEST_CASE("printing and parsing agree") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    FreqPoly a = random_poly(rng);
    CHECK(FreqPoly::parse(a.str()) == a);
  }
  CHECK(FreqPoly::parse("1/2*k^2 - k").str() == "1/2*k^2 - k");
  CHECK_THROWS(FreqPoly::parse("k1 +"));
  CHECK_THROWS(FreqPoly::parse("k1^-1"));
}

TEST_CASE("evaluation and substitution") {
  auto p = FreqPoly::parse("2*k1^2 - 2*k1*k2 + 1/2");
  FreqAssignment fa{{1, 3}, {2, -1}};
  CHECK(p.eval_exact(fa) == Rational(49, 2));
  CHECK(static_cast<double>(p.eval(fa)) == doctest::Approx(24.5));
  CHECK(FreqPoly::parse("k^2").substitute(0, FreqPoly::parse("-k1+k2")) == FreqPoly::parse("k1^2-2*k1*k2+k2^2"));
}

TEST_CASE("frequency vectors") {
  auto v = FreqVector::parse("-k1+k2+k3");
  CHECK(v.str() == "-k1+k2+k3");
  CHECK(v.is_leaf_admissible());
  CHECK_FALSE(FreqVector::parse("2*k1").is_leaf_admissible());
  CHECK((v + FreqVector::symbol(1)).str() == "k2+k3");
  CHECK(FreqVector().str() == "0");
  CHECK(v.eval({{1, 1}, {2, 2}, {3, 3}}) == 4);
}
