// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure or overrun of the time budget.
#include "support.hpp"

#include "reso/nls.hpp"
#include "reso/oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

class Run {
 public:
  void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < budget_s;
    bool pass = o.ok && in_time;
    failures_ += !pass;
    std::printf("%s %d %s (%.2fs of %.0fs)%s%s\n", pass ? "PASS" : "FAIL", id, title, secs, budget_s,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    if (!in_time) std::printf("     time budget exceeded\n");
    std::fflush(stdout);
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond) {
    o.ok = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

std::string fmt(long double v) {
  std::ostringstream s;
  s.precision(4);
  s << static_cast<double>(v);
  return s.str();
}

Outcome hopf_fixtures() {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  TensorSum letter{{{Forest(), Forest(letter_t1())}, 1}, {{Forest(letter_t1()), Forest()}, 1}};
  expect(o, coproduct_bck(letter_t1()) == letter, "coproduct of the letter");
  TensorSum nest{{{Forest(), Forest(nested())}, 1},
                 {{Forest(nested()), Forest()}, 1},
                 {{Forest(letter_t1()), Forest(root_letter())}, 1}};
  expect(o, coproduct_bck(nested()) == nest, "coproduct of the nested tree");
  expect(o, arborify(nested()) == WordSum{{Word({root_letter(), letter_t1()}), 1}}, "arborification");
  auto ts = generate_trees(eq, 2);
  const long long s[] = {1, 2, 2, 4}, u[] = {1, 2, 4, 4};
  for (int i = 0; i < 4; ++i) {
    auto& st = series(ts, "T" + std::to_string(i));
    expect(o, st.symmetry == s[i], "S(T" + std::to_string(i) + ")");
    expect(o, st.upsilon == u[i], "upsilon(T" + std::to_string(i) + ")");
  }
  return o;
}

Outcome splitting_fixtures() {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  auto s = split_adaptive(Word({letter_t1()}), {0}, 2, 1, eq);
  expect(o, s[0].dominant == FreqPoly::parse("2*k1^2"), "dominant part of the letter");
  expect(o, s[0].lower == FreqPoly::parse("-2*k1*(k2+k3) + 2*k2*k3"), "lower part of the letter");
  auto t = split_adaptive(Word({letter_t1()}), {0}, 6, 1, eq);
  expect(o, t[0].dominant.is_zero() && t[0].lower == phase(letter_t1(), eq), "n = 6 keeps the full phase");
  FreqPoly target = FreqPoly::parse("2*(k1+k4)^2");
  expect(o, split_word(Word({root_letter(), letter_t1()}), eq).back().dominant == target, "dominant part of the word");
  expect(o, dominant_closed_form(nested(), eq) == target, "closed form");
  return o;
}

Outcome scheme_fixtures() {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  expect(o, scheme(nested(), 2, 2, eq) == ExpPoly(Rational(-1, 2), 2), "nested tree");
  FreqPoly D = FreqPoly::parse("2*k1^2"), L = FreqPoly::parse("-2*k1*(k2+k3) + 2*k2*k3");
  // -i (1/(iD) - iL/(i^2 D^2)) (e^{itD} - 1) - i^2 t L/(iD) e^{itD}
  RationalExpr one_over_iD = RationalExpr(Rational(1)).times_i(-1).divide_by(D);
  RationalExpr iL_over = RationalExpr(L).times_i(-1).divide_by(D, 2);
  RationalExpr a = RationalExpr::i_power(3) * (one_over_iD - iL_over);
  RationalExpr b = -(RationalExpr::i_power(2) * RationalExpr(L).times_i(-1).divide_by(D));
  ExpPoly expect_letter = ExpPoly(a, 0, D) - ExpPoly(a) + ExpPoly(b, 1, D);
  expect(o, scheme(letter_t1(), 2, 2, eq) == expect_letter, "letter at second order");
  auto e = local_error_terms(letter_t1(), 2, 2, eq);
  expect(o, e.size() == 1 && e[0].product() == L.pow(2) && e[0].tpow == 3, "local error of the letter");
  return o;
}

Outcome oracle_order(std::uint64_t seed) {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-2, 2);
  long double worst = 1e9;
  std::string worst_case;
  int fits = 0;
  for (auto& st : generate_trees(eq, 2)) {
    const int ord = order(st.tree);
    for (int r = ord; r <= ord + 1; ++r) {
      ExpPoly s = scheme(st.tree, 2, r, eq);
      if (ord == 0) {
        FreqAssignment fa{{1, 3}};
        long double err = std::abs(s.eval(fa, 0.5L) - quad_pi(st.tree, fa, 0.5L, eq).value);
        expect(o, err < 1e-15L, st.name + " is not exact");
        continue;
      }
      int found = 0, tries = 0;
      while (found < 5) {
        if (++tries > 500) {
          expect(o, false, st.name + ": too few nonresonant tuples");
          break;
        }
        FreqAssignment fa;
        for (int i = 1; i <= 5; ++i) fa[i] = d(rng);
        std::vector<std::pair<long double, long double>> errs;
        try {
          for (int j = 4; j <= 10; ++j) {
            long double t = std::ldexp(1.0L, -j);
            auto q = quad_pi(st.tree, fa, t, eq, 1e-20L);
            errs.emplace_back(t, std::abs(q.value - s.eval(fa, t)));
          }
        } catch (const ResonanceError&) {
          continue;
        }
        if (errs[0].second < 1e-14L) continue;
        ++found;
        auto f = fit_order(errs);
        ++fits;
        long double margin = f.slope - (r + 0.8L);
        if (margin < worst) {
          worst = margin;
          worst_case = st.name + " r=" + std::to_string(r) + " slope " + fmt(f.slope);
        }
        expect(o, margin >= 0, st.name + " r=" + std::to_string(r) + " slope " + fmt(f.slope));
      }
    }
  }
  if (o.ok) o.detail = std::to_string(fits) + " fits, tightest " + worst_case;
  return o;
}

Outcome algebra_suite() {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  int trees = 0;
  for (auto& st : generate_trees(eq, 3)) {
    if (order(st.tree) == 0) continue;
    expect(o, coassoc_check(core_of(st.tree)).equal, "coassociativity on " + st.name);
    ++trees;
  }

  auto dual = duality_check(8);
  expect(o, dual.mismatches.empty(), "pairing duality fails at " + (dual.mismatches.empty() ? "" : dual.mismatches[0]));
  const long long pairs = dual.compared;

  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> sym(1, 12), val(-6, 6), len(1, 3), coin(0, 1);
  auto letter = [&] {
    int a = sym(rng), b = sym(rng), c = sym(rng);
    FreqVector f = FreqVector::symbol(b) + FreqVector::symbol(c) - FreqVector::symbol(a);
    int conj = coin(rng);
    if (conj) f = -f;
    return Tree({EdgeKind::t2, conj}, f,
                {Tree::leaf(1 - conj, FreqVector::symbol(a)), Tree::leaf(conj, FreqVector::symbol(b)),
                 Tree::leaf(conj, FreqVector::symbol(c))});
  };
  auto word = [&] {
    std::vector<Tree> ls;
    for (int i = len(rng); i > 0; --i) ls.push_back(letter());
    return Word(ls);
  };
  int checked = 0;
  long double worst = 0;
  while (checked < 100) {
    Word u = word(), v = word();
    FreqAssignment fa;
    for (int i = 1; i <= 12; ++i) fa[i] = val(rng);
    const long double t = 0.37L;
    Complex lhs, rhs;
    try {
      rhs = psi_tilde(u, eq).eval(fa, t) * psi_tilde(v, eq).eval(fa, t);
      for (auto& [w, c] : shuffle(u, v)) lhs += static_cast<long double>(c) * psi_tilde(w, eq).eval(fa, t);
    } catch (const ResonanceError&) {
      continue;
    }
    worst = std::max(worst, std::abs(lhs - rhs));
    ++checked;
  }
  expect(o, worst <= 1e-10L, "shuffle character defect " + fmt(worst));
  if (o.ok)
    o.detail = std::to_string(trees) + " trees coassociative, " + std::to_string(pairs) + " dual pairs, shuffle defect " +
               fmt(worst);
  return o;
}

Outcome identities() {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  auto ibp = ibp_identity_check(3, 17, 1e-6L);
  expect(o, ibp.ok, "integration by parts identity off by " + fmt(ibp.max_rel_error));
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(-4, 4);
  long double worst = 0;
  int cases = 0;
  for (auto& st : generate_trees(eq, 3)) {
    if (order(st.tree) == 0) continue;
    Tree c = core_of(st.tree);
    int found = 0;
    while (found < 3) {
      FreqAssignment fa;
      for (int i = 1; i <= 7; ++i) fa[i] = d(rng);
      try {
        worst = std::max(worst, dpi_check(c, fa, 0.3L, eq));
      } catch (const ResonanceError&) {
        continue;
      }
      ++found;
      ++cases;
    }
  }
  expect(o, worst <= 1e-6L, "time derivative identity off by " + fmt(worst));
  if (o.ok)
    o.detail = "ibp " + fmt(ibp.max_rel_error) + " over " + std::to_string(ibp.cases) + " cases, derivative " + fmt(worst) +
               " over " + std::to_string(cases) + " cases";
  return o;
}

Outcome dominant_consistency() {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  int words = 0;
  for (auto& st : generate_trees(eq, 3)) {
    if (order(st.tree) == 0) continue;
    Tree c = core_of(st.tree);
    FreqPoly closed = dominant_closed_form(c, eq);
    for (auto& [w, n] : arborify(c)) {
      expect(o, split_word(w, eq).back().dominant == closed, st.name + " word " + w.text());
      ++words;
    }
  }
  if (o.ok) o.detail = std::to_string(words) + " words";
  return o;
}

Outcome nls_convergence() {
  Outcome o;
  auto eq = EquationSpec::cubic_nls();
  std::vector<long double> taus;
  for (int j = 6; j <= 11; ++j) taus.push_back(std::ldexp(1.0L, -j));
  StepperConfig cfg;
  cfg.N = 32;
  cfg.seed = 1;
  cfg.r = 1;
  auto first = convergence_study(eq, cfg, taus, 0.25L);
  cfg.r = 2;
  auto second = convergence_study(eq, cfg, taus, 0);
  expect(o, std::fabs(first.local_slope - 2) <= 0.2L, "r=1 local slope " + fmt(first.local_slope));
  expect(o, std::fabs(first.global_slope - 1) <= 0.2L, "r=1 global slope " + fmt(first.global_slope));
  expect(o, std::fabs(second.local_slope - 3) <= 0.3L, "r=2 local slope " + fmt(second.local_slope));
  expect(o, !first.diverged && !second.diverged, "divergence");
  if (o.ok)
    o.detail = "r=1 local " + fmt(first.local_slope) + " global " + fmt(first.global_slope) + " (heuristic), r=2 local " +
               fmt(second.local_slope) + ", reference cross-check " + fmt(first.cross_check);
  return o;
}

}  // namespace

int main() {
  Run run;
  run.criterion(1, "Hopf fixtures", 1, hopf_fixtures);
  run.criterion(2, "splitting fixtures", 1, splitting_fixtures);
  run.criterion(3, "scheme fixtures", 1, scheme_fixtures);
  run.criterion(4, "oracle order property", 60, [] { return oracle_order(12345); });
  run.criterion(5, "algebra property suite", 120, algebra_suite);
  run.criterion(6, "identity checks", 30, identities);
  run.criterion(7, "dominant-part consistency", 10, dominant_consistency);
  run.criterion(8, "NLS convergence", 300, nls_convergence);
  return run.failures() == 0 ? 0 : 1;
}
