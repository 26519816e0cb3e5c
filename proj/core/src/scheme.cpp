#include "reso/scheme.hpp"

#include <algorithm>
#include <cmath>

namespace reso {

namespace {

Rational binom(int n, int k) {
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct PsiWalk {
  const Word& w;
  int target_m;
  int a;
  int n;
  int r;
  const EquationSpec& eq;
  const ZeroTest& zero;
  std::vector<FreqPoly> letter_phase;
  ExpPoly out;

  void run(std::size_t j, std::vector<int>& m, std::vector<int>& degs, const FreqPoly& prev, const RationalExpr& coef) {
    if (j > w.size()) {
      const int mf = m.back();
      if (mf != target_m) return;
      RationalExpr c = coef * RationalExpr(1 / factorial(mf));
      out += ExpPoly(c, mf, prev);
      if (a == 1 && mf == 0) out -= ExpPoly(c, 0);
      return;
    }
    const int mj = m.back();
    const int upper = r + static_cast<int>(j) - 1 - mj;
    if (upper < 0) return;
    SplitResult s = split_step(letter_phase[j - 1], prev, j, m, degs, n, r, eq.alpha, zero);
    RationalExpr base = RationalExpr::i_power(j == 1 ? 3 : 1) * RationalExpr(eq.weight(w.at(j).freq()));
    degs.push_back(s.dominant.degree());
    FreqPoly low_pow(1);
    for (int p = 0; p <= upper; ++p) {
      RationalExpr bp = base * RationalExpr(binom(mj + p, p)) * RationalExpr(low_pow);
      if (!s.dominant.is_zero()) {
        for (int q = 0; q <= mj + p; ++q) {
          RationalExpr f = bp.times_i(p + q - 1);
          f.divide_by(s.dominant, q + 1);
          m.push_back(mj + p - q);
          run(j + 1, m, degs, s.dominant, coef * f);
          m.pop_back();
        }
      } else {
        m.push_back(mj + p + 1);
        run(j + 1, m, degs, s.dominant, coef * bp.times_i(p));
        m.pop_back();
      }
      low_pow *= s.lower;
    }
    degs.pop_back();
  }
};

}  // namespace

ExpPoly psi(const Word& w, int m, int a, int n, int r, const EquationSpec& eq, const ZeroTest& zero) {
  if (w.empty()) throw std::invalid_argument("psi needs a nonempty word");
  PsiWalk walk{w, m, a, n, r, eq, zero, {}, {}};
  for (auto& l : w.letters()) walk.letter_phase.push_back(phase(l, eq));
  std::vector<int> ms{0}, degs{0};
  walk.run(1, ms, degs, FreqPoly(), RationalExpr(Rational(1)));
  return walk.out;
}

ExpPoly psi(const WordSum& ws, int m, int a, int n, int r, const EquationSpec& eq, const ZeroTest& zero) {
  ExpPoly out;
  for (auto& [w, c] : ws) out += ExpPoly(RationalExpr(Rational(c))) * psi(w, m, a, n, r, eq, zero);
  return out;
}

ExpPoly psi_tilde(const Word& w, const EquationSpec& eq) {
  RationalExpr c(Rational(1));
  FreqPoly partial;
  for (auto& l : w.letters()) {
    partial += phase(l, eq);
    if (partial.is_zero()) throw ResonanceError("partial phase sum of " + w.text());
    c.divide_by(partial);
  }
  return ExpPoly(c, 0, partial);
}

ExpPoly psi_tilde(const WordSum& ws, const EquationSpec& eq) {
  ExpPoly out;
  for (auto& [w, c] : ws) out += ExpPoly(RationalExpr(Rational(c))) * psi_tilde(w, eq);
  return out;
}

ExpPoly integrate(const ExpPoly& g, const ZeroTest& zero) {
  ExpPoly out;
  for (auto& [k, c] : g.terms()) {
    const int m = k.first;
    const FreqPoly& phi = k.second;
    if (phi.is_zero() || (zero && zero(phi))) {
      out += ExpPoly(c * RationalExpr(Rational(1, m + 1)), m + 1);
      continue;
    }
    Rational ff = 1;  // m!/(m-q)!
    for (int q = 0; q <= m; ++q) {
      RationalExpr cq = (c * RationalExpr(q % 2 ? -ff : ff)).times_i(-(q + 1));
      cq.divide_by(phi, q + 1);
      out += ExpPoly(cq, m - q, phi);
      if (q < m) ff *= m - q;
    }
    RationalExpr c0 = (c * RationalExpr(m % 2 ? ff : -ff)).times_i(-(m + 1));
    c0.divide_by(phi, m + 1);
    out += ExpPoly(c0, 0);
  }
  return out;
}

ExpPoly pi_exact(const Tree& t, const EquationSpec& eq, const ZeroTest& zero) {
  ExpPoly inner = ExpPoly::exp_it(eq.dispersion(t.edge(), t.freq())) * pi_exact(Forest(t.children()), eq, zero);
  if (t.edge().kind == EdgeKind::t1) return inner;
  RationalExpr c = RationalExpr::i_power(3) * RationalExpr(eq.weight(t.freq()));
  return ExpPoly(c) * integrate(inner, zero);
}

ExpPoly pi_exact(const Forest& f, const EquationSpec& eq, const ZeroTest& zero) {
  ExpPoly out(Rational(1));
  for (auto& t : f.trees()) out *= pi_exact(t, eq, zero);
  return out;
}

ExpPoly scheme(const Tree& t, int n, int r, const EquationSpec& eq, const ZeroTest& zero) {
  if (order(t) > r) throw std::invalid_argument("tree order exceeds r");
  if (t.edge().kind == EdgeKind::t1)
    return ExpPoly::exp_it(eq.dispersion(t.edge(), t.freq())) * scheme(Forest(t.children()), n, r, eq, zero);
  const int r_t = r - order(t);
  WordSum words = arborify(t);
  ExpPoly out = psi(words, 0, 1, n, r_t, eq, zero) - psi(words, 0, 0, n, r_t, eq, zero);
  for (auto& [k, c] : reduced_coproduct(t)) {
    const Forest& left = k.first;
    const Forest& right = k.second;
    if (right.is_unit()) continue;
    WordSum rw = arborify(right);
    for (int m = 0; m <= r; ++m) {
      if (order(left) > r - m) continue;
      ExpPoly ps = psi(rw, m, 0, n, r_t, eq, zero);
      if (ps.is_zero()) continue;
      ExpPoly lf = scheme(left, n, r - m, eq, zero).truncate(r - m);
      out += ExpPoly(RationalExpr(Rational(c))) * lf * ps;
    }
  }
  return out;
}

ExpPoly scheme(const Forest& f, int n, int r, const EquationSpec& eq, const ZeroTest& zero) {
  ExpPoly out(Rational(1));
  for (auto& t : f.trees()) out *= scheme(t, n, r, eq, zero);
  return out;
}

FreqPoly ErrorTerm::product() const {
  FreqPoly p = weight;
  for (auto& [f, e] : factors) p *= f.pow(static_cast<unsigned>(e));
  return p;
}

std::string ErrorTerm::str() const {
  std::string s = "t^" + std::to_string(tpow);
  if (weight != FreqPoly(1)) s += " * (" + weight.str() + ")";
  for (auto& [f, e] : factors) s += " * (" + f.str() + ")^" + std::to_string(e);
  return s;
}

bool operator<(const ErrorTerm& a, const ErrorTerm& b) {
  if (a.tpow != b.tpow) return a.tpow < b.tpow;
  if (a.weight != b.weight) return a.weight < b.weight;
  return a.factors < b.factors;
}

static FreqPoly d_alpha(const Forest& f, const EquationSpec& eq) {
  FreqPoly p(1);
  std::function<void(const Tree&)> walk = [&](const Tree& t) {
    if (t.edge().kind == EdgeKind::t2) p *= eq.weight(t.freq());
    for (auto& c : t.children()) walk(c);
  };
  for (auto& t : f.trees()) walk(t);
  return p;
}

static void enumerate_m(std::size_t len, int r_t, std::vector<int>& m, const std::function<void()>& emit) {
  if (m.size() == len) {
    emit();
    return;
  }
  const int j = static_cast<int>(m.size()) + 1;
  for (int v = 0; v <= r_t + j - 1; ++v) {
    m.push_back(v);
    enumerate_m(len, r_t, m, emit);
    m.pop_back();
  }
}

std::vector<ErrorTerm> local_error_terms(const Tree& t, int n, int r, const EquationSpec& eq) {
  if (order(t) > r) throw std::invalid_argument("tree order exceeds r");
  if (t.edge().kind == EdgeKind::t1) return local_error_terms(Forest(t.children()), n, r, eq);
  const int r_t = r - order(t);
  std::vector<ErrorTerm> out;
  for (auto& [k, c] : coproduct_bck(t)) {
    if (k.second.is_unit()) continue;
    FreqPoly wl = d_alpha(k.first, eq);
    for (auto& [w, cw] : arborify(k.second)) {
      std::vector<int> m{0};
      enumerate_m(w.size(), r_t, m, [&] {
        auto splits = split_adaptive(w, m, n, r_t, eq);
        ErrorTerm e;
        e.weight = wl;
        e.tpow = r + 1;
        for (std::size_t j = 1; j <= w.size(); ++j) {
          e.weight *= eq.weight(w.at(j).freq());
          int power = r_t + static_cast<int>(j) - m[j - 1];
          e.factors.emplace_back(splits[j - 1].lower, power);
        }
        out.push_back(std::move(e));
      });
    }
  }
  for (auto& [k, c] : reduced_coproduct(t)) {
    if (k.first.is_unit() || k.second.is_unit()) continue;
    WordSum rw = arborify(k.second);
    for (int m = 0; m <= r; ++m) {
      if (order(k.first) > r - m) continue;
      if (psi(rw, m, 0, n, r_t, eq).is_zero()) continue;
      for (auto e : local_error_terms(k.first, n, r - m, eq)) {
        e.tpow = r + 1;
        out.push_back(std::move(e));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ErrorTerm> local_error_terms(const Forest& f, int n, int r, const EquationSpec& eq) {
  std::vector<ErrorTerm> out;
  for (auto& t : f.trees()) {
    auto e = local_error_terms(t, n, r, eq);
    out.insert(out.end(), e.begin(), e.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int required_degree(const std::vector<ErrorTerm>& terms) {
  int d = 0;
  for (auto& e : terms) d = std::max(d, e.degree());
  return d;
}

ZeroTest vanishes_at(const FreqAssignment& fa) {
  return [fa](const FreqPoly& p) { return p.eval_exact(fa) == 0; };
}

ResonantEvaluator::ResonantEvaluator(Generator gen) : gen_(std::move(gen)) {}

static long double eval_terms(const std::vector<std::pair<long double, std::vector<std::pair<int, int>>>>& terms,
                              const long double* k) {
  long double s = 0;
  for (auto& [c, m] : terms) {
    long double v = c;
    for (auto& [i, e] : m)
      for (int j = 0; j < e; ++j) v *= k[i];
    s += v;
  }
  return s;
}

const ResonantEvaluator::Variant& ResonantEvaluator::select(const long double* k, int max_symbol) {
  for (auto& v : variants_) {
    bool ok = true;
    for (auto& d : v.decisions) {
      bool z = std::fabs(eval_terms(d.terms, k)) < 1e-9L;
      if (z != d.zero) {
        ok = false;
        break;
      }
    }
    if (ok) return v;
  }
  FreqAssignment fa;
  for (int i = 0; i <= max_symbol; ++i) fa[i] = std::llround(k[i]);
  Variant v;
  ZeroTest rec = [&](const FreqPoly& p) {
    bool z = p.eval_exact(fa) == 0;
    Decision d{p, {}, z};
    for (auto& [m, c] : p.terms()) d.terms.emplace_back(c.convert_to<long double>(), m);
    v.decisions.push_back(std::move(d));
    return z;
  };
  v.compiled = CompiledExpPoly(gen_(rec));
  variants_.push_back(std::move(v));
  return variants_.back();
}

Complex ResonantEvaluator::eval(const long double* k, int max_symbol, long double t) {
  return select(k, max_symbol).compiled.eval(k, t);
}

Complex ResonantEvaluator::eval(const FreqAssignment& fa, long double t) {
  int mx = 0;
  for (auto& [i, v] : fa) mx = std::max(mx, i);
  std::vector<long double> k(static_cast<std::size_t>(mx) + 1, 0.0L);
  for (auto& [i, v] : fa) k[static_cast<std::size_t>(i)] = static_cast<long double>(v);
  return eval(k.data(), mx, t);
}

}  // namespace reso
