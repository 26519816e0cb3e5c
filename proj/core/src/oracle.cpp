#include "reso/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace reso {

namespace {

// Kronrod 15-point nodes on [-1,1] (positive half, last is the midpoint) and
// weights; the Gauss 7-point rule uses the odd-indexed nodes.
constexpr long double xgk[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.0L};
constexpr long double wgk[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
constexpr long double wg[4] = {0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
                               0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

constexpr int max_depth = 30;

struct Quad {
  const FreqAssignment& fa;
  const EquationSpec& eq;
  long double tol;
  long double err = 0;
  bool converged = true;

  template <class F>
  Complex gk(F&& f, long double a, long double b, long double& est) {
    const long double c = (a + b) / 2, h = (b - a) / 2;
    Complex fc = f(c);
    Complex k = fc * wgk[7], g = fc * wg[3];
    for (int i = 0; i < 7; ++i) {
      Complex s = f(c - h * xgk[i]) + f(c + h * xgk[i]);
      k += s * wgk[i];
      if (i % 2 == 1) g += s * wg[i / 2];
    }
    est = std::abs((k - g) * h);
    return k * h;
  }

  template <class F>
  Complex adapt(F&& f, long double a, long double b, long double panel_tol, int depth) {
    long double est = 0;
    Complex v = gk(f, a, b, est);
    const long double floor = 64 * std::numeric_limits<long double>::epsilon() * std::abs(v);
    if (est <= panel_tol || est <= floor || depth >= max_depth) {
      if (est > panel_tol && est > floor) converged = false;
      err += est;
      return v;
    }
    const long double m = (a + b) / 2;
    return adapt(f, a, m, panel_tol / 2, depth + 1) + adapt(f, m, b, panel_tol / 2, depth + 1);
  }

  long double oscillation(const Tree& t) {
    long double o = std::fabs(eq.dispersion(t.edge(), t.freq()).eval(fa));
    for (auto& c : t.children()) o += oscillation(c);
    return o;
  }

  Complex forest(const std::vector<Tree>& ts, long double s) {
    Complex p = 1;
    for (auto& c : ts) p *= tree(c, s);
    return p;
  }

  Complex tree(const Tree& t, long double s) {
    const long double disp = eq.dispersion(t.edge(), t.freq()).eval(fa);
    if (t.edge().kind == EdgeKind::t1) return std::polar(1.0L, s * disp) * forest(t.children(), s);
    if (s == 0) return 0;
    auto integrand = [&](long double x) { return std::polar(1.0L, x * disp) * forest(t.children(), x); };
    long double osc = oscillation(t);
    int panels = std::max(1, static_cast<int>(std::ceil(s * osc / (std::numbers::pi_v<long double> / 4))));
    Complex sum = 0;
    for (int p = 0; p < panels; ++p)
      sum += adapt(integrand, s * p / panels, s * (p + 1) / panels, tol / panels, 0);
    return Complex(0, -1) * eq.weight(t.freq()).eval(fa) * sum;
  }
};

template <class F>
Complex derivative(F&& f, long double t, long double h) {
  return (f(t - 2 * h) - 8.0L * f(t - h) + 8.0L * f(t + h) - f(t + 2 * h)) / (12 * h);
}

}  // namespace

QuadResult quad_pi(const Tree& t, const FreqAssignment& fa, long double time, const EquationSpec& eq, long double tol) {
  Quad q{fa, eq, tol};
  QuadResult r;
  r.value = q.tree(t, time);
  r.error_estimate = q.err;
  r.converged = q.converged;
  return r;
}

QuadResult quad_pi(const Forest& f, const FreqAssignment& fa, long double time, const EquationSpec& eq, long double tol) {
  Quad q{fa, eq, tol};
  QuadResult r;
  r.value = q.forest(f.trees(), time);
  r.error_estimate = q.err;
  r.converged = q.converged;
  return r;
}

Complex eval_exppoly(const ExpPoly& e, const FreqAssignment& fa, long double time) { return e.eval(fa, time); }

OrderFit fit_order(const std::vector<std::pair<long double, long double>>& errs) {
  if (errs.size() < 4) throw std::invalid_argument("order fit needs at least 4 points");
  OrderFit f;
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    auto [h, e] = errs[i];
    if (!(h > 0) || !(e > 0) || !std::isfinite(e)) throw std::invalid_argument("order fit needs positive finite values");
    if (i > 0 && !(h < errs[i - 1].first)) throw std::invalid_argument("steps must be strictly decreasing");
    f.steps.push_back(h);
    f.errors.push_back(e);
    long double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const long double n = static_cast<long double>(errs.size());
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  long double ss = 0;
  for (std::size_t i = 0; i < errs.size(); ++i) {
    long double d = std::log(f.errors[i]) - (f.intercept + f.slope * std::log(f.steps[i]));
    ss += d * d;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

long double rel_error(Complex value, Complex ref) {
  long double d = std::abs(value - ref);
  return std::abs(ref) > 1e-8L ? d / std::abs(ref) : d;
}

IdentityReport ibp_identity_check(int n_max, std::uint64_t seed, long double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dd(1, 10), ll(1, 10), sign(0, 1);
  std::uniform_real_distribution<long double> coef(-1, 1), time(0.1L, 0.9L);
  IdentityReport rep;
  const Complex I(0, 1);
  for (int n = 0; n <= n_max; ++n) {
    for (int rep_i = 0; rep_i < 5; ++rep_i) {
      const long double D = dd(rng) * (sign(rng) ? -1 : 1);
      const long double L = ll(rng) * (sign(rng) ? -1 : 1);
      long double a[3], b[3], c[3];
      for (int j = 0; j < 3; ++j) {
        a[j] = coef(rng);
        b[j] = coef(rng);
        c[j] = 4 * coef(rng);
      }
      auto V = [&](long double t) {
        Complex p = 1;
        for (int j = 0; j < 3; ++j) {
          Complex v = (1 + a[j] * t + b[j] * t * t) * std::polar(1.0L, c[j] * t);
          p *= j == 0 ? std::conj(v) : v;
        }
        return p;
      };
      const long double t = time(rng);
      auto ipow = [&](int k) { return std::pow(I, static_cast<long double>(((k % 4) + 4) % 4)); };
      long double fact_n = std::tgamma(static_cast<long double>(n + 1));
      Complex lhs = std::pow(t, static_cast<long double>(n)) / fact_n * ipow(n) * std::pow(L, static_cast<long double>(n)) *
                    std::polar(1.0L, t * D) * V(t);
      Complex rhs = 0;
      for (int m = 0; m <= n; ++m) {
        auto G = [&](long double s) {
          return std::pow(s, static_cast<long double>(n - m)) / std::tgamma(static_cast<long double>(n - m + 1)) *
                 ipow(n + m - 1) * std::pow(L, static_cast<long double>(n)) / std::pow(D, static_cast<long double>(m + 1));
        };
        auto whole = [&](long double s) { return G(s) * std::polar(1.0L, s * D) * V(s); };
        rhs += derivative(whole, t, 1e-4L) - G(t) * std::polar(1.0L, t * D) * derivative(V, t, 1e-4L);
      }
      long double e = rel_error(rhs, lhs);
      rep.max_rel_error = std::max(rep.max_rel_error, e);
      ++rep.cases;
    }
  }
  rep.ok = rep.max_rel_error <= tol;
  return rep;
}

long double dpi_check(const Tree& t, const FreqAssignment& fa, long double time, const EquationSpec& eq) {
  ExpPoly pi = pi_exact(t, eq);
  auto f = [&](long double s) { return pi.eval(fa, s); };
  Complex lhs = derivative(f, time, 1e-4L);
  Complex rhs = 0;
  for (auto& [k, c] : coproduct_bck(t)) {
    const Forest& right = k.second;
    if (right.size() != 1 || !is_letter(right.trees()[0])) continue;
    const Tree& l = right.trees()[0];
    Complex w = eq.weight(l.freq()).eval(fa);
    rhs += static_cast<long double>(c) * pi_exact(k.first, eq).eval(fa, time) *
           std::polar(1.0L, time * phase(l, eq).eval(fa)) * w;
  }
  rhs *= Complex(0, -1);
  return rel_error(lhs, rhs);
}

}  // namespace reso
