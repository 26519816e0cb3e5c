#include "reso/nls.hpp"

#include "reso/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <stdexcept>

namespace reso {

GridState::GridState(int modes) : N(modes), u(static_cast<std::size_t>(modes)) {
  if (modes < 0 || modes % 2) throw std::invalid_argument("mode count must be even");
}

long double GridState::mass() const {
  long double m = 0;
  for (auto& c : u) m += std::norm(c);
  return m;
}

long double GridState::norm_l2() const { return std::sqrt(mass()); }

long double GridState::norm_h1() const {
  long double m = 0;
  for (int k = kmin(); k <= kmax(); ++k) m += (1.0L + static_cast<long double>(k) * k) * std::norm(at(k));
  return std::sqrt(m);
}

bool GridState::finite() const {
  for (auto& c : u)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

GridState operator-(const GridState& a, const GridState& b) {
  if (a.N != b.N) throw std::invalid_argument("grid size mismatch");
  GridState d(a.N);
  for (std::size_t i = 0; i < a.u.size(); ++i) d.u[i] = a.u[i] - b.u[i];
  d.time = a.time;
  return d;
}

GridState initial_data(const StepperConfig& cfg) {
  if (cfg.N < 8 || cfg.N % 2) throw std::invalid_argument("N must be even and at least 8");
  if (cfg.profile == Profile::rough && !(cfg.gamma > 0.5L)) throw std::invalid_argument("gamma must exceed 1/2");
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<long double> g(0, 1);
  GridState s(cfg.N);
  for (int k = s.kmin(); k <= s.kmax(); ++k) {
    long double a = g(rng), b = g(rng);
    long double amp = cfg.profile == Profile::smooth ? std::exp(-std::fabs(static_cast<long double>(k)) / 2)
                                                     : std::pow(1.0L + std::fabs(static_cast<long double>(k)), -cfg.gamma - 0.5L);
    s.at(k) = Complex(a, b) * amp;
  }
  long double n = s.norm_l2();
  for (auto& c : s.u) c /= n;
  return s;
}

namespace {

// Signed convolution of arrays indexed by frequency offsets.
struct Spectrum {
  long long lo = 0;
  std::vector<Complex> v;

  long long hi() const { return lo + static_cast<long long>(v.size()) - 1; }
  Complex get(long long k) const { return k < lo || k > hi() ? Complex(0) : v[static_cast<std::size_t>(k - lo)]; }
};

Spectrum convolve(const Spectrum& a, const Spectrum& b) {
  Spectrum c;
  c.lo = a.lo + b.lo;
  c.v.assign(a.v.size() + b.v.size() - 1, Complex(0));
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    if (a.v[i] == Complex(0)) continue;
    for (std::size_t j = 0; j < b.v.size(); ++j) c.v[i + j] += a.v[i] * b.v[j];
  }
  return c;
}

Spectrum reflect(const Spectrum& a) {
  Spectrum r;
  r.lo = -a.hi();
  r.v.assign(a.v.rbegin(), a.v.rend());
  return r;
}

int conj_t2_edges(const Tree& t) {
  int c = t.edge().kind == EdgeKind::t2 && t.edge().conj ? 1 : 0;
  for (auto& ch : t.children()) c += conj_t2_edges(ch);
  return c;
}

struct Compiled {
  std::string name;
  ExpPoly full;
  ExpPoly core;  // scheme of the root's children
  Tree tree = Tree::leaf(0, FreqVector::symbol(1));
  long double factor = 1;  // series weight times the conjugated-edge sign
  bool constant = false;
  std::vector<int> leaf_symbols;
  std::vector<int> leaf_conj;
  std::vector<std::vector<std::pair<int, long long>>> node_forms;  // inner node and root frequencies
  std::unique_ptr<ResonantEvaluator> evaluator;
};

void collect(const Tree& t, Compiled& c, bool root) {
  if (t.is_leaf()) {
    if (t.freq().coefficients().size() != 1) throw std::invalid_argument("leaf frequency must be a single symbol");
    auto [sym, coef] = *t.freq().coefficients().begin();
    if (coef != 1) throw std::invalid_argument("leaf frequency must be a bare symbol");
    c.leaf_symbols.push_back(sym);
    c.leaf_conj.push_back(t.edge().conj);
    return;
  }
  if (!root) c.node_forms.emplace_back(t.freq().coefficients().begin(), t.freq().coefficients().end());
  for (auto& ch : t.children()) collect(ch, c, false);
}

bool is_constant(const ExpPoly& e) {
  for (auto& [k, c] : e.terms())
    if (!k.second.is_zero() || !c.im().is_constant() || !c.re().is_constant() || !c.denominator().empty()) return false;
  return true;
}

}  // namespace

struct Stepper::Impl {
  EquationSpec eq;
  int r, n, N;
  std::vector<Compiled> trees;

  Spectrum node_values(const Tree& t, const GridState& s) const {
    if (t.is_leaf()) {
      Spectrum sp;
      sp.lo = s.kmin();
      for (int k = s.kmin(); k <= s.kmax(); ++k) sp.v.push_back(t.edge().conj ? std::conj(s.at(k)) : s.at(k));
      return sp;
    }
    Spectrum acc;
    acc.lo = 0;
    acc.v = {Complex(1)};
    for (auto& ch : t.children()) {
      Spectrum x = node_values(ch, s);
      acc = convolve(acc, ch.edge().conj ? reflect(x) : x);
    }
    if (t.edge().conj) acc = reflect(acc);
    Spectrum out;
    out.lo = s.kmin();
    for (int k = s.kmin(); k <= s.kmax(); ++k) out.v.push_back(acc.get(k));
    return out;
  }
};

Stepper::Stepper(const EquationSpec& eq, int r, int n, int N) : impl_(std::make_unique<Impl>()) {
  impl_->eq = eq;
  impl_->r = r;
  impl_->n = n;
  impl_->N = N;
  for (auto& st : generate_trees(eq, r)) {
    Compiled c;
    c.name = st.name;
    c.tree = st.tree;
    c.full = scheme(st.tree, n, r, eq);
    c.factor = static_cast<long double>(st.weight.convert_to<long double>()) * (conj_t2_edges(st.tree) % 2 ? -1 : 1);
    if (!st.tree.is_leaf()) {
      collect(st.tree, c, true);
      Forest children(st.tree.children());
      c.core = scheme(children, n, r, eq);
      c.constant = is_constant(c.core);
      if (!c.constant) {
        EquationSpec e = eq;
        c.evaluator = std::make_unique<ResonantEvaluator>([e, children, n, r](const ZeroTest& z) {
          return scheme(children, n, r, e, z);
        });
      }
    }
    impl_->trees.push_back(std::move(c));
  }
}

Stepper::~Stepper() = default;
Stepper::Stepper(Stepper&&) noexcept = default;
Stepper& Stepper::operator=(Stepper&&) noexcept = default;

std::vector<std::pair<std::string, ExpPoly>> Stepper::schemes() const {
  std::vector<std::pair<std::string, ExpPoly>> out;
  for (auto& c : impl_->trees) out.emplace_back(c.name, c.full);
  return out;
}

GridState Stepper::step(const GridState& s, long double tau) {
  if (s.N != impl_->N) throw std::invalid_argument("grid size differs from the stepper's");
  const int N = s.N;
  std::vector<Complex> acc(static_cast<std::size_t>(N), Complex(0));
  for (auto& c : impl_->trees) {
    if (c.tree.is_leaf()) {
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c.factor * s.u[i];
      continue;
    }
    if (c.constant) {
      Complex val = c.core.eval({}, tau) * c.factor;
      Spectrum x = impl_->node_values(c.tree, s);
      for (int k = s.kmin(); k <= s.kmax(); ++k) acc[static_cast<std::size_t>(k + N / 2)] += val * x.get(k);
      continue;
    }
    int max_sym = 0;
    for (int sym : c.leaf_symbols) max_sym = std::max(max_sym, sym);
    std::vector<long double> kv(static_cast<std::size_t>(max_sym) + 1, 0.0L);
    const std::size_t L = c.leaf_symbols.size();
    std::vector<int> idx(L, s.kmin());
    while (true) {
      for (std::size_t i = 0; i < L; ++i) kv[static_cast<std::size_t>(c.leaf_symbols[i])] = idx[i];
      bool inside = true;
      long long root = 0;
      for (std::size_t f = 0; f < c.node_forms.size() && inside; ++f) {
        long long v = 0;
        for (auto& [sym, coef] : c.node_forms[f]) v += coef * static_cast<long long>(kv[static_cast<std::size_t>(sym)]);
        inside = s.contains(v);
      }
      if (inside) {
        for (auto& [sym, coef] : c.tree.freq().coefficients()) root += coef * static_cast<long long>(kv[static_cast<std::size_t>(sym)]);
        inside = s.contains(root);
      }
      if (inside) {
        Complex prod = c.factor;
        for (std::size_t i = 0; i < L; ++i) prod *= c.leaf_conj[i] ? std::conj(s.at(idx[i])) : s.at(idx[i]);
        if (prod != Complex(0)) acc[static_cast<std::size_t>(root + N / 2)] += prod * c.evaluator->eval(kv.data(), max_sym, tau);
      }
      std::size_t i = 0;
      while (i < L && ++idx[i] > s.kmax()) idx[i++] = s.kmin();
      if (i == L) break;
    }
  }
  GridState out(N);
  out.time = s.time + tau;
  for (int k = s.kmin(); k <= s.kmax(); ++k) {
    long double ph = tau * impl_->eq.p_t1.eval({{0, k}});
    out.at(k) = std::polar(1.0L, ph) * acc[static_cast<std::size_t>(k + N / 2)];
  }
  return out;
}

GridState one_step(const GridState& s, const StepperConfig& cfg, Stepper& stepper) { return stepper.step(s, cfg.tau); }

ReferenceSolver::ReferenceSolver(const EquationSpec& eq) : p_t1_(eq.p_t1) {
  if (eq.nonlinearity != std::vector<int>{1, 0, 0} || eq.nabla_alpha != FreqPoly(1))
    throw std::invalid_argument("reference solver covers the cubic equation with nonlinearity [1,0,0]");
}

std::vector<Complex> ReferenceSolver::rhs(const std::vector<Complex>& v, long double t, int N) const {
  const int lo = -N / 2;
  std::vector<Complex> u(v.size()), ph(v.size());
  for (int i = 0; i < N; ++i) {
    ph[static_cast<std::size_t>(i)] = std::polar(1.0L, t * p_t1_.eval({{0, lo + i}}));
    u[static_cast<std::size_t>(i)] = ph[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(i)];
  }
  // w_m = sum_{k2+k3=m} u_k2 u_k3 with m = 2*lo + index
  std::vector<Complex> w(static_cast<std::size_t>(2 * N - 1), Complex(0));
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) w[static_cast<std::size_t>(a + b)] += u[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(b)];
  std::vector<Complex> out(v.size());
  for (int i = 0; i < N; ++i) {
    const int k = lo + i;
    Complex s = 0;
    for (int j = 0; j < N; ++j) {
      const int m = k + lo + j;  // k2 + k3 = k + k1
      const int wi = m - 2 * lo;
      if (wi >= 0 && wi < 2 * N - 1) s += std::conj(u[static_cast<std::size_t>(j)]) * w[static_cast<std::size_t>(wi)];
    }
    out[static_cast<std::size_t>(i)] = Complex(0, -1) * std::conj(ph[static_cast<std::size_t>(i)]) * s;
  }
  return out;
}

static std::vector<long double> twist(const FreqPoly& p, int N, long double t) {
  std::vector<long double> ph(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) ph[static_cast<std::size_t>(i)] = t * p.eval({{0, -N / 2 + i}});
  return ph;
}

GridState ReferenceSolver::rk4(const GridState& s, long double t_final, long double h) const {
  const int N = s.N;
  const long long steps = std::llround(t_final / h);
  if (steps < 1 || std::fabs(static_cast<long double>(steps) * h - t_final) > 1e-12L * t_final)
    throw std::invalid_argument("step must divide the interval");
  auto ph0 = twist(p_t1_, N, s.time);
  std::vector<Complex> v(s.u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::polar(1.0L, -ph0[i]) * s.u[i];
  auto axpy = [](const std::vector<Complex>& x, long double a, const std::vector<Complex>& y) {
    std::vector<Complex> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + a * y[i];
    return r;
  };
  long double t = s.time;
  for (long long n = 0; n < steps; ++n) {
    auto k1 = rhs(v, t, N);
    auto k2 = rhs(axpy(v, h / 2, k1), t + h / 2, N);
    auto k3 = rhs(axpy(v, h / 2, k2), t + h / 2, N);
    auto k4 = rhs(axpy(v, h, k3), t + h, N);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += h / 6 * (k1[i] + 2.0L * k2[i] + 2.0L * k3[i] + k4[i]);
    t = s.time + static_cast<long double>(n + 1) * h;
  }
  GridState out(N);
  out.time = s.time + t_final;
  auto ph = twist(p_t1_, N, out.time);
  for (std::size_t i = 0; i < v.size(); ++i) out.u[i] = std::polar(1.0L, ph[i]) * v[i];
  return out;
}

namespace {

struct Tableau {
  std::vector<long double> c, b;
  std::vector<std::vector<long double>> a;
};

// Collocation tableau from the Gauss-Legendre nodes: a_ij = int_0^{c_i} l_j,
// b_j = int_0^1 l_j with l_j the Lagrange basis.
Tableau gauss_legendre4() {
  const long double s1 = std::sqrt(3.0L / 7 - 2.0L / 7 * std::sqrt(6.0L / 5));
  const long double s2 = std::sqrt(3.0L / 7 + 2.0L / 7 * std::sqrt(6.0L / 5));
  Tableau t;
  t.c = {(1 - s2) / 2, (1 - s1) / 2, (1 + s1) / 2, (1 + s2) / 2};
  const std::size_t s = t.c.size();
  t.a.assign(s, std::vector<long double>(s));
  t.b.assign(s, 0);
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<long double> poly{1};  // coefficients of l_j, ascending
    long double den = 1;
    for (std::size_t m = 0; m < s; ++m) {
      if (m == j) continue;
      std::vector<long double> next(poly.size() + 1, 0);
      for (std::size_t q = 0; q < poly.size(); ++q) {
        next[q] -= poly[q] * t.c[m];
        next[q + 1] += poly[q];
      }
      poly = next;
      den *= t.c[j] - t.c[m];
    }
    auto integral = [&](long double x) {
      long double sum = 0, xp = x;
      for (std::size_t q = 0; q < poly.size(); ++q, xp *= x) sum += poly[q] * xp / static_cast<long double>(q + 1);
      return sum / den;
    };
    t.b[j] = integral(1);
    for (std::size_t i = 0; i < s; ++i) t.a[i][j] = integral(t.c[i]);
  }
  return t;
}

}  // namespace

GridState ReferenceSolver::collocation(const GridState& s, long double t_final, long double h) const {
  static const Tableau tab = gauss_legendre4();
  const int N = s.N;
  const long long steps = std::llround(t_final / h);
  if (steps < 1 || std::fabs(static_cast<long double>(steps) * h - t_final) > 1e-12L * t_final)
    throw std::invalid_argument("step must divide the interval");
  auto ph0 = twist(p_t1_, N, s.time);
  std::vector<Complex> v(s.u.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::polar(1.0L, -ph0[i]) * s.u[i];
  const std::size_t st = tab.c.size();
  long double t = s.time;
  for (long long n = 0; n < steps; ++n) {
    std::vector<std::vector<Complex>> K(st, rhs(v, t, N));
    for (int it = 0; it < 100; ++it) {
      long double change = 0;
      std::vector<std::vector<Complex>> next(st);
      for (std::size_t i = 0; i < st; ++i) {
        std::vector<Complex> y = v;
        for (std::size_t j = 0; j < st; ++j)
          for (std::size_t q = 0; q < y.size(); ++q) y[q] += h * tab.a[i][j] * K[j][q];
        next[i] = rhs(y, t + tab.c[i] * h, N);
        for (std::size_t q = 0; q < y.size(); ++q) change = std::max(change, std::abs(next[i][q] - K[i][q]));
      }
      K = std::move(next);
      if (change * h < 1e-19L) break;
    }
    for (std::size_t j = 0; j < st; ++j)
      for (std::size_t q = 0; q < v.size(); ++q) v[q] += h * tab.b[j] * K[j][q];
    t = s.time + static_cast<long double>(n + 1) * h;
  }
  GridState out(N);
  out.time = s.time + t_final;
  auto ph = twist(p_t1_, N, out.time);
  for (std::size_t i = 0; i < v.size(); ++i) out.u[i] = std::polar(1.0L, ph[i]) * v[i];
  return out;
}

ReferenceResult reference_solution(const EquationSpec& eq, const GridState& s, const std::vector<long double>& times,
                                   long double h, long double agree) {
  ReferenceSolver solver(eq);
  ReferenceResult res;
  GridState cur = s;
  long double t = 0;
  for (long double target : times) {
    if (target < t) throw std::invalid_argument("reference times must be increasing");
    if (target > t) cur = solver.rk4(cur, target - t, h);
    t = target;
    res.checkpoints.push_back(cur);
  }
  if (!times.empty()) {
    GridState check = solver.collocation(s, times.back(), 4 * h);
    res.cross_check = (check - res.checkpoints.back()).norm_l2();
    if (!(res.cross_check <= agree))
      throw std::runtime_error("reference cross-validation failed: difference " + std::to_string(static_cast<double>(res.cross_check)));
  }
  return res;
}

StudyResult convergence_study(const EquationSpec& eq, const StepperConfig& cfg, const std::vector<long double>& taus,
                              long double t_final) {
  if (taus.size() < 4) throw std::invalid_argument("convergence study needs at least 4 step sizes");
  GridState u0 = initial_data(cfg);
  long double tau_min = taus.back();
  for (long double t : taus) tau_min = std::min(tau_min, t);
  const long double h = tau_min / 64;
  std::vector<long double> times(taus.rbegin(), taus.rend());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (t_final > times.back()) times.push_back(t_final);
  ReferenceResult ref = reference_solution(eq, u0, times, h);
  auto ref_at = [&](long double t) -> const GridState& {
    for (std::size_t i = 0; i < times.size(); ++i)
      if (times[i] == t) return ref.checkpoints[i];
    throw std::logic_error("missing reference checkpoint");
  };
  Stepper stepper(eq, cfg.r, cfg.n, cfg.N);
  StudyResult res;
  res.cross_check = ref.cross_check;
  std::vector<std::pair<long double, long double>> local, global;
  for (long double tau : taus) {
    StudyRow row;
    row.tau = tau;
    GridState one = stepper.step(u0, tau);
    GridState d = one - ref_at(tau);
    row.local_l2 = d.norm_l2();
    row.local_h1 = d.norm_h1();
    if (t_final > 0) {
      const long long n = std::llround(t_final / tau);
      GridState cur = u0;
      for (long long i = 0; i < n; ++i) {
        cur = stepper.step(cur, tau);
        if (!cur.finite() || cur.norm_l2() > 1e3L * u0.norm_l2()) {
          res.diverged = true;
          break;
        }
      }
      row.global_l2 = (cur - ref_at(t_final)).norm_l2();
      global.emplace_back(tau, row.global_l2);
    }
    if (!res.rows.empty()) {
      const StudyRow& p = res.rows.back();
      row.slope_running = std::log(row.local_l2 / p.local_l2) / std::log(row.tau / p.tau);
    }
    local.emplace_back(tau, row.local_l2);
    res.rows.push_back(row);
  }
  OrderFit lf = fit_order(local);
  res.local_slope = lf.slope;
  res.local_residual = lf.residual;
  if (t_final > 0 && !res.diverged) {
    OrderFit gf = fit_order(global);
    res.global_slope = gf.slope;
    res.global_residual = gf.residual;
  }
  return res;
}

void write_csv(std::ostream& os, const StudyResult& r) {
  os << "tau,local_err_L2,local_err_H1,global_err_L2,slope_running\n";
  os << std::setprecision(10);
  for (auto& row : r.rows)
    os << static_cast<double>(row.tau) << ',' << static_cast<double>(row.local_l2) << ','
       << static_cast<double>(row.local_h1) << ',' << static_cast<double>(row.global_l2) << ','
       << static_cast<double>(row.slope_running) << '\n';
}

}  // namespace reso
