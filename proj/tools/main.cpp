#include "reso/equation.hpp"
#include "reso/hopf.hpp"
#include "reso/nls.hpp"
#include "reso/oracle.hpp"
#include "reso/phase.hpp"
#include "reso/scheme.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using namespace reso;
using nlohmann::json;

namespace {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string eq_path;
  int order = 2;
  int n = 2;
  std::string tree;
  std::uint64_t seed = 12345;
  bool json = false;
  std::string out;
  // nls-run
  int modes = 32;
  std::string profile = "smooth";
  double gamma = 1;
  double t_final = 0.25;
  int tau_max_exp = 6;
  int tau_min_exp = 11;
};

EquationSpec load_equation(const Options& o) {
  if (o.eq_path.empty()) return EquationSpec::cubic_nls();
  std::ifstream in(o.eq_path);
  if (!in) throw ValidationError("cannot open " + o.eq_path);
  try {
    return EquationSpec::from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed equation file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("invalid equation: ") + e.what());
  }
}

void check_orders(const Options& o) {
  if (o.order < 0) throw ValidationError("--order must be nonnegative");
  if (o.n < 0) throw ValidationError("--n must be nonnegative");
}

const SeriesTree& pick(const std::vector<SeriesTree>& ts, const Options& o) {
  if (o.tree.empty()) throw ValidationError("--tree is required");
  for (auto& s : ts)
    if (s.name == o.tree) return s;
  throw ValidationError("no tree " + o.tree + " of order <= " + std::to_string(o.order));
}

Tree core_or_self(const Tree& t) { return t.is_leaf() ? t : core_of(t); }

Tree planted_core(const SeriesTree& s) {
  if (s.tree.is_leaf()) throw ValidationError(s.name + " has no t2-planted core");
  return core_of(s.tree);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot write " + path);
    }
  }
  std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_trees(const Options& o) {
  check_orders(o);
  auto eq = load_equation(o);
  Output out(o.out);
  auto ts = generate_trees(eq, o.order);
  json arr = json::array();
  for (auto& s : ts) {
    FreqPoly f = s.tree.is_leaf() ? FreqPoly() : phase(core_of(s.tree), eq);
    if (o.json) {
      arr.push_back({{"name", s.name},
                     {"tree", s.tree.text()},
                     {"order", order(s.tree)},
                     {"symmetry", s.symmetry},
                     {"upsilon", upsilon(s.tree, eq).text()},
                     {"weight", to_string(s.weight)},
                     {"phase", f.str()}});
    } else {
      out.os() << s.name << "  S=" << s.symmetry << "  Upsilon=" << upsilon(s.tree, eq).text()
               << "  weight=" << to_string(s.weight) << "  F=" << f.str() << "\n    " << s.tree.text() << "\n";
    }
  }
  if (o.json) out.os() << arr.dump(2) << "\n";
  return 0;
}

json tensor_json(const TensorSum& s) {
  json arr = json::array();
  for (auto& [k, c] : s) arr.push_back({{"coefficient", c}, {"left", k.first.text()}, {"right", k.second.text()}});
  return arr;
}

json words_json(const WordSum& s) {
  json arr = json::array();
  for (auto& [w, c] : s) {
    json letters = json::array();
    for (auto& l : w.letters()) letters.push_back(l.text());
    arr.push_back({{"coefficient", c}, {"letters", letters}});
  }
  return arr;
}

int cmd_coproduct(const Options& o) {
  check_orders(o);
  auto eq = load_equation(o);
  Output out(o.out);
  auto series = generate_trees(eq, o.order);
  Tree t = planted_core(pick(series, o));
  auto d = coproduct_bck(t);
  if (o.json)
    out.os() << tensor_json(d).dump(2) << "\n";
  else
    out.os() << text(d) << "\n";
  return 0;
}

int cmd_arborify(const Options& o) {
  check_orders(o);
  auto eq = load_equation(o);
  Output out(o.out);
  auto series = generate_trees(eq, o.order);
  Tree t = planted_core(pick(series, o));
  auto a = arborify(t);
  if (o.json)
    out.os() << words_json(a).dump(2) << "\n";
  else
    out.os() << text(a) << "\n";
  return 0;
}

int cmd_split(const Options& o) {
  check_orders(o);
  auto eq = load_equation(o);
  Output out(o.out);
  auto series = generate_trees(eq, o.order);
  Tree t = planted_core(pick(series, o));
  const int r_t = o.order - order(t);
  json arr = json::array();
  for (auto& [w, c] : arborify(t)) {
    auto full = split_word(w, eq);
    auto adaptive = split_adaptive(w, std::vector<int>(w.size(), 0), o.n, r_t, eq);
    json rows = json::array();
    if (!o.json) out.os() << "word " << w.text() << "\nprefix\tphase\tdominant\tlower\tcondition vs n\tfull dominant\n";
    for (std::size_t j = 0; j < w.size(); ++j) {
      const auto& a = adaptive[j];
      FreqPoly f = phase(w.at(j + 1), eq);
      if (o.json) {
        rows.push_back({{"prefix", j + 1},
                        {"phase", f.str()},
                        {"dominant", a.dominant.str()},
                        {"lower", a.lower.str()},
                        {"condition", to_string(a.condition)},
                        {"taylor", a.taylor},
                        {"full_dominant", full[j].dominant.str()}});
      } else {
        out.os() << j + 1 << '\t' << f.str() << '\t' << a.dominant.str() << '\t' << a.lower.str() << '\t'
                 << to_string(a.condition) << (a.taylor ? " <= " : " > ") << o.n << '\t'
                 << full[j].dominant.str() << "\n";
      }
    }
    arr.push_back({{"word", w.text()}, {"multiplicity", c}, {"prefixes", rows}});
  }
  std::string closed;
  try {
    closed = dominant_closed_form(t, eq).str();
  } catch (const std::invalid_argument& e) {
    closed = std::string("n/a (") + e.what() + ")";
  }
  if (o.json)
    out.os() << json{{"words", arr}, {"closed_form", closed}, {"n", o.n}, {"r", r_t}}.dump(2) << "\n";
  else
    out.os() << "closed form: " << closed << "\n";
  return 0;
}

std::vector<const SeriesTree*> selected(const std::vector<SeriesTree>& series, const Options& o, bool planted) {
  if (!o.tree.empty()) return {&pick(series, o)};
  std::vector<const SeriesTree*> all;
  for (auto& s : series)
    if (!planted || !s.tree.is_leaf()) all.push_back(&s);
  return all;
}

int cmd_scheme(const Options& o) {
  check_orders(o);
  auto eq = load_equation(o);
  Output out(o.out);
  auto series = generate_trees(eq, o.order);
  auto chosen = selected(series, o, false);
  json arr = json::array();
  for (auto* s : chosen) {
    Tree t = core_or_self(s->tree);
    ExpPoly e = scheme(t, o.n, o.order, eq);
    if (o.json)
      arr.push_back({{"name", s->name}, {"tree", t.text()}, {"n", o.n}, {"r", o.order}, {"terms", e.to_json()}, {"text", e.str()}});
    else if (chosen.size() == 1)
      out.os() << e.str() << "\n";
    else
      out.os() << s->name << ": " << e.str() << "\n";
  }
  if (o.json) out.os() << (chosen.size() == 1 ? arr[0] : arr).dump(2) << "\n";
  return 0;
}

int cmd_error_terms(const Options& o) {
  check_orders(o);
  auto eq = load_equation(o);
  Output out(o.out);
  auto series = generate_trees(eq, o.order);
  json arr = json::array();
  for (auto* s : selected(series, o, true)) {
    Tree t = planted_core(*s);
    auto terms = local_error_terms(t, o.n, o.order, eq);
    if (o.json) {
      json ts = json::array();
      for (auto& e : terms) ts.push_back({{"term", e.str()}, {"degree", e.degree()}});
      arr.push_back({{"name", s->name}, {"terms", ts}, {"required_degree", required_degree(terms)}});
    } else {
      out.os() << s->name << " (n=" << o.n << ", r=" << o.order << ")\n";
      for (auto& e : terms) out.os() << "  " << e.str() << "\n";
      out.os() << "  required degree: " << required_degree(terms) << "\n";
    }
  }
  if (o.json) out.os() << arr.dump(2) << "\n";
  return 0;
}

struct OrderCheck {
  std::vector<std::pair<FreqAssignment, OrderFit>> fits;
  bool ok = true;
};

OrderCheck order_check(const Tree& t, int n, int r, const EquationSpec& eq, std::mt19937_64& rng, int tuples) {
  OrderCheck res;
  ExpPoly s = scheme(t, n, r, eq);
  int symbols = 0;
  for (auto& l : leaves(t))
    for (auto& [i, c] : l.freq().coefficients()) symbols = std::max(symbols, i);
  std::uniform_int_distribution<int> d(-2, 2);
  int tries = 0;
  while (static_cast<int>(res.fits.size()) < tuples && ++tries < 1000) {
    FreqAssignment fa;
    for (int i = 1; i <= symbols; ++i) fa[i] = d(rng);
    std::vector<std::pair<long double, long double>> errs;
    try {
      for (int j = 4; j <= 10; ++j) {
        long double tt = std::ldexp(1.0L, -j);
        errs.emplace_back(tt, std::abs(quad_pi(t, fa, tt, eq, 1e-20L).value - s.eval(fa, tt)));
      }
    } catch (const ResonanceError&) {
      continue;
    }
    if (errs[0].second < 1e-14L) continue;
    auto f = fit_order(errs);
    if (f.slope < r + 0.8L) res.ok = false;
    res.fits.emplace_back(fa, f);
  }
  if (static_cast<int>(res.fits.size()) < tuples) res.ok = false;
  return res;
}

std::string tuple_text(const FreqAssignment& fa) {
  std::string s = "(";
  for (auto& [i, v] : fa) s += (s.size() > 1 ? "," : "") + std::to_string(v);
  return s + ")";
}

int cmd_oracle(const Options& o) {
  check_orders(o);
  auto eq = load_equation(o);
  Output out(o.out);
  auto series = generate_trees(eq, o.order);
  auto& st = pick(series, o);
  if (order(st.tree) == 0) throw ValidationError(st.name + " is integrated exactly by every scheme");
  std::mt19937_64 rng(o.seed);
  auto res = order_check(st.tree, o.n, o.order, eq, rng, 5);
  if (o.json) {
    json arr = json::array();
    for (auto& [fa, f] : res.fits) {
      std::vector<double> steps(f.steps.begin(), f.steps.end()), errors(f.errors.begin(), f.errors.end());
      arr.push_back({{"tuple", tuple_text(fa)}, {"steps", steps}, {"errors", errors},
                     {"slope", static_cast<double>(f.slope)}, {"residual", static_cast<double>(f.residual)}});
    }
    out.os() << json{{"tree", st.name}, {"n", o.n}, {"r", o.order}, {"required_slope", o.order + 0.8}, {"fits", arr},
                     {"ok", res.ok}}
                    .dump(2)
             << "\n";
  } else {
    out.os() << "tuple,step,error,slope_running\n" << std::setprecision(10);
    for (auto& [fa, f] : res.fits)
      for (std::size_t i = 0; i < f.steps.size(); ++i) {
        out.os() << '"' << tuple_text(fa) << "\"," << static_cast<double>(f.steps[i]) << ','
                 << static_cast<double>(f.errors[i]) << ',';
        if (i > 0)
          out.os() << static_cast<double>(std::log(f.errors[i] / f.errors[i - 1]) / std::log(f.steps[i] / f.steps[i - 1]));
        out.os() << '\n';
      }
    std::cerr << (res.ok ? "PASS" : "FAIL") << " " << st.name << ": every fitted slope >= " << o.order + 0.8 << "\n";
  }
  return res.ok ? 0 : 2;
}

int cmd_nls_run(const Options& o) {
  check_orders(o);
  if (o.order < 1) throw ValidationError("nls-run needs --order >= 1");
  if (o.tau_min_exp - o.tau_max_exp < 3) throw ValidationError("need at least 4 step sizes");
  if (o.profile != "smooth" && o.profile != "rough") throw ValidationError("--profile must be smooth or rough");
  auto eq = load_equation(o);
  StepperConfig cfg;
  cfg.r = o.order;
  cfg.n = o.n;
  cfg.N = o.modes;
  cfg.seed = o.seed;
  cfg.profile = o.profile == "smooth" ? Profile::smooth : Profile::rough;
  cfg.gamma = o.gamma;
  std::vector<long double> taus;
  for (int j = o.tau_max_exp; j <= o.tau_min_exp; ++j) taus.push_back(std::ldexp(1.0L, -j));
  StudyResult res;
  try {
    res = convergence_study(eq, cfg, taus, o.t_final);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  Output out(o.out);
  if (o.json) {
    json rows = json::array();
    for (auto& r : res.rows)
      rows.push_back({{"tau", static_cast<double>(r.tau)},
                      {"local_err_L2", static_cast<double>(r.local_l2)},
                      {"local_err_H1", static_cast<double>(r.local_h1)},
                      {"global_err_L2", static_cast<double>(r.global_l2)}});
    out.os() << json{{"rows", rows},
                     {"local_slope", static_cast<double>(res.local_slope)},
                     {"global_slope_heuristic", static_cast<double>(res.global_slope)},
                     {"reference_cross_check", static_cast<double>(res.cross_check)},
                     {"diverged", res.diverged}}
                    .dump(2)
             << "\n";
  } else {
    write_csv(out.os(), res);
  }
  std::cerr << "local slope " << static_cast<double>(res.local_slope);
  if (o.t_final > 0) std::cerr << ", global slope " << static_cast<double>(res.global_slope) << " (heuristic)";
  std::cerr << ", reference cross-check " << static_cast<double>(res.cross_check) << "\n";
  return res.diverged ? 2 : 0;
}

int cmd_check(const Options& o) {
  auto eq = load_equation(o);
  Output out(o.out);
  int failures = 0;
  json report = json::array();
  auto line = [&](const std::string& name, bool ok, const std::string& detail) {
    failures += !ok;
    report.push_back({{"check", name}, {"ok", ok}, {"detail", detail}});
    if (!o.json) out.os() << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
  };
  auto fmt = [](long double v) {
    std::ostringstream s;
    s.precision(3);
    s << static_cast<double>(v);
    return s.str();
  };
  auto series = generate_trees(eq, 3);
  std::vector<std::pair<std::string, Tree>> cores;
  for (auto& s : series)
    if (!s.tree.is_leaf()) cores.emplace_back(s.name, core_of(s.tree));

  int bad = 0;
  for (auto& [name, c] : cores) bad += !coassoc_check(c).equal;
  line("coassociativity", bad == 0, std::to_string(cores.size() - bad) + "/" + std::to_string(cores.size()) + " trees");

  bad = 0;
  int words = 0;
  std::string closed_note;
  for (auto& [name, c] : cores) {
    FreqPoly closed;
    bool have_closed = true;
    try {
      closed = dominant_closed_form(c, eq);
    } catch (const std::invalid_argument&) {
      have_closed = false;
      closed_note = ", no closed form for this equation";
    }
    std::optional<FreqPoly> first;
    for (auto& [w, n] : arborify(c)) {
      FreqPoly d = split_word(w, eq).back().dominant;
      if (!first) first = d;
      bad += d != *first || (have_closed && d != closed);
      ++words;
    }
  }
  line("dominant parts", bad == 0, std::to_string(words) + " words" + closed_note);

  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> d(-5, 5);
  long double worst = 0;
  int cases = 0;
  for (std::size_t i = 0; i < cores.size() && i < 4; ++i)
    for (std::size_t j = i; j < cores.size() && j < 4; ++j) {
      WordSum prod = arborify(Forest({cores[i].second, cores[j].second}));
      for (int rep = 0; rep < 5; ++rep) {
        FreqAssignment fa;
        for (int s = 1; s <= 7; ++s) fa[s] = d(rng);
        try {
          Complex lhs = 0;
          for (auto& [w, c] : prod) lhs += static_cast<long double>(c) * psi_tilde(w, eq).eval(fa, 0.37L);
          Complex rhs = psi_tilde(arborify(cores[i].second), eq).eval(fa, 0.37L) *
                        psi_tilde(arborify(cores[j].second), eq).eval(fa, 0.37L);
          worst = std::max(worst, std::abs(lhs - rhs));
          ++cases;
        } catch (const ResonanceError&) {
        }
      }
    }
  line("shuffle character", worst <= 1e-10L, "max defect " + fmt(worst) + " over " + std::to_string(cases) + " cases");

  auto ibp = ibp_identity_check(3, o.seed);
  line("integration by parts", ibp.ok, "max relative error " + fmt(ibp.max_rel_error));

  worst = 0;
  cases = 0;
  for (auto& [name, c] : cores) {
    for (int rep = 0; rep < 3; ++rep) {
      FreqAssignment fa;
      for (int s = 1; s <= 7; ++s) fa[s] = d(rng);
      try {
        worst = std::max(worst, dpi_check(c, fa, 0.3L, eq));
        ++cases;
      } catch (const ResonanceError&) {
      }
    }
  }
  line("time derivative", worst <= 1e-6L, "max relative error " + fmt(worst) + " over " + std::to_string(cases) + " cases");

  bool ok = true;
  std::string tightest;
  long double margin = 1e9;
  for (auto& s : generate_trees(eq, 2)) {
    const int ord = order(s.tree);
    if (ord == 0) continue;
    for (int r = ord; r <= ord + 1; ++r) {
      auto res = order_check(s.tree, 2, r, eq, rng, 5);
      ok = ok && res.ok;
      for (auto& [fa, f] : res.fits)
        if (f.slope - (r + 0.8L) < margin) {
          margin = f.slope - (r + 0.8L);
          tightest = s.name + " r=" + std::to_string(r) + " slope " + fmt(f.slope);
        }
    }
  }
  line("oracle order", ok, "tightest " + tightest);

  if (o.json) out.os() << report.dump(2) << "\n";
  return failures ? 2 : 0;
}

void apply_config(const std::string& path, const CLI::App& sub, Options& o) {
  std::ifstream in(path);
  json j;
  try {
    j = json::parse(in);
    if (!j.is_object()) throw ValidationError("study configuration must be a JSON object");
    for (auto& [key, v] : j.items()) {
      auto set = [&](const char* flag, auto& field) {
        if (sub.count(flag) == 0) field = v.get<std::remove_reference_t<decltype(field)>>();
      };
      if (key == "r") set("--order", o.order);
      else if (key == "n") set("--n", o.n);
      else if (key == "N") set("--N", o.modes);
      else if (key == "profile") set("--profile", o.profile);
      else if (key == "gamma") set("--gamma", o.gamma);
      else if (key == "seed") set("--seed", o.seed);
      else if (key == "t_final") set("--t-final", o.t_final);
      else if (key == "tau_max_exp") set("--tau-max-exp", o.tau_max_exp);
      else if (key == "tau_min_exp") set("--tau-min-exp", o.tau_min_exp);
      else throw ValidationError("unknown study configuration key " + key);
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed study configuration: ") + e.what());
  }
  if (o.modes < 8 || o.modes > 128) throw ValidationError("N must lie in [8, 128]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance-based low-regularity schemes from decorated trees"};
  app.require_subcommand(1);
  Options o;

  enum Tree_ { none, optional, required };
  auto common = [&](CLI::App* sub, Tree_ tree) {
    sub->add_option("--eq", o.eq_path, "equation JSON (default: cubic NLS)")->check(CLI::ExistingFile);
    sub->add_option("--order", o.order, "order r of the scheme / series");
    sub->add_option("--n", o.n, "regularity parameter n");
    if (tree != none) {
      auto* opt = sub->add_option("--tree", o.tree, tree == required ? "series tree name, e.g. T3" : "series tree name (default: all)");
      if (tree == required) opt->required();
    }
    sub->add_option("--seed", o.seed, "seed for random tuples and data");
    sub->add_flag("--json", o.json, "machine-readable output");
    sub->add_option("--out", o.out, "write output to this file");
  };

  std::function<int(const Options&)> action;
  auto add = [&](const char* name, const char* help, Tree_ tree, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    common(sub, tree);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };
  add("trees", "list the trees of the series up to --order", none, cmd_trees);
  add("coproduct", "coproduct of a tree's t2-planted core", required, cmd_coproduct);
  add("arborify", "arborification of a tree's core", required, cmd_arborify);
  add("split", "dominant and lower parts along each word", required, cmd_split);
  add("scheme", "low-regularity approximation Pi^{n,r}", optional, cmd_scheme);
  add("error-terms", "local error structure and required regularity", optional, cmd_error_terms);
  add("oracle", "fit the local order of the scheme against quadrature", required, cmd_oracle);
  auto* nls = add("nls-run", "convergence study for the cubic equation on the torus", none, cmd_nls_run);
  nls->add_option("--N", o.modes, "number of Fourier modes")->check(CLI::Range(8, 128));
  nls->add_option("--profile", o.profile, "initial data: smooth or rough");
  nls->add_option("--gamma", o.gamma, "decay exponent of rough data");
  nls->add_option("--t-final", o.t_final, "final time of the global study (0: local only)");
  nls->add_option("--tau-max-exp", o.tau_max_exp, "largest step 2^-e");
  nls->add_option("--tau-min-exp", o.tau_min_exp, "smallest step 2^-e");
  std::string config;
  nls->add_option("--config", config, "study configuration JSON; explicit flags take precedence")->check(CLI::ExistingFile);
  add("check", "run the property suite", none, cmd_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  try {
    if (!config.empty()) apply_config(config, *nls, o);
    return action(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
