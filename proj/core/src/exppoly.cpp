#include "reso/exppoly.hpp"

#include <cmath>

namespace reso {

RationalExpr::RationalExpr(const Rational& c) : re_(c) {}

RationalExpr::RationalExpr(FreqPoly re, FreqPoly im) : re_(std::move(re)), im_(std::move(im)) {}

RationalExpr RationalExpr::i_power(int k) { return RationalExpr(Rational(1)).times_i(k); }

bool RationalExpr::is_rational() const { return den_.empty() && im_.is_zero() && re_.is_constant(); }

void RationalExpr::scale(const Rational& c) {
  re_ *= c;
  im_ *= c;
}

RationalExpr& RationalExpr::divide_by(const FreqPoly& d, int e) {
  if (d.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (e == 0) return *this;
  Rational c = d.leading_coefficient();
  Rational ce = 1;
  for (int i = 0; i < e; ++i) ce *= c;
  scale(1 / ce);
  if (!d.is_constant()) {
    FreqPoly dn = d * (1 / c);
    if ((den_[dn] += e) == 0) den_.erase(dn);
  }
  return *this;
}

RationalExpr RationalExpr::times_i(int k) const {
  RationalExpr r = *this;
  switch (((k % 4) + 4) % 4) {
    case 1:
      r.re_ = -im_;
      r.im_ = re_;
      break;
    case 2:
      r.re_ = -re_;
      r.im_ = -im_;
      break;
    case 3:
      r.re_ = im_;
      r.im_ = -re_;
      break;
    default:
      break;
  }
  return r;
}

RationalExpr RationalExpr::operator-() const {
  RationalExpr r = *this;
  r.re_ = -re_;
  r.im_ = -im_;
  return r;
}

static FreqPoly lift(const FreqPoly& p, const std::map<FreqPoly, int>& have, const std::map<FreqPoly, int>& want) {
  FreqPoly r = p;
  for (auto& [f, e] : want) {
    auto it = have.find(f);
    int d = e - (it == have.end() ? 0 : it->second);
    if (d > 0) r *= f.pow(static_cast<unsigned>(d));
  }
  return r;
}

RationalExpr& RationalExpr::operator+=(const RationalExpr& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    re_ += o.re_;
    im_ += o.im_;
  } else {
    std::map<FreqPoly, int> l = den_;
    for (auto& [f, e] : o.den_) l[f] = std::max(l[f], e);
    re_ = lift(re_, den_, l) + lift(o.re_, o.den_, l);
    im_ = lift(im_, den_, l) + lift(o.im_, o.den_, l);
    den_ = std::move(l);
  }
  if (is_zero()) den_.clear();
  return *this;
}

RationalExpr& RationalExpr::operator*=(const RationalExpr& o) {
  FreqPoly re = re_ * o.re_ - im_ * o.im_;
  FreqPoly im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  if (is_zero()) {
    den_.clear();
    return *this;
  }
  for (auto& [f, e] : o.den_) den_[f] += e;
  return *this;
}

static bool exactly_zero(const FreqPoly& p, const FreqAssignment& fa, long double v) {
  if (std::fabs(v) > 1e-9L) return false;
  return p.eval_exact(fa) == 0;
}

Complex RationalExpr::eval(const FreqAssignment& fa) const {
  Complex num(re_.eval(fa), im_.eval(fa));
  long double den = 1;
  for (auto& [f, e] : den_) {
    long double v = f.eval(fa);
    if (exactly_zero(f, fa, v)) throw ResonanceError(f.str());
    for (int i = 0; i < e; ++i) den *= v;
  }
  return num / den;
}

static std::string paren(const FreqPoly& p) {
  std::string s = p.str();
  return p.terms().size() > 1 ? "(" + s + ")" : s;
}

std::string RationalExpr::str() const {
  std::string num;
  if (im_.is_zero()) {
    num = paren(re_);
  } else {
    std::string ip;
    if (im_ == FreqPoly(1)) {
      ip = "i";
    } else if (im_ == FreqPoly(-1)) {
      ip = "-i";
    } else {
      ip = paren(im_) + "*i";
    }
    num = re_.is_zero() ? ip : "(" + re_.str() + " + " + ip + ")";
  }
  if (den_.empty()) return num;
  std::string d;
  for (auto& [f, e] : den_) {
    if (!d.empty()) d += "*";
    const bool power = f.terms().size() == 1 && total_degree(f.terms().begin()->first) > 1;
    d += (e != 1 && power) ? "(" + f.str() + ")" : paren(f);
    if (e != 1) d += "^" + std::to_string(e);
  }
  return num + "/" + (den_.size() > 1 ? "(" + d + ")" : d);
}

ExpPoly::ExpPoly(const RationalExpr& c, int tpow, const FreqPoly& phase) { add_term({tpow, phase}, c); }

void ExpPoly::add_term(const Key& k, const RationalExpr& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int ExpPoly::max_tpow() const {
  int m = 0;
  for (auto& [k, c] : terms_) m = std::max(m, k.first);
  return m;
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly r;
  for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
  return r;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  for (auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

ExpPoly& ExpPoly::operator*=(const ExpPoly& o) {
  ExpPoly r;
  for (auto& [ka, ca] : terms_)
    for (auto& [kb, cb] : o.terms_) r.add_term({ka.first + kb.first, ka.second + kb.second}, ca * cb);
  terms_ = std::move(r.terms_);
  return *this;
}

ExpPoly ExpPoly::truncate(int p) const {
  ExpPoly r;
  for (auto& [k, c] : terms_)
    if (k.first <= p) r.terms_.emplace(k, c);
  return r;
}

Complex ExpPoly::eval(const FreqAssignment& fa, long double t) const {
  Complex s = 0;
  for (auto& [k, c] : terms_) {
    long double ph = t * k.second.eval(fa);
    s += c.eval(fa) * std::pow(t, static_cast<long double>(k.first)) * Complex(std::cos(ph), std::sin(ph));
  }
  return s;
}

std::string ExpPoly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto& [k, c] : terms_) {
    std::vector<std::string> parts;
    if (k.first == 1) parts.emplace_back("t");
    if (k.first > 1) parts.push_back("t^" + std::to_string(k.first));
    if (!k.second.is_zero()) parts.push_back("exp(i*t*(" + k.second.str() + "))");
    std::string cs;
    bool neg = false;
    if (c.is_rational()) {
      Rational v = c.re().constant_term();
      neg = v < 0;
      if (neg) v = -v;
      if (v != 1 || parts.empty()) cs = to_string(v);
    } else {
      cs = c.str();
      if (cs.starts_with("-")) {
        neg = true;
        cs.erase(0, 1);
      }
    }
    std::string term = cs;
    for (auto& p : parts) term += (term.empty() ? "" : " * ") + p;
    if (out.empty()) {
      out = (neg ? "-" : "") + term;
    } else {
      out += (neg ? " - " : " + ") + term;
    }
  }
  return out;
}

nlohmann::json ExpPoly::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (auto& [k, c] : terms_) {
    nlohmann::json den = nlohmann::json::array();
    for (auto& [f, e] : c.denominator()) den.push_back({{"factor", f.str()}, {"power", e}});
    arr.push_back({{"re", c.re().str()},
                   {"im", c.im().str()},
                   {"denominator", den},
                   {"tpow", k.first},
                   {"phase", k.second.str()}});
  }
  return arr;
}

CompiledExpPoly::Poly CompiledExpPoly::compile(const FreqPoly& p) {
  Poly out;
  for (auto& [m, c] : p.terms()) out.terms.emplace_back(c.convert_to<long double>(), m);
  return out;
}

long double CompiledExpPoly::Poly::eval(const long double* k) const {
  long double s = 0;
  for (auto& [c, m] : terms) {
    long double v = c;
    for (auto& [i, e] : m)
      for (int j = 0; j < e; ++j) v *= k[i];
    s += v;
  }
  return s;
}

CompiledExpPoly::CompiledExpPoly(const ExpPoly& e) {
  auto track = [this](const FreqPoly& p) {
    for (int s : p.symbols()) max_symbol_ = std::max(max_symbol_, s);
  };
  for (auto& [k, c] : e.terms()) {
    Term t;
    t.re = compile(c.re());
    t.im = compile(c.im());
    t.phase = compile(k.second);
    t.tpow = k.first;
    track(c.re());
    track(c.im());
    track(k.second);
    for (auto& [f, p] : c.denominator()) {
      t.den.emplace_back(compile(f), p);
      t.den_text.push_back(f.str());
      track(f);
    }
    terms_.push_back(std::move(t));
  }
}

Complex CompiledExpPoly::eval(const long double* k, long double t) const {
  Complex s = 0;
  for (auto& term : terms_) {
    long double den = 1;
    for (std::size_t i = 0; i < term.den.size(); ++i) {
      long double v = term.den[i].first.eval(k);
      if (std::fabs(v) < 1e-12L) throw ResonanceError(term.den_text[i]);
      for (int j = 0; j < term.den[i].second; ++j) den *= v;
    }
    long double tp = 1;
    for (int j = 0; j < term.tpow; ++j) tp *= t;
    long double ph = t * term.phase.eval(k);
    s += Complex(term.re.eval(k), term.im.eval(k)) * (tp / den) * Complex(std::cos(ph), std::sin(ph));
  }
  return s;
}

}  // namespace reso
