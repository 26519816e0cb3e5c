#include "reso/freq_poly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace reso {

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  // Lex with k_lowest most significant: compare exponents symbol by symbol.
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int sa = i < a.size() ? a[i].first : INT32_MAX;
    int sb = j < b.size() ? b[j].first : INT32_MAX;
    if (sa == sb) {
      if (a[i].second != b[j].second) return a[i].second > b[j].second;
      ++i;
      ++j;
    } else {
      return sa < sb;
    }
  }
  return false;
}

int total_degree(const Monomial& m) {
  int d = 0;
  for (auto& [s, e] : m) d += e;
  return d;
}

int max_exponent(const Monomial& m) {
  int d = 0;
  for (auto& [s, e] : m) d = std::max(d, e);
  return d;
}

static Monomial mono_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      r.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      r.push_back(b[j++]);
    } else {
      r.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return r;
}

FreqPoly::FreqPoly(long long c) {
  if (c != 0) terms_.emplace(Monomial{}, Rational(c));
}

FreqPoly::FreqPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

FreqPoly FreqPoly::symbol(int index) { return monomial({{index, 1}}, 1); }

FreqPoly FreqPoly::monomial(const Monomial& m, const Rational& c) {
  FreqPoly p;
  p.add_term(m, c);
  return p;
}

void FreqPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool FreqPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rational FreqPoly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational FreqPoly::leading_coefficient() const {
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

int FreqPoly::degree() const {
  int d = 0;
  for (auto& [m, c] : terms_) d = std::max(d, max_exponent(m));
  return d;
}

std::set<int> FreqPoly::symbols() const {
  std::set<int> s;
  for (auto& [m, c] : terms_)
    for (auto& [i, e] : m) s.insert(i);
  return s;
}

FreqPoly FreqPoly::operator-() const {
  FreqPoly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

FreqPoly& FreqPoly::operator+=(const FreqPoly& o) {
  for (auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

FreqPoly& FreqPoly::operator-=(const FreqPoly& o) {
  for (auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

FreqPoly& FreqPoly::operator*=(const FreqPoly& o) {
  FreqPoly r;
  for (auto& [ma, ca] : terms_)
    for (auto& [mb, cb] : o.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
  terms_ = std::move(r.terms_);
  return *this;
}

FreqPoly& FreqPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
  } else {
    for (auto& [m, v] : terms_) v *= c;
  }
  return *this;
}

FreqPoly FreqPoly::pow(unsigned e) const {
  FreqPoly r(1), b = *this;
  while (e) {
    if (e & 1u) r *= b;
    e >>= 1u;
    if (e) b *= b;
  }
  return r;
}

FreqPoly FreqPoly::substitute(int sym, const FreqPoly& by) const {
  FreqPoly r;
  std::map<int, FreqPoly> powers;
  for (auto& [m, c] : terms_) {
    Monomial rest;
    int e = 0;
    for (auto& pe : m) {
      if (pe.first == sym) {
        e = pe.second;
      } else {
        rest.push_back(pe);
      }
    }
    FreqPoly t = monomial(rest, c);
    if (e > 0) {
      auto it = powers.find(e);
      if (it == powers.end()) it = powers.emplace(e, by.pow(e)).first;
      t *= it->second;
    }
    r += t;
  }
  return r;
}

Rational FreqPoly::eval_exact(const FreqAssignment& fa) const {
  Rational s = 0;
  for (auto& [m, c] : terms_) {
    BigInt v = 1;
    for (auto& [i, e] : m) {
      auto it = fa.find(i);
      if (it == fa.end()) throw std::invalid_argument("unassigned symbol " + symbol_name(i));
      v *= boost::multiprecision::pow(BigInt(it->second), static_cast<unsigned>(e));
    }
    s += c * Rational(v);
  }
  return s;
}

long double FreqPoly::eval(const FreqAssignment& fa) const {
  long double s = 0;
  for (auto& [m, c] : terms_) {
    long double v = c.convert_to<long double>();
    for (auto& [i, e] : m) {
      auto it = fa.find(i);
      if (it == fa.end()) throw std::invalid_argument("unassigned symbol " + symbol_name(i));
      for (int k = 0; k < e; ++k) v *= static_cast<long double>(it->second);
    }
    s += v;
  }
  return s;
}

std::string symbol_name(int index) { return index == 0 ? "k" : "k" + std::to_string(index); }

static std::string mono_str(const Monomial& m) {
  std::string s;
  for (auto& [i, e] : m) {
    if (!s.empty()) s += "*";
    s += symbol_name(i);
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::string FreqPoly::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (auto& [m, c] : terms_) {
    bool neg = c < 0;
    Rational a = neg ? Rational(-c) : c;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (m.empty()) {
      s += to_string(a);
    } else if (a == 1) {
      s += mono_str(m);
    } else {
      s += to_string(a) + "*" + mono_str(m);
    }
  }
  return s;
}

bool operator<(const FreqPoly& a, const FreqPoly& b) {
  MonomialOrder lt;
  auto i = a.terms_.begin(), j = b.terms_.begin();
  for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
    if (lt(i->first, j->first)) return true;
    if (lt(j->first, i->first)) return false;
    if (i->second != j->second) return i->second < j->second;
  }
  return i == a.terms_.end() && j != b.terms_.end();
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  FreqPoly run() {
    FreqPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("polynomial parse error at " + std::to_string(pos_) + ": " + what +
                                " in \"" + std::string(s_) + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  BigInt integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return BigInt(std::string(s_.substr(start, pos_ - start)));
  }

  FreqPoly expr() {
    FreqPoly acc;
    bool neg = false;
    if (eat('-')) {
      neg = true;
    } else {
      eat('+');
    }
    for (;;) {
      FreqPoly t = term();
      if (neg) {
        acc -= t;
      } else {
        acc += t;
      }
      if (eat('+')) {
        neg = false;
      } else if (eat('-')) {
        neg = true;
      } else {
        return acc;
      }
    }
  }

  FreqPoly term() {
    FreqPoly t = factor();
    while (eat('*')) t *= factor();
    return t;
  }

  FreqPoly factor() {
    FreqPoly b = primary();
    if (eat('^')) b = b.pow(static_cast<unsigned>(integer()));
    return b;
  }

  FreqPoly primary() {
    skip();
    if (eat('(')) {
      FreqPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (pos_ < s_.size() && s_[pos_] == 'k') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      int idx = start == pos_ ? 0 : std::stoi(std::string(s_.substr(start, pos_ - start)));
      if (start != pos_ && idx == 0) fail("symbol index must be positive");
      return FreqPoly::symbol(idx);
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      BigInt num = integer();
      BigInt den = 1;
      std::size_t save = pos_;
      if (eat('/')) {
        skip();
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          den = integer();
          if (den == 0) fail("zero denominator");
        } else {
          pos_ = save;
        }
      }
      return FreqPoly(Rational(num, den));
    }
    fail("unexpected character");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

FreqPoly FreqPoly::parse(std::string_view text) { return Parser(text).run(); }

FreqPoly p_dom(const FreqPoly& p) {
  int d = p.degree();
  if (d == 0) return {};
  std::vector<std::pair<int, Rational>> pure;
  for (auto& [m, c] : p.terms()) {
    if (max_exponent(m) != d) continue;
    if (m.size() != 1) return {};
    pure.emplace_back(m[0].first, c);
  }
  const Rational a = pure.front().second;
  FreqPoly lin;
  for (auto& [i, c] : pure) {
    if (c == a) {
      lin += FreqPoly::symbol(i);
    } else if (c == -a && d % 2 == 1) {
      lin -= FreqPoly::symbol(i);
    } else {
      return {};
    }
  }
  return lin.pow(static_cast<unsigned>(d)) * a;
}

FreqVector FreqVector::symbol(int index, int coef) {
  FreqVector v;
  if (coef != 0) v.c_[index] = coef;
  return v;
}

FreqVector FreqVector::parse(std::string_view text) {
  FreqPoly p = FreqPoly::parse(text);
  FreqVector v;
  for (auto& [m, c] : p.terms()) {
    if (m.size() != 1 || m[0].second != 1 || m[0].first == 0 || denominator(c) != 1)
      throw std::invalid_argument("frequency must be an integer linear form in k1, k2, ...: " +
                                  std::string(text));
    v.c_[m[0].first] = static_cast<long long>(numerator(c));
  }
  return v;
}

long long FreqVector::coefficient(int index) const {
  auto it = c_.find(index);
  return it == c_.end() ? 0 : it->second;
}

bool FreqVector::is_leaf_admissible() const {
  for (auto& [i, c] : c_)
    if (c < -1 || c > 1) return false;
  return true;
}

FreqVector FreqVector::operator-() const {
  FreqVector r = *this;
  for (auto& [i, c] : r.c_) c = -c;
  return r;
}

FreqVector& FreqVector::operator+=(const FreqVector& o) {
  for (auto& [i, c] : o.c_) {
    long long& v = c_[i];
    v += c;
    if (v == 0) c_.erase(i);
  }
  return *this;
}

FreqVector& FreqVector::operator-=(const FreqVector& o) { return *this += -o; }

FreqPoly FreqVector::poly() const {
  FreqPoly p;
  for (auto& [i, c] : c_) p += FreqPoly::symbol(i) * Rational(c);
  return p;
}

long long FreqVector::eval(const FreqAssignment& fa) const {
  long long s = 0;
  for (auto& [i, c] : c_) {
    auto it = fa.find(i);
    if (it == fa.end()) throw std::invalid_argument("unassigned symbol " + symbol_name(i));
    s += c * it->second;
  }
  return s;
}

std::string FreqVector::str() const {
  if (c_.empty()) return "0";
  std::string s;
  for (auto& [i, c] : c_) {
    if (c < 0) {
      s += "-";
    } else if (!s.empty()) {
      s += "+";
    }
    long long a = c < 0 ? -c : c;
    if (a != 1) s += std::to_string(a) + "*";
    s += symbol_name(i);
  }
  return s;
}

}  // namespace reso
