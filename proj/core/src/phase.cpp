#include "reso/phase.hpp"

#include <stdexcept>

namespace reso {

FreqPoly phase(const Tree& t, const EquationSpec& eq) {
  FreqPoly p = eq.dispersion(t.edge(), t.freq());
  for (auto& c : t.children()) p += phase(c, eq);
  return p;
}

FreqPoly phase(const Forest& f, const EquationSpec& eq) {
  FreqPoly p;
  for (auto& t : f.trees()) p += phase(t, eq);
  return p;
}

std::vector<SplitResult> split_word(const Word& w, const EquationSpec& eq) {
  std::vector<SplitResult> out;
  FreqPoly prev;
  for (auto& letter : w.letters()) {
    SplitResult s;
    s.sum = phase(letter, eq) + prev;
    s.dominant = p_dom(s.sum);
    s.lower = s.sum - s.dominant;
    prev = s.dominant;
    out.push_back(std::move(s));
  }
  return out;
}

SplitResult split_step(const FreqPoly& letter_phase, const FreqPoly& prev_dominant, std::size_t j,
                       const std::vector<int>& m, const std::vector<int>& prev_dom_degrees, int n, int r,
                       const Rational& alpha, const ZeroTest& zero) {
  SplitResult s;
  s.sum = letter_phase + prev_dominant;
  auto weight = [&](std::size_t i) { return r + static_cast<int>(i) - m.at(i - 1); };
  Rational cond = Rational(weight(j) * s.sum.degree()) + alpha * static_cast<int>(j);
  // prev_dom_degrees[i-1] is the degree of the dominant part of w_[i-1].
  for (std::size_t i = 1; i < j; ++i) cond += weight(i) * prev_dom_degrees.at(i - 1);
  s.condition = cond;
  s.taylor = cond <= n;
  if (!s.taylor) s.dominant = p_dom(s.sum);
  if (!s.dominant.is_zero() && zero && zero(s.dominant)) s.dominant = FreqPoly();
  s.lower = s.sum - s.dominant;
  return s;
}

std::vector<SplitResult> split_adaptive(const Word& w, const std::vector<int>& m, int n, int r,
                                        const EquationSpec& eq, const ZeroTest& zero) {
  if (m.size() != w.size()) throw std::invalid_argument("m must have one entry per letter");
  std::vector<SplitResult> out;
  std::vector<int> degs{0};
  FreqPoly prev;
  for (std::size_t j = 1; j <= w.size(); ++j) {
    SplitResult s = split_step(phase(w.at(j), eq), prev, j, m, degs, n, r, eq.alpha, zero);
    prev = s.dominant;
    degs.push_back(prev.degree());
    out.push_back(std::move(s));
  }
  return out;
}

FreqPoly dominant_closed_form(const Tree& t, const EquationSpec& eq) {
  if (!is_planted_t2(t)) throw std::invalid_argument("closed form needs a t2-planted tree");
  const int sigma = eq.sigma();
  const Rational lead2 = eq.p_t2.terms().begin()->second;
  const bool pure_t2 = eq.p_t2.terms().begin()->first == Monomial{{0, sigma}};
  const bool matched_t1 = eq.p_t1.degree() == sigma && !eq.p_t1.is_zero() &&
                          eq.p_t1.terms().begin()->first == Monomial{{0, sigma}} &&
                          eq.p_t1.terms().begin()->second == -lead2;
  if (sigma < 1 || !pure_t2 || lead2 != 1 || !matched_t1)
    throw std::invalid_argument("equation does not have leading dispersion k^sigma with P_t1 = -P_t2 at top order");
  const int a_r = t.edge().conj;
  int b_r = 0, b_leaf = 1;
  if (sigma % 2 == 0) {
    b_r = a_r;
    b_leaf = 1 - a_r;
  }
  FreqPoly arg = t.freq().poly() * Rational(b_r ? -1 : 1);
  for (auto& l : leaves(t)) arg += l.freq().poly() * Rational(b_leaf ? -1 : 1);
  Rational scale = 1;
  for (int i = 1; i < sigma; ++i) scale /= 2;
  return arg.pow(static_cast<unsigned>(sigma)) * scale;
}

}  // namespace reso
