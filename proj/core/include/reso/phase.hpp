#pragma once

#include "reso/equation.hpp"
#include "reso/hopf.hpp"

#include <functional>
#include <vector>

namespace reso {

FreqPoly phase(const Tree& t, const EquationSpec& eq);
FreqPoly phase(const Forest& f, const EquationSpec& eq);

struct SplitResult {
  FreqPoly sum;  // F(T_j) + dominant part of the previous prefix
  FreqPoly dominant;
  FreqPoly lower;
  Rational condition{0};  // left side of the regularity condition
  bool taylor = false;    // condition <= n, dominant forced to zero
};

/// Decides whether a nonzero symbolic dominant part is to be treated as
/// vanishing; used to re-derive expressions at resonant integer tuples.
using ZeroTest = std::function<bool(const FreqPoly&)>;

std::vector<SplitResult> split_word(const Word& w, const EquationSpec& eq);

/// m holds m_1..m_l aligned with positions 1..l.
std::vector<SplitResult> split_adaptive(const Word& w, const std::vector<int>& m, int n, int r,
                                        const EquationSpec& eq, const ZeroTest& zero = nullptr);

/// One prefix step of the adaptive splitting.
SplitResult split_step(const FreqPoly& letter_phase, const FreqPoly& prev_dominant, std::size_t j,
                       const std::vector<int>& m, const std::vector<int>& prev_dom_degrees, int n, int r,
                       const Rational& alpha, const ZeroTest& zero);

FreqPoly dominant_closed_form(const Tree& t, const EquationSpec& eq);

}  // namespace reso
