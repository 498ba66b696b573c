// Parameter-space classification: which certified solution geometry covers
// the given (a, μ, p, q). Tags name the governing existence results:
//   TH1-two-branch            focusing, q ∈ (2,8/3), p ∈ (10/3,6), a < ā₀:
//                             two fiber branches; the local minimizer is
//                             certified, and the mountain-pass branch is
//                             additionally certified when q ≤ 12/5 and the
//                             multiplier mass bound holds (see report flags)
//   TH2-mountain-only-certified  focusing single-branch family 10/3 < q < p
//                             under the critical-q mass bound: mountain pass
//                             only, no local minimum exists
//   TH5-defocusing            μ ≤ 0, q ∈ (2,8/3), p ∈ (10/3,6)
//   TH7-critical-p-case1..4   p = 10/3, q ∈ (2,8/3), split by sign of μ and
//                             a against the critical mass a*
//   TH15-critical-q           q = 10/3, μ > 0, p ∈ (10/3,6), mass bound holds
//   open-region               no certified result applies
#pragma once

#include "nsol/thresholds.hpp"

#include <string>

namespace nsol {

enum class RegimeTag {
  th1_two_branch,
  th2_mountain_only,
  th5_defocusing,
  th7_critical_p_case1,
  th7_critical_p_case2,
  th7_critical_p_case3,
  th7_critical_p_case4,
  th15_critical_q,
  open_region,
};

std::string to_string(RegimeTag t);

RegimeTag classify_regime(const ProblemParams &prm,
                          const ThresholdReport &report);
RegimeTag classify_regime(const ProblemParams &prm);

} // namespace nsol
