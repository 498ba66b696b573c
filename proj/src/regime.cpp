#include "nsol/regime.hpp"

#include <cmath>

namespace nsol {

std::string to_string(RegimeTag t) {
  switch (t) {
  case RegimeTag::th1_two_branch: return "TH1-two-branch";
  case RegimeTag::th2_mountain_only: return "TH2-mountain-only-certified";
  case RegimeTag::th5_defocusing: return "TH5-defocusing";
  case RegimeTag::th7_critical_p_case1: return "TH7-critical-p-case1";
  case RegimeTag::th7_critical_p_case2: return "TH7-critical-p-case2";
  case RegimeTag::th7_critical_p_case3: return "TH7-critical-p-case3";
  case RegimeTag::th7_critical_p_case4: return "TH7-critical-p-case4";
  case RegimeTag::th15_critical_q: return "TH15-critical-q";
  default: return "open-region";
  }
}

RegimeTag classify_regime(const ProblemParams &prm,
                          const ThresholdReport &report) {
  prm.validate();
  const double tol = 1e-12;
  const bool p_critical = std::abs(prm.p - kCriticalExponent) <= tol;
  const bool p_super = prm.p > kCriticalExponent + tol && prm.p < 6.0;
  const bool q_low = prm.q > 2.0 && prm.q < 8.0 / 3.0;
  const bool q_critical = std::abs(prm.q - kCriticalExponent) <= tol;

  if (p_critical && q_low && prm.mu != 0.0) {
    if (prm.mu > 0.0)
      return prm.a <= report.a_star ? RegimeTag::th7_critical_p_case1
                                    : RegimeTag::th7_critical_p_case2;
    return prm.a <= report.a_star ? RegimeTag::th7_critical_p_case3
                                  : RegimeTag::th7_critical_p_case4;
  }
  if (prm.mu > 0.0 && q_critical && p_super && report.cond_k201)
    return RegimeTag::th15_critical_q;
  if (prm.mu <= 0.0 && q_low && p_super) return RegimeTag::th5_defocusing;
  if (prm.mu > 0.0 && q_low && p_super && prm.a < report.abar0)
    return RegimeTag::th1_two_branch;
  if (prm.mu > 0.0 && prm.q > kCriticalExponent + tol && prm.q < prm.p &&
      prm.p < 6.0 && report.cond_k201)
    return RegimeTag::th2_mountain_only;
  return RegimeTag::open_region;
}

RegimeTag classify_regime(const ProblemParams &prm) {
  return classify_regime(prm, thresholds(prm));
}

} // namespace nsol
