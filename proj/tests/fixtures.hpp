// Generated by tests/fixtures/generate_fixtures.py (mpmath, 30 digits). Do not edit.
#pragma once

namespace fixtures {

inline constexpr double kBeta002_15 = 49.396958424229480127;
inline constexpr double kHeatCell_c1_t1_x0_01 = 0.26024993890652326884;
inline constexpr double kWeighted_sqrt_over_sqrt2ma = 0.57079632679489661923;
inline constexpr double kC0sq_075_1 = 0.2349964007466562971;
inline constexpr double kOracle_075_1_11 = 0.4699928014933125942;
inline constexpr double kOracle_075_1_1h = 0.2349964007466562971;
inline constexpr double kOracle_065_1_1h = 0.22427403568400852272;
inline constexpr double kRx_065_1h = 0.083234586149385624668;
inline constexpr double kRy_065_1h = 0.038065641376347604658;
inline constexpr double kOracle_09_3_11 = 1.3306139342517477646;
inline constexpr double kOracle_09_3_1h = 0.68092337702165486004;
inline constexpr double kLead_09_3_1h = -0.20942313835248898276;
inline constexpr double kRx_075_1h = 0.072188521286653916911;
inline constexpr double kRy_075_1h = 0.072188521286653917684;
inline constexpr double kRz_09_11 = 2.1437156911166049674;
inline constexpr double kRzFirst_08_1h = 0.073622032414981349877;
inline constexpr double kRzSecond_08_1h = 0.56499776984500880939;
inline constexpr double kBifbm_03_07 = 0.36162837622516155733;
inline constexpr double kSwansonGap_0505_11 = -0.0066954245266756871567;

}  // namespace fixtures
