#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <hitchin/asymptotics.hpp>
#include <hitchin/cross_ratio.hpp>

namespace hitchin::cli {

struct CrossRatioSuiteOptions {
  int samples = 1000;       // cyclically ordered quadruples
  int chi_configs = 100;
  int mesh_points = 64;
  int mesh_wordlength = 6;
  std::uint64_t seed = 1;
  bool extended = true;
};

struct CrossRatioSuite {
  int d = 0;
  int quadruples = 0, flagged = 0;
  double min_b = 0;               // min b(x,z,t,y) over the quadruples
  double cocycle = 0;             // max |b(x,m,t,y) b(x,z,t,m) / b(x,z,t,y) - 1|
  double scale_invariance = 0;    // max relative change of B under rescaling its arguments
  double symmetry = 0;            // max |omega(AxB) - omega(BxA)|
  double lh_identity = 0;         // max |axis mass - L_H| over a few classes
  double chi_top = 0;             // max |chi_d| / minor scale
  double chi_sub = 0;             // min |chi_{d-1}| / hadamard scale
};

CrossRatioSuite verify_cross_ratio(const Representation& R, const CrossRatioSuiteOptions& opt);

struct PairRow {
  std::string alpha, beta;
  double min_det = 0, min_trace = 0, resolution_defect = 0;
  double target_power = 0, target_single = 0, err_power = 0, err_single = 0;
  double rate_power = 0, rate_single = 0, gap_ratio = 0, trace_route_error = 0;
  int skipped = 0;
};

struct AsymptoticsSuite {
  std::vector<PairRow> rows;
  double min_det = 0, min_trace = 0, max_err = 0, max_resolution_defect = 0;
  bool transversality_ok = false, traces_ok = false, limits_ok = false;
};

AsymptoticsSuite verify_asymptotics(const Representation& R, int pairs, int pair_wordlength, int n_max,
                                    double transversality_min, double trace_min, double ratio_tol);

}  // namespace hitchin::cli
