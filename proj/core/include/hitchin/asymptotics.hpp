#pragma once

#include <vector>

#include "hitchin/representation.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

struct AxisPair {
  Word alpha, beta;
  bool linked = false;  // from the base Fuchsian fixed points
};

// throws ContractViolation when the axes share an endpoint (same or commensurable elements)
AxisPair axis_pair(const Word& alpha, const Word& beta);

// First `count` unlinked pairs among class representatives of length <= max_wordlength,
// ordered by the longer word of the pair; classes are primitive and pairs are non-commensurable.
std::vector<AxisPair> unlinked_pairs(std::size_t count, int max_wordlength = 3);

struct TransversalityReport {
  double min_det = 0;        // min |det| over d-subsets of the two unit eigenbases
  std::vector<int> worst;    // indices < d are e_i(alpha), >= d are e_{i-d}(beta)
  int subsets = 0;
  bool pass = false;
};
TransversalityReport transversality_check(const Representation& R, const AxisPair& p, double threshold = 1e-8);

struct TraceEntry {
  int i = 0, j = 0, k = 0, l = 0;  // 0-based
  double value = 0;
  double normalized = 0;  // |value| / (|A|_F |B|_F)
};

struct ProjectionTraces {
  std::vector<TraceEntry> pp;  // Tr p_ii(a) p_kk(b)
  std::vector<TraceEntry> qq;  // Tr q_ij(a) q_kl(b), i<j, k<l
  std::vector<TraceEntry> ps;  // Tr p_ii(a) S2(b)
  std::vector<TraceEntry> qe;  // Tr q_ij(a) E2(b)
  double min_normalized = 0;
  // max over (i,j) of |sum_kl Tr q_ij(a) q_kl(b) - 1|, same for p
  double resolution_defect = 0;
  bool pass = false;
};
ProjectionTraces projection_traces(const Representation& R, const AxisPair& p, double threshold = 1e-10);

struct RatioLimits {
  int n_max = 0;
  // index n-1 holds the value at n; NaN where the product was not loxodromic
  std::vector<double> seq_power;  // Lambda(a^n b^n) / (Lambda(a^n) Lambda(b^n))
  std::vector<double> seq_single; // Lambda(a^n b) / Lambda(a^n)
  std::vector<int> skipped;
  double target_power = 0, target_single = 0;
  double err_power = 0, err_single = 0;  // |seq(n_max) - target|
  // geometric convergence: median of err(n+1)/err(n) over the resolved range
  double rate_power = 0, rate_single = 0;
  double gap_ratio = 0;  // max lambda_{i+1}/lambda_i over alpha and beta
  // |Tr S2 / Tr E2 of a^n b^n divided by Lambda(a^n b^n) - 1| at n_max
  double trace_route_error = 0;
  bool pass = false;
};
RatioLimits ratio_limits(const Representation& R, const AxisPair& p, int n_max = 20, double tol = 1e-6);

}  // namespace hitchin
