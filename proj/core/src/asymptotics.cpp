#include "hitchin/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hitchin/errors.hpp"
#include "hitchin/hyperbolic.hpp"
#include "hitchin/linalg.hpp"

namespace hitchin {

namespace {

EigenData eigen_of(const Representation& R, const Word& w) {
  return eigen_real_sorted(R.image(w), R.image(inverse(w)));
}

void require_unlinked(const AxisPair& p) {
  if (p.linked) throw ContractViolation("asymptotics: the axes of the pair are linked");
}

double trace_product(const Mat& A, const Mat& B) { return (A.transpose().cwiseProduct(B)).sum(); }

TraceEntry entry(int i, int j, int k, int l, const Mat& A, const Mat& B) {
  TraceEntry e{i, j, k, l, trace_product(A, B), 0};
  e.normalized = std::abs(e.value) / (A.norm() * B.norm());
  return e;
}

double log_rho(const ScaledMatrix& s) { return s.log_scale + std::log(std::abs(dominant_eigen(s.m).first)); }

// log of lambda_1/lambda_2 of the product of the two scaled factors, and the
// log trace ratio Tr S2 / Tr E2 of the same product
struct LogLambda {
  double lambda, trace_route;
};

LogLambda log_lambda(const ScaledMatrix& a, const ScaledMatrix& b, const ScaledMatrix& ea, const ScaledMatrix& eb,
                     const ScaledMatrix& sa, const ScaledMatrix& sb) {
  const ScaledMatrix m = normalized_product(a, b);
  const ScaledMatrix e = normalized_product(ea, eb);
  const ScaledMatrix s = normalized_product(sa, sb);
  LogLambda r;
  r.lambda = 2 * log_rho(m) - log_rho(e);
  const double ts = s.m.trace(), te = e.m.trace();
  r.trace_route = (ts > 0 && te > 0) ? s.log_scale - e.log_scale + std::log(ts / te)
                                     : std::numeric_limits<double>::quiet_NaN();
  return r;
}

double median_rate(const std::vector<double>& seq, double target) {
  std::vector<double> rates;
  // below this the error is rounding, not convergence
  const double floor = 1e-9 * std::max(1.0, std::abs(target));
  for (std::size_t n = 0; n + 1 < seq.size(); ++n) {
    const double e0 = std::abs(seq[n] - target), e1 = std::abs(seq[n + 1] - target);
    if (std::isfinite(e0) && std::isfinite(e1) && e0 > floor && e1 > floor) rates.push_back(e1 / e0);
  }
  if (rates.empty()) return 0;
  std::nth_element(rates.begin(), rates.begin() + static_cast<std::ptrdiff_t>(rates.size() / 2), rates.end());
  return rates[rates.size() / 2];
}

}  // namespace

AxisPair axis_pair(const Word& alpha, const Word& beta) {
  if (alpha.empty() || beta.empty()) throw DomainError("axis_pair: empty word");
  const Geodesic a = axis(alpha), b = axis(beta);
  AxisPair p{alpha, beta, false};
  try {
    p.linked = linked(a, b);
  } catch (const DomainError&) {
    throw ContractViolation("axis_pair: the axes share an endpoint");
  }
  return p;
}

std::vector<AxisPair> unlinked_pairs(std::size_t count, int max_wordlength) {
  std::vector<Word> reps;
  for_each_class(genus2(), max_wordlength, [&](const Letter* w, int n, int power) {
    if (power == 1) reps.emplace_back(w, w + n);
  });
  // shortest pairs first: by the longer of the two words, then enumeration order
  std::vector<AxisPair> out;
  for (std::size_t j = 1; j < reps.size() && out.size() < count; ++j)
    for (std::size_t i = 0; i < j && out.size() < count; ++i) {
      try {
        AxisPair p = axis_pair(reps[i], reps[j]);
        if (!p.linked) out.push_back(std::move(p));
      } catch (const ContractViolation&) {
      }
    }
  if (out.size() < count) throw DomainError("unlinked_pairs: not enough pairs; raise max_wordlength");
  return out;
}

TransversalityReport transversality_check(const Representation& R, const AxisPair& p, double threshold) {
  require_unlinked(p);
  const int d = R.d();
  const EigenData a = eigen_of(R, p.alpha), b = eigen_of(R, p.beta);
  Mat V(d, 2 * d);
  V << a.vectors, b.vectors;
  for (int c = 0; c < 2 * d; ++c) V.col(c).normalize();
  TransversalityReport r;
  r.min_det = std::numeric_limits<double>::infinity();
  std::vector<bool> pick(static_cast<std::size_t>(2 * d), false);
  std::fill(pick.begin(), pick.begin() + d, true);
  Mat S(d, d);
  do {
    std::vector<int> idx;
    for (int c = 0; c < 2 * d; ++c)
      if (pick[static_cast<std::size_t>(c)]) idx.push_back(c);
    for (int c = 0; c < d; ++c) S.col(c) = V.col(idx[static_cast<std::size_t>(c)]);
    const double det = std::abs(S.determinant());
    ++r.subsets;
    if (det < r.min_det) {
      r.min_det = det;
      r.worst = idx;
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  r.pass = r.min_det > threshold;
  return r;
}

ProjectionTraces projection_traces(const Representation& R, const AxisPair& p, double threshold) {
  require_unlinked(p);
  const int d = R.d();
  // built from the eigenbasis even where products of eigenvalues collide
  const InducedProjections A = induced_projections(eigen_of(R, p.alpha), true);
  const InducedProjections B = induced_projections(eigen_of(R, p.beta), true);
  const Mat Sb = symmetric_square(R.image(p.beta)), Eb = exterior_square(R.image(p.beta));
  ProjectionTraces t;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) t.pp.push_back(entry(i, i, k, k, A.P(i, i), B.P(k, k)));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) t.qq.push_back(entry(i, j, k, l, A.Q(i, j), B.Q(k, l)));
  for (int i = 0; i < d; ++i) t.ps.push_back(entry(i, i, -1, -1, A.P(i, i), Sb));
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) t.qe.push_back(entry(i, j, -1, -1, A.Q(i, j), Eb));
  t.min_normalized = std::numeric_limits<double>::infinity();
  for (const auto* v : {&t.pp, &t.qq, &t.ps, &t.qe})
    for (const TraceEntry& e : *v) t.min_normalized = std::min(t.min_normalized, e.normalized);
  // sum over the second index pair is Tr of the first projection, which is 1
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      double sp = 0, sq = 0;
      for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) {
          sp += trace_product(A.P(i, j), B.P(k, l));
          if (i < j && k < l) sq += trace_product(A.Q(i, j), B.Q(k, l));
        }
      t.resolution_defect = std::max(t.resolution_defect, std::abs(sp - 1));
      if (i < j) t.resolution_defect = std::max(t.resolution_defect, std::abs(sq - 1));
    }
  t.pass = t.min_normalized > threshold;
  return t;
}

RatioLimits ratio_limits(const Representation& R, const AxisPair& p, int n_max, double tol) {
  require_unlinked(p);
  if (n_max < 1 || n_max > 40) throw DomainError("ratio_limits: n_max must be in 1..40");
  const Mat a = R.image(p.alpha), b = R.image(p.beta);
  const EigenData ea = eigen_of(R, p.alpha), eb = eigen_of(R, p.beta);
  const double la = std::log(ea.values(0) / ea.values(1)), lb = std::log(eb.values(0) / eb.values(1));

  RatioLimits r;
  r.n_max = n_max;
  for (const EigenData* e : {&ea, &eb})
    for (int i = 0; i + 1 < e->dim(); ++i) r.gap_ratio = std::max(r.gap_ratio, e->values(i + 1) / e->values(i));

  // d-Fuchsian products lambda_i lambda_j collide whenever i + j agrees; the projections
  // are still the ones built from the eigenbasis
  const InducedProjections A = induced_projections(ea, true), B = induced_projections(eb, true);
  const Mat Sb = symmetric_square(b), Eb = exterior_square(b);
  r.target_power = trace_product(A.P(0, 0), B.P(0, 0)) / trace_product(A.Q(0, 1), B.Q(0, 1));
  r.target_single = trace_product(A.P(0, 0), Sb) / trace_product(A.Q(0, 1), Eb);

  const Mat Ea = exterior_square(a), Sa = symmetric_square(a);
  const ScaledMatrix b1{b, 0}, eb1{Eb, 0}, sb1{Sb, 0};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n = 1; n <= n_max; ++n) {
    const ScaledMatrix an = normalized_power(a, n), ean = normalized_power(Ea, n), san = normalized_power(Sa, n);
    double s1 = nan, s2 = nan;
    try {
      const LogLambda x = log_lambda(an, normalized_power(b, n), ean, normalized_power(Eb, n), san,
                                     normalized_power(Sb, n));
      s1 = std::exp(x.lambda - n * la - n * lb);
      if (n == n_max) r.trace_route_error = std::abs(std::exp(x.trace_route - x.lambda) - 1);
    } catch (const NotLoxodromic&) {
    }
    try {
      s2 = std::exp(log_lambda(an, b1, ean, eb1, san, sb1).lambda - n * la);
    } catch (const NotLoxodromic&) {
    }
    if (std::isnan(s1) || std::isnan(s2)) r.skipped.push_back(n);
    r.seq_power.push_back(s1);
    r.seq_single.push_back(s2);
  }
  r.err_power = std::abs(r.seq_power.back() - r.target_power);
  r.err_single = std::abs(r.seq_single.back() - r.target_single);
  r.rate_power = median_rate(r.seq_power, r.target_power);
  r.rate_single = median_rate(r.seq_single, r.target_single);
  r.pass = r.err_power <= tol && r.err_single <= tol && r.target_power != 0 && r.target_single != 0;
  return r;
}

}  // namespace hitchin
