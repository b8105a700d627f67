#include <doctest.h>

#include <cmath>

#include <hitchin/asymptotics.hpp>
#include <hitchin/errors.hpp>
#include <hitchin/hyperbolic.hpp>

using namespace hitchin;

namespace {

QMat qimage(const Representation& R, const Word& w) {
  QMat m = QMat::Identity(R.d(), R.d());
  for (Letter x : w) m = m * R.letter(x).cast<Quad>();
  return m;
}

// spectral radius by power iteration in quad precision
Quad qrho(const QMat& M) {
  QMat v = QMat::Ones(M.rows(), 1);
  Quad r = 0;
  for (int it = 0; it < 60; ++it) {
    QMat w = M * v;
    Quad n = 0;
    for (int i = 0; i < w.rows(); ++i) n += w(i, 0) * w(i, 0);
    n = sqrt(n);
    Quad m = 0;
    for (int i = 0; i < v.rows(); ++i) m += v(i, 0) * v(i, 0);
    r = n / sqrt(m);
    v = w / n;
  }
  return r;
}

// lambda_1 / lambda_2 of a 3 x 3 SL matrix: lambda_1^2 lambda_3
Quad qLambda(const Representation& R, const Word& w) {
  return qrho(qimage(R, w)) * qrho(qimage(R, w)) / qrho(qimage(R, inverse(w)));
}

Word power(const Word& w, int n) {
  Word r;
  for (int i = 0; i < n; ++i) r.insert(r.end(), w.begin(), w.end());
  return r;
}

}  // namespace

TEST_CASE("axis pairs") {
  const Word a = genus2().parse("a1"), b = genus2().parse("b1"), c = genus2().parse("a2");
  CHECK(axis_pair(a, b).linked);
  CHECK_FALSE(axis_pair(a, c).linked);
  CHECK_THROWS_AS(axis_pair(a, genus2().parse("a1a1")), ContractViolation);

  const std::vector<AxisPair> ps = unlinked_pairs(40, 3);
  REQUIRE(ps.size() == 40);
  std::size_t prev = 0;
  for (const AxisPair& p : ps) {
    CHECK_FALSE(p.linked);
    CHECK_FALSE(linked(axis(p.alpha), axis(p.beta)));
    const std::size_t m = std::max(p.alpha.size(), p.beta.size());
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("transversality and projection traces") {
  const Representation R = random_deformation(d_fuchsian(3), 21, 0.05);
  for (const AxisPair& p : unlinked_pairs(8, 3)) {
    const TransversalityReport t = transversality_check(R, p);
    CHECK(t.subsets == 20);
    CHECK(t.min_det > 1e-8);
    CHECK(t.min_det <= 1.0 + 1e-12);
    CHECK(t.pass);
    const ProjectionTraces tr = projection_traces(R, p);
    CHECK(tr.resolution_defect < 1e-8);
    CHECK(tr.pp.size() == 9);
    CHECK(tr.qq.size() == 9);
    for (const TraceEntry& e : tr.qq) CHECK(e.normalized > 1e-10);
  }
}

TEST_CASE("ratio limits against quad precision products") {
  const Representation R = random_deformation(d_fuchsian(3), 5, 0.05);
  const AxisPair p = unlinked_pairs(3, 3)[2];
  const RatioLimits r = ratio_limits(R, p, 12);
  REQUIRE(r.seq_power.size() == 12);
  for (int n : {4, 8, 12}) {
    const Quad want = qLambda(R, concat(power(p.alpha, n), power(p.beta, n))) /
                      (qLambda(R, power(p.alpha, n)) * qLambda(R, power(p.beta, n)));
    CHECK(r.seq_power[static_cast<std::size_t>(n - 1)] == doctest::Approx(static_cast<double>(want)).epsilon(1e-9));
    const Quad single = qLambda(R, concat(power(p.alpha, n), p.beta)) / qLambda(R, power(p.alpha, n));
    CHECK(r.seq_single[static_cast<std::size_t>(n - 1)] == doctest::Approx(static_cast<double>(single)).epsilon(1e-9));
  }
  CHECK(r.gap_ratio < 1);
  const RatioLimits full = ratio_limits(R, p, 20);
  CHECK(full.err_power < 1e-6 * std::max(1.0, std::abs(full.target_power)));
  CHECK(full.rate_power < 1);
  CHECK(full.pass);
  CHECK_THROWS_AS(ratio_limits(R, AxisPair{genus2().parse("a1"), genus2().parse("b1"), true}), ContractViolation);
}
