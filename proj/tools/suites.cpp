#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <hitchin/errors.hpp>
#include <hitchin/lengths.hpp>

namespace hitchin::cli {

namespace {

// k distinct sorted indices in [0, n), drawn from raw engine output
std::vector<int> distinct_sorted(std::mt19937_64& rng, int n, int k) {
  std::vector<int> ix;
  while (static_cast<int>(ix.size()) < k) {
    const int v = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (std::find(ix.begin(), ix.end(), v) == ix.end()) ix.push_back(v);
  }
  std::sort(ix.begin(), ix.end());
  return ix;
}

double unit(std::mt19937_64& rng) { return std::ldexp(static_cast<double>(rng() >> 11), -53); }

}  // namespace

CrossRatioSuite verify_cross_ratio(const Representation& R, const CrossRatioSuiteOptions& opt) {
  CrossRatioOptions co;
  co.extended = opt.extended;
  const LimitMap L(R, co);
  const auto grid = boundary_grid(opt.mesh_points, opt.mesh_wordlength);
  const int n = static_cast<int>(grid.size());
  std::mt19937_64 rng(opt.seed);
  CrossRatioSuite s;
  s.d = R.d();
  s.min_b = std::numeric_limits<double>::infinity();
  s.chi_sub = std::numeric_limits<double>::infinity();
  std::vector<CurrentBox> boxes;
  for (int k = 0; k < opt.samples; ++k) {
    const auto ix = distinct_sorted(rng, n, 5);
    // cyclic order t < x < y < m < z on the circle
    const auto &t = grid[ix[0]], &x = grid[ix[1]], &y = grid[ix[2]], &m = grid[ix[3]], &z = grid[ix[4]];
    try {
      s.min_b = std::min(s.min_b, L.b(x, z, t, y));
      s.cocycle = std::max(s.cocycle, std::abs(L.b(x, m, t, y) * L.b(x, z, t, m) / L.b(x, z, t, y) - 1));
      const Flag &fx = L.flag(x), &fy = L.flag(y), &fz = L.flag(z), &ft = L.flag(t);
      const double b0 = cross_ratio_B(fx.xi(), fy.xi_star(), fz.xi(), ft.xi_star());
      const double c1 = 0.1 + 10 * unit(rng), c2 = 0.1 + 10 * unit(rng), c3 = 0.1 + 10 * unit(rng),
                   c4 = 0.1 + 10 * unit(rng);
      const double b1 =
          cross_ratio_B(Vec(c1 * fx.xi()), c2 * fy.xi_star(), Vec(c3 * fz.xi()), c4 * ft.xi_star());
      s.scale_invariance = std::max(s.scale_invariance, std::abs(b1 / b0 - 1));
      boxes.push_back(box_mass(L, t, x, y, z));
      ++s.quadruples;
    } catch (const NearDegenerate&) {
      ++s.flagged;
    }
  }
  s.symmetry = symmetry_defect(L, boxes);
  // The translated points carry long conjugate words whose flags lose about
  // eps * exp(L_H) in double at d = 4, so in extended mode every flag here is quad.
  CrossRatioOptions qo = co;
  if (opt.extended) qo.near_separation = kTwoPi;
  const LimitMap Lq(R, qo);
  for (const char* w : {"a1", "b1a2", "a1b2A1", "a1a1B2"}) {
    const Word g = genus2().parse(w);
    s.lh_identity = std::max(s.lh_identity,
                             std::abs(axis_liouville_mass(Lq, g, grid[3], grid[static_cast<std::size_t>(n / 2 + 7)]) -
                                      lengths(R, g).LH));
  }
  const int d = R.d();
  for (int k = 0; k < opt.chi_configs; ++k) {
    const auto ix = distinct_sorted(rng, n, 2 * d + 2);
    std::vector<int> perm(ix.begin(), ix.end());
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<BoundaryPoint> X, Y;
    for (int i = 0; i <= d; ++i) {
      X.push_back(grid[perm[i]]);
      Y.push_back(grid[perm[d + 1 + i]]);
    }
    try {
      const ChiValue top = chi_p(L, X, Y);
      X.pop_back();
      Y.pop_back();
      const ChiValue sub = chi_p(L, X, Y);
      s.chi_top = std::max(s.chi_top, std::abs(top.value) / top.minor_scale);
      s.chi_sub = std::min(s.chi_sub, std::abs(sub.value) / sub.hadamard_scale);
    } catch (const NearDegenerate&) {
      ++s.flagged;
    }
  }
  return s;
}

AsymptoticsSuite verify_asymptotics(const Representation& R, int pairs, int pair_wordlength, int n_max,
                                    double transversality_min, double trace_min, double ratio_tol) {
  AsymptoticsSuite s;
  s.min_det = s.min_trace = std::numeric_limits<double>::infinity();
  const Presentation& P = genus2();
  for (const AxisPair& p : unlinked_pairs(static_cast<std::size_t>(pairs), pair_wordlength)) {
    const auto t = transversality_check(R, p, transversality_min);
    const auto tr = projection_traces(R, p, trace_min);
    const auto rl = ratio_limits(R, p, n_max, ratio_tol);
    PairRow r{P.format(p.alpha), P.format(p.beta), t.min_det, tr.min_normalized, tr.resolution_defect,
              rl.target_power, rl.target_single, rl.err_power, rl.err_single, rl.rate_power, rl.rate_single,
              rl.gap_ratio, rl.trace_route_error, static_cast<int>(rl.skipped.size())};
    s.min_det = std::min(s.min_det, r.min_det);
    s.min_trace = std::min(s.min_trace, r.min_trace);
    s.max_err = std::max({s.max_err, r.err_power, r.err_single});
    s.max_resolution_defect = std::max(s.max_resolution_defect, r.resolution_defect);
    s.rows.push_back(std::move(r));
  }
  s.transversality_ok = s.min_det > transversality_min;
  s.traces_ok = s.min_trace > trace_min;
  s.limits_ok = s.max_err <= ratio_tol;
  return s;
}

}  // namespace hitchin::cli
