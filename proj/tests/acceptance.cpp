// One PASS/FAIL line per acceptance criterion. Tolerances are pinned here and
// not read from any config, so a run is comparable to any other run.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <hitchin/asymptotics.hpp>
#include <hitchin/cross_ratio.hpp>
#include <hitchin/currents.hpp>
#include <hitchin/errors.hpp>
#include <hitchin/lengths.hpp>

#include "suites.hpp"

using namespace hitchin;

namespace {

constexpr double kIdentityTol = 1e-8;
constexpr double kEquivarianceTol = 1e-7;
constexpr double kChiTop = 1e-8;
constexpr double kChiSub = 1e-10;
constexpr double kEntropyLo = 0.85, kEntropyHi = 1.15;
constexpr double kVolumeTol = 0.10, kRatioTol = 0.02;
constexpr double kCvMax = 0.25;
constexpr double kPressureFloor = 1 - 1e-3;
constexpr double kHessianEps = 1e-3, kHessianH = 0.02;
constexpr double kTransversality = 1e-8, kTraceMin = 1e-10, kLimitTol = 1e-6;

constexpr int kTableWordlength = 10;   // entropy, Bowen-Margulis, pressure at d = 3
constexpr int kHessian4Wordlength = 8; // d = 4 pressure forms
constexpr int kVolumeMesh = 256;
constexpr int kMeshWordlength = 8;
constexpr int kBmMesh = 32;

struct Line {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Line> lines;

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

void run(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  lines.push_back({id, name, ok, detail, s});
  std::printf("%s criterion %d %s: %s [%.1fs]\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), s);
  std::fflush(stdout);
}

const LengthTable& fuchsian3_table() {
  static const LengthTable t = [] {
    TableOptions o;
    o.cutoff = std::numeric_limits<double>::quiet_NaN();
    return build_length_table(d_fuchsian(3), kTableWordlength, o);
  }();
  return t;
}

// ---- 1 ----------------------------------------------------------------------

bool exact_identities(std::string& out) {
  double relator = 0, hilbert = 0, inverse = 0, contra = 0, equiv = 0;
  double scale = 0, cocycle = 0, lh = 0;
  const Word g = genus2().parse("a1b2");
  for (int d : {3, 4}) {
    for (const Representation& R : {d_fuchsian(d), random_deformation(d_fuchsian(d), 17, 0.05)}) {
      relator = std::max(relator, R.relator_residual());
      const Representation C = contragredient(R);
      relator = std::max(relator, C.relator_residual());
      const LengthTable t = build_length_table(R, 5);
      const LengthTable tc = evaluate_on(C, t);
      for (std::size_t i = 0; i < t.size(); ++i) {
        double s = 0;
        for (int k = 1; k < d; ++k) s += t.La(i, k);
        hilbert = std::max(hilbert, std::abs(s - t.LH(i)) / t.LH(i));
        const Lengths inv = lengths(R, hitchin::inverse(t.classes.word(i)));
        for (int k = 1; k < d; ++k) {
          inverse = std::max(inverse, std::abs(inv.La[static_cast<std::size_t>(k - 1)] - t.La(i, d - k)) / t.LH(i));
          contra = std::max(contra, std::abs(tc.La(i, k) - t.La(i, d - k)) / t.LH(i));
        }
      }
      cli::CrossRatioSuiteOptions o;
      o.samples = 1000;
      o.chi_configs = 10;
      const auto s = cli::verify_cross_ratio(R, o);
      scale = std::max(scale, s.scale_invariance);
      cocycle = std::max(cocycle, s.cocycle);
      lh = std::max(lh, s.lh_identity);
      // omega equivariance: box masses at g.box against the box
      const LimitMap L(R);
      const std::vector<BoundaryPoint> mesh = boundary_grid(32, 6);
      for (int k = 0; k + 12 < 32; k += 3) {
        const auto &t0 = mesh[static_cast<std::size_t>(k)], &x0 = mesh[static_cast<std::size_t>(k + 3)],
                   &y0 = mesh[static_cast<std::size_t>(k + 8)], &z0 = mesh[static_cast<std::size_t>(k + 12)];
        const double m0 = box_mass(L, t0, x0, y0, z0).mass;
        const double m1 = box_mass(L, translate(g, t0), translate(g, x0), translate(g, y0), translate(g, z0)).mass;
        equiv = std::max(equiv, std::abs(m1 - m0) / std::max(1.0, std::abs(m0)));
      }
    }
  }
  out = fmt("relator %.2e, L_H=sum %.2e, inverse %.2e, contragredient %.2e, scale %.2e, cocycle %.2e, L_H via b %.2e"
            " (tol %.0e); omega equivariance %.2e (tol %.0e)",
            relator, hilbert, inverse, contra, scale, cocycle, lh, kIdentityTol, equiv, kEquivarianceTol);
  return relator <= 1e-10 && hilbert <= kIdentityTol && inverse <= kIdentityTol && contra <= kIdentityTol &&
         scale <= kIdentityTol && cocycle <= kIdentityTol && lh <= kIdentityTol && equiv <= kEquivarianceTol;
}

// ---- 2, 3 -------------------------------------------------------------------

bool chi_suite(std::string& out, bool positivity) {
  bool ok = true;
  for (int d : {3, 4})
    for (int deformed : {0, 1}) {
      const Representation R = deformed ? random_deformation(d_fuchsian(d), 29, 0.05) : d_fuchsian(d);
      cli::CrossRatioSuiteOptions o;
      o.samples = positivity ? 1000 : 20;
      o.chi_configs = positivity ? 1 : 100;
      const auto s = cli::verify_cross_ratio(R, o);
      if (positivity) {
        out += fmt("%sd=%d%s min b %.4f over %d", out.empty() ? "" : "; ", d, deformed ? "'" : "", s.min_b,
                   s.quadruples);
        ok = ok && s.min_b > 1 && s.quadruples >= 1000;
      } else {
        out += fmt("%sd=%d%s top %.1e sub %.1e", out.empty() ? "" : "; ", d, deformed ? "'" : "", s.chi_top,
                   s.chi_sub);
        ok = ok && s.chi_top <= kChiTop && s.chi_sub > kChiSub;
      }
    }
  out += positivity ? " (need b > 1)" : fmt(" (top <= %.0e, sub > %.0e)", kChiTop, kChiSub);
  return ok;
}

// ---- 4 ----------------------------------------------------------------------

bool entropy_one(std::string& out) {
  const LengthTable& t = fuchsian3_table();
  const EntropyEstimate a = entropy(t, LengthFunctional::simple_root(1));
  TableOptions o;
  o.cutoff = std::numeric_limits<double>::quiet_NaN();
  const LengthTable u = build_length_table(random_deformation(d_fuchsian(3), 1, 0.05), kTableWordlength, o);
  const EntropyEstimate b = entropy(u, LengthFunctional::simple_root(1));
  out = fmt("3-Fuchsian h=%.4f on [%.2f, %.2f], deformed h=%.4f on [%.2f, %.2f] (wordlength %d, need [%.2f, %.2f])",
            a.h, a.t_min, a.t_max, b.h, b.t_min, b.t_max, kTableWordlength, kEntropyLo, kEntropyHi);
  return a.h >= kEntropyLo && a.h <= kEntropyHi && b.h >= kEntropyLo && b.h <= kEntropyHi;
}

// ---- 5 ----------------------------------------------------------------------

bool volumes(std::string& out) {
  const double pi2 = M_PI * M_PI;
  std::vector<std::vector<double>> val(3);  // per d: value at 32, 64, 128, 256
  for (int n : {64, 128, kVolumeMesh}) {
    const std::vector<BoundaryPoint> mesh = boundary_grid(n, kMeshWordlength);
    for (int d : {2, 3, 4}) {
      const IntersectionEstimate e = liouville_volume(d_fuchsian(d), mesh);
      auto& v = val[static_cast<std::size_t>(d - 2)];
      if (v.empty()) v.push_back(e.coarse);
      v.push_back(e.value);
    }
  }
  bool ok = true;
  for (int d : {2, 3, 4}) {
    const auto& v = val[static_cast<std::size_t>(d - 2)];
    const double d1 = std::abs(v[1] - v[0]), d2 = std::abs(v[2] - v[1]), d3 = std::abs(v[3] - v[2]);
    out += fmt("d=%d vol %.4f = %.4f pi^2, deltas %.3g %.3g %.3g; ", d, v[3], v[3] / pi2, d1, d2, d3);
    ok = ok && d3 < d2 && d2 < d1;
  }
  const double v2 = val[0][3], v3 = val[1][3], v4 = val[2][3];
  const double r3 = v3 / v2, r4 = v4 / v2;
  out += fmt("ratios %.4f (4) %.4f (9) at n=%d; tol %.0f%% absolute, %.0f%% ratio", r3, r4, kVolumeMesh,
             100 * kVolumeTol, 100 * kRatioTol);
  ok = ok && std::abs(v2 / (2 * pi2) - 1) <= kVolumeTol && std::abs(v3 / (8 * pi2) - 1) <= kVolumeTol;
  ok = ok && std::abs(r3 / 4 - 1) <= kRatioTol && std::abs(r4 / 9 - 1) <= kRatioTol;
  return ok;
}

// ---- 6 ----------------------------------------------------------------------

bool bowen_margulis(std::string& out) {
  const LengthTable& t = fuchsian3_table();
  const double T = t.horizon_of(LengthFunctional::simple_root(1));
  const std::vector<BoundaryPoint> mesh = boundary_grid(kBmMesh, kMeshWordlength);
  const DiscreteCurrent om = liouville_grid(d_fuchsian(3), mesh);
  const ProportionalityReport lo = proportionality(bm_grid(t, T - 2, mesh), om);
  const ProportionalityReport hi = proportionality(bm_grid(t, T, mesh), om);
  out = fmt("n=%d, %zu classes: CV %.4f at T=%.2f, %.4f at T=%.2f (need <= %.2f and decreasing)", kBmMesh, t.size(),
            lo.cv, T - 2, hi.cv, T, kCvMax);
  return hi.cv <= kCvMax && hi.cv < lo.cv;
}

// ---- 7 ----------------------------------------------------------------------

bool pressure_form3(std::string& out) {
  const Representation R = d_fuchsian(3);
  const LengthTable& t = fuchsian3_table();
  const double T = t.horizon_of(LengthFunctional::simple_root(1));
  double worst = 1e300;
  for (std::uint64_t k = 1; k <= 20; ++k) {
    const LengthTable e = evaluate_on(random_deformation(R, 100 + k, 0.05), t);
    worst = std::min(worst, pressure_intersection(t, e, 1, T).value);
  }
  HessianOptions ho;
  ho.h = kHessianH;
  ho.eps = kHessianEps;
  const TangentChart chart = tangent_chart(R);
  const PressureForm P = pressure_hessian(R, 1, chart, t, T, ho);
  int positive = 0;
  for (int i = 0; i < P.eigenvalues.size(); ++i) positive += P.eigenvalues[i] > P.threshold;
  const int n = static_cast<int>(P.eigenvalues.size());
  out = fmt("min I over 20 eta %.6f (need >= %.3f); Hessian near-zero %d positive %d of %d (need 8 and 16), "
            "threshold %.3g, smallest transverse %.3g, largest %.3g",
            worst, kPressureFloor, P.near_zero, positive, n, P.threshold,
            P.eigenvalues[std::min(8, n - 1)], P.eigenvalues[n - 1]);
  return worst >= kPressureFloor && P.near_zero == 8 && positive == 16;
}

// ---- 8 ----------------------------------------------------------------------

bool psp_degeneracy(std::string& out) {
  const Representation R = d_fuchsian(4);
  const TangentChart chart = tangent_chart(R);
  HessianOptions ho;
  ho.h = kHessianH;
  ho.eps = kHessianEps;
  int nz[2] = {0, 0}, neg[2] = {0, 0};
  for (int root : {1, 2}) {
    TableOptions o;
    o.cutoff_kind = LengthFunctional::simple_root(root);
    o.cutoff = std::numeric_limits<double>::quiet_NaN();
    const LengthTable t = build_length_table(R, kHessian4Wordlength, o);
    const PressureForm P = pressure_hessian(R, root, chart, t, t.horizon_of(o.cutoff_kind), ho);
    nz[root - 1] = P.near_zero;
    for (int i = 0; i < P.eigenvalues.size(); ++i) neg[root - 1] += P.eigenvalues[i] < -P.threshold;
  }
  out = fmt("wordlength %d: alpha1 near-zero %d (need 15), alpha2 near-zero %d (need >= 25), "
            "eigenvalues below -threshold: %d and %d",
            kHessian4Wordlength, nz[0], nz[1], neg[0], neg[1]);
  return nz[0] == 15 && nz[1] >= 25;
}

// ---- 9 ----------------------------------------------------------------------

bool cotangent(std::string& out) {
  const Representation R = d_fuchsian(3);
  const TangentChart chart = tangent_chart(R);
  const OrbitTable cls = enumerate_classes(5);
  std::vector<Word> w;
  for (std::size_t i = 0; i < cls.size() && w.size() < 400; i += 7) w.push_back(cls.word(i));
  const RankReport a = cotangent_rank(R, chart, std::vector<Word>(w.begin(), w.begin() + 200));
  const RankReport b = cotangent_rank(R, chart, w);
  out = fmt("rank %d on 200 classes, %d on 400 (need 16 both)", a.rank, b.rank);
  return a.rank == 16 && b.rank == 16;
}

// ---- 10 ---------------------------------------------------------------------

bool asymptotics(std::string& out) {
  const auto s = cli::verify_asymptotics(d_fuchsian(3), 100, 3, 20, kTransversality, kTraceMin, kLimitTol);
  out = fmt("%zu pairs: min det %.3g (> %.0e), min normalized trace %.3g (> %.0e), max limit error %.3g (<= %.0e)",
            s.rows.size(), s.min_det, kTransversality, s.min_trace, kTraceMin, s.max_err, kLimitTol);
  return s.rows.size() == 100 && s.transversality_ok && s.traces_ok && s.limits_ok;
}

// ---- 11 ---------------------------------------------------------------------

bool determinism(std::string& out) {
  const Representation R = random_deformation(d_fuchsian(3), 3, 0.05);
  const std::vector<BoundaryPoint> mesh = boundary_grid(64, 6);
  bool ok = true;
  for (int threads : {1, 2}) {
    IntersectOptions o;
    o.threads = threads;
    const double a = liouville_volume(R, mesh, octagon(), o).value;
    const double b = liouville_volume(R, mesh, octagon(), o).value;
    o.mc_samples = 2000;
    o.seed = 5;
    const DiscreteCurrent om = liouville_grid(R, mesh);
    const double c = intersect(om, om, octagon(), o).value, e = intersect(om, om, octagon(), o).value;
    ok = ok && std::memcmp(&a, &b, sizeof a) == 0 && std::memcmp(&c, &e, sizeof c) == 0;
    out += fmt("threads %d: volume %.17g twice, Monte Carlo %.17g twice; ", threads, a, c);
  }
  const LengthTable t1 = build_length_table(R, 6), t2 = build_length_table(R, 6);
  ok = ok && t1.values == t2.values && t1.classes.letters == t2.classes.letters;
  out += fmt("length tables %s", t1.values == t2.values ? "identical" : "differ");
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  // optional list of criterion numbers to run
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  if (want(1)) run(1, "exact identities", exact_identities);
  if (want(2)) run(2, "chi determinants", [](std::string& s) { return chi_suite(s, false); });
  if (want(3)) run(3, "positivity", [](std::string& s) { return chi_suite(s, true); });
  if (want(4)) run(4, "entropy one", entropy_one);
  if (want(5)) run(5, "volume constants", volumes);
  if (want(6)) run(6, "Bowen-Margulis proportionality", bowen_margulis);
  if (want(7)) run(7, "pressure minimum and form", pressure_form3);
  if (want(8)) run(8, "PSp(4) degeneracy", psp_degeneracy);
  if (want(9)) run(9, "cotangent generation", cotangent);
  if (want(10)) run(10, "eigenvalue asymptotics", asymptotics);
  if (want(11)) run(11, "determinism", determinism);

  int failed = 0;
  for (const Line& l : lines) failed += !l.pass;
  std::printf("%zu criteria, %d failed\n", lines.size(), failed);
  return failed ? 1 : 0;
}
