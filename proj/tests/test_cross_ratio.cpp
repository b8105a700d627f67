#include <doctest.h>

#include <cmath>

#include <hitchin/cross_ratio.hpp>
#include <hitchin/errors.hpp>
#include <hitchin/hyperbolic.hpp>
#include <hitchin/lengths.hpp>

using namespace hitchin;

namespace {

// classical cross ratio of four points of the circle, written in angles
double b_classical(double x, double y, double z, double t) {
  return std::sin((y - x) / 2) * std::sin((t - z) / 2) / (std::sin((t - x) / 2) * std::sin((y - z) / 2));
}

const std::vector<BoundaryPoint>& grid() {
  static const std::vector<BoundaryPoint> g = boundary_grid(48, 5);
  return g;
}

}  // namespace

TEST_CASE("2-Fuchsian cross ratio is the classical one") {
  const LimitMap L(d_fuchsian(2));
  const auto& g = grid();
  const std::size_t n = g.size();
  double worst = 0;
  for (std::size_t a = 0; a < n; a += 3)
    for (std::size_t b = 1; b < n; b += 5)
      for (std::size_t c = 2; c < n; c += 7)
        for (std::size_t e = 4; e < n; e += 11) {
          if (a == b || a == c || a == e || b == c || b == e || c == e) continue;
          if (a == e || c == b) continue;
          const double want = b_classical(g[a].angle, g[b].angle, g[c].angle, g[e].angle);
          const double got = L.b(g[a], g[b], g[c], g[e]);
          worst = std::max(worst, std::abs(got - want) / (1 + std::abs(want)));
        }
  CHECK(worst < 1e-8);
}

TEST_CASE("d-Fuchsian cross ratio is a power of the classical one") {
  const LimitMap L3(d_fuchsian(3)), L4(d_fuchsian(4));
  const auto& g = grid();
  for (std::size_t k = 0; k + 9 < g.size(); k += 4) {
    const BoundaryPoint &x = g[k], &y = g[k + 3], &z = g[k + 6], &t = g[k + 9];
    const double b2 = b_classical(x.angle, y.angle, z.angle, t.angle);
    CHECK(L3.b(x, y, z, t) == doctest::Approx(b2 * b2).epsilon(1e-8));
    CHECK(L4.b(x, y, z, t) == doctest::Approx(b2 * b2 * b2).epsilon(1e-8));
  }
}

TEST_CASE("cross ratio identities for a deformed representation") {
  const Representation R = random_deformation(d_fuchsian(3), 4, 0.08);
  const LimitMap L(R);
  const auto& g = grid();
  const std::size_t n = g.size();
  for (std::size_t k = 0; k < n; k += 5) {
    const BoundaryPoint &x = g[k], &y = g[(k + 7) % n], &m = g[(k + 13) % n], &z = g[(k + 20) % n],
                        &t = g[(k + 31) % n];
    // normalizations
    CHECK(L.b(x, y, x, t) == doctest::Approx(1).epsilon(1e-10));
    CHECK(L.b(x, y, z, y) == doctest::Approx(1).epsilon(1e-10));
    // cocycle in the second slot
    CHECK(L.b(x, m, t, y) * L.b(x, z, t, m) == doctest::Approx(L.b(x, z, t, y)).epsilon(1e-8));
    // invariance under the group
    const Word w = genus2().parse("a1b2");
    const double b0 = L.b(x, y, z, t);
    const double b1 = L.b(translate(w, x), translate(w, y), translate(w, z), translate(w, t));
    CHECK(b1 == doctest::Approx(b0).epsilon(1e-7));
  }
}

TEST_CASE("period of the cross ratio along an axis") {
  for (int d : {2, 3}) {
    const Representation R = d == 2 ? d_fuchsian(2) : random_deformation(d_fuchsian(3), 8, 0.05);
    const LimitMap L(R);
    for (const char* s : {"a1", "b1A2", "a1b1a2"}) {
      const Word w = genus2().parse(s);
      const double got = axis_liouville_mass(L, w, grid()[2], grid()[30]);
      CHECK(got == doctest::Approx(lengths(R, w).LH).epsilon(1e-7));
    }
  }
}

TEST_CASE("box masses and the chi determinants") {
  const LimitMap L(d_fuchsian(2));
  const auto& g = grid();
  const CurrentBox c = box_mass(L, g[0], g[2], g[10], g[12]);
  CHECK(c.mass > 0);
  CHECK(c.mass == doctest::Approx(0.5 * std::log(b_classical(g[2].angle, g[12].angle, g[0].angle, g[10].angle))));
  CHECK_THROWS_AS(box_mass(L, g[0], g[10], g[2], g[12]), ContractViolation);
  CHECK(symmetry_defect(L, {c}) < 1e-10);

  const LimitMap L3(d_fuchsian(3));
  std::vector<BoundaryPoint> X = {g[0], g[8], g[16], g[24]}, Y = {g[4], g[12], g[20], g[28]};
  const ChiValue top = chi_p(L3, X, Y);
  CHECK(std::abs(top.value) < 1e-8 * top.minor_scale);
  X.pop_back();
  Y.pop_back();
  const ChiValue sub = chi_p(L3, X, Y);
  CHECK(std::abs(sub.value) > 1e-6 * sub.hadamard_scale);
  CHECK_THROWS_AS(chi_p(L3, {g[0], g[0]}, {g[3], g[5]}), DomainError);
}

TEST_CASE("near-degenerate points") {
  const Representation R = d_fuchsian(3);
  const auto& g = grid();
  CrossRatioOptions strict;
  strict.extended = false;
  strict.near_separation = 0.5;
  CHECK_THROWS_AS(LimitMap(R, strict).b(g[0], g[1], g[20], g[30]), NearDegenerate);
  CrossRatioOptions ext;
  ext.near_separation = 0.5;
  const double a = LimitMap(R, ext).b(g[0], g[1], g[20], g[30]);
  const double b = LimitMap(R).b(g[0], g[1], g[20], g[30]);
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
}
