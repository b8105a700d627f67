#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <hitchin/currents.hpp>
#include <hitchin/errors.hpp>
#include <hitchin/lengths.hpp>

using namespace hitchin;

namespace {

// Geometric intersection number by an orbit scan: translates g.axis(beta)
// linked with axis(alpha), counted modulo the cyclic group of alpha.
int orbit_intersection(const Word& alpha, const Word& beta, int radius) {
  const Geodesic A = axis(alpha);
  const Mat2 ga = fuchsian_image(alpha), gA = fuchsian_image(inverse(alpha));
  const double len = wrap_angle(A.to - A.from);
  auto u = [&](double e) { return wrap_angle(e - A.from); };
  const double q = wrap_angle(A.from + len / 2);
  const double lo = u(q), hi = u(act(ga, q));
  std::set<std::pair<long, long>> seen;
  const Geodesic B = axis(beta);
  // every reduced word of length <= radius
  std::vector<Word> layer{{}}, all{{}};
  for (int r = 0; r < radius; ++r) {
    std::vector<Word> next;
    for (const Word& w : layer)
      for (Letter x = 0; x < 8; ++x) {
        if (!w.empty() && w.back() == inv(x)) continue;
        Word v = w;
        v.push_back(x);
        next.push_back(v);
      }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  for (const Word& g : all) {
    const Geodesic C = act(fuchsian_image(g), B);
    // a shared endpoint means a common axis, never a crossing
    bool shared = false;
    for (double p : {A.from, A.to})
      for (double q : {C.from, C.to}) shared = shared || std::abs(wrap_angle(p - q + 1) - 1) < 1e-9;
    if (shared || !linked(A, C)) continue;
    // the endpoint on the arc from A.from to A.to, and the other one
    double e = C.from, f = C.to;
    if (!(u(e) > 0 && u(e) < len)) std::swap(e, f);
    for (int it = 0; it < 200 && u(e) < lo; ++it) e = act(ga, e), f = act(ga, f);
    for (int it = 0; it < 200 && u(e) >= hi; ++it) e = act(gA, e), f = act(gA, f);
    seen.insert({std::lround(e * 1e7), std::lround(f * 1e7)});
  }
  return static_cast<int>(seen.size());
}

double atomic_i(const char* a, const char* b) {
  const Word x = genus2().parse(a), y = genus2().parse(b);
  return intersect(atomic_current({x}, {1.0}), atomic_current({y}, {1.0})).value;
}

}  // namespace

TEST_CASE("atomic intersections agree with the orbit scan") {
  const char* words[] = {"a1", "b1", "a2", "a1b1", "a1B2", "a1b1A2", "b1a2b2"};
  for (const char* a : words)
    for (const char* b : words) {
      const int want = orbit_intersection(genus2().parse(a), genus2().parse(b), 6);
      CAPTURE(a);
      CAPTURE(b);
      CHECK(atomic_i(a, b) == doctest::Approx(want));
    }
  CHECK(atomic_i("a1", "b1") == doctest::Approx(1));
  CHECK(atomic_i("a1", "a2") == doctest::Approx(0));
}

TEST_CASE("discrete current bookkeeping") {
  const std::vector<BoundaryPoint> mesh = boundary_grid(16, 4);
  const DiscreteCurrent g = liouville_grid(d_fuchsian(2), mesh);
  CHECK(g.n() == 16);
  CHECK_FALSE(g.valid(3, 3));
  CHECK_FALSE(g.valid(3, 4));
  CHECK_FALSE(g.valid(0, 15));
  CHECK(g.valid(3, 5));
  double total = 0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      if (g.valid(i, j)) {
        CHECK(g.mass(i, j) > 0);
        CHECK(g.mass(i, j) == doctest::Approx(g.mass(j, i)).epsilon(1e-9));
        total += g.mass(i, j);
      }
  const DiscreteCurrent c = coarsen(g);
  CHECK(c.n() == 8);
  // coarsening drops the cells that become adjacent, never adds mass
  double ctotal = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (c.valid(i, j)) ctotal += c.mass(i, j);
  CHECK(ctotal <= total + 1e-9);
  CHECK(c.mass(0, 4) == doctest::Approx(g.mass(0, 8) + g.mass(0, 9) + g.mass(1, 8) + g.mass(1, 9)));
  CHECK_THROWS_AS(coarsen(coarsen(c)), DomainError);

  const ProportionalityReport p = proportionality(g, g);
  CHECK(p.cv < 1e-12);
  CHECK(p.min_ratio == doctest::Approx(1));

  const auto path = std::filesystem::temp_directory_path() / "hitchin_test_grid.csv";
  write_grid_csv(path.string(), g);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "i,j,from,to,mass");
  std::filesystem::remove(path);
}

TEST_CASE("Liouville current measures lengths") {
  const std::vector<BoundaryPoint> mesh = boundary_grid(64, 6);
  for (int d : {2, 3}) {
    const Representation R = d == 2 ? d_fuchsian(2) : random_deformation(d_fuchsian(3), 3, 0.05);
    const DiscreteCurrent om = liouville_grid(R, mesh);
    for (const char* s : {"a1", "a1b2"}) {
      const Word w = genus2().parse(s);
      const IntersectionEstimate e = intersect(atomic_current({w}, {1.0}), om);
      CHECK(e.value == doctest::Approx(lengths(R, w).LH).epsilon(0.02));
      const IntersectionEstimate f = intersect(om, atomic_current({w}, {1.0}));
      CHECK(f.value == doctest::Approx(e.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("Liouville volume of the hyperbolic surface") {
  const std::vector<BoundaryPoint> mesh = boundary_grid(64, 6);
  IntersectOptions o;
  const IntersectionEstimate v = liouville_volume(d_fuchsian(2), mesh, octagon(), o);
  // pi^2 |chi| for the genus 2 surface
  CHECK(v.value == doctest::Approx(2 * M_PI * M_PI).epsilon(0.01));
  CHECK(std::isfinite(v.delta));
  CHECK(v.pruning.straddling == 0);
  o.threads = 3;
  const IntersectionEstimate w = liouville_volume(d_fuchsian(2), mesh, octagon(), o);
  CHECK(w.value == v.value);
  o.cap = 1000;
  CHECK_THROWS_AS(liouville_volume(d_fuchsian(2), mesh, octagon(), o), ResourceCap);
}

TEST_CASE("Bowen-Margulis grid and rigidity diagnostic") {
  const Representation R = d_fuchsian(3);
  const LengthTable t = build_length_table(R, 6);
  const std::vector<BoundaryPoint> mesh = boundary_grid(8, 4);
  const double cover = t.horizon_of(LengthFunctional::simple_root(1));
  CHECK_THROWS_AS(bm_grid(t, cover + 1, mesh), ContractViolation);
  const DiscreteCurrent bm = bm_grid(t, cover, mesh);
  double tot = 0;
  for (auto [i, j] : deep_cells(bm)) tot += bm.mass(i, j);
  CHECK(tot == doctest::Approx(1));

  const RigidityReport r = rigidity_diagnostic(t, t, 10.0, 10.0);
  CHECK(r.inf_ratio == doctest::Approx(1));
  CHECK(r.sup_ratio == doctest::Approx(1));
  CHECK(r.lower_ok);
  CHECK(r.upper_ok);
  CHECK_THROWS_AS(rigidity_diagnostic(t, t, 0.0, 1.0), DomainError);
}
