#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hitchin/cross_ratio.hpp"
#include "hitchin/hyperbolic.hpp"
#include "hitchin/lengths.hpp"

namespace hitchin {

// Arc k of a mesh runs counterclockwise from point k to point k+1 (mod n).
// Box (i, j) holds the oriented geodesics leaving arc i and arriving in arc j.
struct DiscreteCurrent {
  enum Kind { Atomic, Grid } kind = Grid;
  std::uint64_t rep_hash = 0;

  // Atomic: the lifts through F of each class axis, with the class weight
  std::vector<Geodesic> atoms;
  std::vector<double> weights;

  // Grid
  std::vector<BoundaryPoint> mesh;  // sorted by angle
  Mat mass;                          // n x n; NaN on excluded or flagged cells
  std::vector<std::pair<int, int>> flagged;
  int empty_bins = 0;  // bm_grid: valid deep cells without samples

  int n() const { return static_cast<int>(mesh.size()); }
  bool valid(int i, int j) const;  // arcs disjoint and not adjacent
  double arc_mid(int i) const;
  Geodesic centre(int i, int j) const { return {arc_mid(i), arc_mid(j)}; }
  Geodesic corner(int i, int j, int a, int b) const;  // a, b in {0, 1}: endpoints of the arcs
};

DiscreteCurrent liouville_grid(const LimitMap& L, const std::vector<BoundaryPoint>& mesh);
DiscreteCurrent liouville_grid(const Representation& R, const std::vector<BoundaryPoint>& mesh);

// Every lift through F of the axis of each class, weight w_k each.
DiscreteCurrent atomic_current(const std::vector<Word>& classes, const std::vector<double>& weights,
                               const FundamentalDomain& F = octagon());

// Cells whose four corner geodesics all cross F.
std::vector<std::pair<int, int>> deep_cells(const DiscreteCurrent& grid, const FundamentalDomain& F = octagon());

// Weights 1/L_a1 at the lifts through F of every class with L_a1 <= T, binned
// on the mesh and normalized to unit mass over the deep cells.
DiscreteCurrent bm_grid(const LengthTable& table, double T, const std::vector<BoundaryPoint>& mesh,
                        const FundamentalDomain& F = octagon());

struct ProportionalityReport {
  int bins = 0;
  double cv = 0;             // mass weighted coefficient of variation of bm/omega
  double cv_unweighted = 0;
  double min_ratio = 0, max_ratio = 0;
};
// both currents normalized to unit mass over the deep cells of `omega`
ProportionalityReport proportionality(const DiscreteCurrent& bm, const DiscreteCurrent& omega,
                                      const FundamentalDomain& F = octagon());

struct IntersectOptions {
  double prune_margin = 0.05;  // Klein-model margin around F for keeping a box
  int threads = 1;
  bool refine = true;          // also evaluate on every other mesh point
  std::uint64_t mc_samples = 0;  // > 0: stratified Monte Carlo over inner boxes
  std::uint64_t seed = 1;
  std::uint64_t cap = 4'000'000'000ULL;  // box-pair visits
};

struct PruneStats {
  std::size_t boxes = 0, kept = 0, pruned = 0, straddling = 0;
  double pruned_mass = 0;
  double product_bound = 0;  // bound on the product mass lost with straddling pruned boxes
};

struct IntersectionEstimate {
  double value = 0;
  int n = 0;
  double coarse = std::numeric_limits<double>::quiet_NaN();  // value on the n/2 mesh
  double delta = std::numeric_limits<double>::quiet_NaN();   // value(n) - value(n/2)
  PruneStats pruning;
  std::uint64_t pair_visits = 0;
  bool monte_carlo = false;
};

// sum of mu(box) nu(box') over box pairs whose representative geodesics are
// linked with the intersection point in F
IntersectionEstimate intersect(const DiscreteCurrent& mu, const DiscreteCurrent& nu,
                               const FundamentalDomain& F = octagon(), const IntersectOptions& opt = {});

IntersectionEstimate liouville_volume(const DiscreteCurrent& omega, const FundamentalDomain& F = octagon(),
                                      const IntersectOptions& opt = {});
IntersectionEstimate liouville_volume(const Representation& R, const std::vector<BoundaryPoint>& mesh,
                                      const FundamentalDomain& F = octagon(), const IntersectOptions& opt = {});

// grid with every other mesh point, masses summed
DiscreteCurrent coarsen(const DiscreteCurrent& grid);

struct RigidityReport {
  double inf_ratio = 0, sup_ratio = 0;  // of L_H(rho)/L_H(eta) over the table
  double volume_ratio = 0;
  double slack = 1.15;
  bool lower_ok = false, upper_ok = false;
  std::size_t classes = 0;
};

RigidityReport rigidity_diagnostic(const LengthTable& rho, const LengthTable& eta, double vol_rho, double vol_eta,
                                   double slack = 1.15);

void write_grid_csv(const std::string& path, const DiscreteCurrent& grid);

}  // namespace hitchin
