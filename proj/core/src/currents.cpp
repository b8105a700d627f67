#include "hitchin/currents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <thread>

#include "hitchin/errors.hpp"

namespace hitchin {

namespace {

struct Neumaier {
  double s = 0, c = 0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

inline double wrap_pos(double x) { return x < 0 ? x + kTwoPi : x; }

// geodesic with its Klein chord and the parameter range of the chord inside F
struct Element {
  double from, to, w;
  double px, py, ux, uy;
  double s0, s1;
};

bool clip(const FundamentalDomain& F, Element& e) {
  const double h = F.klein_inradius();
  double lo = 0, hi = 1;
  for (int k = 0; k < 8; ++k) {
    const double nx = std::cos(k * kTwoPi / 8), ny = std::sin(k * kTwoPi / 8);
    const double a = e.px * nx + e.py * ny - h;
    const double b = e.ux * nx + e.uy * ny;
    if (std::abs(b) < 1e-300) {
      if (a > 0) return false;
      continue;
    }
    const double t = -a / b;
    if (b > 0)
      hi = std::min(hi, t);
    else
      lo = std::max(lo, t);
    if (lo >= hi) return false;
  }
  e.s0 = lo;
  e.s1 = hi;
  return true;
}

Element make_element(const Geodesic& g, double w) {
  Element e{};
  e.from = g.from;
  e.to = g.to;
  e.w = w;
  e.px = std::cos(g.from);
  e.py = std::sin(g.from);
  e.ux = std::cos(g.to) - e.px;
  e.uy = std::sin(g.to) - e.py;
  return e;
}

struct Side {
  std::vector<Element> el;
  double straddle_mass = 0;
  PruneStats stats;
};

Side grid_side(const DiscreteCurrent& c, const FundamentalDomain& F, double margin) {
  Side s;
  const int n = c.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!c.valid(i, j)) continue;
      const double m = c.mass(i, j);
      if (!std::isfinite(m) || m == 0) continue;
      ++s.stats.boxes;
      const Geodesic g = c.centre(i, j);
      Element e = make_element(g, m);
      if (F.chord_length_inside(g, margin) > 0 && clip(F, e)) {
        s.el.push_back(e);
        ++s.stats.kept;
        continue;
      }
      if (F.chord_length_inside(g, margin) > 0) {
        // centre chord near F but not through it: contributes nothing under the centre rule
        ++s.stats.kept;
        continue;
      }
      ++s.stats.pruned;
      s.stats.pruned_mass += m;
      bool straddles = false;
      for (int a = 0; a < 2 && !straddles; ++a)
        for (int b = 0; b < 2 && !straddles; ++b) straddles = F.chord_length_inside(c.corner(i, j, a, b)) > 0;
      if (straddles) {
        ++s.stats.straddling;
        s.straddle_mass += m;
      }
    }
  return s;
}

Side atomic_side(const DiscreteCurrent& c, const FundamentalDomain& F) {
  Side s;
  for (std::size_t k = 0; k < c.atoms.size(); ++k) {
    Element e = make_element(c.atoms[k], c.weights[k]);
    if (clip(F, e)) s.el.push_back(e);
  }
  return s;
}

Side make_side(const DiscreteCurrent& c, const FundamentalDomain& F, double margin) {
  return c.kind == DiscreteCurrent::Grid ? grid_side(c, F, margin) : atomic_side(c, F);
}

// nu-mass of inner elements crossing g inside F
inline bool crosses_in_F(const Element& g, const Element& h) {
  const double b = wrap_pos(g.to - g.from);
  const double c = wrap_pos(h.from - g.from), d = wrap_pos(h.to - g.from);
  if (c == 0 || d == 0 || c == b || d == b) return false;
  if ((c < b) == (d < b)) return false;
  const double den = g.ux * h.uy - g.uy * h.ux;
  const double s = ((h.px - g.px) * h.uy - (h.py - g.py) * h.ux) / den;
  return s >= g.s0 && s < g.s1;
}

struct PairResult {
  double value = 0;
  double max_inner = 0;
  std::uint64_t visits = 0;
};

PairResult pair_sum(const Side& A, const Side& B, const IntersectOptions& opt) {
  const std::size_t na = A.el.size(), nb = B.el.size();
  std::vector<double> inner(na, 0.0);
  const bool mc = opt.mc_samples > 0;
  std::vector<double> cdf;
  double total_b = 0;
  if (mc) {
    cdf.reserve(nb);
    Neumaier t;
    for (const auto& e : B.el) {
      t.add(std::abs(e.w));
      cdf.push_back(t.value());
    }
    total_b = t.value();
  }
  const std::uint64_t per_outer = mc ? opt.mc_samples : nb;
  if (per_outer > 0 && na > opt.cap / per_outer)
    throw ResourceCap("intersect: " + std::to_string(na) + " x " + std::to_string(per_outer) +
                      " box pairs exceed the cap of " + std::to_string(opt.cap) + "; use Monte Carlo or a coarser mesh");
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const Element& g = A.el[i];
      Neumaier s;
      if (!mc) {
        for (const Element& h : B.el)
          if (crosses_in_F(g, h)) s.add(h.w);
      } else {
        std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL + i);
        std::uint64_t hits = 0;
        double signed_hits = 0;
        for (std::uint64_t k = 0; k < opt.mc_samples; ++k) {
          const double u = std::ldexp(static_cast<double>(rng() >> 11), -53) * total_b;
          std::size_t j = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
          if (j >= nb) j = nb - 1;
          if (crosses_in_F(g, B.el[j])) {
            ++hits;
            signed_hits += B.el[j].w >= 0 ? 1.0 : -1.0;
          }
        }
        (void)hits;
        s.add(total_b * signed_hits / static_cast<double>(opt.mc_samples));
      }
      inner[i] = s.value();
    }
  };
  const int th = std::max(1, opt.threads);
  const std::size_t chunk = (na + th - 1) / th;
  std::vector<std::thread> pool;
  for (int t = 1; t < th; ++t) pool.emplace_back(work, std::min(na, t * chunk), std::min(na, (t + 1) * chunk));
  work(0, std::min(na, chunk));
  for (auto& t : pool) t.join();
  PairResult r;
  Neumaier v;
  for (std::size_t i = 0; i < na; ++i) {
    v.add(A.el[i].w * inner[i]);
    r.max_inner = std::max(r.max_inner, std::abs(inner[i]));
  }
  r.value = v.value();
  r.visits = na * per_outer;
  return r;
}

IntersectionEstimate intersect_once(const DiscreteCurrent& mu, const DiscreteCurrent& nu, const FundamentalDomain& F,
                                    const IntersectOptions& opt) {
  if (mu.kind == DiscreteCurrent::Grid && nu.kind == DiscreteCurrent::Grid) {
    if (mu.n() != nu.n()) throw ContractViolation("intersect: grids on different meshes");
    for (int k = 0; k < mu.n(); ++k)
      if (mu.mesh[static_cast<std::size_t>(k)].angle != nu.mesh[static_cast<std::size_t>(k)].angle)
        throw ContractViolation("intersect: grids on different meshes");
  }
  const Side A = make_side(mu, F, opt.prune_margin);
  const Side B = (&mu == &nu) ? A : make_side(nu, F, opt.prune_margin);
  const PairResult r = pair_sum(A, B, opt);
  IntersectionEstimate e;
  e.value = r.value;
  e.n = mu.kind == DiscreteCurrent::Grid ? mu.n() : nu.n();
  e.pair_visits = r.visits;
  e.monte_carlo = opt.mc_samples > 0;
  for (const Side* s : {&A, &B}) {
    if (s == &B && &mu == &nu) break;
    e.pruning.boxes += s->stats.boxes;
    e.pruning.kept += s->stats.kept;
    e.pruning.pruned += s->stats.pruned;
    e.pruning.straddling += s->stats.straddling;
    e.pruning.pruned_mass += s->stats.pruned_mass;
  }
  const double straddle = A.straddle_mass + ((&mu == &nu) ? A.straddle_mass : B.straddle_mass);
  e.pruning.product_bound = straddle * r.max_inner;
  return e;
}

}  // namespace

bool DiscreteCurrent::valid(int i, int j) const {
  const int N = n();
  const int d = ((j - i) % N + N) % N;
  return d != 0 && d != 1 && d != N - 1;
}

double DiscreteCurrent::arc_mid(int i) const {
  const int N = n();
  const double a = mesh[static_cast<std::size_t>(i)].angle;
  const double b = mesh[static_cast<std::size_t>((i + 1) % N)].angle;
  return wrap_angle(a + 0.5 * wrap_angle(b - a));
}

Geodesic DiscreteCurrent::corner(int i, int j, int a, int b) const {
  const int N = n();
  return {mesh[static_cast<std::size_t>((i + a) % N)].angle, mesh[static_cast<std::size_t>((j + b) % N)].angle};
}

DiscreteCurrent liouville_grid(const LimitMap& L, const std::vector<BoundaryPoint>& mesh) {
  if (mesh.size() < 4) throw DomainError("liouville_grid: mesh needs at least 4 points");
  for (std::size_t k = 1; k < mesh.size(); ++k)
    if (!(mesh[k].angle > mesh[k - 1].angle)) throw ContractViolation("liouville_grid: mesh must be sorted by angle");
  DiscreteCurrent c;
  c.kind = DiscreteCurrent::Grid;
  c.rep_hash = L.rep().hash();
  c.mesh = mesh;
  const int n = c.n();
  c.mass = Mat::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!c.valid(i, j)) continue;
      const auto& t = mesh[static_cast<std::size_t>(i)];
      const auto& x = mesh[static_cast<std::size_t>((i + 1) % n)];
      const auto& y = mesh[static_cast<std::size_t>(j)];
      const auto& z = mesh[static_cast<std::size_t>((j + 1) % n)];
      try {
        c.mass(i, j) = box_mass(L, t, x, y, z).mass;
      } catch (const NearDegenerate&) {
        c.flagged.emplace_back(i, j);
      }
    }
  return c;
}

DiscreteCurrent liouville_grid(const Representation& R, const std::vector<BoundaryPoint>& mesh) {
  return liouville_grid(LimitMap(R), mesh);
}

DiscreteCurrent atomic_current(const std::vector<Word>& classes, const std::vector<double>& weights,
                               const FundamentalDomain& F) {
  if (classes.size() != weights.size()) throw DomainError("atomic_current: one weight per class");
  DiscreteCurrent c;
  c.kind = DiscreteCurrent::Atomic;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    if (!(weights[k] > 0)) throw DomainError("atomic_current: weights must be positive");
    for (const Geodesic& g : lifts_through_domain(classes[k], F)) {
      c.atoms.push_back(g);
      c.weights.push_back(weights[k]);
    }
  }
  return c;
}

std::vector<std::pair<int, int>> deep_cells(const DiscreteCurrent& grid, const FundamentalDomain& F) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < grid.n(); ++i)
    for (int j = 0; j < grid.n(); ++j) {
      if (!grid.valid(i, j)) continue;
      bool all = true;
      for (int a = 0; a < 2 && all; ++a)
        for (int b = 0; b < 2 && all; ++b) all = F.chord_length_inside(grid.corner(i, j, a, b)) > 0;
      if (all) out.emplace_back(i, j);
    }
  return out;
}

DiscreteCurrent bm_grid(const LengthTable& table, double T, const std::vector<BoundaryPoint>& mesh,
                        const FundamentalDomain& F) {
  const double cover = std::min(table.horizon_of(LengthFunctional::simple_root(1)),
                                table.cutoff_kind.kind == LengthFunctional::SimpleRoot && table.cutoff_kind.index == 1
                                    ? table.cutoff
                                    : (std::isfinite(table.cutoff) ? -1.0 : table.cutoff));
  if (!(T <= cover * (1 + 1e-12))) throw ContractViolation("bm_grid: T beyond table coverage");
  DiscreteCurrent c;
  c.kind = DiscreteCurrent::Grid;
  c.rep_hash = table.rep_hash;
  c.mesh = mesh;
  const int n = c.n();
  std::vector<double> ang;
  for (const auto& p : mesh) ang.push_back(p.angle);
  auto arc_of = [&](double a) {
    auto it = std::upper_bound(ang.begin(), ang.end(), a);
    return it == ang.begin() ? n - 1 : static_cast<int>(it - ang.begin()) - 1;
  };
  Mat acc = Mat::Zero(n, n);
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double l = table.La(k, 1);
    if (l > T) continue;
    for (const Geodesic& g : lifts_through_domain(table.classes.word(k), F)) acc(arc_of(g.from), arc_of(g.to)) += 1.0 / l;
  }
  const auto deep = deep_cells(c, F);
  Neumaier tot;
  for (auto [i, j] : deep) tot.add(acc(i, j));
  if (!(tot.value() > 0)) throw DomainError("bm_grid: no samples in the deep cells");
  c.mass = Mat::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (c.valid(i, j)) c.mass(i, j) = acc(i, j) / tot.value();
  for (auto [i, j] : deep)
    if (acc(i, j) == 0) ++c.empty_bins;
  return c;
}

ProportionalityReport proportionality(const DiscreteCurrent& bm, const DiscreteCurrent& omega,
                                      const FundamentalDomain& F) {
  if (bm.n() != omega.n()) throw ContractViolation("proportionality: different meshes");
  const auto deep = deep_cells(omega, F);
  Neumaier tb, to;
  for (auto [i, j] : deep) {
    tb.add(bm.mass(i, j));
    to.add(omega.mass(i, j));
  }
  ProportionalityReport r;
  r.bins = static_cast<int>(deep.size());
  if (deep.empty() || !(to.value() > 0) || !(tb.value() > 0)) throw DomainError("proportionality: no deep cells");
  std::vector<double> ratio, wt;
  for (auto [i, j] : deep) {
    const double o = omega.mass(i, j) / to.value();
    ratio.push_back((bm.mass(i, j) / tb.value()) / o);
    wt.push_back(o);
  }
  Neumaier wv, m, m2;
  for (std::size_t k = 0; k < ratio.size(); ++k) {
    wv.add(wt[k] * (ratio[k] - 1) * (ratio[k] - 1));
    m.add(ratio[k]);
  }
  const double mean = m.value() / static_cast<double>(ratio.size());
  for (double x : ratio) m2.add((x - mean) * (x - mean));
  r.cv = std::sqrt(wv.value());
  r.cv_unweighted = std::sqrt(m2.value() / static_cast<double>(ratio.size())) / mean;
  r.min_ratio = *std::min_element(ratio.begin(), ratio.end());
  r.max_ratio = *std::max_element(ratio.begin(), ratio.end());
  return r;
}

DiscreteCurrent coarsen(const DiscreteCurrent& g) {
  if (g.kind != DiscreteCurrent::Grid || g.n() % 2 || g.n() < 8) throw DomainError("coarsen: need a grid with even n >= 8");
  DiscreteCurrent c;
  c.kind = DiscreteCurrent::Grid;
  c.rep_hash = g.rep_hash;
  for (int k = 0; k < g.n(); k += 2) c.mesh.push_back(g.mesh[static_cast<std::size_t>(k)]);
  const int n = c.n();
  c.mass = Mat::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!c.valid(i, j)) continue;
      double s = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) s += g.mass(2 * i + a, 2 * j + b);
      c.mass(i, j) = s;  // NaN if a fine cell was flagged
    }
  return c;
}

IntersectionEstimate intersect(const DiscreteCurrent& mu, const DiscreteCurrent& nu, const FundamentalDomain& F,
                               const IntersectOptions& opt) {
  IntersectionEstimate e = intersect_once(mu, nu, F, opt);
  const bool gm = mu.kind == DiscreteCurrent::Grid, gn = nu.kind == DiscreteCurrent::Grid;
  const int n = gm ? mu.n() : (gn ? nu.n() : 0);
  if (opt.refine && (gm || gn) && n % 2 == 0 && n >= 16) {
    IntersectOptions o = opt;
    o.refine = false;
    IntersectionEstimate c;
    if (&mu == &nu) {
      const DiscreteCurrent cm = coarsen(mu);
      c = intersect_once(cm, cm, F, o);
    } else {
      const DiscreteCurrent cm = gm ? coarsen(mu) : mu;
      const DiscreteCurrent cn = gn ? coarsen(nu) : nu;
      c = intersect_once(cm, cn, F, o);
    }
    e.coarse = c.value;
    e.delta = e.value - c.value;
  }
  return e;
}

IntersectionEstimate liouville_volume(const DiscreteCurrent& omega, const FundamentalDomain& F,
                                      const IntersectOptions& opt) {
  if (omega.kind != DiscreteCurrent::Grid) throw DomainError("liouville_volume: needs a grid current");
  return intersect(omega, omega, F, opt);
}

IntersectionEstimate liouville_volume(const Representation& R, const std::vector<BoundaryPoint>& mesh,
                                      const FundamentalDomain& F, const IntersectOptions& opt) {
  const DiscreteCurrent omega = liouville_grid(R, mesh);
  return liouville_volume(omega, F, opt);
}

RigidityReport rigidity_diagnostic(const LengthTable& rho, const LengthTable& eta, double vol_rho, double vol_eta,
                                   double slack) {
  if (rho.size() != eta.size() || rho.classes.letters != eta.classes.letters)
    throw ContractViolation("rigidity_diagnostic: tables are not on the same classes");
  if (rho.size() == 0) throw DomainError("rigidity_diagnostic: empty table");
  if (!(vol_rho > 0) || !(vol_eta > 0)) throw DomainError("rigidity_diagnostic: volumes must be positive");
  RigidityReport r;
  r.slack = slack;
  r.inf_ratio = std::numeric_limits<double>::infinity();
  r.sup_ratio = 0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double q = rho.LH(k) / eta.LH(k);
    r.inf_ratio = std::min(r.inf_ratio, q);
    r.sup_ratio = std::max(r.sup_ratio, q);
  }
  r.classes = rho.size();
  r.volume_ratio = vol_rho / vol_eta;
  r.lower_ok = r.inf_ratio * r.inf_ratio <= r.volume_ratio * slack;
  r.upper_ok = r.volume_ratio <= r.sup_ratio * r.sup_ratio * slack;
  return r;
}

void write_grid_csv(const std::string& path, const DiscreteCurrent& g) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw Error("cannot write " + path);
  std::fprintf(f.get(), "i,j,from,to,mass\n");
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (g.valid(i, j) && std::isfinite(g.mass(i, j)))
        std::fprintf(f.get(), "%d,%d,%.17g,%.17g,%.17g\n", i, j, g.arc_mid(i), g.arc_mid(j), g.mass(i, j));
}

}  // namespace hitchin
