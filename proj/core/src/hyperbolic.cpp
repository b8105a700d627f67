#include "hitchin/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "hitchin/errors.hpp"

namespace hitchin {

namespace {

using cd = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;

constexpr double kPi = 3.14159265358979323846264338327950288;

cd disk_apply(const Mat2& G, cd z) {
  // disk -> upper half plane -> G -> disk
  const cd i(0, 1);
  const cd w = i * (1.0 + z) / (1.0 - z);
  const cd gw = (G(0, 0) * w + G(0, 1)) / (G(1, 0) * w + G(1, 1));
  return (gw - i) / (gw + i);
}

double circ_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

}  // namespace

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

const std::array<QMat2, 4>& base_fuchsian_extended() {
  static const std::array<QMat2, 4> gens = [] {
    using std::cos, std::sin, std::exp, std::log, std::sqrt;
    const Quad pi = boost::math::constants::pi<Quad>();
    // rotation about i and translation along the imaginary axis
    auto rot = [&](const Quad& th) {
      QMat2 m;
      m << cos(th / 2), sin(th / 2), -sin(th / 2), cos(th / 2);
      return m;
    };
    auto trans = [&](const Quad& d) {
      QMat2 m;
      m << exp(d / 2), Quad(0), Quad(0), exp(-d / 2);
      return m;
    };
    const Quad ct = cos(pi / 8) / sin(pi / 8);
    const Quad rin = log(ct + sqrt(ct * ct - 1));
    // side j to side k, F to the tile across side k
    auto pairing = [&](int j, int k) {
      QMat2 m = rot(k * pi / 4) * trans(2 * rin) * rot(pi - j * pi / 4);
      if (m.trace() < 0) m = -m;
      return m;
    };
    // sides in counterclockwise order carry the relator letters a1 b1 A1 B1 a2 b2 A2 B2
    std::array<QMat2, 4> g;
    g[0] = pairing(2, 0);  // a1: side A1 -> side a1
    g[1] = pairing(1, 3);  // b1: side b1 -> side B1
    g[2] = pairing(6, 4);
    g[3] = pairing(5, 7);
    return g;
  }();
  return gens;
}

const std::array<Mat2, 4>& base_fuchsian() {
  static const std::array<Mat2, 4> gens = [] {
    std::array<Mat2, 4> g;
    for (int s = 0; s < 4; ++s) g[s] = base_fuchsian_extended()[s].cast<double>();
    return g;
  }();
  return gens;
}

Mat2 fuchsian_letter(Letter x) {
  const Mat2& g = base_fuchsian()[x >> 1];
  if (!(x & 1)) return g;
  Mat2 r;
  r << g(1, 1), -g(0, 1), -g(1, 0), g(0, 0);
  return r;
}

Mat2 fuchsian_image(const Word& w) {
  Mat2 m = Mat2::Identity();
  for (Letter x : w) m = m * fuchsian_letter(x);
  return m;
}

double angle_of(const Eigen::Vector2d& v) { return wrap_angle(-2.0 * std::atan2(v[1], v[0])); }

Eigen::Vector2d vector_of(double angle) { return {std::cos(-angle / 2), std::sin(-angle / 2)}; }

double act(const Mat2& g, double angle) { return angle_of(g * vector_of(angle)); }

Geodesic act(const Mat2& g, const Geodesic& c) { return {act(g, c.from), act(g, c.to)}; }

double translation_length(const Mat2& M) {
  const double t = std::abs(M.trace());
  if (t <= 2) throw DomainError("translation_length: not hyperbolic");
  return 2.0 * std::acosh(t / 2);
}

std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const Mat2& M) {
  const double a = M(0, 0), b = M(0, 1), c = M(1, 0), d = M(1, 1);
  const double t = a + d;
  const double disc = t * t - 4 * M.determinant();
  if (!(disc > 0) || std::abs(t) <= 2.0 * std::sqrt(std::abs(M.determinant())))
    throw DomainError("fixed_points: element is not hyperbolic");
  const double s = std::sqrt(disc);
  const double big = t > 0 ? (t + s) / 2 : (t - s) / 2;
  const double small = M.determinant() / big;
  auto eigvec = [&](double lam) -> Eigen::Vector2d {
    Eigen::Vector2d v1(b, lam - a), v2(lam - d, c);
    return v1.norm() >= v2.norm() ? v1 : v2;
  };
  BoundaryPoint att, rep;
  att.angle = angle_of(eigvec(big));
  rep.angle = angle_of(eigvec(small));
  rep.attracting = false;
  return {att, rep};
}

BoundaryPoint attracting_point(const Word& w) {
  BoundaryPoint p = fixed_points(fuchsian_image(w)).first;
  p.word = w;
  return p;
}

BoundaryPoint translate(const Word& g, const BoundaryPoint& p) {
  BoundaryPoint q;
  q.word = free_reduce(concat(concat(g, p.word), inverse(g)));
  q.angle = act(fuchsian_image(g), p.angle);
  q.attracting = p.attracting;
  return q;
}

Geodesic axis(const Word& w) {
  auto fp = fixed_points(fuchsian_image(w));
  return {fp.second.angle, fp.first.angle};
}

bool cyclically_ordered(double a, double b, double c) {
  const double x = wrap_angle(b - a), y = wrap_angle(c - a);
  return x > 0 && y > x;
}

bool cyclically_ordered(double a, double b, double c, double d) {
  const double x = wrap_angle(b - a), y = wrap_angle(c - a), z = wrap_angle(d - a);
  return x > 0 && y > x && z > y;
}

bool linked(double x, double y, double u, double v) {
  const double tol = 1e-13;
  const double pts[4] = {x, y, u, v};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (circ_dist(pts[i], pts[j]) < tol) throw DomainError("linked: coincident boundary points");
  const double yy = wrap_angle(y - x), uu = wrap_angle(u - x), vv = wrap_angle(v - x);
  return (uu < yy) != (vv < yy);
}

bool linked(const Geodesic& g, const Geodesic& h) { return linked(g.from, g.to, h.from, h.to); }

KleinPoint klein_point(double angle) { return {std::cos(angle), std::sin(angle)}; }

KleinPoint intersection_point(const Geodesic& g, const Geodesic& h) {
  const KleinPoint p = klein_point(g.from), q = klein_point(g.to);
  const KleinPoint r = klein_point(h.from), s = klein_point(h.to);
  const double dx1 = q.x - p.x, dy1 = q.y - p.y, dx2 = s.x - r.x, dy2 = s.y - r.y;
  const double den = dx1 * dy2 - dy1 * dx2;
  if (std::abs(den) < 1e-300) throw ContractViolation("intersection_point: parallel chords");
  const double t = ((r.x - p.x) * dy2 - (r.y - p.y) * dx2) / den;
  return {p.x + t * dx1, p.y + t * dy1};
}

FundamentalDomain::FundamentalDomain(double tol) : tol_(tol) {
  const double coshR = 1.0 / std::pow(std::tan(kPi / 8), 2);
  const double kr = std::tanh(std::acosh(coshR));
  h_ = kr * std::cos(kPi / 8);
  for (int k = 0; k < 8; ++k) {
    const double a = (2 * k + 1) * kPi / 8;
    kv_.push_back({kr * std::cos(a), kr * std::sin(a)});
  }
  for (int x = 0; x < 8; ++x) {
    const cd z = disk_apply(fuchsian_letter(static_cast<Letter>(x)), cd(0, 0));
    const int k = static_cast<int>(std::lround(wrap_angle(std::arg(z)) / (kPi / 4))) % 8;
    side_letter_[k] = static_cast<Letter>(x);
  }
  // tiles sharing at least a vertex with F
  const auto dv = disk_vertices();
  std::vector<cd> centres;
  std::vector<Word> frontier{{}};
  for (int len = 1; len <= 4; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (int xi = 0; xi < 8; ++xi) {
        const Letter x = static_cast<Letter>(xi);
        if (!w.empty() && x == inv(w.back())) continue;
        Word v = w;
        v.push_back(x);
        next.push_back(v);
        const Mat2 G = fuchsian_image(v);
        const cd c = disk_apply(G, cd(0, 0));
        if (std::abs(c) < 1e-9) continue;
        bool dup = false;
        for (const cd& o : centres) dup = dup || std::abs(o - c) < 1e-9;
        if (dup) continue;
        bool touches = false;
        for (const cd& p : dv) {
          const cd q = disk_apply(G, p);
          for (const cd& r : dv) touches = touches || std::abs(q - r) < 1e-7;
        }
        if (touches) {
          centres.push_back(c);
          neighbours_.push_back(v);
        }
      }
    frontier.swap(next);
  }
}

std::vector<std::complex<double>> FundamentalDomain::disk_vertices() const {
  std::vector<cd> r;
  for (const auto& p : kv_) {
    const double k = std::hypot(p.x, p.y);
    const double poin = k / (1.0 + std::sqrt(1.0 - k * k));
    r.push_back(std::polar(poin, std::atan2(p.y, p.x)));
  }
  return r;
}

bool FundamentalDomain::contains(const KleinPoint& p) const {
  int boundary_mask = 0;
  for (int k = 0; k < 8; ++k) {
    const double s = p.x * std::cos(k * kPi / 4) + p.y * std::sin(k * kPi / 4) - h_;
    if (s > tol_) return false;
    if (s >= -tol_) boundary_mask |= 1 << k;
  }
  if (boundary_mask == 0) return true;
  switch (boundary_mask) {
    case 1 << 0:
    case 1 << 1:
    case 1 << 4:
    case 1 << 5:
    case (1 << 0) | (1 << 1):
      return true;
    default:
      return false;
  }
}

bool FundamentalDomain::contains_interior(const KleinPoint& p, double margin) const {
  for (int k = 0; k < 8; ++k)
    if (p.x * std::cos(k * kPi / 4) + p.y * std::sin(k * kPi / 4) - h_ >= -margin) return false;
  return true;
}

int FundamentalDomain::violated_side(const KleinPoint& p) const {
  int best = -1;
  double worst = tol_;
  for (int k = 0; k < 8; ++k) {
    const double s = p.x * std::cos(k * kPi / 4) + p.y * std::sin(k * kPi / 4) - h_;
    if (s > worst) {
      worst = s;
      best = k;
    }
  }
  return best;
}

double FundamentalDomain::chord_length_inside(const Geodesic& g, double margin) const {
  const KleinPoint p = klein_point(g.from), q = klein_point(g.to);
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 8; ++k) {
    const double nx = std::cos(k * kPi / 4), ny = std::sin(k * kPi / 4);
    const double a = p.x * nx + p.y * ny - (h_ + margin);
    const double b = (q.x - p.x) * nx + (q.y - p.y) * ny;
    // a + t b <= 0
    if (std::abs(b) < 1e-300) {
      if (a > 0) return 0.0;
      continue;
    }
    const double t = -a / b;
    if (b > 0)
      hi = std::min(hi, t);
    else
      lo = std::max(lo, t);
    if (lo >= hi) return 0.0;
  }
  return (hi - lo) * std::hypot(q.x - p.x, q.y - p.y);
}

const FundamentalDomain& octagon() {
  static const FundamentalDomain F;
  return F;
}

bool intersection_in_domain(const Geodesic& g, const Geodesic& h, const FundamentalDomain& F) {
  if (!linked(g, h)) throw ContractViolation("intersection_in_domain: geodesics are not linked");
  return F.contains(intersection_point(g, h));
}

std::vector<BoundaryPoint> boundary_grid(int n, int sample_wordlength) {
  if (n < 8) throw DomainError("boundary_grid: n must be at least 8");
  const Presentation& P = genus2();
  const double width = kTwoPi / n;
  struct Cand {
    int len = 0;
    double off = 0;
    double angle = 0;
    Word word;
    bool better(const Cand& o) const {
      if (len != o.len) return len < o.len;
      if (off != o.off) return off < o.off;
      return word < o.word;
    }
  };
  // a few candidates per arc so that empty arcs can borrow from neighbours
  constexpr std::size_t kKeep = 3;
  std::vector<std::vector<Cand>> bins(static_cast<std::size_t>(n));
  Word w;
  std::vector<Mat2> prefix{Mat2::Identity()};
  std::vector<int> runs[2] = {{0}, {0}};
  auto consider = [&]() {
    const double a = fixed_points(prefix.back()).first.angle;
    int k = std::clamp(static_cast<int>(std::floor(a / width)), 0, n - 1);
    auto& bin = bins[static_cast<std::size_t>(k)];
    Cand c{static_cast<int>(w.size()), std::abs(a - (k + 0.5) * width), a, w};
    // same point from a power or another spelling: keep the better one only.
    // A point on an arc boundary can land in either neighbour bin.
    for (int k2 : {k, (k + 1) % n, (k + n - 1) % n}) {
      auto& b2 = bins[static_cast<std::size_t>(k2)];
      for (auto it = b2.begin(); it != b2.end(); ++it)
        if (circ_dist(it->angle, a) < 1e-12) {
          if (!c.better(*it)) return;
          b2.erase(it);
          break;
        }
    }
    auto it = std::find_if(bin.begin(), bin.end(), [&](const Cand& o) { return c.better(o); });
    bin.insert(it, std::move(c));
    if (bin.size() > kKeep) bin.pop_back();
  };
  auto dfs = [&](auto&& self) -> void {
    if (!w.empty()) consider();
    if (static_cast<int>(w.size()) == sample_wordlength) return;
    for (int xi = 0; xi < P.alphabet(); ++xi) {
      const Letter x = static_cast<Letter>(xi);
      if (!w.empty() && x == inv(w.back())) continue;
      int r[2];
      bool ok = true;
      for (int c = 0; c < 2; ++c) {
        r[c] = (!w.empty() && x == P.next(c, w.back())) ? runs[c].back() + 1 : 1;
        ok = ok && r[c] <= P.half();
      }
      if (!ok) continue;
      w.push_back(x);
      prefix.push_back(prefix.back() * fuchsian_letter(x));
      runs[0].push_back(r[0]);
      runs[1].push_back(r[1]);
      self(self);
      w.pop_back();
      prefix.pop_back();
      runs[0].pop_back();
      runs[1].pop_back();
    }
  };
  dfs(dfs);
  const std::string more = " using words of length <= " + std::to_string(sample_wordlength) +
                           "; increase sample_wordlength to at least " + std::to_string(sample_wordlength + 1);
  std::vector<BoundaryPoint> out;
  std::vector<std::size_t> used(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < n; ++k)
    if (!bins[static_cast<std::size_t>(k)].empty()) used[static_cast<std::size_t>(k)] = 1;
  for (int k = 0; k < n; ++k) {
    const auto& bin = bins[static_cast<std::size_t>(k)];
    if (!bin.empty()) {
      out.push_back({bin[0].angle, bin[0].word, true});
      continue;
    }
    // nearest arc with a spare candidate
    const double centre = (k + 0.5) * width;
    const Cand* pick = nullptr;
    std::size_t from = 0;
    for (int r = 1; r <= n / 2 && !pick; ++r)
      for (int k2 : {(k + n - r) % n, (k + r) % n}) {
        const auto& b2 = bins[static_cast<std::size_t>(k2)];
        const std::size_t u = used[static_cast<std::size_t>(k2)];
        if (u >= b2.size()) continue;
        for (std::size_t j = u; j < b2.size(); ++j)
          if (!pick || circ_dist(b2[j].angle, centre) < circ_dist(pick->angle, centre)) {
            pick = &b2[j];
            from = static_cast<std::size_t>(k2);
          }
      }
    if (!pick)
      throw DomainError("boundary_grid: fewer than " + std::to_string(n) + " distinct fixed points" + more);
    ++used[from];
    out.push_back({pick->angle, pick->word, true});
  }
  std::sort(out.begin(), out.end(), [](const BoundaryPoint& a, const BoundaryPoint& b) { return a.angle < b.angle; });
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double gap = wrap_angle(out[(i + 1) % out.size()].angle - out[i].angle);
    if (gap > 4 * width || gap <= 0) throw DomainError("boundary_grid: gap bound violated" + more);
  }
  return out;
}

std::vector<Geodesic> lifts_through_domain(const Word& w, const FundamentalDomain& F) {
  Geodesic g = axis(w);
  for (int it = 0;; ++it) {
    if (it > 10000) throw NoConvergence("lifts_through_domain: could not move axis into F");
    const KleinPoint a = klein_point(g.from), b = klein_point(g.to);
    const KleinPoint foot{(a.x + b.x) / 2, (a.y + b.y) / 2};
    const int k = F.violated_side(foot);
    if (k < 0) break;
    g = act(fuchsian_letter(inv(F.side_letter(k))), g);
  }
  std::vector<Mat2> pull;
  for (const Word& y : F.neighbours()) pull.push_back(fuchsian_image(inverse(y)));
  std::vector<Geodesic> lifts{g};
  auto same = [](const Geodesic& x, const Geodesic& y) {
    return circ_dist(x.from, y.from) < 1e-7 && circ_dist(x.to, y.to) < 1e-7;
  };
  for (std::size_t i = 0; i < lifts.size(); ++i) {
    for (const Mat2& m : pull) {
      const Geodesic h = act(m, lifts[i]);
      if (F.chord_length_inside(h) <= 1e-9) continue;
      bool seen = false;
      for (const Geodesic& o : lifts) seen = seen || same(o, h);
      if (!seen) lifts.push_back(h);
    }
    if (lifts.size() > 100000) throw ResourceCap("lifts_through_domain: too many lifts");
  }
  std::sort(lifts.begin(), lifts.end(), [](const Geodesic& x, const Geodesic& y) {
    return x.from != y.from ? x.from < y.from : x.to < y.to;
  });
  return lifts;
}

}  // namespace hitchin
