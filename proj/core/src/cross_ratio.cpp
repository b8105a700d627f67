#include "hitchin/cross_ratio.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>

#include "hitchin/errors.hpp"

namespace hitchin {

namespace {

void normalize_column(Eigen::Ref<Vec> v) {
  v.normalize();
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0) v = -v;
}

double circ_sep(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

QMat to_quad(const Mat& m) { return m.cast<Quad>(); }

QMat quad_image(const Representation& R, const Word& w, bool inverse_word) {
  const int d = R.d();
  QMat P = QMat::Identity(d, d);
  if (!inverse_word) {
    for (Letter x : w) P = P * to_quad(R.letter(x));
  } else {
    for (auto it = w.rbegin(); it != w.rend(); ++it) P = P * to_quad(R.letter(inv(*it)));
  }
  return P;
}

QVec quad_dominant(const QMat& M, const Vec& start) {
  QVec v = start.cast<Quad>();
  v /= v.norm();
  for (int it = 0; it < 400; ++it) {
    QVec w = M * v;
    w /= w.norm();
    if (w.dot(v) < 0) w = -w;
    const Quad change = (w - v).norm();
    v = w;
    if (change < Quad(1e-32)) break;
  }
  return v;
}

}  // namespace

Flag flag_at(const Representation& R, const BoundaryPoint& p) {
  const Word& w = p.word;
  if (w.empty()) throw DomainError("flag_at: boundary point carries no group word");
  // w = u c u^-1 with c cyclically reduced; flag(w) = R(u) flag(c). Decomposing
  // the conjugated product directly loses the middle of the spectrum.
  const std::size_t n = w.size();
  std::size_t k = 0;
  while (2 * k + 2 <= n && w[k] == inv(w[n - 1 - k])) ++k;
  const Word u(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  const Word c(w.begin() + static_cast<std::ptrdiff_t>(k), w.end() - static_cast<std::ptrdiff_t>(k));
  const EigenData E = eigen_real_sorted(R.image(c), R.image(inverse(c)));
  const int d = E.dim();
  Mat V(d, d), D(d, d);
  for (int i = 0; i < d; ++i) {
    const int j = p.attracting ? i : d - 1 - i;
    V.col(i) = E.vectors.col(j);
    D.row(i) = E.dual.row(j);
  }
  Flag f;
  f.basis = R.image(u) * V;
  f.dual = D * R.image(inverse(u));
  for (int i = 0; i < d; ++i) {
    Vec col = f.basis.col(i);
    normalize_column(col);
    const double s = f.basis.col(i).dot(col);
    f.basis.col(i) = col;
    f.dual.row(i) *= s;
  }
  return f;
}

QuadLimit quad_limit_at(const Representation& R, const BoundaryPoint& p) {
  const Flag f = flag_at(R, p);
  const QMat M = quad_image(R, p.word, !p.attracting);     // attracting line is dominant
  const QMat Mi = quad_image(R, p.word, p.attracting);     // its inverse
  QuadLimit q;
  q.xi = quad_dominant(M, f.xi());
  // xi* spans the dominant eigenline of the inverse transpose
  q.xi_star = quad_dominant(Mi.transpose(), f.xi_star().transpose());
  return q;
}

double cross_ratio_B(const Vec& u, const Eigen::RowVectorXd& phi, const Vec& v, const Eigen::RowVectorXd& psi) {
  const double nu = u.norm(), nv = v.norm(), nphi = phi.norm(), npsi = psi.norm();
  const double pu = phi.dot(u) / (nphi * nu), pv = phi.dot(v) / (nphi * nv);
  const double su = psi.dot(u) / (npsi * nu), sv = psi.dot(v) / (npsi * nv);
  if (!(std::abs(su) >= kPairingFloor) || !(std::abs(pv) >= kPairingFloor))
    throw NearDegenerate("cross ratio: line on the kernel of a functional");
  return pu * sv / (su * pv);
}

double cross_ratio_B(const QVec& u, const QVec& phi, const QVec& v, const QVec& psi) {
  const Quad nu = u.norm(), nv = v.norm(), nphi = phi.norm(), npsi = psi.norm();
  const Quad pu = phi.dot(u) / (nphi * nu), pv = phi.dot(v) / (nphi * nv);
  const Quad su = psi.dot(u) / (npsi * nu), sv = psi.dot(v) / (npsi * nv);
  if (abs(su) < Quad(1e-30) || abs(pv) < Quad(1e-30))
    throw NearDegenerate("cross ratio: line on the kernel of a functional");
  return static_cast<double>(pu * sv / (su * pv));
}

LimitMap::LimitMap(const Representation& R, CrossRatioOptions opt) : R_(R), opt_(opt) {}

const Flag& LimitMap::flag(const BoundaryPoint& p) const {
  Key k{p.word, p.attracting};
  {
    std::lock_guard<std::mutex> g(mu_);
    auto it = flags_.find(k);
    if (it != flags_.end()) return it->second;
  }
  Flag f = flag_at(R_, p);
  std::lock_guard<std::mutex> g(mu_);
  return flags_.emplace(std::move(k), std::move(f)).first->second;
}

const QuadLimit& LimitMap::quad(const BoundaryPoint& p) const {
  Key k{p.word, p.attracting};
  {
    std::lock_guard<std::mutex> g(mu_);
    auto it = quads_.find(k);
    if (it != quads_.end()) return it->second;
  }
  QuadLimit q = quad_limit_at(R_, p);
  std::lock_guard<std::mutex> g(mu_);
  return quads_.emplace(std::move(k), std::move(q)).first->second;
}

double LimitMap::b(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z,
                   const BoundaryPoint& t) const {
  const double sep = std::min({circ_sep(x.angle, y.angle), circ_sep(z.angle, t.angle), circ_sep(x.angle, t.angle),
                               circ_sep(z.angle, y.angle)});
  if (sep < opt_.near_separation) {
    if (!opt_.extended)
      throw NearDegenerate("cross ratio: points closer than " + std::to_string(opt_.near_separation));
    const QuadLimit &qx = quad(x), &qy = quad(y), &qz = quad(z), &qt = quad(t);
    return cross_ratio_B(qx.xi, qy.xi_star, qz.xi, qt.xi_star);
  }
  return cross_ratio_B(flag(x).xi(), flag(y).xi_star(), flag(z).xi(), flag(t).xi_star());
}

double b_rho(const Representation& R, const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z,
             const BoundaryPoint& t, const CrossRatioOptions& opt) {
  return LimitMap(R, opt).b(x, y, z, t);
}

ChiValue chi_p(const LimitMap& L, const std::vector<BoundaryPoint>& X, const std::vector<BoundaryPoint>& Y) {
  if (X.size() != Y.size() || X.size() < 2) throw DomainError("chi_p: need two (p+1)-tuples with p >= 1");
  const int n = static_cast<int>(X.size());
  std::vector<double> ang;
  for (const auto& p : X) ang.push_back(p.angle);
  for (const auto& p : Y) ang.push_back(p.angle);
  std::sort(ang.begin(), ang.end());
  for (std::size_t i = 1; i < ang.size(); ++i)
    if (ang[i] - ang[i - 1] <= 0) throw DomainError("chi_p: points must be pairwise distinct");
  Mat B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) B(i, j) = L.b(X[i], Y[j], X[0], Y[0]);
  ChiValue c;
  c.value = B.partialPivLu().determinant();
  c.hadamard_scale = 1;
  for (int i = 0; i < n; ++i) c.hadamard_scale *= B.row(i).norm();
  for (int k = 1; k < n; ++k) {
    Mat m(n - 1, n - 1);
    for (int i = 0, r = 0; i < n; ++i) {
      if (i == k) continue;
      for (int j = 0, s = 0; j < n; ++j) {
        if (j == k) continue;
        m(r, s++) = B(i, j);
      }
      ++r;
    }
    c.minor_scale = std::max(c.minor_scale, std::abs(m.partialPivLu().determinant()));
  }
  return c;
}

CurrentBox box_mass(const LimitMap& L, const BoundaryPoint& t, const BoundaryPoint& x, const BoundaryPoint& y,
                    const BoundaryPoint& z) {
  if (!cyclically_ordered(x.angle, y.angle, z.angle, t.angle))
    throw ContractViolation("box_mass: (x, y, z, t) is not cyclically ordered");
  const double b = L.b(x, z, t, y);
  if (!(b > 0)) throw NearDegenerate("box_mass: nonpositive cross ratio");
  return {t, x, y, z, 0.5 * std::log(b)};
}

double symmetry_defect(const LimitMap& L, const std::vector<CurrentBox>& boxes) {
  double worst = 0;
  for (const auto& c : boxes) {
    const double flipped = box_mass(L, c.y, c.z, c.t, c.x).mass;
    worst = std::max(worst, std::abs(c.mass - flipped));
  }
  return worst;
}

double axis_liouville_mass(const LimitMap& L, const Word& g, const BoundaryPoint& x, const BoundaryPoint& y) {
  BoundaryPoint gm{0, g, false}, gp{0, g, true};
  const Geodesic a = axis(g);
  gm.angle = a.from;
  gp.angle = a.to;
  const double bx = L.b(gm, translate(g, x), gp, x);
  const double by = L.b(gm, translate(g, y), gp, y);
  return 0.5 * (std::log(bx) + std::log(by));
}

}  // namespace hitchin
