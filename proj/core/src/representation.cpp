#include "hitchin/representation.hpp"

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "hitchin/errors.hpp"
#include "hitchin/hyperbolic.hpp"

namespace hitchin {

namespace {

Mat product(const std::array<Mat, 8>& L, const Word& w, int d) {
  Mat M = Mat::Identity(d, d);
  for (Letter x : w) M = M * L[x];
  return M;
}

std::array<Mat, 8> letter_table(const Gens& g, const Gens& ginv) {
  std::array<Mat, 8> L;
  for (int s = 0; s < 4; ++s) {
    L[2 * s] = g[s];
    L[2 * s + 1] = ginv[s];
  }
  return L;
}

Gens inverses_of(const Gens& g) {
  Gens r;
  for (int s = 0; s < 4; ++s) {
    Eigen::FullPivLU<Mat> lu(g[s]);
    if (!lu.isInvertible()) throw DomainError("generator is singular");
    r[s] = lu.inverse();
  }
  return r;
}

// The relator u v^{-1} is evaluated split in half as u - v: same zero set,
// far less cancellation than forming the full product.
struct SplitRelator {
  Word u, v;
};

const SplitRelator& split_relator() {
  static const SplitRelator sr = [] {
    const Word& rel = genus2().relator();
    const std::size_t h = rel.size() / 2;
    SplitRelator r;
    r.u.assign(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(h));
    r.v = inverse(Word(rel.begin() + static_cast<std::ptrdiff_t>(h), rel.end()));
    return r;
  }();
  return sr;
}

// u - v in quad precision, rounded once; scale receives |u|_F
Mat split_residual(const std::array<Mat, 8>& L, int d, double* scale = nullptr) {
  const SplitRelator& sr = split_relator();
  QMat U = QMat::Identity(d, d), V = QMat::Identity(d, d);
  for (Letter x : sr.u) U = U * L[x].cast<Quad>();
  for (Letter x : sr.v) V = V * L[x].cast<Quad>();
  if (scale) *scale = U.cast<double>().norm();
  return QMat(U - V).cast<double>();
}

// f(slot, left, right, sign): derivative of u - v along A_s -> A_s exp(tX)
// is the sum of sign * left * X * right over occurrences
template <typename F>
void for_each_occurrence(const std::array<Mat, 8>& L, int d, F&& f) {
  const SplitRelator& sr = split_relator();
  for (int half = 0; half < 2; ++half) {
    const Word& w = half ? sr.v : sr.u;
    const double outer = half ? -1.0 : 1.0;
    const std::size_t n = w.size();
    std::vector<Mat> pre(n + 1, Mat::Identity(d, d)), suf(n + 1, Mat::Identity(d, d));
    for (std::size_t p = 0; p < n; ++p) pre[p + 1] = pre[p] * L[w[p]];
    for (std::size_t p = n; p-- > 0;) suf[p] = L[w[p]] * suf[p + 1];
    for (std::size_t p = 0; p < n; ++p) {
      const Letter x = w[p];
      if (x & 1)
        f(x >> 1, pre[p], suf[p], -outer);  // exp(-tX) A^{-1}
      else
        f(x >> 1, pre[p + 1], suf[p + 1], outer);  // A exp(tX)
    }
  }
}

void normalize_det(Mat& A) {
  const int d = static_cast<int>(A.rows());
  const double det = A.determinant();
  if (det == 0 || !std::isfinite(det) || (det < 0 && d % 2 == 0))
    throw DomainError("generator has no SL(d) rescaling (det " + std::to_string(det) + ")");
  A /= std::copysign(std::pow(std::abs(det), 1.0 / d), det);
}

void sign_normalize(Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-12) {
      if (v[i] < 0) v = -v;
      return;
    }
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

Representation::Representation(Gens gens, std::string provenance, bool check)
    : Representation(gens, inverses_of(gens), std::move(provenance), check) {}

Representation::Representation(Gens gens, Gens inverses, std::string provenance, bool check)
    : d_(static_cast<int>(gens[0].rows())), gens_(std::move(gens)), provenance_(std::move(provenance)) {
  for (const Mat& A : gens_)
    if (A.rows() != d_ || A.cols() != d_) throw DomainError("generators must be square of equal size");
  if (d_ < 2 || d_ > 8) throw DomainError("d must lie in 2..8");
  letters_ = letter_table(gens_, inverses);
  if (check) {
    for (int s = 0; s < 4; ++s)
      if (sl_residual(gens_[s]) > 1e-8) throw DomainError("generator " + std::to_string(s) + " is not in SL(d)");
    const double r = relator_residual();
    if (!(r <= kRelatorTol)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3g", r);
      throw DomainError(std::string("relator residual ") + buf + " above tolerance");
    }
  }
}

Mat Representation::image(const Word& w) const { return product(letters_, w, d_); }

Mat Representation::image(const Letter* w, int n) const {
  Mat M = Mat::Identity(d_, d_);
  for (int i = 0; i < n; ++i) M = M * letters_[w[i]];
  return M;
}

double Representation::relator_residual() const {
  double scale = 1;
  const double r = split_residual(letters_, d_, &scale).norm();
  return r / scale;
}

double Representation::relator_residual_full() const {
  return (image(genus2().relator()) - Mat::Identity(d_, d_)).norm();
}

std::uint64_t Representation::hash() const {
  const std::int32_t d = d_;
  std::uint64_t h = fnv1a(&d, sizeof d);
  for (const Mat& A : gens_) h = fnv1a(A.data(), sizeof(double) * static_cast<std::size_t>(A.size()), h);
  return h;
}

double relator_residual(const Gens& g) {
  const int d = static_cast<int>(g[0].rows());
  double scale = 1;
  const double r = split_residual(letter_table(g, inverses_of(g)), d, &scale).norm();
  return r / scale;
}

Representation d_fuchsian(const std::array<Mat2, 4>& base, int d) {
  Gens g, gi;
  for (int s = 0; s < 4; ++s) {
    const Mat2& A = base[s];
    Mat2 Ai;
    Ai << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);  // det A = 1
    g[s] = sym_power_sl2(A, d);
    gi[s] = sym_power_sl2(Ai, d);
  }
  return Representation(g, gi, std::to_string(d) + "-fuchsian");
}

Representation d_fuchsian(int d) {
  // built in quad precision and rounded once, so the relator holds to round-off at d up to 4
  Gens g, gi;
  for (int s = 0; s < 4; ++s) {
    const QMat2& A = base_fuchsian_extended()[s];
    QMat2 Ai;
    Ai << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
    g[s] = sym_power_sl2(A, d).cast<double>();
    gi[s] = sym_power_sl2(Ai, d).cast<double>();
  }
  return Representation(g, gi, std::to_string(d) + "-fuchsian");
}

Representation contragredient(const Representation& R) {
  Gens g, gi;
  for (int s = 0; s < 4; ++s) {
    g[s] = R.letter(static_cast<Letter>(2 * s + 1)).transpose();
    gi[s] = R.gens()[s].transpose();
  }
  return Representation(g, gi, "contragredient(" + R.provenance() + ")");
}

Representation conjugate(const Representation& R, const Mat& G) {
  const Mat Gi = G.fullPivLu().inverse();
  Gens g, gi;
  for (int s = 0; s < 4; ++s) {
    g[s] = G * R.gens()[s] * Gi;
    gi[s] = G * R.letter(static_cast<Letter>(2 * s + 1)) * Gi;
  }
  return Representation(g, gi, "conjugate(" + R.provenance() + ")");
}

std::vector<Mat> sl_basis(int d) {
  std::vector<Mat> B;
  for (int k = 1; k < d; ++k) {
    Mat H = Mat::Zero(d, d);
    for (int j = 0; j < k; ++j) H(j, j) = 1.0;
    H(k, k) = -k;
    B.push_back(H / std::sqrt(static_cast<double>(k) * (k + 1)));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) {
        Mat E = Mat::Zero(d, d);
        E(i, j) = 1.0;
        B.push_back(E);
      }
  return B;
}

Mat relator_jacobian(const Gens& g, const std::vector<Mat>& basis) {
  const int d = static_cast<int>(g[0].rows());
  const int m = static_cast<int>(basis.size());
  Mat J = Mat::Zero(d * d, 4 * m);
  for_each_occurrence(letter_table(g, inverses_of(g)), d, [&](int s, const Mat& l, const Mat& r, double sign) {
    for (int k = 0; k < m; ++k) {
      const Mat D = sign * (l * basis[k] * r);
      J.col(s * m + k) += Eigen::Map<const Vec>(D.data(), d * d);
    }
  });
  return J;
}

Mat linearized_relator(const Representation& R, const Tangent& X) {
  const int d = R.d();
  std::array<Mat, 8> L;
  for (int x = 0; x < 8; ++x) L[x] = R.letter(static_cast<Letter>(x));
  Mat D = Mat::Zero(d, d);
  for_each_occurrence(L, d, [&](int s, const Mat& l, const Mat& r, double sign) { D += sign * (l * X[s] * r); });
  return D;
}

namespace {

using QGens = std::array<QMat, 4>;

QMat quad_inverse(const QMat& A) {
  const int d = static_cast<int>(A.rows());
  QMat X = Mat(A.cast<double>().fullPivLu().inverse()).cast<Quad>();
  const QMat I = QMat::Identity(d, d);
  for (int k = 0; k < 2; ++k) X = X + X * (I - A * X);  // Newton-Schulz
  return X;
}

struct QState {
  QGens g, gi;
  Gens rounded() const {
    Gens r;
    for (int s = 0; s < 4; ++s) r[s] = g[s].cast<double>();
    return r;
  }
  Gens rounded_inverses() const {
    Gens r;
    for (int s = 0; s < 4; ++s) r[s] = gi[s].cast<double>();
    return r;
  }
  void refresh() {
    for (int s = 0; s < 4; ++s) gi[s] = quad_inverse(g[s]);
  }
  // u - v in quad; scale receives |u|_F
  QMat residual(double* scale = nullptr) const {
    const SplitRelator& sr = split_relator();
    const int d = static_cast<int>(g[0].rows());
    auto letter = [&](Letter x) -> const QMat& { return (x & 1) ? gi[x >> 1] : g[x >> 1]; };
    QMat U = QMat::Identity(d, d), V = QMat::Identity(d, d);
    for (Letter x : sr.u) U = U * letter(x);
    for (Letter x : sr.v) V = V * letter(x);
    if (scale) *scale = U.cast<double>().norm();
    return U - V;
  }
};

// exp(X) with the small part kept at full relative accuracy: I + (X + X^2/2 + ...)
QMat quad_exp(const Mat& X) {
  const int d = static_cast<int>(X.rows());
  const double nx = X.norm();
  int sq = 0;
  while (nx / std::ldexp(1.0, sq) > 0.5) ++sq;
  const Mat Xs = X / std::ldexp(1.0, sq);
  Mat E = Mat::Zero(d, d), term = Mat::Identity(d, d);
  for (int k = 1; k < 40; ++k) {
    term = term * Xs / k;
    E += term;
    if (term.norm() <= 1e-18 * E.norm()) break;
  }
  QMat Q = E.cast<Quad>();
  const QMat I = QMat::Identity(d, d);
  for (int k = 0; k < sq; ++k) Q = Q * Q + 2 * Q;  // (I+Q)^2 - I
  return I + Q;
}

double quad_norm(const QMat& M) {
  Quad s = 0;
  for (Eigen::Index i = 0; i < M.size(); ++i) s += M.data()[i] * M.data()[i];
  return static_cast<double>(sqrt(s));
}

// Gauss-Newton with the iterate kept in quad precision; the Jacobian and the
// steps are double, which only slows the tail from quadratic to fast linear.
void project_quad(QState& st, const ProjectionOptions& opt) {
  const int d = static_cast<int>(st.g[0].rows());
  st.refresh();
  double scale = 1;
  double r = quad_norm(st.residual(&scale));
  if (!(r <= opt.max_input * scale))
    throw ContractViolation("project_to_relvariety: relative input residual " + std::to_string(r / scale) +
                            " exceeds " + std::to_string(opt.max_input));
  const std::vector<Mat> basis = sl_basis(d);
  const int m = static_cast<int>(basis.size());
  const double goal = 1e-20 * scale;
  for (int it = 0; r > goal; ++it) {
    if (it >= opt.max_iterations) {
      if (r <= opt.target * scale) break;
      throw NoConvergence("project_to_relvariety: residual " + std::to_string(r) + " after " +
                          std::to_string(it) + " iterations");
    }
    const Mat J = relator_jacobian(st.rounded(), basis);
    Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    if (sv[m - 1] < opt.rank_tol * sv[0])
      throw RankDeficient("relator Jacobian rank below d^2-1 (singular value ratio " +
                          std::to_string(sv[m - 1] / sv[0]) + ")");
    const Mat F = st.residual().cast<double>();
    const Vec rhs = -Eigen::Map<const Vec>(F.data(), d * d);
    const Vec coef = svd.matrixU().leftCols(m).transpose() * rhs;
    const Vec delta = svd.matrixV().leftCols(m) * coef.cwiseQuotient(sv.head(m));
    std::array<Mat, 4> X;
    for (int s = 0; s < 4; ++s) {
      X[s] = Mat::Zero(d, d);
      for (int k = 0; k < m; ++k) X[s] += delta[s * m + k] * basis[k];
    }
    // full Gauss-Newton step, halved while it fails to reduce the residual
    QState trial;
    double rn = 0;
    for (int half = 0;; ++half) {
      trial = st;
      const double a = std::ldexp(1.0, -half);
      for (int s = 0; s < 4; ++s) trial.g[s] = st.g[s] * quad_exp(a * X[s]);
      trial.refresh();
      rn = quad_norm(trial.residual());
      if (rn < r || half == 8) break;
    }
    if (!(rn < r)) {
      if (r <= opt.target * scale) break;
      throw NoConvergence("project_to_relvariety: no descent from residual " + std::to_string(r));
    }
    st = std::move(trial);
    r = rn;
  }
}

Representation from_quad(const QState& st, std::string provenance) {
  return Representation(st.rounded(), st.rounded_inverses(), std::move(provenance));
}

}  // namespace

Representation project_to_relvariety(Gens g, std::string provenance, const ProjectionOptions& opt) {
  QState st;
  for (int s = 0; s < 4; ++s) {
    normalize_det(g[s]);
    st.g[s] = g[s].cast<Quad>();
  }
  project_quad(st, opt);
  return from_quad(st, std::move(provenance));
}

Tangent TangentChart::combine(const Vec& v) const {
  Tangent X;
  for (auto& x : X) x = Mat::Zero(d, d);
  for (int k = 0; k < dim(); ++k)
    if (v[k] != 0)
      for (int s = 0; s < 4; ++s) X[s] += v[k] * directions[k][s];
  return X;
}

double pairing(const Tangent& X, const Tangent& Y) {
  double r = 0;
  for (int s = 0; s < 4; ++s) r += (X[s].array() * Y[s].array()).sum();
  return r;
}

TangentChart tangent_chart(const Representation& R) {
  const int d = R.d();
  const std::vector<Mat> basis = sl_basis(d);
  const int m = static_cast<int>(basis.size());
  const Mat J = relator_jacobian(R.gens(), basis);
  Eigen::JacobiSVD<Mat> svd(J, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  if (sv[m - 1] < 1e-10 * sv[0])
    throw RankDeficient("tangent_chart: relator Jacobian rank below d^2-1 at " + R.provenance());
  const Mat N = svd.matrixV().rightCols(3 * m);

  // conjugation orbit: X_i = A_i^{-1} Y A_i - Y
  Mat C(4 * m, m);
  for (int k = 0; k < m; ++k)
    for (int s = 0; s < 4; ++s) {
      const Mat X = R.letter(static_cast<Letter>(2 * s + 1)) * basis[k] * R.gens()[s] - basis[k];
      for (int j = 0; j < m; ++j) C(s * m + j, k) = (X.array() * basis[j].array()).sum();
    }
  Eigen::HouseholderQR<Mat> qr(C);
  const Mat Rq = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const double rmax = Rq.diagonal().cwiseAbs().maxCoeff();
  if (Rq.diagonal().cwiseAbs().minCoeff() < 1e-8 * rmax)
    throw RankDeficient("tangent_chart: representation has a nontrivial centralizer");
  const Mat Rinv = Rq.triangularView<Eigen::Upper>().solve(Mat::Identity(m, m));
  const Mat Q = C * Rinv;

  // transverse complement of the orbit inside the kernel
  const Mat Np = N - Q * (Q.transpose() * N);
  Eigen::JacobiSVD<Mat> svd2(Np, Eigen::ComputeThinU);
  const Vec& s2 = svd2.singularValues();
  if (s2[2 * m - 1] < 0.5 || (3 * m > 2 * m && s2[2 * m] > 1e-6))
    throw RankDeficient("tangent_chart: conjugation orbit not inside the relator kernel");
  const Mat T = svd2.matrixU().leftCols(2 * m);

  TangentChart chart;
  chart.d = d;
  chart.base_hash = R.hash();
  chart.conjugation_dim = m;
  auto to_tangent = [&](Vec v) {
    Tangent X;
    for (int s = 0; s < 4; ++s) {
      X[s] = Mat::Zero(d, d);
      for (int j = 0; j < m; ++j) X[s] += v[s * m + j] * basis[j];
    }
    return X;
  };
  for (int k = 0; k < m; ++k) {
    chart.directions.push_back(to_tangent(Q.col(k)));
    Mat Y = Mat::Zero(d, d);
    for (int j = 0; j < m; ++j) Y += Rinv(j, k) * basis[j];
    chart.conjugators.push_back(Y);
  }
  for (int k = 0; k < 2 * m; ++k) {
    Vec v = T.col(k);
    sign_normalize(v);
    chart.directions.push_back(to_tangent(v));
  }
  return chart;
}

Representation deform(const Representation& R, const TangentChart& chart, const Vec& v, double t) {
  if (chart.base_hash != R.hash()) throw ContractViolation("deform: chart was built at a different representation");
  return chart_step(R, chart, v, t);
}

Representation chart_step(const Representation& R, const TangentChart& chart, const Vec& v, double t) {
  if (chart.d != R.d()) throw ContractViolation("deform: chart dimension mismatch");
  if (v.size() != chart.dim()) throw ContractViolation("deform: direction has wrong dimension");
  if (std::abs(t) * v.norm() > 0.1 + 1e-12) throw DomainError("deform: step |t|*|v| must not exceed 0.1");
  if (t == 0 || v.isZero(0)) return R;
  const int d = R.d();
  const int m = chart.conjugation_dim;
  std::ostringstream prov;
  prov.precision(17);
  prov << "deformed(base=" << hex64(R.hash()) << ",t=" << t << ",v=[";
  for (int k = 0; k < v.size(); ++k) prov << (k ? "," : "") << v[k];
  prov << "])";

  QState st;
  for (int s = 0; s < 4; ++s) st.g[s] = R.gens()[s].cast<Quad>();
  Vec vt = v;
  vt.head(m).setZero();
  if (!vt.isZero(0)) {
    // fixed substep count keeps the map smooth in t; each exp step stays well
    // inside the projection's basin for |t v| <= 0.1
    const Tangent X = chart.combine(vt);
    std::array<QMat, 4> step;
    for (int s = 0; s < 4; ++s) step[s] = quad_exp(t / kDeformSubsteps * X[s]);
    for (int k = 0; k < kDeformSubsteps; ++k) {
      for (int s = 0; s < 4; ++s) st.g[s] = st.g[s] * step[s];
      project_quad(st, ProjectionOptions{});
    }
  }
  Mat Y = Mat::Zero(d, d);
  for (int k = 0; k < m; ++k) Y += v[k] * chart.conjugators[k];
  if (!Y.isZero(0)) {
    const QMat G = quad_exp(t * Y);
    const QMat Gi = quad_inverse(G);
    for (QMat& A : st.g) A = G * A * Gi;
  }
  st.refresh();
  return from_quad(st, prov.str());
}

void write_representation(std::ostream& os, const Representation& R) {
  static const char* names[4] = {"a1", "b1", "a2", "b2"};
  os << "hitchin-representation 1\n";
  os << "d " << R.d() << "\n";
  os << "genus " << R.genus() << "\n";
  os << "provenance " << R.provenance() << "\n";
  char buf[40];
  for (int s = 0; s < 4; ++s) {
    os << names[s] << "\n";
    for (int i = 0; i < R.d(); ++i) {
      for (int j = 0; j < R.d(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", R.gens()[s](i, j));
        os << (j ? " " : "") << buf;
      }
      os << "\n";
    }
  }
}

Representation read_representation(std::istream& is) {
  std::string tag, line;
  int version = 0, d = 0, genus = 0;
  if (!(is >> tag >> version) || tag != "hitchin-representation" || version != 1)
    throw DomainError("not a representation file");
  if (!(is >> tag >> d) || tag != "d") throw DomainError("representation file: missing d");
  if (!(is >> tag >> genus) || tag != "genus" || genus != 2) throw DomainError("representation file: genus must be 2");
  if (!(is >> tag) || tag != "provenance") throw DomainError("representation file: missing provenance");
  std::getline(is, line);
  const std::string prov = line.empty() ? line : line.substr(1);
  if (d < 2 || d > 8) throw DomainError("representation file: bad d");
  Gens g;
  for (int s = 0; s < 4; ++s) {
    if (!(is >> tag)) throw DomainError("representation file: truncated");
    g[s].resize(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (!(is >> tag)) throw DomainError("representation file: truncated");
        g[s](i, j) = std::strtod(tag.c_str(), nullptr);
      }
  }
  return Representation(g, prov);
}

void save_representation(const std::string& path, const Representation& R) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path);
  write_representation(f, R);
}

Representation load_representation(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot read " + path);
  return read_representation(f);
}

Vec random_direction(const TangentChart& chart, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vec v = Vec::Zero(chart.dim());
  // raw engine bits only: the distribution classes are not portable across libraries
  for (int k = chart.conjugation_dim; k < chart.dim(); ++k) v[k] = std::ldexp(static_cast<double>(rng() >> 11), -52) - 1.0;
  if (v.norm() == 0) throw DomainError("random_direction: chart has no transverse directions");
  return v / v.norm();
}

Representation random_deformation(const Representation& R, std::uint64_t seed, double step) {
  const TangentChart chart = tangent_chart(R);
  return deform(R, chart, random_direction(chart, seed), step);
}

}  // namespace hitchin
