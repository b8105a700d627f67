#include "hitchin/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hitchin/errors.hpp"

namespace hitchin {

namespace {

struct TopSpectrum {
  std::vector<double> values;  // signed, decreasing modulus
  std::vector<Vec> vectors;
};

void normalize_sign(Vec& v) {
  const double tol = 1e-12 * v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > tol) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

// The `count` largest eigenvalues in modulus; only these are validated.
TopSpectrum top_spectrum(const Mat& M, int count) {
  const int d = static_cast<int>(M.rows());
  Eigen::EigenSolver<Mat> es(M, true);
  if (es.info() != Eigen::Success) throw NotLoxodromic("eigen solver failed");
  const auto& ev = es.eigenvalues();
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(ev[a]) > std::abs(ev[b]); });
  const double scale = std::abs(ev[order[0]]);
  TopSpectrum t;
  for (int r = 0; r < count; ++r) {
    const auto lam = ev[order[r]];
    if (std::abs(lam.imag()) > 1e-12 * scale)
      throw NotLoxodromic("complex eigenvalue " + std::to_string(lam.real()) + "+" + std::to_string(lam.imag()) + "i");
    if (r + 1 < d) {
      const double next = std::abs(ev[order[r + 1]]);
      if (std::abs(lam) <= next * (1.0 + kDistinctRatio))
        throw NotLoxodromic("eigenvalue moduli not distinct: " + std::to_string(std::abs(lam)));
    }
    Vec v = es.eigenvectors().col(order[r]).real();
    v.normalize();
    normalize_sign(v);
    t.values.push_back(lam.real());
    t.vectors.push_back(v);
  }
  return t;
}

EigenData assemble(std::vector<double> vals, std::vector<Vec> vecs) {
  const int d = static_cast<int>(vals.size());
  const bool pos = vals[0] > 0;
  for (double v : vals)
    if ((v > 0) != pos) throw NotLoxodromic("eigenvalues of mixed sign; no positive lift");
  EigenData E;
  E.values.resize(d);
  E.vectors.resize(d, d);
  for (int i = 0; i < d; ++i) {
    E.values[i] = std::abs(vals[i]);
    E.vectors.col(i) = vecs[i];
  }
  Eigen::FullPivLU<Mat> lu(E.vectors);
  if (!lu.isInvertible()) throw NotLoxodromic("eigenvectors not independent");
  E.dual = lu.inverse();
  return E;
}

}  // namespace

EigenData eigen_real_sorted(const Mat& M) {
  const int d = static_cast<int>(M.rows());
  TopSpectrum t = top_spectrum(M, d);
  EigenData E = assemble(t.values, t.vectors);
  const double sign = t.values[0] > 0 ? 1.0 : -1.0;
  const Mat rec = E.vectors * E.values.asDiagonal() * E.dual;
  if ((sign * M - rec).norm() > kReconstructTol * M.norm())
    throw NotLoxodromic("eigen reconstruction residual too large");
  return E;
}

EigenData eigen_real_sorted(const Mat& M, const Mat& Minv) {
  const int d = static_cast<int>(M.rows());
  const int top = (d + 1) / 2, bottom = d / 2;
  TopSpectrum a = top_spectrum(M, top);
  TopSpectrum b = top_spectrum(Minv, bottom);
  std::vector<double> vals = a.values;
  std::vector<Vec> vecs = a.vectors;
  for (int r = bottom - 1; r >= 0; --r) {
    vals.push_back(1.0 / b.values[r]);
    vecs.push_back(b.vectors[r]);
  }
  for (int i = 0; i + 1 < d; ++i)
    if (std::abs(vals[i]) <= std::abs(vals[i + 1]) * (1.0 + kDistinctRatio))
      throw NotLoxodromic("eigenvalue moduli not distinct");
  return assemble(vals, vecs);
}

std::pair<double, Vec> dominant_eigen(const Mat& M) {
  const int d = static_cast<int>(M.rows());
  const double mx = M.cwiseAbs().maxCoeff();
  if (!(mx > 0) || !std::isfinite(mx)) throw NotLoxodromic("zero or non-finite matrix");
  Mat B = M / mx;
  for (int it = 0; it < 8; ++it) {
    B = B * B;
    const double s = B.cwiseAbs().maxCoeff();
    if (!(s > 0) || !std::isfinite(s)) break;
    B /= s;
  }
  Eigen::Index col = 0;
  B.colwise().norm().maxCoeff(&col);
  Vec v = B.col(col);
  if (v.norm() > 0 && std::isfinite(v.norm())) {
    v.normalize();
    for (int it = 0; it < 2; ++it) {
      Vec w = M * v;
      v = w / w.norm();
    }
    const Vec w = M * v;
    const double lam = v.dot(w);
    if (std::abs(lam) > 0 && (w - lam * v).norm() <= 1e-11 * std::abs(lam)) {
      normalize_sign(v);
      return {lam, v};
    }
  }
  TopSpectrum t = top_spectrum(M, std::min(d, 1));
  return {t.values[0], t.vectors[0]};
}

double spectral_radius(const Mat& M) { return std::abs(dominant_eigen(M).first); }

namespace {

template <typename M2, typename M>
M sym_power_impl(const M2& A, int d) {
  using T = typename M2::Scalar;
  const int m = d - 1;
  M S = M::Zero(d, d);
  // column k: (a e1 + c e2)^(m-k) (b e1 + d e2)^k in the monomials e1^(m-j) e2^j
  for (int k = 0; k <= m; ++k) {
    std::vector<T> poly{T(1)};
    auto mul = [&](const T& c0, const T& c1) {
      std::vector<T> r(poly.size() + 1, T(0));
      for (std::size_t j = 0; j < poly.size(); ++j) {
        r[j] += c0 * poly[j];
        r[j + 1] += c1 * poly[j];
      }
      poly.swap(r);
    };
    for (int i = 0; i < m - k; ++i) mul(A(0, 0), A(1, 0));
    for (int i = 0; i < k; ++i) mul(A(0, 1), A(1, 1));
    for (int j = 0; j <= m; ++j) S(j, k) = poly[j];
  }
  // orthonormal monomial basis sqrt(C(m,j)) e1^(m-j) e2^j: SO(2) goes to SO(d)
  std::vector<T> binom(static_cast<std::size_t>(m) + 1, T(1));
  for (int j = 1; j <= m; ++j) binom[j] = binom[j - 1] * T(m - j + 1) / T(j);
  using std::sqrt;
  for (int j = 0; j <= m; ++j)
    for (int k = 0; k <= m; ++k) S(j, k) *= sqrt(binom[k] / binom[j]);
  return S;
}

}  // namespace

Mat sym_power_sl2(const Mat2& A, int d) { return sym_power_impl<Mat2, Mat>(A, d); }
QMat sym_power_sl2(const QMat2& A, int d) { return sym_power_impl<QMat2, QMat>(A, d); }

int pair_index_sym(int i, int j, int d) {
  // pairs (i,j), i <= j, in lexicographic order
  return i * d - i * (i - 1) / 2 + (j - i);
}

int pair_index_wedge(int i, int j, int d) { return i * (d - 1) - i * (i - 1) / 2 + (j - i - 1); }

Vec sym_product(const Vec& v, const Vec& w) {
  const int d = static_cast<int>(v.size());
  Vec r(d * (d + 1) / 2);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
      r[pair_index_sym(i, j, d)] = i == j ? v[i] * w[i] : v[i] * w[j] + v[j] * w[i];
  return r;
}

Vec wedge_product(const Vec& v, const Vec& w) {
  const int d = static_cast<int>(v.size());
  Vec r(d * (d - 1) / 2);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) r[pair_index_wedge(i, j, d)] = v[i] * w[j] - v[j] * w[i];
  return r;
}

Mat symmetric_square(const Mat& M) {
  const int d = static_cast<int>(M.rows());
  const int D = d * (d + 1) / 2;
  Mat S(D, D);
  for (int k = 0; k < d; ++k)
    for (int l = k; l < d; ++l) {
      const int col = pair_index_sym(k, l, d);
      S.col(col) = sym_product(M.col(k), M.col(l));
    }
  return S;
}

Mat exterior_square(const Mat& M) {
  const int d = static_cast<int>(M.rows());
  const int D = d * (d - 1) / 2;
  Mat E(D, D);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) E.col(pair_index_wedge(k, l, d)) = wedge_product(M.col(k), M.col(l));
  return E;
}

Mat exterior_power(const Mat& M, int k) {
  const int d = static_cast<int>(M.rows());
  if (k == 1) return M;
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur;
  auto gen = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      subsets.push_back(cur);
      return;
    }
    for (int i = start; i < d; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  gen(gen, 0);
  const int D = static_cast<int>(subsets.size());
  Mat E(D, D);
  Mat sub(k, k);
  for (int r = 0; r < D; ++r)
    for (int c = 0; c < D; ++c) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = M(subsets[r][i], subsets[c][j]);
      E(r, c) = sub.determinant();
    }
  return E;
}

InducedProjections induced_projections(const EigenData& E, bool allow_collision) {
  const int d = E.dim();
  InducedProjections R;
  R.d = d;
  if (!allow_collision) {
    std::vector<double> sprod, wprod;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        sprod.push_back(E.values[i] * E.values[j]);
        if (j > i) wprod.push_back(E.values[i] * E.values[j]);
      }
    for (auto* v : {&sprod, &wprod}) {
      std::sort(v->begin(), v->end());
      for (std::size_t i = 0; i + 1 < v->size(); ++i)
        if ((*v)[i + 1] <= (*v)[i] * (1.0 + kDistinctRatio))
          throw ProductCollision("eigenvalue products collide at " + std::to_string((*v)[i]));
    }
  }
  const int DS = d * (d + 1) / 2, DW = d * (d - 1) / 2;
  Mat PS(DS, DS), PW(DW, DW);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      PS.col(pair_index_sym(i, j, d)) = sym_product(E.vectors.col(i), E.vectors.col(j));
      if (j > i) PW.col(pair_index_wedge(i, j, d)) = wedge_product(E.vectors.col(i), E.vectors.col(j));
    }
  const Mat PSi = PS.inverse();
  const Mat PWi = DW > 0 ? Mat(PW.inverse()) : Mat();
  R.p.resize(DS);
  R.q.resize(DW);
  for (int c = 0; c < DS; ++c) R.p[c] = PS.col(c) * PSi.row(c);
  for (int c = 0; c < DW; ++c) R.q[c] = PW.col(c) * PWi.row(c);
  return R;
}

ScaledMatrix normalized_power(const Mat& M, int n) {
  if (n < 1) throw DomainError("normalized_power: n must be positive");
  const double r = spectral_radius(M);
  const Mat step = M / r;
  ScaledMatrix s{step, std::log(r)};
  for (int i = 1; i < n; ++i) {
    s.m = s.m * step;
    s.log_scale += std::log(r);
    const double mx = s.m.cwiseAbs().maxCoeff();
    if (!std::isfinite(mx)) throw DomainError("normalized_power: overflow despite scaling");
  }
  const double c = spectral_radius(s.m);
  s.m /= c;
  s.log_scale += std::log(c);
  return s;
}

ScaledMatrix normalized_product(const ScaledMatrix& a, const ScaledMatrix& b) {
  ScaledMatrix r{a.m * b.m, a.log_scale + b.log_scale};
  const double mx = r.m.cwiseAbs().maxCoeff();
  if (!(mx > 0) || !std::isfinite(mx)) throw DomainError("normalized_product: degenerate product");
  r.m /= mx;
  r.log_scale += std::log(mx);
  return r;
}

double sl_residual(const Mat& M) { return std::abs(M.determinant() - 1.0); }

}  // namespace hitchin
