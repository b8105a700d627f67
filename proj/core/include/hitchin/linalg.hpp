#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <utility>
#include <vector>

namespace hitchin {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;

// software quad precision for constructions and near-degenerate evaluations
using Quad = boost::multiprecision::cpp_bin_float_quad;
using QMat = Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>;
using QMat2 = Eigen::Matrix<Quad, 2, 2>;

inline constexpr double kDistinctRatio = 1e-9;
inline constexpr double kReconstructTol = 1e-8;

struct EigenData {
  Vec values;   // lambda_1 > ... > lambda_d > 0
  Mat vectors;  // column i is e_i
  Mat dual;     // row i is the functional f_i with f_i(e_j) = delta_ij

  int dim() const { return static_cast<int>(values.size()); }
  Mat projection(int i) const { return vectors.col(i) * dual.row(i); }
};

// Real sorted eigendecomposition of the positive-eigenvalue lift of M.
EigenData eigen_real_sorted(const Mat& M);
// Same, with the lower half of the spectrum read off an independently
// computed inverse. Needed once lambda_1/lambda_d approaches 1/eps.
EigenData eigen_real_sorted(const Mat& M, const Mat& Minv);

// Dominant eigenvalue (signed) and unit eigenvector; throws NotLoxodromic when
// the top of the spectrum is not a single real eigenvalue.
std::pair<double, Vec> dominant_eigen(const Mat& M);
double spectral_radius(const Mat& M);

Mat sym_power_sl2(const Mat2& A, int d);
QMat sym_power_sl2(const QMat2& A, int d);
Mat symmetric_square(const Mat& M);
Mat exterior_square(const Mat& M);
Mat exterior_power(const Mat& M, int k);

// coordinates of v.w in the symmetric-square basis, of v^w in the wedge basis
Vec sym_product(const Vec& v, const Vec& w);
Vec wedge_product(const Vec& v, const Vec& w);

int pair_index_sym(int i, int j, int d);    // i <= j
int pair_index_wedge(int i, int j, int d);  // i < j

struct InducedProjections {
  int d = 0;
  std::vector<Mat> p;  // p[pair_index_sym(i,j)]
  std::vector<Mat> q;  // q[pair_index_wedge(i,j)]
  const Mat& P(int i, int j) const { return p[pair_index_sym(i, j, d)]; }
  const Mat& Q(int i, int j) const { return q[pair_index_wedge(i, j, d)]; }
};

// Projections onto the lines spanned by e_i.e_j and e_i^e_j along the other
// products. With allow_collision = false a repeated product lambda_i lambda_j
// raises ProductCollision, since the lines are then no longer spectral.
InducedProjections induced_projections(const EigenData& E, bool allow_collision = false);

struct ScaledMatrix {
  Mat m;
  double log_scale = 0.0;  // represented matrix is exp(log_scale) * m
};

ScaledMatrix normalized_power(const Mat& M, int n);
ScaledMatrix normalized_product(const ScaledMatrix& a, const ScaledMatrix& b);

double sl_residual(const Mat& M);  // |det M - 1|

}  // namespace hitchin
