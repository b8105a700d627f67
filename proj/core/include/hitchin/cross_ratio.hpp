#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "hitchin/hyperbolic.hpp"
#include "hitchin/representation.hpp"

namespace hitchin {

using QVec = Eigen::Matrix<Quad, Eigen::Dynamic, 1>;

// Flag of the limit curve at a fixed point: basis e_1..e_d ordered by
// decreasing eigenvalue (reversed at a repelling point), unit columns with
// the largest entry positive.
struct Flag {
  Mat basis;
  Mat dual;  // rows f_i with f_i(e_j) = delta_ij

  int dim() const { return static_cast<int>(basis.rows()); }
  Vec xi() const { return basis.col(0); }
  // functional whose kernel is span(e_1..e_{d-1})
  Eigen::RowVectorXd xi_star() const { return dual.row(dim() - 1); }
};

Flag flag_at(const Representation& R, const BoundaryPoint& p);

// xi and xi* in quad precision: dominant eigenvectors of R(w)^{+-1} and their
// transposes, refined by power iteration from the double values
struct QuadLimit {
  QVec xi, xi_star;
};
QuadLimit quad_limit_at(const Representation& R, const BoundaryPoint& p);

inline constexpr double kPairingFloor = 1e-13;

// phi(u) psi(v) / (psi(u) phi(v)); throws NearDegenerate when a normalized
// pairing in the denominator is below kPairingFloor
double cross_ratio_B(const Vec& u, const Eigen::RowVectorXd& phi, const Vec& v, const Eigen::RowVectorXd& psi);
double cross_ratio_B(const QVec& u, const QVec& phi, const QVec& v, const QVec& psi);

struct CrossRatioOptions {
  double near_separation = 1e-4;  // angular separation counted as near-degenerate
  bool extended = true;           // near-degenerate: quad evaluation, else NearDegenerate
};

// Limit map sampled at fixed points, cached. Thread safe.
class LimitMap {
 public:
  explicit LimitMap(const Representation& R, CrossRatioOptions opt = {});
  const Representation& rep() const { return R_; }
  const CrossRatioOptions& options() const { return opt_; }

  const Flag& flag(const BoundaryPoint& p) const;
  const QuadLimit& quad(const BoundaryPoint& p) const;

  // b(x,y,z,t) = B(xi(x), xi*(y), xi(z), xi*(t))
  double b(const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z, const BoundaryPoint& t) const;

 private:
  using Key = std::pair<Word, bool>;
  Representation R_;
  CrossRatioOptions opt_;
  mutable std::mutex mu_;
  mutable std::map<Key, Flag> flags_;
  mutable std::map<Key, QuadLimit> quads_;
};

double b_rho(const Representation& R, const BoundaryPoint& x, const BoundaryPoint& y, const BoundaryPoint& z,
             const BoundaryPoint& t, const CrossRatioOptions& opt = {});

struct ChiValue {
  double value = 0;
  double minor_scale = 0;     // largest |principal p x p minor|, i.e. the chi_{p-1} of sub-tuples
  double hadamard_scale = 0;  // product of row norms, bounds |value|
};

// det of the (p+1)x(p+1) matrix [b(x_i, y_j, x_0, y_0)], i, j = 0..p. Row and
// column 0 are identically 1, so this is det[b_ij - 1] over i, j = 1..p.
ChiValue chi_p(const LimitMap& L, const std::vector<BoundaryPoint>& X, const std::vector<BoundaryPoint>& Y);

struct CurrentBox {
  BoundaryPoint t, x, y, z;  // arcs [t,x] and [y,z]
  double mass = 0;
};

// omega([t,x] x [y,z]) = 1/2 log b(x,z,t,y); (x,y,z,t) must be cyclically ordered
CurrentBox box_mass(const LimitMap& L, const BoundaryPoint& t, const BoundaryPoint& x, const BoundaryPoint& y,
                    const BoundaryPoint& z);

// max |omega(A x B) - omega(B x A)| over the boxes
double symmetry_defect(const LimitMap& L, const std::vector<CurrentBox>& boxes);

// 1/2 [log b(g-, g x, g+, x) + log b(g-, g y, g+, y)]
double axis_liouville_mass(const LimitMap& L, const Word& g, const BoundaryPoint& x, const BoundaryPoint& y);

}  // namespace hitchin
