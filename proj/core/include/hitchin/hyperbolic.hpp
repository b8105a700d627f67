#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "hitchin/linalg.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

// Point of the circle at infinity of the disk model, with the group word
// whose attracting (or repelling) fixed point it is.
struct BoundaryPoint {
  double angle = 0.0;  // [0, 2pi)
  Word word;
  bool attracting = true;
};

// Oriented geodesic by its endpoint angles: from repelling to attracting.
struct Geodesic {
  double from = 0.0, to = 0.0;
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_angle(double a);

// SL(2,R) images of a1, b1, a2, b2 pairing the sides of the regular octagon
// with vertex angles pi/4, acting on the upper half plane; traces positive.
const std::array<Mat2, 4>& base_fuchsian();
const std::array<QMat2, 4>& base_fuchsian_extended();
Mat2 fuchsian_letter(Letter x);
Mat2 fuchsian_image(const Word& w);

// Boundary angle of the line spanned by v in R^2 (Cayley transform to the disk).
double angle_of(const Eigen::Vector2d& v);
Eigen::Vector2d vector_of(double angle);
double act(const Mat2& g, double angle);
Geodesic act(const Mat2& g, const Geodesic& c);

std::pair<BoundaryPoint, BoundaryPoint> fixed_points(const Mat2& M);  // (attracting, repelling)
BoundaryPoint attracting_point(const Word& w);
// g.p, carried by the conjugate word g w g^-1
BoundaryPoint translate(const Word& g, const BoundaryPoint& p);
Geodesic axis(const Word& w);
double translation_length(const Mat2& M);

// strict cyclic order a -> b -> c counterclockwise
bool cyclically_ordered(double a, double b, double c);
bool cyclically_ordered(double a, double b, double c, double d);
bool linked(double x, double y, double u, double v);
bool linked(const Geodesic& g, const Geodesic& h);

struct KleinPoint {
  double x = 0.0, y = 0.0;
};

class FundamentalDomain {
 public:
  explicit FundamentalDomain(double tol = 1e-12);

  // side k is centred at angle k*pi/4; vertex k sits between sides k and k+1
  const std::vector<KleinPoint>& klein_vertices() const { return kv_; }
  std::vector<std::complex<double>> disk_vertices() const;
  double klein_inradius() const { return h_; }
  double tolerance() const { return tol_; }

  // half-open membership: sides 0, 1, 4, 5 (one of each paired couple) and
  // the vertex between sides 0 and 1 belong to F, the rest of the boundary not
  bool contains(const KleinPoint& p) const;
  bool contains_interior(const KleinPoint& p, double margin = 0.0) const;
  // length of the chord of g inside F (Klein coordinates), 0 when it misses
  double chord_length_inside(const Geodesic& g, double margin = 0.0) const;
  int violated_side(const KleinPoint& p) const;  // most violated side or -1

  Letter side_letter(int k) const { return side_letter_[k]; }  // tile across side k is side_letter(k)(F)
  const std::vector<Word>& neighbours() const { return neighbours_; }

 private:
  double tol_, h_;
  std::vector<KleinPoint> kv_;
  std::array<Letter, 8> side_letter_{};
  std::vector<Word> neighbours_;
};

const FundamentalDomain& octagon();

KleinPoint klein_point(double angle);
// Klein-model intersection point of two linked geodesics
KleinPoint intersection_point(const Geodesic& g, const Geodesic& h);
bool intersection_in_domain(const Geodesic& g, const Geodesic& h, const FundamentalDomain& F);

std::vector<BoundaryPoint> boundary_grid(int n, int sample_wordlength);

// Every lift of the closed geodesic of w that crosses the interior of F,
// oriented like the axis of w.
std::vector<Geodesic> lifts_through_domain(const Word& w, const FundamentalDomain& F);

}  // namespace hitchin
