#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hitchin/linalg.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

using Gens = std::array<Mat, 4>;  // images of a1, b1, a2, b2

inline constexpr double kRelatorTol = 1e-10;
inline constexpr int kDeformSubsteps = 4;

class Representation {
 public:
  // validates SL membership (1e-8) and the relator residual unless check is false
  Representation(Gens gens, std::string provenance, bool check = true);
  // with exactly known inverses (symmetric powers, contragredients)
  Representation(Gens gens, Gens inverses, std::string provenance, bool check = true);

  int d() const { return d_; }
  int genus() const { return 2; }
  const Gens& gens() const { return gens_; }
  const Mat& letter(Letter x) const { return letters_[x]; }
  const std::string& provenance() const { return provenance_; }

  Mat image(const Word& w) const;
  Mat image(const Letter* w, int n) const;
  // |[A1,B1] - [A2,B2]^{-1}|_F / |[A1,B1]|_F, evaluated in quad precision.
  // Relative because rounding the generators alone leaves an absolute
  // residual of order eps |[A1,B1]|^2.
  double relator_residual() const;
  // |[A1,B1][A2,B2] - I|_F in double; has a rounding floor near 1e-10 at d = 4
  double relator_residual_full() const;
  std::uint64_t hash() const;  // FNV-1a over d and the raw generator entries

 private:
  int d_;
  Gens gens_;
  std::array<Mat, 8> letters_;
  std::string provenance_;
};

double relator_residual(const Gens& g);  // same relative split form

Representation d_fuchsian(const std::array<Mat2, 4>& base, int d);
Representation d_fuchsian(int d);  // over base_fuchsian()
Representation contragredient(const Representation& R);
Representation conjugate(const Representation& R, const Mat& g);

struct ProjectionOptions {
  int max_iterations = 100;
  double target = 1e-16;      // relative residual accepted when Gauss-Newton stalls
  double max_input = 0.1;     // precondition on the input residual relative to |[A1,B1]|
  double rank_tol = 1e-10;    // relative singular value threshold of the relator Jacobian
};

// Gauss-Newton on the relator residual; steps A_i -> A_i exp(X_i), X_i traceless,
// minimum Frobenius norm. Equivariant under orthogonal conjugation.
Representation project_to_relvariety(Gens approx, std::string provenance = "projected",
                                     const ProjectionOptions& opt = {});

// Orthonormal basis of sl(d) in the Frobenius pairing.
std::vector<Mat> sl_basis(int d);

// Tangent vectors are tuples (X_1..X_4) in sl(d), meaning t -> A_i exp(t X_i).
using Tangent = std::array<Mat, 4>;

// derivative of [A1,B1] - [A2,B2]^{-1} at R along X
Mat linearized_relator(const Representation& R, const Tangent& X);
Mat relator_jacobian(const Gens& g, const std::vector<Mat>& basis);  // d^2 x 4(d^2-1), same split form

struct TangentChart {
  int d = 0;
  std::uint64_t base_hash = 0;
  // orthonormal; the first `conjugation_dim` directions span the conjugation orbit
  std::vector<Tangent> directions;
  int conjugation_dim = 0;
  // direction k < conjugation_dim is the derivative of exp(tY_k) A_i exp(-tY_k)
  std::vector<Mat> conjugators;

  int dim() const { return static_cast<int>(directions.size()); }
  Tangent combine(const Vec& v) const;
};

double pairing(const Tangent& X, const Tangent& Y);

TangentChart tangent_chart(const Representation& R);

// Transverse part: exp-step and projection back to the relator variety.
// Conjugation part: exact conjugation by exp(tY). Requires |t| * |v| <= 0.1.
Representation deform(const Representation& R, const TangentChart& chart, const Vec& v, double t);
// Same step taken from a point other than the chart's base; used to walk back.
Representation chart_step(const Representation& at, const TangentChart& chart, const Vec& v, double t);
// Transverse chart direction drawn from `seed` (uniform on the cube, then normalized).
Vec random_direction(const TangentChart& chart, std::uint64_t seed);
// deform along random_direction(seed) by |step| <= 0.1
Representation random_deformation(const Representation& R, std::uint64_t seed, double step);

// Plain text, 17 significant digits, bit-stable round trip.
void write_representation(std::ostream& os, const Representation& R);
Representation read_representation(std::istream& is);
void save_representation(const std::string& path, const Representation& R);
Representation load_representation(const std::string& path);

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL);

}  // namespace hitchin
