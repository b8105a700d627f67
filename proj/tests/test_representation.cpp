#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include <hitchin/errors.hpp>
#include <hitchin/hyperbolic.hpp>
#include <hitchin/representation.hpp>

using namespace hitchin;

TEST_CASE("d-Fuchsian representations") {
  for (int d : {2, 3, 4}) {
    const Representation R = d_fuchsian(d);
    CHECK(R.d() == d);
    CHECK(R.relator_residual() < kRelatorTol);
    for (const Mat& g : R.gens()) CHECK(std::abs(g.determinant() - 1) < 1e-8);
    // spectrum is the symmetric power of the SL(2) one
    const Word w = genus2().parse("a1b2");
    const double ell = translation_length(fuchsian_image(w));
    const Eigen::VectorXcd ev = R.image(w).eigenvalues();
    double top = 0;
    for (int i = 0; i < d; ++i) top = std::max(top, std::abs(ev(i)));
    CHECK(std::log(top) == doctest::Approx((d - 1) * ell / 2).epsilon(1e-9));
  }
}

TEST_CASE("contragredient and conjugation") {
  const Representation R = random_deformation(d_fuchsian(3), 11, 0.05);
  const Representation C = contragredient(R);
  const Word w = genus2().parse("a1B1a2");
  CHECK((C.image(w) - R.image(w).inverse().transpose()).norm() < 1e-9 * R.image(w).norm());
  CHECK(C.relator_residual() < kRelatorTol);
  Mat g(3, 3);
  g << 2, 1, 0, 0, 1, 0.5, 0.3, 0, 1;
  const Representation K = conjugate(R, g);
  CHECK(K.image(w).trace() == doctest::Approx(R.image(w).trace()).epsilon(1e-9));
  CHECK(K.hash() != R.hash());
}

TEST_CASE("tangent chart") {
  const Representation R = d_fuchsian(3);
  const TangentChart ch = tangent_chart(R);
  // Hom(pi_1, SL3) is smooth of dimension 3 * 8 at a Hitchin point
  CHECK(ch.dim() == 24);
  CHECK(ch.conjugation_dim == 8);
  for (int a = 0; a < ch.dim(); ++a) {
    const Tangent& X = ch.directions[static_cast<std::size_t>(a)];
    CHECK(linearized_relator(R, X).norm() < 1e-8);
    for (int b = 0; b <= a; ++b)
      CHECK(pairing(X, ch.directions[static_cast<std::size_t>(b)]) == doctest::Approx(a == b ? 1 : 0).epsilon(1e-9));
  }
  // conjugation directions do not move traces to first order
  const Word w = genus2().parse("a1b1B2");
  Vec v = Vec::Zero(ch.dim());
  v(0) = 1;
  const double t0 = R.image(w).trace();
  const double t1 = deform(R, ch, v, 1e-4).image(w).trace();
  CHECK(std::abs(t1 - t0) < 1e-6);
  // a transverse step stays on the relation variety and moves traces
  v.setZero();
  v(ch.conjugation_dim) = 1;
  const Representation S = deform(R, ch, v, 0.1);
  CHECK(S.relator_residual() < kRelatorTol);
  CHECK(std::abs(S.image(w).trace() - t0) > 1e-4);
}

TEST_CASE("random deformations are deterministic") {
  const Representation R = d_fuchsian(3);
  const Representation A = random_deformation(R, 5, 0.05), B = random_deformation(R, 5, 0.05);
  const Representation C = random_deformation(R, 6, 0.05);
  CHECK(A.hash() == B.hash());
  CHECK(A.hash() != C.hash());
  CHECK(A.relator_residual() < kRelatorTol);
}

TEST_CASE("projection to the relation variety") {
  Gens g = d_fuchsian(3).gens();
  g[1](0, 2) += 1e-3;
  CHECK(relator_residual(g) > 1e-5);
  const Representation P = project_to_relvariety(g);
  CHECK(P.relator_residual() < kRelatorTol);
  CHECK((P.gens()[1] - g[1]).norm() < 1e-2);
}

TEST_CASE("representation file round trip") {
  const Representation R = random_deformation(d_fuchsian(4), 3, 0.05);
  std::stringstream ss;
  write_representation(ss, R);
  const Representation Q = read_representation(ss);
  CHECK(Q.hash() == R.hash());
  std::stringstream bad("d 3\ngarbage\n");
  CHECK_THROWS(read_representation(bad));
  Gens broken = d_fuchsian(3).gens();
  broken[0](0, 0) *= 1.5;
  CHECK_THROWS_AS(Representation(broken, "bad"), Error);
}
