#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include <hitchin/errors.hpp>
#include <hitchin/hyperbolic.hpp>
#include <hitchin/lengths.hpp>

using namespace hitchin;

TEST_CASE("length functionals from log eigenvalues") {
  const double l[4] = {3.0, 1.0, -0.5, -3.5};
  const Lengths L = lengths_from_log_eigenvalues(l, 4);
  CHECK(L.L1 == doctest::Approx(3));
  REQUIRE(L.La.size() == 3);
  CHECK(L.La[0] == doctest::Approx(2));
  CHECK(L.La[1] == doctest::Approx(1.5));
  CHECK(L.La[2] == doctest::Approx(3));
  CHECK(L.LH == doctest::Approx(6.5));
  CHECK_THROWS(LengthFunctional::simple_root(4).validate(4));
  CHECK_THROWS(LengthFunctional::combo({0, 0, 0}).validate(4));
}

TEST_CASE("lengths of d-Fuchsian representations") {
  // every simple root length equals the hyperbolic length
  for (int d : {2, 3, 4}) {
    const Representation R = d_fuchsian(d);
    for (const char* s : {"a1", "a1b1", "a1B2b1", "a1a2b2A1b1"}) {
      const Word w = genus2().parse(s);
      const double ell = translation_length(fuchsian_image(w));
      const Lengths L = lengths(R, w);
      for (double x : L.La) CHECK(x == doctest::Approx(ell).epsilon(1e-9));
      CHECK(L.L1 == doctest::Approx((d - 1) * ell / 2).epsilon(1e-9));
      CHECK(L.LH == doctest::Approx((d - 1) * ell).epsilon(1e-9));
    }
  }
}

TEST_CASE("spectrum evaluator against a dense eigensolver") {
  const Representation R = random_deformation(d_fuchsian(4), 9, 0.05);
  const SpectrumEvaluator ev(R);
  for (const char* s : {"a1", "b1A2", "a1a1b2B1", "a2b2A1B1a1"}) {
    const Word w = genus2().parse(s);
    const std::vector<double> l = ev.log_eigenvalues(w);
    // top half from the matrix, bottom half from its inverse
    const Eigen::VectorXcd e = R.image(w).eigenvalues(), f = R.image(inverse(w)).eigenvalues();
    std::vector<double> top, bottom;
    for (int i = 0; i < 4; ++i) {
      top.push_back(std::log(std::abs(e(i))));
      bottom.push_back(-std::log(std::abs(f(i))));
    }
    std::sort(top.rbegin(), top.rend());
    std::sort(bottom.rbegin(), bottom.rend());
    const std::vector<double> want = {top[0], top[1], bottom[2], bottom[3]};
    for (int i = 0; i < 4; ++i) CHECK(l[static_cast<std::size_t>(i)] == doctest::Approx(want[static_cast<std::size_t>(i)]).epsilon(1e-8));
  }
  // contragredient reverses the simple roots
  const Representation C = contragredient(R);
  const Word w = genus2().parse("a1b2B1");
  const Lengths a = lengths(R, w), b = lengths(C, w);
  for (int i = 0; i < 3; ++i) CHECK(a.La[static_cast<std::size_t>(i)] == doctest::Approx(b.La[static_cast<std::size_t>(2 - i)]).epsilon(1e-9));
  // class function
  const Word u = genus2().parse("b1a1b2B1");
  CHECK(lengths(R, u).LH == doctest::Approx(lengths(R, genus2().parse("a1b2")).LH).epsilon(1e-9));
}

TEST_CASE("length tables") {
  const Representation R = random_deformation(d_fuchsian(3), 2, 0.05);
  const LengthTable t = build_length_table(R, 4);
  CHECK(t.size() == enumerate_classes(4).size());
  CHECK(t.stride() == 4);
  for (std::size_t i = 0; i < t.size(); i += 37) {
    const Lengths L = lengths(R, t.classes.word(i));
    CHECK(t.La(i, 1) == doctest::Approx(L.La[0]).epsilon(1e-10));
    CHECK(t.LH(i) == doctest::Approx(L.LH).epsilon(1e-10));
  }
  // cutoff keeps exactly the short classes
  TableOptions o;
  o.cutoff = 4.0;
  const LengthTable c = build_length_table(R, 4, o);
  std::size_t want = 0;
  for (std::size_t i = 0; i < t.size(); ++i) want += t.La(i, 1) <= 4.0;
  CHECK(c.size() == want);
  // evaluate_on keeps the order
  const LengthTable e = evaluate_on(d_fuchsian(3), t);
  REQUIRE(e.size() == t.size());
  CHECK(e.classes.word(5) == t.classes.word(5));

  // pressure intersection of rho with itself is 1
  const double T = t.horizon_of(LengthFunctional::simple_root(1));
  const PressureEstimate p = pressure_intersection(t, t, 1, T);
  CHECK(p.value == doctest::Approx(1).epsilon(1e-12));
  CHECK(bm_pressure_intersection(t, t, T) == doctest::Approx(1).epsilon(1e-12));
  CHECK_THROWS(pressure_intersection(t, t, 1, T + 1));

  const GapFit g = anosov_gap_fit(t);
  CHECK(g.pass);
  for (double m : g.margin) CHECK(m > 0);
}

TEST_CASE("table cache round trip") {
  const Representation R = d_fuchsian(3);
  const LengthTable t = build_length_table(R, 3);
  const auto path = std::filesystem::temp_directory_path() / "hitchin_test_table.bin";
  save_table_cache(path.string(), t);
  const auto back = load_table_cache(path.string(), R.hash(), 3, {});
  REQUIRE(back.has_value());
  CHECK(back->values == t.values);
  CHECK(back->classes.letters == t.classes.letters);
  std::string why;
  CHECK_FALSE(load_table_cache(path.string(), R.hash() + 1, 3, {}, &why).has_value());
  CHECK_FALSE(why.empty());
  CHECK_FALSE(load_table_cache(path.string(), R.hash(), 4, {}).has_value());
  // truncated file
  std::filesystem::resize_file(path, std::filesystem::file_size(path) / 2);
  CHECK_FALSE(load_table_cache(path.string(), R.hash(), 3, {}).has_value());
  std::filesystem::remove(path);
}

TEST_CASE("entropy regression") {
  // synthetic spectrum with #{L <= T} = exp(1.3 T) exactly at the sample points
  LengthTable t;
  t.d = 2;
  const int n = 20000;
  const Letter w[1] = {0};
  for (int k = 1; k <= n; ++k) {
    t.classes.push(w, 1, 1);
    const double x = std::log(static_cast<double>(k)) / 1.3 + 1e-9;
    t.values.insert(t.values.end(), {x / 2, x, x});
  }
  const double cover = std::log(static_cast<double>(n)) / 1.3;
  t.horizon = {cover / 2, cover, cover};
  const EntropyEstimate e = entropy(t, LengthFunctional::simple_root(1));
  CHECK(e.h == doctest::Approx(1.3).epsilon(0.01));
  CHECK(e.t_max == doctest::Approx(cover));
  CHECK_THROWS_AS(entropy(t, LengthFunctional::simple_root(1), n + 1), DomainError);

  // the hyperbolic surface has entropy 1; a short table underestimates it
  const LengthTable f = build_length_table(d_fuchsian(2), 7);
  const EntropyEstimate g = entropy(f, LengthFunctional::simple_root(1), 200);
  CHECK(g.h > 0.4);
  CHECK(g.h < 1.1);
}

TEST_CASE("cotangent rank") {
  const Representation R = d_fuchsian(3);
  const TangentChart ch = tangent_chart(R);
  const OrbitTable cls = enumerate_classes(4);
  std::vector<Word> ws;
  for (std::size_t i = 0; i < cls.size() && ws.size() < 120; ++i)
    if (cls.powers[i] == 1) ws.push_back(cls.word(i));
  const Mat D = length_derivatives(R, ch, ws);
  // conjugation directions are invisible to lengths
  CHECK(D.leftCols(ch.conjugation_dim).norm() < 1e-8 * D.norm());
  const RankReport r = cotangent_rank(R, ch, ws);
  CHECK(r.rank <= ch.dim() - ch.conjugation_dim);
  CHECK(r.rank >= 12);
  // against a finite difference
  Vec v = Vec::Zero(ch.dim());
  const int k = ch.conjugation_dim + 3;
  v(k) = 1;
  const double h = 1e-5;
  const double fd = (lengths(deform(R, ch, v, h), ws[7]).La[0] - lengths(deform(R, ch, v, -h), ws[7]).La[0]) / (2 * h);
  CHECK(D(7, k) == doctest::Approx(fd).epsilon(1e-5));
}
