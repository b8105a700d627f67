#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include <hitchin/hyperbolic.hpp>
#include <hitchin/representation.hpp>
#include <hitchin/word.hpp>

using namespace hitchin;

namespace {

Word random_reduced(std::mt19937_64& rng, int n) {
  Word w;
  while (static_cast<int>(w.size()) < n) {
    const Letter x = static_cast<Letter>(rng() % 8);
    if (!w.empty() && x == inv(w.back())) continue;
    w.push_back(x);
  }
  return w;
}

}  // namespace

TEST_CASE("free and Dehn reduction") {
  const Presentation& P = genus2();
  CHECK(reduce(P.parse("a1A1")).empty());
  CHECK(reduce(P.relator()).empty());
  CHECK(reduce(inverse(P.relator())).empty());
  CHECK(P.format(P.parse("a1B2A2b1")) == "a1B2A2b1");
  // a cyclic rotation of the relator is also trivial
  Word r = P.relator();
  std::rotate(r.begin(), r.begin() + 3, r.end());
  CHECK(reduce(r).empty());
}

TEST_CASE("reduced words of length 3") {
  // brute force over all 8^3 words: keep the freely reduced ones
  int count = 0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        if ((a ^ 1) == b || (b ^ 1) == c) continue;
        const Word w{static_cast<Letter>(a), static_cast<Letter>(b), static_cast<Letter>(c)};
        CHECK(reduce(w).size() == 3);  // no relator piece fits in three letters
        ++count;
      }
  CHECK(count == 392);
}

TEST_CASE("conjugacy classes") {
  const Presentation& P = genus2();
  CHECK(conjugacy_class(P.parse("b1a1B1")) == conjugacy_class(P.parse("a1")));
  const ConjClass c = conjugacy_class(P.parse("a1a1a1"));
  CHECK(c.power == 3);
  CHECK(c.root == P.parse("a1"));

  // conjugates agree; the oracle is the trace of a generic deformed SL(3) image,
  // a class function that separates w from its inverse
  const Representation R = random_deformation(d_fuchsian(3), 7, 0.05);
  std::mt19937_64 rng(11);
  for (int k = 0; k < 2000; ++k) {
    const Word w = random_reduced(rng, 1 + static_cast<int>(rng() % 6));
    const Word u = random_reduced(rng, 1 + static_cast<int>(rng() % 4));
    const Word v = concat(concat(u, w), inverse(u));
    const ConjClass a = conjugacy_class(w), b = conjugacy_class(v);
    REQUIRE(a == b);
    if (!a.rep.empty()) CHECK(R.image(a.rep).trace() == doctest::Approx(R.image(w).trace()).epsilon(1e-9));
  }
}

TEST_CASE("class counts against a trace bucketing oracle") {
  const Presentation& P = genus2();
  CHECK(count_classes(P, 1)[1] == 8);
  const Representation R = random_deformation(d_fuchsian(3), 3, 0.05);
  // all cyclically reduced words of length <= 2, bucketed by trace
  std::set<long long> keys;
  for (int a = 0; a < 8; ++a) {
    keys.insert(std::llround(R.image(Word{static_cast<Letter>(a)}).trace() * 1e7));
    for (int b = 0; b < 8; ++b) {
      if ((a ^ 1) == b) continue;
      keys.insert(std::llround(R.image(Word{static_cast<Letter>(a), static_cast<Letter>(b)}).trace() * 1e7));
    }
  }
  const auto counts = count_classes(P, 2);
  CHECK(counts[1] + counts[2] == keys.size());

  // the same oracle at length 3 (no relator piece fits)
  std::set<long long> k3;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c) {
        if ((a ^ 1) == b || (b ^ 1) == c || (c ^ 1) == a) continue;
        k3.insert(std::llround(
            R.image(Word{static_cast<Letter>(a), static_cast<Letter>(b), static_cast<Letter>(c)}).trace() * 1e7));
      }
  CHECK(count_classes(P, 3)[3] == k3.size());
}

TEST_CASE("class growth") {
  const auto c = count_classes(genus2(), 8);
  // n c(n) grows like the word growth rate, about 6.98
  const double rate = std::pow(8.0 * static_cast<double>(c[8]) / (5.0 * static_cast<double>(c[5])), 1.0 / 3);
  CHECK(rate > 6.5);
  CHECK(rate < 7.2);
  const OrbitTable t = enumerate_classes(5);
  std::uint64_t total = 0;
  for (int n = 1; n <= 5; ++n) total += c[static_cast<std::size_t>(n)];
  CHECK(t.size() == total);
  // stored representatives are canonical and found again
  for (std::size_t i = 0; i < t.size(); i += 97) {
    CHECK(conjugacy_class(t.word(i)).rep == t.word(i));
    CHECK(t.find(t.word(i)) == i);
  }
}
