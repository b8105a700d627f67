#include <array>
#include <string>

#include "hitchin/errors.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

namespace {

constexpr int kMaxLen = 64;

// Necklace generation (Fredricksen-Kessler-Maiorana prefix test) restricted to
// freely reduced words with no relator piece longer than half a relator.
class NecklaceWalker {
 public:
  NecklaceWalker(const Presentation& P, int n, const ClassVisitor& visit) : P_(P), n_(n), visit_(visit) {
    if (n > kMaxLen) throw ResourceCap("word length above " + std::to_string(kMaxLen));
  }

  void run() { step(0); }

 private:
  void step(int t) {
    const int A = P_.alphabet();
    for (int xi = 0; xi < A; ++xi) {
      const Letter x = static_cast<Letter>(xi);
      int per = 1;
      if (t > 0) {
        if (x == inv(w_[t - 1])) continue;
        const Letter y = w_[t - per_[t - 1]];
        if (x < y) continue;
        per = x > y ? t + 1 : per_[t - 1];
      }
      bool ok = true;
      for (int c = 0; c < 2; ++c) {
        const int r = (t > 0 && x == P_.next(c, w_[t - 1])) ? run_[c][t - 1] + 1 : 1;
        if (r > P_.half()) ok = false;
        run_[c][t] = r;
        prefix_[c][t] = (r == t + 1) ? r : prefix_[c][t - 1];
        maxrun_[t] = std::max(t > 0 ? maxrun_[t - 1] : 0, std::max(run_[0][t], run_[1][t]));
      }
      if (!ok) continue;
      w_[t] = x;
      per_[t] = per;
      if (t + 1 == n_)
        leaf();
      else
        step(t + 1);
    }
  }

  void leaf() {
    const int n = n_;
    const int p = per_[n - 1];
    if (n % p) return;
    if (n > 1 && w_[n - 1] == inv(w_[0])) return;
    int longest = maxrun_[n - 1];
    for (int c = 0; c < 2 && n > 1; ++c) {
      if (w_[0] != P_.next(c, w_[n - 1])) continue;
      const int pre = prefix_[c][n - 1];
      const int combined = pre == n ? 4 * n : pre + run_[c][n - 1];
      if (combined > P_.half()) return;
      longest = std::max(longest, combined);
    }
    int power = n / p;
    if (longest >= 3) {
      Word w(w_.begin(), w_.begin() + n);
      if (has_chain_move(P_, w, true)) {
        ConjClass c = conjugacy_class(P_, w);
        if (c.length != n || c.rep != w) return;
        power = c.power;
      }
    }
    visit_(w_.data(), n, power);
  }

  const Presentation& P_;
  int n_;
  const ClassVisitor& visit_;
  std::array<Letter, kMaxLen> w_{};
  std::array<int, kMaxLen> per_{}, maxrun_{};
  std::array<std::array<int, kMaxLen>, 2> run_{}, prefix_{};
};

}  // namespace

void for_each_class_of_length(const Presentation& P, int n, const ClassVisitor& visit) {
  if (n < 1) return;
  NecklaceWalker(P, n, visit).run();
}

void for_each_class(const Presentation& P, int max_wordlength, const ClassVisitor& visit) {
  if (max_wordlength < 1) throw DomainError("max_wordlength must be at least 1");
  for (int n = 1; n <= max_wordlength; ++n) for_each_class_of_length(P, n, visit);
}

std::vector<std::uint64_t> count_classes(const Presentation& P, int max_wordlength) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_wordlength) + 1, 0);
  for_each_class(P, max_wordlength, [&](const Letter*, int n, int) { ++counts[static_cast<std::size_t>(n)]; });
  return counts;
}

OrbitTable enumerate_classes(const Presentation& P, int max_wordlength, std::size_t cap) {
  OrbitTable t;
  t.max_wordlength = max_wordlength;
  for_each_class(P, max_wordlength, [&](const Letter* w, int n, int power) {
    if (t.size() >= cap)
      throw ResourceCap("enumerate_classes: more than " + std::to_string(cap) +
                        " classes up to word length " + std::to_string(max_wordlength) +
                        "; use the streaming enumerator or a smaller length");
    t.push(w, n, power);
  });
  return t;
}

}  // namespace hitchin
