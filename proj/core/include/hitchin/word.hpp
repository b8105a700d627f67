#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace hitchin {

// Letter code: generator k (ordered a1, b1, a2, b2, ...) is 2k, its inverse 2k+1.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline constexpr Letter inv(Letter x) { return static_cast<Letter>(x ^ 1u); }

// Surface group <a1,b1,...,ag,bg | [a1,b1]...[ag,bg]>, [a,b] = a b a^-1 b^-1.
class Presentation {
 public:
  explicit Presentation(int genus = 2);

  int genus() const { return genus_; }
  int alphabet() const { return 4 * genus_; }
  int generators() const { return 2 * genus_; }
  int relator_length() const { return 4 * genus_; }
  int half() const { return 2 * genus_; }
  const Word& relator() const { return relator_; }

  // cycle 0 walks the relator, cycle 1 walks its inverse
  Letter next(int cycle, Letter x) const { return next_[cycle][x]; }
  Letter prev(int cycle, Letter x) const { return prev_[cycle][x]; }

  std::string name(Letter x) const;
  std::string format(const Word& w) const;
  Word parse(std::string_view s) const;

 private:
  int genus_;
  Word relator_;
  std::vector<Letter> next_[2], prev_[2];
};

const Presentation& genus2();

Word inverse(const Word& w);
Word concat(const Word& u, const Word& v);
Word free_reduce(const Word& w);
// free reduction plus Dehn's algorithm (pieces longer than half a relator)
Word dehn_reduce(const Presentation& P, const Word& w);
// geodesic normal form: shortlex-least word for the element
Word reduce(const Presentation& P, const Word& w);
inline Word reduce(const Word& w) { return reduce(genus2(), w); }

Word min_rotation(const Word& w);
Word cyclic_reduce(const Presentation& P, const Word& w);

struct ConjClass {
  Word rep;
  int length = 0;
  Word root;  // rep of the primitive root class
  int power = 1;

  bool operator==(const ConjClass& o) const { return rep == o.rep; }
  bool operator<(const ConjClass& o) const {
    return length != o.length ? length < o.length : rep < o.rep;
  }
};

ConjClass conjugacy_class(const Presentation& P, const Word& w);
inline ConjClass conjugacy_class(const Word& w) { return conjugacy_class(genus2(), w); }

// All length-non-increasing moves across one layer of relator cells.
// Each result is a cyclically reduced word conjugate to u (cyclic == true)
// or a reduced word equal to u as an element (cyclic == false).
void chain_moves(const Presentation& P, const Word& u, bool cyclic,
                 const std::function<void(const Word&)>& out);
bool has_chain_move(const Presentation& P, const Word& u, bool cyclic);

struct OrbitTable {
  int max_wordlength = 0;
  std::vector<Letter> letters;
  std::vector<std::uint64_t> offsets{0};
  std::vector<std::uint8_t> powers;

  std::size_t size() const { return powers.size(); }
  int length(std::size_t i) const { return static_cast<int>(offsets[i + 1] - offsets[i]); }
  Word word(std::size_t i) const {
    return Word(letters.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                letters.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
  }
  const Letter* data(std::size_t i) const { return letters.data() + offsets[i]; }
  ConjClass at(std::size_t i) const;
  std::size_t find(const Word& rep) const;  // size() when absent
  void push(const Letter* w, int n, int power);
};

using ClassVisitor = std::function<void(const Letter* w, int n, int power)>;

// Streams canonical class representatives with 1 <= length <= max_wordlength,
// ordered by length then lexicographically.
void for_each_class(const Presentation& P, int max_wordlength, const ClassVisitor& visit);
void for_each_class_of_length(const Presentation& P, int n, const ClassVisitor& visit);

inline constexpr std::size_t kDefaultClassCap = 6'000'000;

OrbitTable enumerate_classes(const Presentation& P, int max_wordlength,
                             std::size_t cap = kDefaultClassCap);
inline OrbitTable enumerate_classes(int max_wordlength, std::size_t cap = kDefaultClassCap) {
  return enumerate_classes(genus2(), max_wordlength, cap);
}

// Number of classes of each length up to n, without materializing them.
std::vector<std::uint64_t> count_classes(const Presentation& P, int max_wordlength);

}  // namespace hitchin
