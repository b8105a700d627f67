#include "hitchin/word.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "hitchin/errors.hpp"

namespace hitchin {

Presentation::Presentation(int genus) : genus_(genus) {
  if (genus < 1) throw DomainError("genus must be positive");
  const int L = 4 * genus;
  for (int k = 0; k < genus; ++k) {
    const Letter a = static_cast<Letter>(4 * k), b = static_cast<Letter>(4 * k + 2);
    relator_.insert(relator_.end(), {a, b, inv(a), inv(b)});
  }
  Word rinv = inverse(relator_);
  for (int c = 0; c < 2; ++c) {
    const Word& r = c == 0 ? relator_ : rinv;
    next_[c].assign(L, 0);
    prev_[c].assign(L, 0);
    for (int i = 0; i < L; ++i) {
      next_[c][r[i]] = r[(i + 1) % L];
      prev_[c][r[(i + 1) % L]] = r[i];
    }
  }
}

std::string Presentation::name(Letter x) const {
  const int g = x >> 1;
  std::string s(1, (g & 1) ? 'b' : 'a');
  if (x & 1) s[0] = static_cast<char>(std::toupper(s[0]));
  s += std::to_string((g >> 1) + 1);
  return s;
}

std::string Presentation::format(const Word& w) const {
  if (w.empty()) return "e";
  std::string s;
  for (Letter x : w) s += name(x);
  return s;
}

Word Presentation::parse(std::string_view s) const {
  Word w;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '.' || c == '*') {
      ++i;
      continue;
    }
    if (c == 'e' && w.empty() && s.find_first_not_of(" \t", i + 1) == std::string_view::npos) break;
    const char lc = static_cast<char>(std::tolower(c));
    if (lc != 'a' && lc != 'b') throw DomainError("bad letter in word: " + std::string(s));
    ++i;
    int k = 0;
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) k = 10 * k + (s[j++] - '0');
    if (j == i || k < 1 || k > genus_) throw DomainError("bad generator index in word: " + std::string(s));
    i = j;
    Letter x = static_cast<Letter>(2 * (2 * (k - 1) + (lc == 'b' ? 1 : 0)));
    if (std::isupper(static_cast<unsigned char>(c))) x = inv(x);
    w.push_back(x);
  }
  return w;
}

const Presentation& genus2() {
  static const Presentation P(2);
  return P;
}

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (auto& x : r) x = inv(x);
  return r;
}

Word concat(const Word& u, const Word& v) {
  Word r = u;
  r.insert(r.end(), v.begin(), v.end());
  return r;
}

Word free_reduce(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (Letter x : w) {
    if (!r.empty() && r.back() == inv(x))
      r.pop_back();
    else
      r.push_back(x);
  }
  return r;
}

namespace {

// letters following the run u[i..i+k) along the cycle, i.e. the rest of the relator
Word complement(const Presentation& P, int c, Letter last, int k) {
  Word comp;
  Letter x = last;
  for (int j = 0; j < P.relator_length() - k; ++j) {
    x = P.next(c, x);
    comp.push_back(x);
  }
  return comp;
}

bool dehn_step(const Presentation& P, Word& w) {
  const int n = static_cast<int>(w.size());
  const int L = P.relator_length();
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 2; ++c) {
      int k = 1;
      while (i + k < n && k < L && w[i + k] == P.next(c, w[i + k - 1])) ++k;
      if (k > P.half()) {
        Word rep = inverse(complement(P, c, w[i + k - 1], k));
        Word r(w.begin(), w.begin() + i);
        r.insert(r.end(), rep.begin(), rep.end());
        r.insert(r.end(), w.begin() + i + k, w.end());
        w = free_reduce(r);
        return true;
      }
    }
  }
  return false;
}

Word rotate(const Word& w, std::size_t s) {
  Word r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = w[(i + s) % w.size()];
  return r;
}

bool cyclic_free_step(Word& w) {
  w = free_reduce(w);
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == inv(w[hi - 1])) ++lo, --hi;
  if (lo == 0) return false;
  w = Word(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
  return true;
}

bool cyclic_dehn_step(const Presentation& P, Word& w) {
  const int n = static_cast<int>(w.size());
  const int L = P.relator_length();
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 2; ++c) {
      int k = 1;
      while (k < n && k < L && w[(i + k) % n] == P.next(c, w[(i + k - 1) % n])) ++k;
      if (k > P.half()) {
        Word rot = rotate(w, static_cast<std::size_t>(i));
        Word rep = inverse(complement(P, c, rot[k - 1], k));
        rep.insert(rep.end(), rot.begin() + k, rot.end());
        w = rep;
        return true;
      }
    }
  }
  return false;
}

// Depth-first search over chains of relator cells glued along single edges.
// Cell t has inner boundary s_t (k_t letters of u along cycle c_t); its outer
// boundary, read backwards, replaces s_t. Adjacent cells share one edge.
class ChainSearch {
 public:
  ChainSearch(const Presentation& P, const Word& u, bool cyclic, const std::function<void(const Word&)>* out)
      : P_(P), u_(u), n_(static_cast<int>(u.size())), cyclic_(cyclic), out_(out) {}

  bool run() {
    if (n_ == 0) return false;
    for (int p = 0; p < n_ && !stop_; ++p) {
      p0_ = p;
      limit_ = cyclic_ ? n_ : n_ - p;
      for (int c = 0; c < 2 && !stop_; ++c) {
        const int kmax = run_length(0, c);
        for (int k = 1; k <= kmax && !stop_; ++k) {
          cells_.push_back({c, 0, k});
          if (feasible(k - 3, limit_ - k)) extend(k, k - 3);
          cells_.pop_back();
        }
      }
    }
    return found_;
  }

 private:
  struct Cell {
    int cyc, start, k;
  };

  Letter at(int off) const { return u_[(p0_ + off) % n_]; }

  int run_length(int off, int c) const {
    const int room = limit_ - off;
    const int cap = std::min(room, P_.relator_length() - 1);
    int k = 1;
    while (k < cap && at(off + k) == P_.next(c, at(off + k - 1))) ++k;
    return std::min(k, cap);
  }

  bool feasible(int slack, int remaining) const {
    const int best = slack + remaining / 4;
    return cyclic_ ? best >= 0 : best >= 1;
  }

  Letter piece_out(const Cell& c) const { return P_.next(c.cyc, at(c.start + c.k - 1)); }

  void extend(int consumed, int slack) {
    const int m = static_cast<int>(cells_.size());
    if (slack >= 1) emit(consumed, false);
    if (stop_) return;
    if (cyclic_ && consumed == n_) {
      if (P_.prev(cells_.front().cyc, at(0)) == inv(piece_out(cells_.back())) && slack >= 0 &&
          band_ok())
        emit(consumed, true);
      return;
    }
    if (consumed >= limit_) return;
    const Letter want = inv(piece_out(cells_.back()));
    for (int c = 0; c < 2 && !stop_; ++c) {
      if (P_.prev(c, at(consumed)) != want) continue;
      const int kmax = run_length(consumed, c);
      for (int k = 1; k <= kmax && !stop_; ++k) {
        const int s = slack + k - 3;
        if (!feasible(s, limit_ - consumed - k) && !(cyclic_ && consumed + k == n_ && s >= 0)) continue;
        cells_.push_back({c, consumed, k});
        extend(consumed + k, s);
        cells_.pop_back();
      }
    }
    (void)m;
  }

  bool band_ok() const {
    for (const auto& c : cells_)
      if (c.k > P_.relator_length() - 2) return false;
    return true;
  }

  void emit(int consumed, bool band) {
    const int m = static_cast<int>(cells_.size());
    const int L = P_.relator_length();
    for (int t = 0; t < m; ++t) {
      const int pieces = band ? 2 : (t > 0) + (t < m - 1);
      if (L - cells_[t].k - pieces < 0) return;
    }
    found_ = true;
    if (!out_) {
      stop_ = true;
      return;
    }
    Word V;
    for (int t = 0; t < m; ++t) {
      const Cell& c = cells_[t];
      Word comp = complement(P_, c.cyc, at(c.start + c.k - 1), c.k);
      const bool has_out = band || t < m - 1;
      const bool has_in = band || t > 0;
      Word outer(comp.begin() + (has_out ? 1 : 0), comp.end() - (has_in ? 1 : 0));
      Word oi = inverse(outer);
      V.insert(V.end(), oi.begin(), oi.end());
    }
    Word r;
    if (band) {
      r = cyclic_reduce(P_, V);
    } else if (cyclic_) {
      r = V;
      for (int j = consumed; j < n_; ++j) r.push_back(at(j));
      r = cyclic_reduce(P_, r);
    } else {
      r.assign(u_.begin(), u_.begin() + p0_);
      r.insert(r.end(), V.begin(), V.end());
      r.insert(r.end(), u_.begin() + p0_ + consumed, u_.end());
      r = dehn_reduce(P_, r);
    }
    if (static_cast<int>(r.size()) <= n_) (*out_)(r);
  }

  const Presentation& P_;
  const Word& u_;
  int n_;
  bool cyclic_;
  const std::function<void(const Word&)>* out_;
  int p0_ = 0, limit_ = 0;
  std::vector<Cell> cells_;
  bool found_ = false, stop_ = false;
};

std::size_t smallest_period(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return p;
  }
  return n;
}

}  // namespace

Word dehn_reduce(const Presentation& P, const Word& w) {
  Word r = free_reduce(w);
  while (dehn_step(P, r)) {
  }
  return r;
}

Word min_rotation(const Word& w) {
  Word best = w;
  for (std::size_t s = 1; s < w.size(); ++s) {
    Word r = rotate(w, s);
    if (r < best) best = std::move(r);
  }
  return best;
}

Word cyclic_reduce(const Presentation& P, const Word& w) {
  Word r = w;
  for (;;) {
    bool a = cyclic_free_step(r);
    bool b = cyclic_dehn_step(P, r);
    if (!a && !b) break;
  }
  return r;
}

void chain_moves(const Presentation& P, const Word& u, bool cyclic,
                 const std::function<void(const Word&)>& out) {
  ChainSearch(P, u, cyclic, &out).run();
}

bool has_chain_move(const Presentation& P, const Word& u, bool cyclic) {
  return ChainSearch(P, u, cyclic, nullptr).run();
}

Word reduce(const Presentation& P, const Word& w) {
  Word u = dehn_reduce(P, w);
  for (;;) {
    std::set<Word> seen{u};
    std::vector<Word> todo{u};
    bool shorter = false;
    while (!todo.empty() && !shorter) {
      Word cur = std::move(todo.back());
      todo.pop_back();
      chain_moves(P, cur, false, [&](const Word& v) {
        if (shorter) return;
        if (v.size() < cur.size()) {
          u = v;
          shorter = true;
        } else if (seen.insert(v).second) {
          todo.push_back(v);
        }
      });
    }
    if (!shorter) return *seen.begin();
  }
}

ConjClass conjugacy_class(const Presentation& P, const Word& w) {
  Word u = cyclic_reduce(P, w);
  if (u.empty()) throw DomainError("conjugacy_class: identity element");
  std::set<Word> seen;
  for (;;) {
    seen = {min_rotation(u)};
    std::vector<Word> todo{u};
    bool shorter = false;
    while (!todo.empty() && !shorter) {
      Word cur = std::move(todo.back());
      todo.pop_back();
      chain_moves(P, cur, true, [&](const Word& v) {
        if (shorter) return;
        if (v.size() < cur.size()) {
          u = v;
          shorter = true;
        } else if (seen.insert(min_rotation(v)).second) {
          todo.push_back(v);
        }
      });
    }
    if (!shorter) break;
    if (u.empty()) throw DomainError("conjugacy_class: identity element");
  }
  ConjClass c;
  c.rep = *seen.begin();
  c.length = static_cast<int>(c.rep.size());
  std::size_t best = c.rep.size();
  Word root = c.rep;
  for (const Word& s : seen) {
    const std::size_t p = smallest_period(s);
    if (p < best) {
      best = p;
      root.assign(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(p));
    }
  }
  c.power = static_cast<int>(c.rep.size() / best);
  c.root = c.power == 1 ? c.rep : conjugacy_class(P, root).rep;
  return c;
}

ConjClass OrbitTable::at(std::size_t i) const {
  ConjClass c;
  c.rep = word(i);
  c.length = length(i);
  c.power = powers[i];
  c.root = c.power == 1 ? c.rep : conjugacy_class(genus2(), c.rep).root;
  return c;
}

std::size_t OrbitTable::find(const Word& rep) const {
  // entries are sorted by (length, lexicographic)
  std::size_t lo = 0, hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const int lm = length(mid);
    bool less;
    if (lm != static_cast<int>(rep.size()))
      less = lm < static_cast<int>(rep.size());
    else
      less = std::lexicographical_compare(data(mid), data(mid) + lm, rep.begin(), rep.end());
    if (less)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() && length(lo) == static_cast<int>(rep.size()) && std::equal(rep.begin(), rep.end(), data(lo)))
    return lo;
  return size();
}

void OrbitTable::push(const Letter* w, int n, int power) {
  letters.insert(letters.end(), w, w + n);
  offsets.push_back(letters.size());
  powers.push_back(static_cast<std::uint8_t>(power));
}

}  // namespace hitchin
