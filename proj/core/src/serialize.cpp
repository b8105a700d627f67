#include <cstdio>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>

#include "hitchin/errors.hpp"
#include "hitchin/lengths.hpp"

namespace hitchin {

namespace {

constexpr char kMagic[8] = {'H', 'T', 'C', 'H', 'T', 'B', 'L', '1'};

struct Header {
  char magic[8];
  std::uint64_t rep_hash;
  std::int32_t d, max_wordlength, primitive_only, cutoff_kind, cutoff_index, n_weights;
  double cutoff;
  std::uint64_t classes_seen, n_classes, n_letters;
};

template <typename T>
void put(std::ostream& os, const std::vector<T>& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
bool get(std::istream& is, std::vector<T>& v, std::size_t n) {
  v.resize(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  return static_cast<bool>(is);
}

template <typename T>
std::uint64_t hash_vec(const std::vector<T>& v, std::uint64_t h) {
  return fnv1a(v.data(), v.size() * sizeof(T), h);
}

std::uint64_t payload_hash(const LengthTable& t) {
  std::uint64_t h = fnv1a(nullptr, 0);
  h = hash_vec(t.cutoff_kind.weights, h);
  h = hash_vec(t.horizon, h);
  h = hash_vec(t.classes.letters, h);
  h = hash_vec(t.classes.offsets, h);
  h = hash_vec(t.classes.powers, h);
  return hash_vec(t.values, h);
}

}  // namespace

void write_table_csv(const std::string& path, const LengthTable& t) {
  std::unique_ptr<FILE, int (*)(FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw Error("cannot write " + path);
  std::fprintf(f.get(), "class,wordlength,L1");
  for (int i = 1; i < t.d; ++i) std::fprintf(f.get(), ",La%d", i);
  std::fprintf(f.get(), ",LH\n");
  const Presentation& P = genus2();
  for (std::size_t k = 0; k < t.size(); ++k) {
    std::fprintf(f.get(), "%s,%d", P.format(t.classes.word(k)).c_str(), t.wordlength(k));
    for (int c = 0; c < t.stride(); ++c) std::fprintf(f.get(), ",%.17g", t.row(k)[c]);
    std::fprintf(f.get(), "\n");
  }
  if (std::ferror(f.get())) throw Error("write error on " + path);
}

void save_table_cache(const std::string& path, const LengthTable& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  Header h{};
  std::memcpy(h.magic, kMagic, 8);
  h.rep_hash = t.rep_hash;
  h.d = t.d;
  h.max_wordlength = t.max_wordlength;
  h.primitive_only = t.primitive_only;
  h.cutoff_kind = t.cutoff_kind.kind;
  h.cutoff_index = t.cutoff_kind.index;
  h.n_weights = static_cast<std::int32_t>(t.cutoff_kind.weights.size());
  h.cutoff = t.cutoff;
  h.classes_seen = t.classes_seen;
  h.n_classes = t.size();
  h.n_letters = t.classes.letters.size();
  os.write(reinterpret_cast<const char*>(&h), sizeof h);
  put(os, t.cutoff_kind.weights);
  put(os, t.horizon);
  put(os, t.classes.letters);
  put(os, t.classes.offsets);
  put(os, t.classes.powers);
  put(os, t.values);
  const std::uint64_t sum = payload_hash(t);
  os.write(reinterpret_cast<const char*>(&sum), sizeof sum);
  if (!os) throw Error("write error on " + path);
}

std::optional<LengthTable> load_table_cache(const std::string& path, std::uint64_t rep_hash, int max_wordlength,
                                            const TableOptions& opt, std::string* why) {
  auto miss = [&](const std::string& r) -> std::optional<LengthTable> {
    if (why) *why = r;
    return std::nullopt;
  };
  std::ifstream is(path, std::ios::binary);
  if (!is) return miss("no cache file");
  Header h{};
  if (!is.read(reinterpret_cast<char*>(&h), sizeof h) || std::memcmp(h.magic, kMagic, 8) != 0)
    return miss("not a table cache");
  if (h.rep_hash != rep_hash) return miss("representation hash differs");
  if (h.max_wordlength != max_wordlength || h.primitive_only != opt.primitive_only ||
      h.cutoff_kind != opt.cutoff_kind.kind || h.cutoff_index != opt.cutoff_kind.index)
    return miss("table parameters differ");
  // requested cutoff: NaN means horizon, stored as the value it settled to
  if (!std::isnan(opt.cutoff) && !(opt.cutoff == h.cutoff)) return miss("cutoff differs");
  if (h.d < 2 || h.d > 16 || h.n_weights < 0 || h.n_weights > 16 || h.n_classes > (1ull << 34))
    return miss("corrupt header");
  LengthTable t;
  t.d = h.d;
  t.rep_hash = h.rep_hash;
  t.max_wordlength = h.max_wordlength;
  t.primitive_only = h.primitive_only != 0;
  t.cutoff_kind.kind = static_cast<LengthFunctional::Kind>(h.cutoff_kind);
  t.cutoff_kind.index = h.cutoff_index;
  t.cutoff = h.cutoff;
  t.classes_seen = h.classes_seen;
  t.classes.max_wordlength = h.max_wordlength;
  if (!get(is, t.cutoff_kind.weights, static_cast<std::size_t>(h.n_weights)) ||
      !get(is, t.horizon, static_cast<std::size_t>(t.stride())) || !get(is, t.classes.letters, h.n_letters) ||
      !get(is, t.classes.offsets, h.n_classes + 1) || !get(is, t.classes.powers, h.n_classes) ||
      !get(is, t.values, h.n_classes * static_cast<std::size_t>(t.stride())))
    return miss("truncated cache");
  if (t.cutoff_kind.weights != opt.cutoff_kind.weights) return miss("table parameters differ");
  std::uint64_t sum = 0;
  if (!is.read(reinterpret_cast<char*>(&sum), sizeof sum) || sum != payload_hash(t)) return miss("checksum mismatch");
  if (t.classes.offsets.back() != h.n_letters) return miss("corrupt offsets");
  return t;
}

}  // namespace hitchin
