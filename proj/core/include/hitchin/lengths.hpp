#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hitchin/representation.hpp"
#include "hitchin/word.hpp"

namespace hitchin {

struct LengthFunctional {
  enum Kind { SpectralRadius, SimpleRoot, Hilbert, PositiveCombo } kind = SimpleRoot;
  int index = 1;                // simple root index, 1..d-1
  std::vector<double> weights;  // PositiveCombo: a_1..a_{d-1} >= 0, not all 0

  static LengthFunctional spectral_radius() { return {SpectralRadius, 0, {}}; }
  static LengthFunctional simple_root(int i) { return {SimpleRoot, i, {}}; }
  static LengthFunctional hilbert() { return {Hilbert, 0, {}}; }
  static LengthFunctional combo(std::vector<double> a) { return {PositiveCombo, 0, std::move(a)}; }
  void validate(int d) const;
  std::string name() const;
};

// log lambda_1 >= ... >= log lambda_d of the positive lift of R(w), each partial
// sum read off the dominant eigenvalue of an exterior power of R(w) or R(w)^{-1}
class SpectrumEvaluator {
 public:
  explicit SpectrumEvaluator(const Representation& R);
  int d() const { return d_; }
  // writes d log-eigenvalues; throws NotLoxodromic
  void log_eigenvalues(const Letter* w, int n, double* out) const;
  std::vector<double> log_eigenvalues(const Word& w) const;

 private:
  int d_;
  // products of k-th exterior powers of the letters, k = 1..d/2
  std::shared_ptr<const struct SpectrumKernels> kernels_;
};

struct Lengths {
  double L1 = 0;
  std::vector<double> La;  // La[i-1] = L_{alpha_i}
  double LH = 0;
};

Lengths lengths(const Representation& R, const Word& w);
Lengths lengths_from_log_eigenvalues(const double* l, int d);

// row layout: L1, La_1..La_{d-1}, LH
class LengthTable {
 public:
  int d = 0;
  std::uint64_t rep_hash = 0;
  int max_wordlength = 0;
  bool primitive_only = false;
  LengthFunctional cutoff_kind = LengthFunctional::simple_root(1);
  double cutoff = std::numeric_limits<double>::infinity();
  std::uint64_t classes_seen = 0;
  // per functional slot (same layout as a row): min over classes of the maximal word length
  std::vector<double> horizon;

  OrbitTable classes;
  std::vector<double> values;

  std::size_t size() const { return classes.size(); }
  int stride() const { return d + 1; }
  const double* row(std::size_t i) const { return values.data() + i * static_cast<std::size_t>(stride()); }
  double L1(std::size_t i) const { return row(i)[0]; }
  double La(std::size_t i, int k) const { return row(i)[k]; }
  double LH(std::size_t i) const { return row(i)[d]; }
  double value(std::size_t i, const LengthFunctional& f) const;
  double horizon_of(const LengthFunctional& f) const;
  int wordlength(std::size_t i) const { return classes.length(i); }
};

struct TableOptions {
  LengthFunctional cutoff_kind = LengthFunctional::simple_root(1);
  // +inf keeps every class; NaN means "cut at the completeness horizon"
  double cutoff = std::numeric_limits<double>::infinity();
  bool primitive_only = false;
  std::size_t cap = 20'000'000;
};

// Streams the classes up to max_wordlength; stores those passing the cutoff.
LengthTable build_length_table(const Representation& R, int max_wordlength, const TableOptions& opt = {});
// Lengths of R on exactly the classes of `base` (same order).
LengthTable evaluate_on(const Representation& R, const LengthTable& base);
LengthTable evaluate_on(const Representation& R, const OrbitTable& classes, int max_wordlength);

struct EntropyEstimate {
  double h = 0;
  double t_min = 0, t_max = 0;  // regression window
  double residual = 0;          // rms of the fit
  std::size_t classes = 0;      // #R(t_max)
  std::vector<double> T;        // count profile
  std::vector<double> count;
};

// least-squares slope of log #R(T) over the top half of [T at 500th class, horizon]
EntropyEstimate entropy(const LengthTable& table, const LengthFunctional& f, std::size_t min_classes = 500);

struct PressureEstimate {
  double value = 0;
  std::size_t count = 0;
  double value_prev = 0;  // at the previous window T - dT
  double tail = 0;        // |value - value_prev|
};

// (1/#R) sum over L_ai(rho) <= T of L_ai(eta)/L_ai(rho)
PressureEstimate pressure_intersection(const LengthTable& rho, const LengthTable& eta, int i, double T,
                                       double dT = 0.5);
// <mu_T | L_eta> / <mu_T | L_rho> with mu_T = sum delta_gamma / L_a1(rho(gamma))
double bm_pressure_intersection(const LengthTable& rho, const LengthTable& eta, double T);

struct PressureForm {
  int root = 1;
  double h = 0;
  Mat H;                   // Richardson-extrapolated Hessian
  Mat H_coarse, H_fine;    // at h and h/2
  Vec eigenvalues;         // ascending
  double threshold = 0;    // eps * max |eigenvalue|
  int near_zero = 0;
  double asymmetry = 0;    // |H - H^T| / |H| before symmetrization
};

struct HessianOptions {
  double h = 0.02;
  double eps = 1e-3;
  int threads = 1;
};

// Second differences of (u,v) -> I_ai(R, deform(R, u e_j + v e_k)) over the
// classes of `table` (its cutoff defines R(T)).
PressureForm pressure_hessian(const Representation& R, int i, const TangentChart& chart, const LengthTable& table,
                              double T, const HessianOptions& opt = {});

// d L_{a_i}(R(gamma)) along chart direction k, analytically
Mat length_derivatives(const Representation& R, const TangentChart& chart, const std::vector<Word>& classes,
                       int i = 1);
struct RankReport {
  int rank = 0;
  Vec singular_values;
  double threshold = 0;
};
RankReport cotangent_rank(const Representation& R, const TangentChart& chart, const std::vector<Word>& classes,
                          int i = 1, double rel_tol = 1e-6);

struct GapFit {
  std::vector<double> B, C;     // per simple root: log(l_i/l_{i+1}) >= B l(gamma) - C
  std::vector<double> margin;   // min over classes of the gap itself
  bool pass = false;
};
GapFit anosov_gap_fit(const LengthTable& table);

// CSV with columns class, wordlength, L1, La1.., LH
void write_table_csv(const std::string& path, const LengthTable& t);
// binary cache keyed by (rep hash, parameters); nullopt on miss or corruption
void save_table_cache(const std::string& path, const LengthTable& t);
std::optional<LengthTable> load_table_cache(const std::string& path, std::uint64_t rep_hash, int max_wordlength,
                                            const TableOptions& opt, std::string* why = nullptr);

}  // namespace hitchin
