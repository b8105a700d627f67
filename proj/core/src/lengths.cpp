#include "hitchin/lengths.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <thread>

#include "hitchin/errors.hpp"

namespace hitchin {

namespace {

// log of the spectral radius: eigenvector by repeated squaring, eigenvalue by
// one multiplication, dense eigensolver only when the residual test fails
template <typename M>
double log_rho(const M& A) {
  using V = Eigen::Matrix<double, M::RowsAtCompileTime, 1>;
  const double mx = A.cwiseAbs().maxCoeff();
  if (!(mx > 0) || !std::isfinite(mx)) throw NotLoxodromic("zero or non-finite image matrix");
  M B = A / mx;
  for (int it = 0; it < 8; ++it) {
    B = (B * B).eval();
    const double s = B.cwiseAbs().maxCoeff();
    if (!(s > 0) || !std::isfinite(s)) break;
    B /= s;
  }
  Eigen::Index col = 0;
  B.colwise().squaredNorm().maxCoeff(&col);
  V v = B.col(col);
  const double nv = v.norm();
  if (nv > 0 && std::isfinite(nv)) {
    v /= nv;
    const V w = (A / mx) * v;
    const double lam = v.dot(w);
    if (std::abs(lam) > 0 && (w - lam * v).norm() <= 1e-11 * std::abs(lam)) return std::log(std::abs(lam)) + std::log(mx);
  }
  return std::log(spectral_radius(Mat(A / mx))) + std::log(mx);
}

std::vector<std::array<Mat, 8>> exterior_tables(const Representation& R) {
  std::vector<std::array<Mat, 8>> ext;
  for (int k = 1; k <= R.d() / 2; ++k) {
    std::array<Mat, 8> t;
    for (int x = 0; x < 8; ++x) t[x] = exterior_power(R.letter(static_cast<Letter>(x)), k);
    ext.push_back(t);
  }
  return ext;
}

struct ProductKernel {
  virtual ~ProductKernel() = default;
  // log rho of the product along w, and along w reversed with inverted letters
  virtual double forward(const Letter* w, int n) const = 0;
  virtual double backward(const Letter* w, int n) const = 0;
};

template <int N>
struct FixedProduct final : ProductKernel {
  using M = Eigen::Matrix<double, N, N>;
  std::array<M, 8> L;
  explicit FixedProduct(const std::array<Mat, 8>& t) {
    for (int x = 0; x < 8; ++x) L[x] = t[x];
  }
  double forward(const Letter* w, int n) const override {
    M P = L[w[0]];
    for (int i = 1; i < n; ++i) P = (P * L[w[i]]).eval();
    return log_rho(P);
  }
  double backward(const Letter* w, int n) const override {
    M P = L[inv(w[n - 1])];
    for (int i = n - 2; i >= 0; --i) P = (P * L[inv(w[i])]).eval();
    return log_rho(P);
  }
};

struct DynProduct final : ProductKernel {
  std::array<Mat, 8> L;
  explicit DynProduct(const std::array<Mat, 8>& t) : L(t) {}
  double forward(const Letter* w, int n) const override {
    Mat P = L[w[0]];
    for (int i = 1; i < n; ++i) P = P * L[w[i]];
    return log_rho(P);
  }
  double backward(const Letter* w, int n) const override {
    Mat P = L[inv(w[n - 1])];
    for (int i = n - 2; i >= 0; --i) P = P * L[inv(w[i])];
    return log_rho(P);
  }
};

std::unique_ptr<ProductKernel> make_kernel(const std::array<Mat, 8>& t) {
  switch (t[0].rows()) {
    case 2:
      return std::make_unique<FixedProduct<2>>(t);
    case 3:
      return std::make_unique<FixedProduct<3>>(t);
    case 4:
      return std::make_unique<FixedProduct<4>>(t);
    case 6:
      return std::make_unique<FixedProduct<6>>(t);
    default:
      return std::make_unique<DynProduct>(t);
  }
}

struct Neumaier {
  double s = 0, c = 0;
  void add(double x) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

}  // namespace

// ---------------------------------------------------------------------------

void LengthFunctional::validate(int d) const {
  switch (kind) {
    case SimpleRoot:
      if (index < 1 || index > d - 1) throw DomainError("simple root index must lie in 1..d-1");
      break;
    case PositiveCombo: {
      if (static_cast<int>(weights.size()) != d - 1) throw DomainError("positive combination needs d-1 weights");
      bool any = false;
      for (double a : weights) {
        if (a < 0) throw DomainError("positive combination weights must be >= 0");
        any = any || a > 0;
      }
      if (!any) throw DomainError("positive combination weights are all zero");
      break;
    }
    default:
      break;
  }
}

std::string LengthFunctional::name() const {
  switch (kind) {
    case SpectralRadius:
      return "L1";
    case SimpleRoot:
      return "La" + std::to_string(index);
    case Hilbert:
      return "LH";
    case PositiveCombo: {
      std::string s = "combo(";
      for (std::size_t i = 0; i < weights.size(); ++i) s += (i ? "," : "") + std::to_string(weights[i]);
      return s + ")";
    }
  }
  return "?";
}

struct SpectrumKernels {
  std::vector<std::unique_ptr<ProductKernel>> k;
};

SpectrumEvaluator::SpectrumEvaluator(const Representation& R) : d_(R.d()) {
  auto ks = std::make_shared<SpectrumKernels>();
  for (const auto& t : exterior_tables(R)) ks->k.push_back(make_kernel(t));
  kernels_ = std::move(ks);
}

void SpectrumEvaluator::log_eigenvalues(const Letter* w, int n, double* out) const {
  if (n < 1) throw DomainError("identity has no loxodromic spectrum");
  const int d = d_;
  const int K = d / 2;
  // top partial sums S_k = log(l_1...l_k), bottom B_k = log(l_{d-k+1}...l_d)
  double S[4] = {0, 0, 0, 0}, Bt[4] = {0, 0, 0, 0};
  for (int k = 1; k <= K; ++k) {
    const ProductKernel& P = *kernels_->k[static_cast<std::size_t>(k - 1)];
    const double f = P.forward(w, n), b = P.backward(w, n);
    S[k - 1] = f;
    Bt[k - 1] = -b;
  }
  for (int k = 1; k <= K; ++k) {
    out[k - 1] = S[k - 1] - (k > 1 ? S[k - 2] : 0.0);
    out[d - k] = Bt[k - 1] - (k > 1 ? Bt[k - 2] : 0.0);
  }
  if (d % 2) {
    double s = 0;
    for (int k = 0; k < d; ++k)
      if (k != K) s += out[k];
    out[K] = -s;
  }
  for (int k = 0; k + 1 < d; ++k)
    if (!(out[k] - out[k + 1] > 1e-9))
      throw NotLoxodromic("eigenvalue moduli not distinct in word of length " + std::to_string(n));
}

std::vector<double> SpectrumEvaluator::log_eigenvalues(const Word& w) const {
  std::vector<double> out(static_cast<std::size_t>(d_));
  log_eigenvalues(w.data(), static_cast<int>(w.size()), out.data());
  return out;
}

Lengths lengths_from_log_eigenvalues(const double* l, int d) {
  Lengths L;
  L.L1 = l[0];
  for (int i = 0; i + 1 < d; ++i) L.La.push_back(l[i] - l[i + 1]);
  L.LH = l[0] - l[d - 1];
  return L;
}

Lengths lengths(const Representation& R, const Word& w) {
  const SpectrumEvaluator ev(R);
  const std::vector<double> l = ev.log_eigenvalues(w);
  return lengths_from_log_eigenvalues(l.data(), R.d());
}

// ---------------------------------------------------------------------------

double LengthTable::value(std::size_t i, const LengthFunctional& f) const {
  const double* r = row(i);
  switch (f.kind) {
    case LengthFunctional::SpectralRadius:
      return r[0];
    case LengthFunctional::SimpleRoot:
      return r[f.index];
    case LengthFunctional::Hilbert:
      return r[d];
    case LengthFunctional::PositiveCombo: {
      double s = 0;
      for (int k = 0; k + 1 < d; ++k) s += f.weights[static_cast<std::size_t>(k)] * r[k + 1];
      return s;
    }
  }
  return 0;
}

double LengthTable::horizon_of(const LengthFunctional& f) const {
  if (horizon.empty()) return std::numeric_limits<double>::quiet_NaN();
  switch (f.kind) {
    case LengthFunctional::SpectralRadius:
      return horizon[0];
    case LengthFunctional::SimpleRoot:
      return horizon[static_cast<std::size_t>(f.index)];
    case LengthFunctional::Hilbert:
      return horizon[static_cast<std::size_t>(d)];
    case LengthFunctional::PositiveCombo: {
      // sum of minima bounds the minimum of the sum from below
      double s = 0;
      for (int k = 0; k + 1 < d; ++k) s += f.weights[static_cast<std::size_t>(k)] * horizon[static_cast<std::size_t>(k + 1)];
      return s;
    }
  }
  return 0;
}

namespace {

void fill_row(const SpectrumEvaluator& ev, const Letter* w, int n, double* row) {
  double l[8];
  ev.log_eigenvalues(w, n, l);
  const int d = ev.d();
  row[0] = l[0];
  for (int i = 0; i + 1 < d; ++i) row[i + 1] = l[i] - l[i + 1];
  row[d] = l[0] - l[d - 1];
}

double row_value(const double* r, int d, const LengthFunctional& f) {
  switch (f.kind) {
    case LengthFunctional::SpectralRadius:
      return r[0];
    case LengthFunctional::SimpleRoot:
      return r[f.index];
    case LengthFunctional::Hilbert:
      return r[d];
    case LengthFunctional::PositiveCombo: {
      double s = 0;
      for (int k = 0; k + 1 < d; ++k) s += f.weights[static_cast<std::size_t>(k)] * r[k + 1];
      return s;
    }
  }
  return 0;
}

// completeness bound of `t` for functional f: horizon, and the cutoff when it is on f
double covered_up_to(const LengthTable& t, const LengthFunctional& f) {
  double T = t.horizon_of(f);
  const bool same = t.cutoff_kind.kind == f.kind && t.cutoff_kind.index == f.index &&
                    t.cutoff_kind.weights == f.weights;
  if (std::isfinite(t.cutoff)) {
    if (!same) return -std::numeric_limits<double>::infinity();
    T = std::min(T, t.cutoff);
  }
  return T;
}

}  // namespace

LengthTable build_length_table(const Representation& R, int max_wordlength, const TableOptions& opt) {
  if (max_wordlength < 1) throw DomainError("max_wordlength must be at least 1");
  opt.cutoff_kind.validate(R.d());
  const int d = R.d();
  const int stride = d + 1;
  LengthTable t;
  t.d = d;
  t.rep_hash = R.hash();
  t.max_wordlength = max_wordlength;
  t.primitive_only = opt.primitive_only;
  t.cutoff_kind = opt.cutoff_kind;
  t.classes.max_wordlength = max_wordlength;
  t.horizon.assign(static_cast<std::size_t>(stride), std::numeric_limits<double>::infinity());
  const bool auto_cut = std::isnan(opt.cutoff);
  double bound = auto_cut ? std::numeric_limits<double>::infinity() : opt.cutoff;
  const SpectrumEvaluator ev(R);
  std::vector<double> row(static_cast<std::size_t>(stride));
  for_each_class(genus2(), max_wordlength, [&](const Letter* w, int n, int power) {
    ++t.classes_seen;
    if (opt.primitive_only && power > 1) return;
    fill_row(ev, w, n, row.data());
    const double v = row_value(row.data(), d, opt.cutoff_kind);
    if (n == max_wordlength) {
      for (int k = 0; k < stride; ++k) t.horizon[static_cast<std::size_t>(k)] = std::min(t.horizon[static_cast<std::size_t>(k)], row[static_cast<std::size_t>(k)]);
      if (auto_cut) bound = std::min(bound, v);
    }
    if (v > bound) return;
    if (t.classes.size() >= opt.cap)
      throw ResourceCap("build_length_table: more than " + std::to_string(opt.cap) +
                        " stored classes; lower the cutoff or the word length");
    t.classes.push(w, n, power);
    t.values.insert(t.values.end(), row.begin(), row.end());
  });
  t.cutoff = bound;
  if (auto_cut) {
    // drop what was stored before the bound settled
    LengthTable f = t;
    f.classes = OrbitTable{};
    f.classes.max_wordlength = max_wordlength;
    f.values.clear();
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (row_value(t.row(i), d, opt.cutoff_kind) > bound) continue;
      f.classes.push(t.classes.data(i), t.classes.length(i), t.classes.powers[i]);
      f.values.insert(f.values.end(), t.row(i), t.row(i) + stride);
    }
    return f;
  }
  return t;
}

LengthTable evaluate_on(const Representation& R, const LengthTable& base) {
  if (R.d() != base.d) throw ContractViolation("evaluate_on: dimension differs from the base table");
  LengthTable t = base;
  t.rep_hash = R.hash();
  t.horizon.clear();
  const SpectrumEvaluator ev(R);
  const int stride = t.stride();
  for (std::size_t i = 0; i < t.size(); ++i)
    fill_row(ev, t.classes.data(i), t.classes.length(i), t.values.data() + i * static_cast<std::size_t>(stride));
  return t;
}

LengthTable evaluate_on(const Representation& R, const OrbitTable& classes, int max_wordlength) {
  LengthTable t;
  t.d = R.d();
  t.rep_hash = R.hash();
  t.max_wordlength = max_wordlength;
  t.classes = classes;
  t.values.resize(classes.size() * static_cast<std::size_t>(t.stride()));
  const SpectrumEvaluator ev(R);
  for (std::size_t i = 0; i < classes.size(); ++i)
    fill_row(ev, classes.data(i), classes.length(i), t.values.data() + i * static_cast<std::size_t>(t.stride()));
  return t;
}

// ---------------------------------------------------------------------------

EntropyEstimate entropy(const LengthTable& table, const LengthFunctional& f, std::size_t min_classes) {
  f.validate(table.d);
  const double cover = covered_up_to(table, f);
  if (!(cover > 0)) throw ContractViolation("entropy: table is not complete for " + f.name());
  std::vector<double> v;
  v.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double x = table.value(i, f);
    if (!(x > 0)) throw DomainError("entropy: nonpositive length value");
    if (x <= cover) v.push_back(x);
  }
  std::sort(v.begin(), v.end());
  if (v.size() < min_classes)
    throw DomainError("entropy: window too short (" + std::to_string(v.size()) + " classes below the horizon " +
                      std::to_string(cover) + ", need " + std::to_string(min_classes) + ")");
  EntropyEstimate e;
  const double t0 = v[min_classes - 1];
  e.t_max = cover;
  e.t_min = 0.5 * (t0 + cover);
  if (!(e.t_max > e.t_min)) throw DomainError("entropy: window too short");
  constexpr int kSamples = 101;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int k = 0; k < kSamples; ++k) {
    const double T = e.t_min + (e.t_max - e.t_min) * k / (kSamples - 1);
    const double c = static_cast<double>(std::upper_bound(v.begin(), v.end(), T) - v.begin());
    e.T.push_back(T);
    e.count.push_back(c);
    const double y = std::log(c);
    sx += T;
    sy += y;
    sxx += T * T;
    sxy += T * y;
  }
  const double n = kSamples;
  e.h = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a = (sy - e.h * sx) / n;
  double rss = 0;
  for (int k = 0; k < kSamples; ++k) {
    const double r = std::log(e.count[static_cast<std::size_t>(k)]) - (a + e.h * e.T[static_cast<std::size_t>(k)]);
    rss += r * r;
  }
  e.residual = std::sqrt(rss / n);
  e.classes = static_cast<std::size_t>(e.count.back());
  return e;
}

namespace {

void check_same_classes(const LengthTable& a, const LengthTable& b) {
  if (a.size() != b.size() || a.d != b.d || a.classes.offsets != b.classes.offsets || a.classes.letters != b.classes.letters)
    throw ContractViolation("pressure intersection: tables are not on the same classes");
}

}  // namespace

PressureEstimate pressure_intersection(const LengthTable& rho, const LengthTable& eta, int i, double T, double dT) {
  check_same_classes(rho, eta);
  const LengthFunctional f = LengthFunctional::simple_root(i);
  f.validate(rho.d);
  const double cover = covered_up_to(rho, f);
  if (T > cover * (1 + 1e-12))
    throw ContractViolation("pressure_intersection: T = " + std::to_string(T) + " beyond table coverage " +
                            std::to_string(cover));
  Neumaier s, sp;
  std::size_t n = 0, np = 0;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double lr = rho.La(k, i);
    if (lr > T) continue;
    const double q = eta.La(k, i) / lr;
    s.add(q);
    ++n;
    if (lr <= T - dT) {
      sp.add(q);
      ++np;
    }
  }
  if (n == 0) throw DomainError("pressure_intersection: R(T) is empty");
  PressureEstimate p;
  p.count = n;
  p.value = s.value() / static_cast<double>(n);
  p.value_prev = np ? sp.value() / static_cast<double>(np) : std::numeric_limits<double>::quiet_NaN();
  p.tail = np ? std::abs(p.value - p.value_prev) : std::numeric_limits<double>::quiet_NaN();
  return p;
}

double bm_pressure_intersection(const LengthTable& rho, const LengthTable& eta, double T) {
  check_same_classes(rho, eta);
  const double cover = covered_up_to(rho, LengthFunctional::simple_root(1));
  if (T > cover * (1 + 1e-12)) throw ContractViolation("bm_pressure_intersection: T beyond table coverage");
  Neumaier num, den;
  for (std::size_t k = 0; k < rho.size(); ++k) {
    const double lr = rho.La(k, 1);
    if (lr > T) continue;
    const double w = 1.0 / lr;  // mass of delta_gamma in mu_T
    num.add(w * eta.La(k, 1));
    den.add(w * lr);
  }
  if (den.value() == 0) throw DomainError("bm_pressure_intersection: R(T) is empty");
  return num.value() / den.value();
}

// ---------------------------------------------------------------------------

PressureForm pressure_hessian(const Representation& R, int i, const TangentChart& chart, const LengthTable& table,
                              double T, const HessianOptions& opt) {
  const LengthFunctional f = LengthFunctional::simple_root(i);
  f.validate(R.d());
  if (table.rep_hash != R.hash()) throw ContractViolation("pressure_hessian: table was built for another representation");
  const double cover = covered_up_to(table, f);
  if (T > cover * (1 + 1e-12)) throw ContractViolation("pressure_hessian: T beyond table coverage");
  // R(T) once
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < table.size(); ++k)
    if (table.La(k, i) <= T) idx.push_back(k);
  if (idx.empty()) throw DomainError("pressure_hessian: R(T) is empty");
  const int n = chart.dim();

  auto I_at = [&](const Vec& v) {
    const Representation eta = deform(R, chart, v, 1.0);
    const SpectrumEvaluator ev(eta);
    double l[8];
    Neumaier s;
    for (std::size_t k : idx) {
      ev.log_eigenvalues(table.classes.data(k), table.classes.length(k), l);
      s.add((l[i - 1] - l[i]) / table.La(k, i));
    }
    return s.value() / static_cast<double>(idx.size());
  };

  // stencil points for one step size
  struct Point {
    int j, k, sj, sk;
  };
  std::vector<Point> pts;
  for (int j = 0; j < n; ++j) {
    pts.push_back({j, j, 1, 0});
    pts.push_back({j, j, -1, 0});
    for (int k = j + 1; k < n; ++k)
      for (int sj : {1, -1})
        for (int sk : {1, -1}) pts.push_back({j, k, sj, sk});
  }
  auto run = [&](double h) {
    std::vector<double> val(pts.size());
    std::vector<std::string> err(pts.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t p = lo; p < hi; ++p) {
        Vec v = Vec::Zero(n);
        v[pts[p].j] += pts[p].sj * h;
        if (pts[p].sk) v[pts[p].k] += pts[p].sk * h;
        try {
          val[p] = I_at(v);
        } catch (const Error& e) {
          err[p] = "direction (" + std::to_string(pts[p].j) + "," + std::to_string(pts[p].k) + ") step " +
                   std::to_string(h) + ": " + e.what();
        }
      }
    };
    const int th = std::max(1, opt.threads);
    const std::size_t chunk = (pts.size() + th - 1) / th;
    std::vector<std::thread> pool;
    for (int t = 1; t < th; ++t)
      pool.emplace_back(work, std::min(pts.size(), t * chunk), std::min(pts.size(), (t + 1) * chunk));
    work(0, std::min(pts.size(), chunk));
    for (auto& t : pool) t.join();
    for (const auto& e : err)
      if (!e.empty()) throw Error("pressure_hessian: " + e);
    Mat H = Mat::Zero(n, n);
    std::size_t p = 0;
    for (int j = 0; j < n; ++j) {
      const double fp = val[p++], fm = val[p++];
      H(j, j) = (fp + fm - 2.0) / (h * h);
      for (int k = j + 1; k < n; ++k) {
        const double fpp = val[p++], fpm = val[p++], fmp = val[p++], fmm = val[p++];
        H(j, k) = H(k, j) = (fpp - fpm - fmp + fmm) / (4 * h * h);
      }
    }
    return H;
  };
  PressureForm P;
  P.root = i;
  P.h = opt.h;
  P.H_coarse = run(opt.h);
  P.H_fine = run(opt.h / 2);
  P.H = (4.0 * P.H_fine - P.H_coarse) / 3.0;
  P.asymmetry = (P.H - P.H.transpose()).norm() / std::max(P.H.norm(), 1e-300);
  Eigen::SelfAdjointEigenSolver<Mat> es(P.H);
  P.eigenvalues = es.eigenvalues();
  P.threshold = opt.eps * P.eigenvalues.cwiseAbs().maxCoeff();
  P.near_zero = 0;
  for (int k = 0; k < n; ++k)
    if (std::abs(P.eigenvalues[k]) <= P.threshold) ++P.near_zero;
  return P;
}

// ---------------------------------------------------------------------------

Mat length_derivatives(const Representation& R, const TangentChart& chart, const std::vector<Word>& classes, int i) {
  LengthFunctional::simple_root(i).validate(R.d());
  const int d = R.d();
  const int n = chart.dim();
  Mat D(static_cast<Eigen::Index>(classes.size()), n);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const Word& w = classes[c];
    const int len = static_cast<int>(w.size());
    const EigenData E = eigen_real_sorted(R.image(w), R.image(inverse(w)));
    // prefix/suffix products along w
    std::vector<Mat> pre(static_cast<std::size_t>(len) + 1, Mat::Identity(d, d)), suf = pre;
    for (int p = 0; p < len; ++p) pre[p + 1] = pre[p] * R.letter(w[p]);
    for (int p = len; p-- > 0;) suf[p] = R.letter(w[p]) * suf[p + 1];
    const Mat M = pre[len];
    // d log lambda_j = f_j dM e_j / (f_j M e_j); collect G_s with dlog = sum_s <X_s, G_s>
    auto gradient = [&](int j) {
      std::array<Mat, 4> G;
      for (auto& g : G) g = Mat::Zero(d, d);
      const Vec e = E.vectors.col(j);
      const Eigen::RowVectorXd fr = E.dual.row(j);
      const double mu = fr * M * e;
      for (int p = 0; p < len; ++p) {
        const Letter x = w[p];
        // positive letter: pre_{p+1} X suf_{p+1}; inverse: -pre_p X suf_p
        const Mat& l = (x & 1) ? pre[p] : pre[p + 1];
        const Mat& r = (x & 1) ? suf[p] : suf[p + 1];
        const Vec a = l.transpose() * fr.transpose();
        const Vec b = r * e;
        G[x >> 1] += ((x & 1) ? -1.0 : 1.0) * (a * b.transpose()) / mu;
      }
      return G;
    };
    const auto Gi = gradient(i - 1), Gj = gradient(i);
    for (int k = 0; k < n; ++k) {
      double s = 0;
      for (int q = 0; q < 4; ++q)
        s += ((Gi[q] - Gj[q]).array() * chart.directions[static_cast<std::size_t>(k)][q].array()).sum();
      D(static_cast<Eigen::Index>(c), k) = s;
    }
  }
  return D;
}

RankReport cotangent_rank(const Representation& R, const TangentChart& chart, const std::vector<Word>& classes, int i,
                          double rel_tol) {
  const Mat D = length_derivatives(R, chart, classes, i);
  Eigen::JacobiSVD<Mat> svd(D);
  RankReport r;
  r.singular_values = svd.singularValues();
  r.threshold = rel_tol * (r.singular_values.size() ? r.singular_values[0] : 0.0);
  for (Eigen::Index k = 0; k < r.singular_values.size(); ++k)
    if (r.singular_values[k] > r.threshold) ++r.rank;
  return r;
}

GapFit anosov_gap_fit(const LengthTable& table) {
  if (table.size() == 0) throw DomainError("anosov_gap_fit: empty table");
  const int d = table.d;
  GapFit g;
  g.pass = true;
  for (int i = 1; i < d; ++i) {
    std::map<int, double> minima;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < table.size(); ++k) {
      const int l = table.wordlength(k);
      const double v = table.La(k, i);
      auto it = minima.find(l);
      if (it == minima.end())
        minima[l] = v;
      else
        it->second = std::min(it->second, v);
      margin = std::min(margin, v);
    }
    // slope of the per-length minima, then the intercept that makes it a bound
    double B = 0;
    if (minima.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (auto [l, v] : minima) {
        sx += l;
        sy += v;
        sxx += double(l) * l;
        sxy += l * v;
      }
      const double n = static_cast<double>(minima.size());
      B = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    double C = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < table.size(); ++k) C = std::max(C, B * table.wordlength(k) - table.La(k, i));
    g.B.push_back(B);
    g.C.push_back(C);
    g.margin.push_back(margin);
    g.pass = g.pass && B > 0 && margin > 0;
  }
  return g;
}

}  // namespace hitchin
