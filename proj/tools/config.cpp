#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <variant>

namespace hitchin::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T x{};
  is >> x;
  if (!is || !is.eof()) {
    if constexpr (std::is_same_v<T, double>) {
      if (v == "nan" || v == "auto") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ConfigError("config key '" + key + "': cannot parse '" + v + "'");
  }
  return x;
}

// one entry per key; setters and the json dump go through this table
using Member = std::variant<int ExperimentConfig::*, double ExperimentConfig::*, std::uint64_t ExperimentConfig::*,
                            std::string ExperimentConfig::*>;
struct Field {
  const char* key;
  Member ptr;
};

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> f = {
      {"d", &C::d}, {"construction", &C::construction}, {"deform_seed", &C::deform_seed},
      {"deform_step", &C::deform_step}, {"rep_file", &C::rep_file}, {"max_wordlength", &C::max_wordlength},
      {"mesh", &C::mesh}, {"mesh_wordlength", &C::mesh_wordlength}, {"T", &C::T}, {"dT", &C::dT},
      {"root", &C::root}, {"word", &C::word}, {"word2", &C::word2}, {"pairs", &C::pairs},
      {"pair_wordlength", &C::pair_wordlength}, {"n_max", &C::n_max}, {"samples", &C::samples},
      {"chi_configs", &C::chi_configs}, {"eps", &C::eps}, {"hessian_h", &C::hessian_h},
      {"prune_margin", &C::prune_margin}, {"mc_samples", &C::mc_samples}, {"slack", &C::slack},
      {"identity_tol", &C::identity_tol}, {"volume_tol", &C::volume_tol}, {"intersect_tol", &C::intersect_tol},
      {"entropy_lo", &C::entropy_lo}, {"entropy_hi", &C::entropy_hi}, {"cv_max", &C::cv_max},
      {"transversality_min", &C::transversality_min}, {"trace_min", &C::trace_min},
      {"ratio_tol", &C::ratio_tol}, {"seed", &C::seed}, {"threads", &C::threads}, {"precision", &C::precision},
      {"cache", &C::cache}, {"out", &C::out},
  };
  return f;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key '" + key + "': " + what);
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  for (const Field& f : fields())
    if (key == f.key) {
      std::visit(
          [&](auto m) {
            using T = std::remove_cvref_t<decltype(this->*m)>;
            if constexpr (std::is_same_v<T, std::string>) {
              this->*m = value;
            } else {
              // unsigned parses would wrap negative input
              require(value.empty() || value[0] != '-', key, "must not be negative");
              this->*m = parse_number<T>(key, value);
            }
          },
          f.ptr);
      return;
    }
  throw ConfigError("unknown config key '" + key + "'");
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> v;
    for (const Field& f : fields()) v.emplace_back(f.key);
    return v;
  }();
  return k;
}

void ExperimentConfig::validate() const {
  require(d >= 2 && d <= 4, "d", "must be 2, 3 or 4");
  require(construction == "fuchsian" || construction == "deform" || construction == "file", "construction",
          "must be fuchsian, deform or file");
  require(construction != "file" || !rep_file.empty(), "rep_file", "required when construction = file");
  require(deform_step > 0 && deform_step <= 0.1, "deform_step", "must be in (0, 0.1]");
  require(max_wordlength >= 1 && max_wordlength <= 14, "max_wordlength", "must be in 1..14");
  require(mesh >= 8 && mesh % 2 == 0, "mesh", "must be even and at least 8");
  require(mesh_wordlength >= 1 && mesh_wordlength <= 12, "mesh_wordlength", "must be in 1..12");
  require(std::isnan(T) || T > 0, "T", "must be positive or auto");
  require(dT > 0, "dT", "must be positive");
  require(root >= 1 && root < d, "root", "must be in 1..d-1");
  require(!word.empty(), "word", "must not be empty");
  require(pairs >= 1, "pairs", "must be positive");
  require(pair_wordlength >= 1 && pair_wordlength <= 6, "pair_wordlength", "must be in 1..6");
  require(n_max >= 1 && n_max <= 40, "n_max", "must be in 1..40");
  require(samples >= 1, "samples", "must be positive");
  require(chi_configs >= 1, "chi_configs", "must be positive");
  require(eps > 0 && eps < 1, "eps", "must be in (0, 1)");
  require(hessian_h > 0 && hessian_h <= 0.1, "hessian_h", "must be in (0, 0.1]");
  require(prune_margin >= 0, "prune_margin", "must be non-negative");
  require(slack >= 1, "slack", "must be at least 1");
  for (auto [k, v] : {std::pair{"identity_tol", identity_tol}, {"volume_tol", volume_tol},
                      {"intersect_tol", intersect_tol}, {"cv_max", cv_max}, {"transversality_min", transversality_min},
                      {"trace_min", trace_min}, {"ratio_tol", ratio_tol}})
    require(v > 0, k, "must be positive");
  require(entropy_lo < entropy_hi, "entropy_lo", "must be below entropy_hi");
  require(threads >= 1 && threads <= 256, "threads", "must be in 1..256");
  require(precision == "double" || precision == "extended", "precision", "must be double or extended");
  require(!out.empty(), "out", "must not be empty");
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  for (const Field& f : fields())
    std::visit(
        [&](auto m) {
          using T = std::remove_cvref_t<decltype(this->*m)>;
          if constexpr (std::is_same_v<T, double>) {
            if (std::isnan(this->*m)) {
              j[f.key] = "auto";
              return;
            }
          }
          j[f.key] = this->*m;
        },
        f.ptr);
  return j;
}

void apply_config_text(ExperimentConfig& c, const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ":" + std::to_string(n) + ": expected key = value");
    try {
      c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  ExperimentConfig c;
  apply_config_text(c, ss.str(), path);
  return c;
}

}  // namespace hitchin::cli
