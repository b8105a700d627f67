#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <hitchin/asymptotics.hpp>
#include <hitchin/cross_ratio.hpp>
#include <hitchin/currents.hpp>
#include <hitchin/errors.hpp>
#include <hitchin/lengths.hpp>

#include "config.hpp"
#include "suites.hpp"

using nlohmann::ordered_json;
namespace fs = std::filesystem;
using namespace hitchin;
using cli::ExperimentConfig;

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kRuntime = 3 };

struct Report {
  ordered_json body;
  ordered_json checks = ordered_json::object();
  void check(const std::string& name, bool ok) { checks[name] = ok; }
  bool pass() const {
    for (const auto& [k, v] : checks.items())
      if (!v.get<bool>()) return false;
    return true;
  }
};

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write " + p.string());
  f << s;
}

Representation make_rep(const ExperimentConfig& c) {
  if (c.construction == "file") {
    Representation R = load_representation(c.rep_file);
    if (R.d() != c.d) throw cli::ConfigError("config key 'd': does not match rep_file (d = " + std::to_string(R.d()) + ")");
    return R;
  }
  Representation R = d_fuchsian(c.d);
  if (c.construction == "deform") return random_deformation(R, c.deform_seed, c.deform_step);
  return R;
}

ordered_json rep_json(const Representation& R) {
  return {{"d", R.d()}, {"hash", hex(R.hash())}, {"provenance", R.provenance()},
          {"relator_residual", R.relator_residual()}};
}

// table cut at its completeness horizon on `cut`, through the cache when configured
LengthTable table_for(const ExperimentConfig& c, const Representation& R, const LengthFunctional& cut) {
  TableOptions o;
  o.cutoff_kind = cut;
  o.cutoff = std::numeric_limits<double>::quiet_NaN();
  fs::path file;
  if (!c.cache.empty()) {
    fs::create_directories(c.cache);
    file = fs::path(c.cache) / ("table-" + hex(R.hash()) + "-w" + std::to_string(c.max_wordlength) + "-" +
                                cut.name() + ".bin");
    std::string why;
    if (auto t = load_table_cache(file.string(), R.hash(), c.max_wordlength, o, &why)) {
      std::cerr << "table cache hit: " << file.string() << "\n";
      return *t;
    }
    if (fs::exists(file)) std::cerr << "warning: rebuilding table cache " << file << ": " << why << "\n";
  }
  LengthTable t = build_length_table(R, c.max_wordlength, o);
  if (!file.empty()) save_table_cache(file.string(), t);
  return t;
}

ordered_json table_json(const LengthTable& t) {
  ordered_json h = ordered_json::array();
  for (double x : t.horizon) h.push_back(x);
  return {{"classes", t.size()}, {"classes_seen", t.classes_seen}, {"max_wordlength", t.max_wordlength},
          {"cutoff_kind", t.cutoff_kind.name()}, {"cutoff", t.cutoff}, {"horizon", h}};
}

ordered_json estimate_json(const IntersectionEstimate& e) {
  return {{"value", e.value},
          {"n", e.n},
          {"coarse", e.coarse},
          {"delta", e.delta},
          {"pair_visits", e.pair_visits},
          {"monte_carlo", e.monte_carlo},
          {"pruning",
           {{"boxes", e.pruning.boxes},
            {"kept", e.pruning.kept},
            {"pruned", e.pruning.pruned},
            {"straddling", e.pruning.straddling},
            {"pruned_mass", e.pruning.pruned_mass},
            {"product_bound", e.pruning.product_bound}}}};
}

IntersectionEstimate estimate_from_json(const ordered_json& j) {
  IntersectionEstimate e;
  e.value = j.at("value");
  e.n = j.at("n");
  e.coarse = j.at("coarse").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("coarse").get<double>();
  e.delta = j.at("delta").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("delta").get<double>();
  e.pair_visits = j.at("pair_visits");
  e.monte_carlo = j.at("monte_carlo");
  const auto& p = j.at("pruning");
  e.pruning.boxes = p.at("boxes");
  e.pruning.kept = p.at("kept");
  e.pruning.pruned = p.at("pruned");
  e.pruning.straddling = p.at("straddling");
  e.pruning.pruned_mass = p.at("pruned_mass");
  e.pruning.product_bound = p.at("product_bound");
  return e;
}

IntersectOptions intersect_options(const ExperimentConfig& c) {
  IntersectOptions o;
  o.prune_margin = c.prune_margin;
  o.threads = c.threads;
  o.mc_samples = c.mc_samples;
  o.seed = c.seed;
  return o;
}

std::vector<BoundaryPoint> mesh_for(const ExperimentConfig& c) { return boundary_grid(c.mesh, c.mesh_wordlength); }

LimitMap limit_map(const ExperimentConfig& c, const Representation& R) {
  CrossRatioOptions o;
  o.extended = c.precision == "extended";
  return LimitMap(R, o);
}

// volume through the estimate cache; the grid itself is cheap and always rebuilt
IntersectionEstimate volume_of(const ExperimentConfig& c, const Representation& R, ordered_json& info,
                               const std::string& out_csv = "") {
  const auto mesh = mesh_for(c);
  const DiscreteCurrent omega = liouville_grid(limit_map(c, R), mesh);
  if (!out_csv.empty()) write_grid_csv(out_csv, omega);
  info["flagged_cells"] = omega.flagged.size();
  const IntersectOptions o = intersect_options(c);
  fs::path file;
  if (!c.cache.empty()) {
    fs::create_directories(c.cache);
    // cache status goes to stderr only, so reports do not depend on it
    std::ostringstream key;
    key << "volume-" << hex(R.hash()) << "-n" << c.mesh << "-w" << c.mesh_wordlength << "-m" << o.prune_margin
        << "-mc" << o.mc_samples << "-s" << o.seed << "-" << c.precision << ".json";
    file = fs::path(c.cache) / key.str();
    std::ifstream f(file);
    if (f) {
      try {
        const ordered_json j = ordered_json::parse(f);
        if (j.at("rep_hash") == hex(R.hash())) {
          std::cerr << "volume cache hit: " << file.string() << "\n";
          return estimate_from_json(j.at("estimate"));
        }
        std::cerr << "warning: stale volume cache " << file << "\n";
      } catch (const std::exception& e) {
        std::cerr << "warning: corrupt volume cache " << file << ": " << e.what() << "\n";
      }
    }
  }
  const IntersectionEstimate e = liouville_volume(omega, octagon(), o);
  if (!file.empty()) write_text(file, ordered_json{{"rep_hash", hex(R.hash())}, {"estimate", estimate_json(e)}}.dump(1));
  return e;
}

double resolve_T(const ExperimentConfig& c, const LengthTable& t, const LengthFunctional& f) {
  const double h = t.horizon_of(f);
  if (std::isnan(c.T)) return h;
  if (c.T > h) throw cli::ConfigError("config key 'T': " + std::to_string(c.T) + " exceeds the table horizon " +
                                      std::to_string(h) + "; raise max_wordlength");
  return c.T;
}

// ---- commands ----

Report cmd_build_rep(const ExperimentConfig& c, const fs::path& out) {
  const Representation R = make_rep(c);
  save_representation((out / "rep.txt").string(), R);
  Report r;
  r.body["representation"] = rep_json(R);
  r.check("relator_residual", R.relator_residual() <= c.identity_tol);
  return r;
}

Report cmd_table(const ExperimentConfig& c, const fs::path& out) {
  const Representation R = make_rep(c);
  Report r;
  const LengthTable t = table_for(c, R, LengthFunctional::simple_root(c.root));
  write_table_csv((out / "table.csv").string(), t);
  r.body["representation"] = rep_json(R);
  r.body["table"] = table_json(t);
  return r;
}

Report cmd_entropy(const ExperimentConfig& c, const fs::path& out) {
  const Representation R = make_rep(c);
  const LengthFunctional f = LengthFunctional::simple_root(c.root);
  const LengthTable t = table_for(c, R, f);
  const EntropyEstimate e = entropy(t, f);
  std::ostringstream csv;
  csv.precision(17);
  csv << "T,count\n";
  for (std::size_t i = 0; i < e.T.size(); ++i) csv << e.T[i] << "," << e.count[i] << "\n";
  write_text(out / "entropy.csv", csv.str());
  Report r;
  r.body["representation"] = rep_json(R);
  r.body["table"] = table_json(t);
  r.body["entropy"] = {{"functional", f.name()}, {"h", e.h},         {"t_min", e.t_min},
                       {"t_max", e.t_max},       {"residual", e.residual}, {"classes", e.classes}};
  r.check("entropy_in_band", e.h >= c.entropy_lo && e.h <= c.entropy_hi);
  return r;
}

Report cmd_intersect(const ExperimentConfig& c, const fs::path& out) {
  const Representation R = make_rep(c);
  const Word g = genus2().parse(c.word);
  const FundamentalDomain& F = octagon();
  const IntersectOptions o = intersect_options(c);
  Report r;
  r.body["representation"] = rep_json(R);
  const DiscreteCurrent dg = atomic_current({g}, {1.0}, F);
  if (!c.word2.empty()) {
    const DiscreteCurrent dh = atomic_current({genus2().parse(c.word2)}, {1.0}, F);
    const auto a = intersect(dg, dh, F, o), b = intersect(dh, dg, F, o);
    r.body["intersection"] = {{"mu", c.word}, {"nu", c.word2}, {"value", a.value}, {"reversed", b.value}};
    r.check("symmetric", std::abs(a.value - b.value) <= 1e-10);
    return r;
  }
  const DiscreteCurrent omega = liouville_grid(limit_map(c, R), mesh_for(c));
  write_grid_csv((out / "grid.csv").string(), omega);
  const auto a = intersect(dg, omega, F, o), b = intersect(omega, dg, F, o);
  const double lh = lengths(R, g).LH;
  r.body["intersection"] = estimate_json(a);
  r.body["intersection"]["mu"] = c.word;
  r.body["intersection"]["nu"] = "liouville";
  r.body["intersection"]["reversed"] = b.value;
  r.body["intersection"]["hilbert_length"] = lh;
  r.body["intersection"]["relative_error"] = a.value / lh - 1;
  r.check("matches_hilbert_length", std::abs(a.value / lh - 1) <= c.intersect_tol);
  r.check("symmetric", std::abs(a.value - b.value) <= 1e-10);
  return r;
}

Report cmd_volume(const ExperimentConfig& c, const fs::path& out) {
  const Representation R = make_rep(c);
  ordered_json info;
  const IntersectionEstimate e = volume_of(c, R, info, (out / "grid.csv").string());
  Report r;
  r.body["representation"] = rep_json(R);
  r.body["volume"] = estimate_json(e);
  r.body["volume"]["over_pi2"] = e.value / (M_PI * M_PI);
  r.body["volume"]["flagged_cells"] = info["flagged_cells"];
  r.check("pruning_bound", e.pruning.product_bound <= 1e-3 * std::abs(e.value));
  if (c.construction == "fuchsian") {
    // pi^2 |chi| scaled by (d-1)^2 at d-Fuchsian points
    const double expect = 2 * M_PI * M_PI * (c.d - 1) * (c.d - 1);
    r.body["volume"]["expected"] = expect;
    r.body["volume"]["relative_error"] = e.value / expect - 1;
    r.check("fuchsian_constant", std::abs(e.value / expect - 1) <= c.volume_tol);
  }
  return r;
}

Report cmd_pressure_hessian(const ExperimentConfig& c, const fs::path& out) {
  const Representation R = make_rep(c);
  const LengthFunctional f = LengthFunctional::simple_root(c.root);
  const LengthTable t = table_for(c, R, f);
  const double T = resolve_T(c, t, f);
  const TangentChart chart = tangent_chart(R);
  HessianOptions ho;
  ho.h = c.hessian_h;
  ho.eps = c.eps;
  ho.threads = c.threads;
  const PressureForm P = pressure_hessian(R, c.root, chart, t, T, ho);
  std::ostringstream csv;
  csv.precision(17);
  csv << "index,eigenvalue\n";
  ordered_json ev = ordered_json::array();
  for (int i = 0; i < P.eigenvalues.size(); ++i) {
    csv << i << "," << P.eigenvalues[i] << "\n";
    ev.push_back(P.eigenvalues[i]);
  }
  write_text(out / "pressure-hessian.csv", csv.str());
  const int conj = c.d * c.d - 1;
  int positive = 0;
  for (int i = 0; i < P.eigenvalues.size(); ++i) positive += P.eigenvalues[i] > P.threshold;
  Report r;
  r.body["representation"] = rep_json(R);
  r.body["table"] = table_json(t);
  r.body["hessian"] = {{"root", c.root},          {"T", T},
                       {"h", P.h},                {"eps", c.eps},
                       {"threshold", P.threshold}, {"near_zero", P.near_zero},
                       {"positive", positive},    {"conjugation_dim", conj},
                       {"asymmetry", P.asymmetry}, {"eigenvalues", ev}};
  if (c.root == 1) {
    r.check("near_zero_is_conjugation", P.near_zero == conj);
    r.check("rest_positive", positive == chart.dim() - conj);
  } else {
    r.check("near_zero_at_least_conjugation", P.near_zero >= conj);
  }
  return r;
}

Report cmd_verify7(const ExperimentConfig& c, const fs::path& out) {
  const Representation R = make_rep(c);
  const auto s = cli::verify_asymptotics(R, c.pairs, c.pair_wordlength, c.n_max, c.transversality_min, c.trace_min,
                                         c.ratio_tol);
  std::ostringstream csv;
  csv.precision(17);
  csv << "alpha,beta,min_det,min_trace,resolution_defect,target_power,target_single,err_power,err_single,"
         "rate_power,rate_single,gap_ratio,trace_route_error,skipped\n";
  for (const auto& p : s.rows)
    csv << p.alpha << "," << p.beta << "," << p.min_det << "," << p.min_trace << "," << p.resolution_defect << ","
        << p.target_power << "," << p.target_single << "," << p.err_power << "," << p.err_single << ","
        << p.rate_power << "," << p.rate_single << "," << p.gap_ratio << "," << p.trace_route_error << ","
        << p.skipped << "\n";
  write_text(out / "verify-7.csv", csv.str());
  Report r;
  r.body["representation"] = rep_json(R);
  r.body["suite"] = {{"pairs", s.rows.size()},     {"n_max", c.n_max},
                     {"min_det", s.min_det},       {"min_trace", s.min_trace},
                     {"max_limit_error", s.max_err}, {"max_resolution_defect", s.max_resolution_defect}};
  r.check("transversality", s.transversality_ok);
  r.check("traces_nonzero", s.traces_ok);
  r.check("ratio_limits", s.limits_ok);
  r.check("resolution_of_identity", s.max_resolution_defect <= 1e-6);
  return r;
}

Report cmd_verify4(const ExperimentConfig& c, const fs::path&) {
  const Representation R = make_rep(c);
  cli::CrossRatioSuiteOptions o;
  o.samples = c.samples;
  o.chi_configs = c.chi_configs;
  o.seed = c.seed;
  o.mesh_wordlength = std::min(c.mesh_wordlength, 6);
  o.extended = c.precision == "extended";
  const auto s = cli::verify_cross_ratio(R, o);
  Report r;
  r.body["representation"] = rep_json(R);
  r.body["suite"] = {{"quadruples", s.quadruples}, {"flagged", s.flagged},
                     {"min_b", s.min_b},           {"cocycle", s.cocycle},
                     {"scale_invariance", s.scale_invariance}, {"symmetry", s.symmetry},
                     {"lh_identity", s.lh_identity}, {"chi_top_relative", s.chi_top},
                     {"chi_sub_relative", s.chi_sub}};
  r.check("positivity", s.min_b > 1);
  r.check("cocycle", s.cocycle <= c.identity_tol);
  r.check("scale_invariance", s.scale_invariance <= c.identity_tol);
  r.check("symmetry", s.symmetry <= c.identity_tol);
  r.check("hilbert_identity", s.lh_identity <= c.identity_tol);
  r.check("chi_top_vanishes", s.chi_top <= c.identity_tol);
  r.check("chi_sub_nonzero", s.chi_sub > c.trace_min);
  return r;
}

Report cmd_rigidity(const ExperimentConfig& c, const fs::path&) {
  const Representation rho = make_rep(c);
  const Representation eta = random_deformation(rho, c.deform_seed + 1, c.deform_step);
  ordered_json vi;
  const LengthTable tr = table_for(c, rho, LengthFunctional::simple_root(1));
  const LengthTable te = evaluate_on(eta, tr);
  const double vr = volume_of(c, rho, vi).value;
  const double ve = volume_of(c, eta, vi).value;
  const RigidityReport d = rigidity_diagnostic(tr, te, vr, ve, c.slack);
  Report r;
  r.body["rho"] = rep_json(rho);
  r.body["eta"] = rep_json(eta);
  r.body["rigidity"] = {{"classes", d.classes},     {"inf_ratio", d.inf_ratio}, {"sup_ratio", d.sup_ratio},
                        {"volume_rho", vr},         {"volume_eta", ve},         {"volume_ratio", d.volume_ratio},
                        {"slack", d.slack}};
  r.check("lower", d.lower_ok);
  r.check("upper", d.upper_ok);
  return r;
}

using Command = Report (*)(const ExperimentConfig&, const fs::path&);

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> c = {
      {"build-rep", cmd_build_rep}, {"table", cmd_table},     {"entropy", cmd_entropy},
      {"intersect", cmd_intersect}, {"volume", cmd_volume},   {"pressure-hessian", cmd_pressure_hessian},
      {"verify-7", cmd_verify7},    {"verify-4", cmd_verify4}, {"rigidity", cmd_rigidity}};
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hitchin component numerics: length spectra, currents, pressure forms"};
  app.require_subcommand(0, 1);
  std::string config_path, out_dir, precision;
  int threads = 0;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--out", out_dir, "report directory (overrides config key out)");
  app.add_option("--threads", threads, "worker threads (overrides config key threads)");
  app.add_option("--precision", precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
  app.add_option("--set", sets, "override a config key, key=value (repeatable)");
  static const std::map<std::string, std::string> about = {
      {"build-rep", "construct the representation and save it"},
      {"table", "length table up to max_wordlength, CSV"},
      {"entropy", "regression entropy of L_alpha_root"},
      {"intersect", "i(delta_word, omega) or i(delta_word, delta_word2)"},
      {"volume", "Liouville volume on the mesh"},
      {"pressure-hessian", "Hessian of the pressure intersection and its near-zero count"},
      {"verify-7", "transversality, projection traces and trace ratio limits"},
      {"verify-4", "cross ratio positivity, cocycle, chi determinants"},
      {"rigidity", "length ratio sandwich against a deformation"}};
  std::string chosen;
  for (const auto& [name, fn] : commands()) {
    auto* sub = app.add_subcommand(name, about.at(name));
    sub->fallthrough();
    sub->callback([&chosen, n = name] { chosen = n; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }
  if (chosen.empty()) {
    std::cerr << app.help();
    return kUsage;
  }
  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = cli::load_config(config_path);
    for (const auto& s : sets) cli::apply_config_text(cfg, s, "--set");
    if (!out_dir.empty()) cfg.out = out_dir;
    if (threads > 0) cfg.threads = threads;
    if (!precision.empty()) cfg.precision = precision;
    cfg.validate();
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  }
  if (config_path.empty() && sets.empty()) {
    std::cerr << "usage error: no configuration given (use --config or --set)\n" << app.help();
    return kUsage;
  }
  const fs::path out(cfg.out);
  Command fn = nullptr;
  for (const auto& [name, f] : commands())
    if (name == chosen) fn = f;
  try {
    fs::create_directories(out);
    Report r = fn(cfg, out);
    ordered_json j;
    j["command"] = chosen;
    j["config"] = cfg.to_json();
    j["seed"] = cfg.seed;
    j["tolerances"] = {{"identity", cfg.identity_tol},        {"volume", cfg.volume_tol},
                       {"intersect", cfg.intersect_tol},      {"entropy", {cfg.entropy_lo, cfg.entropy_hi}},
                       {"cv_max", cfg.cv_max},                {"transversality_min", cfg.transversality_min},
                       {"trace_min", cfg.trace_min},          {"ratio", cfg.ratio_tol},
                       {"eps", cfg.eps}};
    for (auto& [k, v] : r.body.items()) j[k] = v;
    j["checks"] = r.checks;
    j["pass"] = r.pass();
    write_text(out / (chosen + ".json"), j.dump(2) + "\n");
    std::cout << chosen << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << (out / (chosen + ".json")).string() << ")\n";
    return r.pass() ? kPass : kFail;
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << chosen << ": error: " << e.what() << "\n";
    return kRuntime;
  }
}
