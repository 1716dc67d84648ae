#include "bianchi/report.hpp"

#include <gmp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "bianchi/congruence.hpp"

namespace bianchi {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string snf_method_name(SnfMethod m) { return m == SnfMethod::Modular ? "modular" : "euclidean"; }

SnfMethod snf_method_from_string(const std::string& s) {
  if (s == "modular") return SnfMethod::Modular;
  if (s == "euclidean") return SnfMethod::Euclidean;
  throw ConfigError("unknown snf_method '" + s + "'");
}

bool has_variant(const RunConfig& c, LatticeKind k) {
  return std::find(c.variants.begin(), c.variants.end(), k) != c.variants.end();
}

AbelianGroup power(const AbelianGroup& g, size_t k) {
  AbelianGroup out;
  out.betti = g.betti * k;
  for (const auto& d : g.torsion)
    for (size_t i = 0; i < k; ++i) out.torsion.push_back(d);
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

std::string level_tag(const std::string& ideal) {
  std::string out;
  for (char c : ideal) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += c;
    else if (c == ',' || c == '+' || c == '-' || c == '*')
      out += c == ',' ? '_' : (c == '+' ? 'p' : (c == '-' ? 'm' : 'x'));
  }
  return out.empty() ? "ideal" : out;
}

std::string fmt_double(double x) {
  if (!std::isfinite(x)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

json opt_to_json(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

}  // namespace

LatticeKind lattice_kind_from_string(const std::string& s) {
  if (s == "standard") return LatticeKind::Standard;
  if (s == "dual") return LatticeKind::Dual;
  if (s == "barred") return LatticeKind::Barred;
  throw ConfigError("unknown variant '" + s + "' (expected standard, dual or barred)");
}

void RunConfig::validate() const {
  if (D <= 0 || !is_squarefree(D)) throw ConfigError("D must be a positive squarefree integer");
  if (m_min < 0) throw ConfigError("m range must start at 0 or above");
  if (m_max < m_min) throw ConfigError("m range is empty");
  if (m_max > 64) throw ConfigError("m above 64 is not supported");
  if (variants.empty()) throw ConfigError("no variants requested");
  std::set<LatticeKind> seen(variants.begin(), variants.end());
  if (seen.size() != variants.size()) throw ConfigError("duplicate variant");
  if (jobs == 0 || jobs > 256) throw ConfigError("jobs must lie in [1, 256]");
  if (volume_digits < 1 || volume_digits > 15) throw ConfigError("precision must lie in [1, 15] digits");
  if (!(tietze_inflation >= 1.0)) throw ConfigError("tietze_inflation must be at least 1");
  if (!(band.low > 0) || !(band.high > band.low)) throw ConfigError("growth band needs 0 < low < high");
  if (band.c1 < 0 || band.c2 < 0) throw ConfigError("C1 and C2 must be nonnegative");
  if (snapshots && output_dir.empty())
    throw ConfigError("snapshots need an output directory");
  QuadField F(D);
  RingIdeal level;
  try {
    level = parse_ideal(F, ideal);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad ideal: ") + e.what());
  }
  if (level.norm() <= 1) throw ConfigError("ideal must be proper");
  try {
    load_presentation(D, data_dir ? data_dir : data_dir_from_env());
  } catch (const std::exception& e) {
    throw ConfigError("no presentation for D=" + std::to_string(D) + ": " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json v = json::array();
  for (auto k : c.variants) v.push_back(to_string(k));
  return {{"D", c.D},
          {"ideal", c.ideal},
          {"m_min", c.m_min},
          {"m_max", c.m_max},
          {"variants", v},
          {"jobs", c.jobs},
          {"output_dir", c.output_dir},
          {"volume_digits", c.volume_digits},
          {"snf_method", snf_method_name(c.snf_method)},
          {"tietze_inflation", c.tietze_inflation},
          {"allow_non_neat", c.allow_non_neat},
          {"band", {{"low", c.band.low}, {"high", c.band.high}, {"c1", c.band.c1}, {"c2", c.band.c2}}},
          {"snapshots", c.snapshots},
          {"resume", c.resume},
          {"data_dir", c.data_dir ? json(*c.data_dir) : json(nullptr)}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {"D",           "ideal",     "m_min",           "m_max",
                                              "variants",    "jobs",      "output_dir",      "volume_digits",
                                              "snf_method",  "band",      "tietze_inflation", "allow_non_neat",
                                              "snapshots",   "resume",    "data_dir"};
  for (const auto& [k, _] : j.items())
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
  RunConfig c;
  try {
    if (j.contains("D")) c.D = j.at("D").get<long>();
    if (j.contains("ideal")) c.ideal = j.at("ideal").get<std::string>();
    if (j.contains("m_min")) c.m_min = j.at("m_min").get<int>();
    if (j.contains("m_max")) c.m_max = j.at("m_max").get<int>();
    if (j.contains("variants")) {
      c.variants.clear();
      for (const auto& v : j.at("variants")) c.variants.push_back(lattice_kind_from_string(v.get<std::string>()));
    }
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<unsigned>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("volume_digits")) c.volume_digits = j.at("volume_digits").get<int>();
    if (j.contains("snf_method")) c.snf_method = snf_method_from_string(j.at("snf_method").get<std::string>());
    if (j.contains("tietze_inflation")) c.tietze_inflation = j.at("tietze_inflation").get<double>();
    if (j.contains("allow_non_neat")) c.allow_non_neat = j.at("allow_non_neat").get<bool>();
    if (j.contains("band")) {
      const json& b = j.at("band");
      for (const auto& [k, _] : b.items())
        if (k != "low" && k != "high" && k != "c1" && k != "c2") throw ConfigError("unknown band key '" + k + "'");
      if (b.contains("low")) c.band.low = b.at("low").get<double>();
      if (b.contains("high")) c.band.high = b.at("high").get<double>();
      if (b.contains("c1")) c.band.c1 = b.at("c1").get<double>();
      if (b.contains("c2")) c.band.c2 = b.at("c2").get<double>();
    }
    if (j.contains("snapshots")) c.snapshots = j.at("snapshots").get<bool>();
    if (j.contains("resume")) c.resume = j.at("resume").get<bool>();
    if (j.contains("data_dir") && !j.at("data_dir").is_null()) c.data_dir = j.at("data_dir").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

json to_json(const AbelianGroup& g) {
  json t = json::array();
  for (const auto& d : g.torsion) t.push_back(d.get_str());
  return {{"betti", g.betti}, {"torsion", t}, {"description", g.to_string()}};
}

AbelianGroup abelian_group_from_json(const json& j) {
  AbelianGroup g;
  g.betti = j.at("betti").get<size_t>();
  for (const auto& d : j.at("torsion")) g.torsion.emplace_back(d.get<std::string>());
  return g;
}

json to_json(const TorsionReport& r, bool include_timings) {
  json j = {{"D", r.D},
            {"ideal", r.ideal},
            {"m", r.m},
            {"variant", to_string(r.variant)},
            {"dim", r.dim},
            {"generators", r.generators},
            {"relators", r.relators},
            {"h0", to_json(r.h0)},
            {"h1", to_json(r.h1)},
            {"h0_order", r.h0_order.get_str()},
            {"h1_torsion_log", r.h1_torsion_log},
            {"h2_tors_log", r.h2_tors_log ? json(*r.h2_tors_log) : json(nullptr)},
            {"chain_ok", r.chain_ok},
            {"kappa", r.kappa ? json(*r.kappa) : json(nullptr)},
            {"betti_equals_kappa", opt_to_json(r.betti_equals_kappa)},
            {"betti_matches_cusps", opt_to_json(r.betti_matches_cusps)},
            {"d2",
             {{"rows", r.d2_rows},
              {"cols", r.d2_cols},
              {"nnz", r.d2_nnz},
              {"max_entry_bits", r.max_entry_bits},
              {"log_max_row_norm", r.log_max_row_norm},
              {"log_max_col_norm", r.log_max_col_norm}}},
            {"rank_d1", r.rank_d1},
            {"rank_d2", r.rank_d2}};
  if (include_timings) j["timings"] = {{"build", r.seconds_build}, {"snf", r.seconds_snf}};
  return j;
}

TorsionReport torsion_report_from_json(const json& j) {
  TorsionReport r;
  r.D = j.at("D").get<long>();
  r.ideal = j.at("ideal").get<std::string>();
  r.m = j.at("m").get<int>();
  r.variant = lattice_kind_from_string(j.at("variant").get<std::string>());
  r.dim = j.at("dim").get<size_t>();
  r.generators = j.at("generators").get<size_t>();
  r.relators = j.at("relators").get<size_t>();
  r.h0 = abelian_group_from_json(j.at("h0"));
  r.h1 = abelian_group_from_json(j.at("h1"));
  r.h0_order = Int(j.at("h0_order").get<std::string>());
  r.h1_torsion_log = j.at("h1_torsion_log").get<double>();
  if (!j.at("h2_tors_log").is_null()) r.h2_tors_log = j.at("h2_tors_log").get<double>();
  r.chain_ok = j.at("chain_ok").get<bool>();
  if (!j.at("kappa").is_null()) r.kappa = j.at("kappa").get<size_t>();
  if (!j.at("betti_equals_kappa").is_null()) r.betti_equals_kappa = j.at("betti_equals_kappa").get<bool>();
  if (!j.at("betti_matches_cusps").is_null()) r.betti_matches_cusps = j.at("betti_matches_cusps").get<bool>();
  const json& d2 = j.at("d2");
  r.d2_rows = d2.at("rows").get<size_t>();
  r.d2_cols = d2.at("cols").get<size_t>();
  r.d2_nnz = d2.at("nnz").get<size_t>();
  r.max_entry_bits = d2.at("max_entry_bits").get<size_t>();
  r.log_max_row_norm = d2.at("log_max_row_norm").get<double>();
  r.log_max_col_norm = d2.at("log_max_col_norm").get<double>();
  r.rank_d1 = j.at("rank_d1").get<size_t>();
  r.rank_d2 = j.at("rank_d2").get<size_t>();
  if (j.contains("timings")) {
    r.seconds_build = j.at("timings").at("build").get<double>();
    r.seconds_snf = j.at("timings").at("snf").get<double>();
  }
  return r;
}

namespace {

json to_json(const SplitPrimeBetti& s) {
  return {{"p", s.p}, {"omega_image", s.omega_image}, {"betti0", s.betti0}, {"betti1", s.betti1}};
}

SplitPrimeBetti split_prime_from_json(const json& j) {
  SplitPrimeBetti s;
  s.p = j.at("p").get<uint64_t>();
  s.omega_image = j.at("omega_image").get<uint64_t>();
  s.betti0 = j.at("betti0").get<size_t>();
  s.betti1 = j.at("betti1").get<size_t>();
  return s;
}

json to_json(const GabberSouleCheck& g) {
  return {{"generators", g.generators},       {"relators", g.relators},
          {"c0", g.c0},                       {"log_alpha", g.log_alpha},
          {"formula_log_bound", g.formula_log_bound}, {"matrix_log_bound", g.matrix_log_bound},
          {"measured_log", g.measured_log},   {"formula_holds", g.formula_holds},
          {"matrix_holds", g.matrix_holds}};
}

json to_json(const H0BoundCheck& h) {
  return {{"a", h.a},
          {"finite", h.finite},
          {"measured_log", h.finite ? json(h.measured_log) : json(nullptr)},
          {"formula_log_bound", h.formula_log_bound},
          {"squared_log_bound", h.squared_log_bound},
          {"formula_holds", h.finite ? json(h.formula_holds) : json(nullptr)},
          {"squared_holds", h.finite ? json(h.squared_holds) : json(nullptr)}};
}

json to_json(const GrowthFit& f) {
  return {{"slope", f.slope},
          {"intercept", f.intercept},
          {"predicted_slope", f.predicted_slope},
          {"band_low", f.band_low},
          {"band_high", f.band_high},
          {"ratio", f.ratio},
          {"in_band", f.in_band},
          {"eventually_increasing", f.eventually_increasing},
          {"pass", f.pass},
          {"theorem_low", f.theorem_low},
          {"theorem_high", f.theorem_high}};
}

// Keys that determine the content of a per-m checkpoint.
json checkpoint_key(const RunConfig& c) {
  json v = json::array();
  for (auto k : c.variants) v.push_back(to_string(k));
  return {{"schema_version", kReportSchemaVersion},
          {"D", c.D},
          {"ideal", c.ideal},
          {"variants", v},
          {"snf_method", snf_method_name(c.snf_method)},
          {"tietze_inflation", c.tietze_inflation},
          {"data_dir", c.data_dir ? json(*c.data_dir) : json(nullptr)}};
}

fs::path checkpoint_path(const RunConfig& c, int m) {
  return fs::path(c.output_dir) / "checkpoints" /
         ("D" + std::to_string(c.D) + "_" + level_tag(c.ideal) + "_m" + std::to_string(m) + ".json");
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os << text;
  }
  fs::rename(tmp, path);
}

bool load_checkpoint(const RunConfig& c, MRun& run) {
  fs::path p = checkpoint_path(c, run.m);
  if (!fs::exists(p)) return false;
  try {
    std::ifstream is(p);
    json j = json::parse(is);
    if (j.at("key") != checkpoint_key(c) || j.at("m").get<int>() != run.m) return false;
    if (!j.at("barred").is_null()) run.barred = torsion_report_from_json(j.at("barred"));
    if (!j.at("standard").is_null()) run.standard = torsion_report_from_json(j.at("standard"));
    if (!j.at("dual").is_null()) run.dual = torsion_report_from_json(j.at("dual"));
    if (!j.at("split_prime").is_null()) run.split_prime = split_prime_from_json(j.at("split_prime"));
  } catch (const std::exception&) {
    const int m = run.m;
    run = MRun{};
    run.m = m;
    return false;
  }
  return true;
}

void save_checkpoint(const RunConfig& c, const MRun& run) {
  auto opt = [](const std::optional<TorsionReport>& r) { return r ? to_json(*r, true) : json(nullptr); };
  json j = {{"key", checkpoint_key(c)},
            {"m", run.m},
            {"barred", opt(run.barred)},
            {"standard", opt(run.standard)},
            {"dual", opt(run.dual)},
            {"split_prime", run.split_prime ? to_json(*run.split_prime) : json(nullptr)}};
  write_file_atomic(checkpoint_path(c, run.m), j.dump(1));
}

TorsionReport single_lattice_run(const CongruenceSubgroup& S, int m, LatticeKind k, const TorsionOptions& opts) {
  LatticeRep rep(S.presentation.field, m, k);
  TorsionReport r = compute_torsion(S.presentation, rep, opts);
  r.ideal = S.level.to_string();
  r.kappa = S.cusps.orbit_count;
  r.betti_equals_kappa = r.h1.betti == *r.kappa;
  r.betti_matches_cusps = r.h1.betti == 2 * *r.kappa;
  return r;
}

void compute_m(const RunConfig& c, const CongruenceSubgroup& S, MRun& run) {
  const int m = run.m;
  if (c.resume && !c.output_dir.empty() && load_checkpoint(c, run)) {
    run.from_checkpoint = true;
    return;
  }
  auto options = [&](LatticeKind k) {
    TorsionOptions o;
    o.snf.method = c.snf_method;
    if (c.snapshots)
      o.snapshot_path = (fs::path(c.output_dir) / "snapshots" /
                         ("D" + std::to_string(c.D) + "_" + level_tag(c.ideal) + "_m" + std::to_string(m) + "_" +
                          to_string(k) + "_d2.txt"))
                            .string();
    if (o.snapshot_path) fs::create_directories(fs::path(*o.snapshot_path).parent_path());
    return o;
  };
  if (has_variant(c, LatticeKind::Barred)) run.barred = torsion_h2(S, m, options(LatticeKind::Barred));
  if (has_variant(c, LatticeKind::Standard))
    run.standard = single_lattice_run(S, m, LatticeKind::Standard, options(LatticeKind::Standard));
  if (has_variant(c, LatticeKind::Dual)) run.dual = single_lattice_run(S, m, LatticeKind::Dual, options(LatticeKind::Dual));
  if (m >= 1) run.split_prime = split_prime_betti(S.presentation, m);
  if (!c.output_dir.empty()) save_checkpoint(c, run);
}

void attach_checks(const CongruenceSubgroup& S, long a, MRun& run) {
  const TorsionReport* main = run.barred ? &*run.barred : (run.standard ? &*run.standard : nullptr);
  if (main) run.gabber_soule = gabber_soule_check(S.presentation, *main);
  AbelianGroup h0 = run.standard ? run.standard->h0
                                 : coinvariants(S.presentation, LatticeRep(S.presentation.field, run.m,
                                                                           LatticeKind::Standard));
  run.h0_bound = h1_bound_check(h0, run.m, a);
}

}  // namespace

void evaluate_verdicts(RunReport& r) {
  r.advisories.clear();
  r.hard_failures.clear();
  auto hard = [&](const std::string& s) { r.hard_failures.push_back(s); };
  auto advise = [&](const std::string& s) { r.advisories.push_back(s); };
  const SubgroupSummary& S = r.subgroup;
  if (S.cusps_formula != S.cusps_orbits)
    hard("cusp count from the index formula (" + std::to_string(S.cusps_formula) + ") differs from the orbit count (" +
         std::to_string(S.cusps_orbits) + ")");
  if (!S.cusp_volume_identity) hard("kappa * #O^* * N(a) != h_F * index");

  std::vector<GrowthPoint> points;
  for (const MRun& run : r.runs) {
    const std::string tag = "m=" + std::to_string(run.m) + ": ";
    if (run.error) {
      hard(tag + "computation failed: " + *run.error);
      continue;
    }
    for (const auto* rep : {&run.barred, &run.standard, &run.dual}) {
      if (!*rep) continue;
      const TorsionReport& t = **rep;
      const std::string vt = tag + to_string(t.variant) + ": ";
      if (!t.chain_ok) hard(vt + "chain condition d1 * d2 = 0 failed");
      if (run.m >= 1) {
        size_t per = t.variant == LatticeKind::Barred ? 4 : 2;
        if (t.betti_matches_cusps && !*t.betti_matches_cusps)
          hard(vt + "betti " + std::to_string(t.h1.betti) + " != " + std::to_string(per) + " * kappa");
        if (t.betti_equals_kappa && !*t.betti_equals_kappa && t.variant == LatticeKind::Barred)
          advise(vt + "betti " + std::to_string(t.h1.betti) + " != kappa " + std::to_string(*t.kappa) +
                 " taken literally (Z-rank counts each complex dimension " + std::to_string(per) + " times)");
      } else {
        size_t copies = t.variant == LatticeKind::Barred ? 4 : 2;
        if (!(t.h1 == power(S.abelianization, copies)))
          hard(vt + "H_1 differs from " + std::to_string(copies) + " copies of the abelianization");
      }
    }
    if (run.split_prime && run.barred && run.barred->kappa && run.split_prime->betti1 != *run.barred->kappa)
      advise(tag + "dimension over F_p " + std::to_string(run.split_prime->betti1) + " != kappa");
    if (run.gabber_soule) {
      if (!run.gabber_soule->formula_holds) hard(tag + "torsion exceeds the Gabber-Soule formula bound");
      if (!run.gabber_soule->matrix_holds) hard(tag + "torsion exceeds the Hadamard bound of d2");
    }
    if (run.h0_bound && run.h0_bound->finite) {
      if (!run.h0_bound->squared_holds) hard(tag + "|H_0| exceeds (a^{m+1} m!)^2");
      if (!run.h0_bound->formula_holds)
        advise(tag + "|H_0| exceeds a^{m+1} m! taken literally (holds for the square)");
    }
    if (run.m >= 1 && run.barred && run.barred->h2_tors_log)
      points.push_back({run.m, *run.barred->h2_tors_log});
  }
  r.growth.reset();
  if (points.size() >= 4) {
    double N = 0;
    try {
      N = std::stod(S.norm);
    } catch (const std::exception&) {
      N = 1;
    }
    r.growth = growth_fit(points, S.volume, N, r.config.band);
    if (!r.growth->in_band)
      advise("growth slope ratio " + fmt_double(r.growth->ratio) + " outside [" + fmt_double(r.config.band.low) + ", " +
             fmt_double(r.config.band.high) + "]");
    if (!r.growth->eventually_increasing) advise("torsion series not eventually increasing");
  }
}

RunReport run(const RunConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  RunReport r;
  r.config = config;
  QuadField F(config.D);
  r.discriminant = F.discriminant();
  r.class_number = F.class_number();
  r.unit_count = F.unit_count();
  GroupPresentation base = load_presentation(config.D, config.data_dir ? config.data_dir : data_dir_from_env());
  RingIdeal level = parse_ideal(F, config.ideal);

  CongruenceOptions copts;
  copts.allow_non_neat = config.allow_non_neat;
  copts.tietze.max_inflation = config.tietze_inflation;
  CongruenceSubgroup S = principal_congruence_subgroup(base, level, copts);
  SubgroupSummary& s = r.subgroup;
  s.level = config.ideal;
  s.level_basis = level.to_string();
  s.norm = level.norm().get_str();
  s.index = S.index;
  s.schreier_generators = S.schreier_generator_count;
  s.generators = S.presentation.generator_count();
  s.relators = S.presentation.relator_count();
  s.relator_length = S.presentation.total_relator_length();
  s.neat_by_threshold = S.neat_by_threshold;
  s.cusps_formula = S.cusps.formula_count;
  s.cusps_orbits = S.cusps.orbit_count;
  s.translation_level = minimal_translation_level(level);
  s.contains_minus_one = level.contains(RingElement(2));
  s.volume = subgroup_volume(F, S.index, s.contains_minus_one, config.volume_digits);
  s.cusp_volume_identity = cusp_volume_consistent(F, level, S.index, S.cusps.orbit_count);
  s.abelianization = abelianization(S.presentation);
  r.seconds_subgroup = seconds_since(t0);

  for (int m = config.m_min; m <= config.m_max; ++m) {
    r.runs.emplace_back();
    r.runs.back().m = m;
  }
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < r.runs.size(); i = next++) {
      MRun& run = r.runs[i];
      try {
        compute_m(config, S, run);
        attach_checks(S, s.translation_level, run);
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }
  };
  const unsigned nthreads = std::min<unsigned>(config.jobs, static_cast<unsigned>(r.runs.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  evaluate_verdicts(r);
  r.seconds_total = seconds_since(t0);
  return r;
}

json to_json(const RunReport& r, bool include_run_info) {
  const SubgroupSummary& s = r.subgroup;
  json j;
  j["schema"] = kReportSchema;
  j["schema_version"] = kReportSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["config"] = to_json(r.config);
  j["field"] = {{"D", r.config.D},
                {"discriminant", r.discriminant},
                {"class_number", r.class_number},
                {"unit_count", r.unit_count},
                {"omega", QuadField(r.config.D).omega_description()}};
  j["subgroup"] = {{"level", s.level},
                   {"level_basis", s.level_basis},
                   {"norm", s.norm},
                   {"index", s.index},
                   {"schreier_generators", s.schreier_generators},
                   {"generators", s.generators},
                   {"relators", s.relators},
                   {"relator_length", s.relator_length},
                   {"neat_by_threshold", s.neat_by_threshold},
                   {"cusps_formula", s.cusps_formula},
                   {"cusps_orbits", s.cusps_orbits},
                   {"translation_level", s.translation_level},
                   {"contains_minus_one", s.contains_minus_one},
                   {"volume", s.volume},
                   {"cusp_volume_identity", s.cusp_volume_identity},
                   {"abelianization", to_json(s.abelianization)}};
  json runs = json::array(), info_runs = json::array();
  for (const MRun& run : r.runs) {
    auto opt = [](const std::optional<TorsionReport>& t) { return t ? to_json(*t, false) : json(nullptr); };
    runs.push_back({{"m", run.m},
                    {"barred", opt(run.barred)},
                    {"standard", opt(run.standard)},
                    {"dual", opt(run.dual)},
                    {"split_prime", run.split_prime ? to_json(*run.split_prime) : json(nullptr)},
                    {"gabber_soule", run.gabber_soule ? to_json(*run.gabber_soule) : json(nullptr)},
                    {"h0_bound", run.h0_bound ? to_json(*run.h0_bound) : json(nullptr)},
                    {"error", run.error ? json(*run.error) : json(nullptr)}});
    json t = {{"m", run.m}, {"from_checkpoint", run.from_checkpoint}};
    for (const auto* rep : {&run.barred, &run.standard, &run.dual})
      if (*rep) t[to_string((*rep)->variant)] = {{"build", (*rep)->seconds_build}, {"snf", (*rep)->seconds_snf}};
    info_runs.push_back(t);
  }
  j["runs"] = runs;
  j["growth"] = r.growth ? to_json(*r.growth) : json(nullptr);
  j["verdicts"] = {{"ok", r.ok()}, {"hard_failures", r.hard_failures}, {"advisories", r.advisories}};
  if (include_run_info)
    j["run_info"] = {{"seconds_subgroup", r.seconds_subgroup},
                     {"seconds_total", r.seconds_total},
                     {"gmp_version", gmp_version},
                     {"runs", info_runs}};
  return j;
}

std::string report_csv(const std::vector<RunReport>& reports) {
  std::vector<const RunReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const RunReport* a, const RunReport* b) {
    return std::tie(a->config.D, a->subgroup.level) < std::tie(b->config.D, b->subgroup.level);
  });
  std::ostringstream os;
  os << "D,level,m,m2,betti,kappa,h2_tors_log,h1_standard_tors_log,h1_dual_tors_log,"
        "gs_formula_log_bound,gs_matrix_log_bound,gs_formula_ok,gs_matrix_ok,"
        "h0_log,h0_formula_log_bound,h0_squared_log_bound,h0_formula_ok,h0_squared_ok,"
        "betti_literal_ok,betti_cusp_ok,growth_slope,growth_fitted,error\n";
  auto b = [](bool x) { return x ? "1" : "0"; };
  for (const RunReport* r : sorted) {
    std::vector<const MRun*> runs;
    for (const auto& m : r->runs) runs.push_back(&m);
    std::sort(runs.begin(), runs.end(), [](const MRun* x, const MRun* y) { return x->m < y->m; });
    for (const MRun* run : runs) {
      std::string level = r->subgroup.level;
      if (level.find(',') != std::string::npos) level = "\"" + level + "\"";
      os << r->config.D << "," << level << "," << run->m << "," << run->m * run->m << ",";
      if (run->barred) {
        os << run->barred->h1.betti << "," << (run->barred->kappa ? std::to_string(*run->barred->kappa) : "") << ","
           << (run->barred->h2_tors_log ? fmt_double(*run->barred->h2_tors_log) : "") << ",";
      } else {
        os << ",,,";
      }
      os << (run->standard ? fmt_double(run->standard->h1_torsion_log) : "") << ","
         << (run->dual ? fmt_double(run->dual->h1_torsion_log) : "") << ",";
      if (run->gabber_soule)
        os << fmt_double(run->gabber_soule->formula_log_bound) << "," << fmt_double(run->gabber_soule->matrix_log_bound)
           << "," << b(run->gabber_soule->formula_holds) << "," << b(run->gabber_soule->matrix_holds) << ",";
      else
        os << ",,,,";
      if (run->h0_bound && run->h0_bound->finite)
        os << fmt_double(run->h0_bound->measured_log) << "," << fmt_double(run->h0_bound->formula_log_bound) << ","
           << fmt_double(run->h0_bound->squared_log_bound) << "," << b(run->h0_bound->formula_holds) << ","
           << b(run->h0_bound->squared_holds) << ",";
      else
        os << ",,,,,";
      if (run->barred && run->barred->betti_equals_kappa && run->m >= 1)
        os << b(*run->barred->betti_equals_kappa) << "," << b(run->barred->betti_matches_cusps.value_or(false)) << ",";
      else
        os << ",,";
      if (r->growth)
        os << fmt_double(r->growth->slope) << ","
           << fmt_double(r->growth->intercept + r->growth->slope * run->m * run->m) << ",";
      else
        os << ",,";
      if (run->error) {
        std::string e = *run->error;
        std::replace(e.begin(), e.end(), '"', '\'');
        os << "\"" << e << "\"";
      }
      os << "\n";
    }
  }
  return os.str();
}

void write_outputs(const RunReport& r) {
  if (r.config.output_dir.empty()) return;
  fs::path dir(r.config.output_dir);
  write_file_atomic(dir / "report.json", to_json(r).dump(2) + "\n");
  write_file_atomic(dir / "table.csv", report_csv({r}));
}

}  // namespace bianchi
