// bianchi-torsion: batch driver for twisted torsion of principal congruence
// subgroups of Bianchi groups.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "bianchi/bounds.hpp"
#include "bianchi/congruence.hpp"
#include "bianchi/hecke.hpp"
#include "bianchi/presentation.hpp"
#include "bianchi/quadfield.hpp"
#include "bianchi/report.hpp"

using namespace bianchi;
using nlohmann::json;

namespace {

constexpr int kExitHardFailure = 1;
constexpr int kExitConfig = 2;

std::pair<int, int> parse_range(const std::string& s) {
  auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 2))};
  } catch (const std::exception&) {
    throw ConfigError("bad range '" + s + "' (expected a..b or a single integer)");
  }
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(static_cast<T>(std::stoull(part)));
    } catch (const std::exception&) {
      throw ConfigError("bad list entry '" + part + "'");
    }
  }
  return out;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(output);
  if (!os) throw ConfigError("cannot write " + output);
  os << text;
}

struct RunFlags {
  long D = 11;
  std::string ideal = "3";
  std::string m_range = "0..2";
  std::string variants = "barred";
  unsigned jobs = 1;
  std::string output;
  int precision = 12;
  std::string config_file;
  std::string snf = "modular";
  double band_low = 0.3, band_high = 2.0, c1 = 0, c2 = 0;
  double tietze_inflation = 4.0;
  bool snapshots = false;
  bool no_resume = false;
  bool allow_non_neat = false;
  std::string data_dir;
  // execution-only options that still apply on top of --config
  CLI::Option* output_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;
};

void add_run_flags(CLI::App* app, RunFlags& f) {
  app->add_option("-D,--D", f.D, "field Q(sqrt(-D))");
  app->add_option("-a,--ideal", f.ideal, "level ideal, comma-separated generators such as 3 or \"2,1+w\"");
  app->add_option("-m,--m-range", f.m_range, "weights, a..b or a single integer");
  app->add_option("--variants", f.variants, "comma-separated subset of barred,standard,dual");
  f.jobs_opt = app->add_option("-j,--jobs", f.jobs, "m values processed in parallel");
  f.output_opt = app->add_option("-o,--output", f.output, "output directory for report.json, table.csv and checkpoints");
  app->add_option("-p,--precision", f.precision, "decimal digits for zeta_F(2) and the volume");
  app->add_option("-c,--config", f.config_file,
                  "JSON config, or a previous report.json whose config is re-run; only -o, -j, --snapshots "
                  "and --no-resume are applied on top");
  app->add_option("--snf", f.snf, "modular or euclidean");
  app->add_option("--band-low", f.band_low, "lower growth band factor");
  app->add_option("--band-high", f.band_high, "upper growth band factor");
  app->add_option("--c1", f.c1, "C1 for the theorem interval");
  app->add_option("--c2", f.c2, "C2 for the theorem interval");
  app->add_option("--tietze-inflation", f.tietze_inflation, "relator length cap during Tietze simplification");
  app->add_flag("--snapshots", f.snapshots, "write every d2 in snapshot format");
  app->add_flag("--no-resume", f.no_resume, "ignore existing checkpoints");
  app->add_flag("--allow-non-neat", f.allow_non_neat, "accept levels below the neatness threshold");
  app->add_option("--data-dir", f.data_dir, "presentation directory (default: $BIANCHI_DATA_DIR, then built-in)");
}

RunConfig make_config(const RunFlags& f) {
  if (!f.config_file.empty()) {
    std::ifstream is(f.config_file);
    if (!is) throw ConfigError("cannot read " + f.config_file);
    json j;
    try {
      j = json::parse(is);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (j.contains("schema") && j.contains("config")) j = j.at("config");
    RunConfig c = config_from_json(j);
    if (f.output_opt && f.output_opt->count()) c.output_dir = f.output;
    if (f.jobs_opt && f.jobs_opt->count()) c.jobs = f.jobs;
    if (f.snapshots) c.snapshots = true;
    if (f.no_resume) c.resume = false;
    c.validate();
    return c;
  }
  RunConfig c;
  c.D = f.D;
  c.ideal = f.ideal;
  std::tie(c.m_min, c.m_max) = parse_range(f.m_range);
  c.variants.clear();
  std::stringstream ss(f.variants);
  std::string part;
  while (std::getline(ss, part, ',')) c.variants.push_back(lattice_kind_from_string(part));
  c.jobs = f.jobs;
  c.output_dir = f.output;
  c.volume_digits = f.precision;
  json sj = {{"snf_method", f.snf}};
  c.snf_method = config_from_json(sj).snf_method;
  c.band = {f.band_low, f.band_high, f.c1, f.c2};
  c.tietze_inflation = f.tietze_inflation;
  c.snapshots = f.snapshots;
  c.resume = !f.no_resume;
  c.allow_non_neat = f.allow_non_neat;
  if (!f.data_dir.empty()) c.data_dir = f.data_dir;
  return c;
}

void print_torsion_table(const RunReport& r) {
  std::printf("D=%ld level=%s index=%zu gens=%zu rels=%zu cusps=%zu volume=%.6f\n", r.config.D,
              r.subgroup.level.c_str(), r.subgroup.index, r.subgroup.generators, r.subgroup.relators,
              r.subgroup.cusps_orbits, r.subgroup.volume);
  std::printf("%4s %8s %8s %16s %16s %16s\n", "m", "variant", "betti", "log|H1_tors|", "log|H2_tors|", "seconds");
  for (const auto& run : r.runs) {
    if (run.error) {
      std::printf("%4d  error: %s\n", run.m, run.error->c_str());
      continue;
    }
    for (const auto* rep : {&run.barred, &run.standard, &run.dual}) {
      if (!*rep) continue;
      const TorsionReport& t = **rep;
      std::printf("%4d %8s %8zu %16.6f %16s %16.3f\n", run.m, to_string(t.variant).c_str(), t.h1.betti,
                  t.h1_torsion_log, t.h2_tors_log ? std::to_string(*t.h2_tors_log).c_str() : "-",
                  t.seconds_build + t.seconds_snf);
    }
  }
}

void print_bounds_table(const RunReport& r) {
  std::printf("%4s %14s %14s %14s %6s %12s %12s %12s %6s\n", "m", "log|H2_tors|", "GS formula", "GS matrix", "GS",
              "log|H0|", "a^{m+1}m!", "squared", "H0");
  for (const auto& run : r.runs) {
    if (run.error || !run.gabber_soule || !run.h0_bound) continue;
    const auto& g = *run.gabber_soule;
    const auto& h = *run.h0_bound;
    std::printf("%4d %14.4f %14.4f %14.4f %6s ", run.m, g.measured_log, g.formula_log_bound, g.matrix_log_bound,
                g.formula_holds && g.matrix_holds ? "ok" : "FAIL");
    if (h.finite)
      std::printf("%12.4f %12.4f %12.4f %6s\n", h.measured_log, h.formula_log_bound, h.squared_log_bound,
                  h.squared_holds ? (h.formula_holds ? "ok" : "sq-ok") : "FAIL");
    else
      std::printf("%12s %12.4f %12.4f %6s\n", "inf", h.formula_log_bound, h.squared_log_bound, "n/a");
  }
  if (r.growth) {
    const auto& g = *r.growth;
    std::printf("growth: slope %.4f vs vol/pi %.4f, ratio %.4f, band [%.2f, %.2f] -> %s; eventually increasing: %s\n",
                g.slope, g.predicted_slope, g.ratio, r.config.band.low, r.config.band.high, g.in_band ? "in" : "out",
                g.eventually_increasing ? "yes" : "no");
  }
}

int finish(const RunReport& r, bool quiet_json) {
  write_outputs(r);
  if (!quiet_json && r.config.output_dir.empty()) std::cout << to_json(r).dump(2) << "\n";
  for (const auto& a : r.advisories) std::fprintf(stderr, "advisory: %s\n", a.c_str());
  for (const auto& h : r.hard_failures) std::fprintf(stderr, "FAILED: %s\n", h.c_str());
  return r.ok() ? 0 : kExitHardFailure;
}

int cmd_field_info(long D, int precision, const std::string& output) {
  QuadField F(D);
  ZetaValue z = zeta_at_2(F, precision);
  json j = {{"D", D},
            {"discriminant", F.discriminant()},
            {"omega", F.omega_description()},
            {"omega_trace", F.omega_trace()},
            {"omega_norm", F.omega_norm()},
            {"unit_count", F.unit_count()},
            {"class_number", F.class_number()},
            {"zeta_F_2", z.value},
            {"zeta_F_2_error_bound", z.error_bound},
            {"covolume", bianchi_covolume(F, precision)}};
  try {
    GroupPresentation p = load_presentation(D, data_dir_from_env());
    j["presentation"] = {{"source", p.source},
                         {"generators", p.generator_count()},
                         {"relators", p.relator_count()},
                         {"abelianization", to_json(abelianization(p))}};
  } catch (const std::exception& e) {
    j["presentation"] = nullptr;
  }
  emit(j.dump(2) + "\n", output);
  return 0;
}

int cmd_subgroup(long D, const std::string& ideal, bool allow_non_neat, double inflation, const std::string& output,
                 bool print_relators) {
  RunConfig c;
  c.D = D;
  c.ideal = ideal;
  c.allow_non_neat = allow_non_neat;
  c.tietze_inflation = inflation;
  c.m_min = c.m_max = 0;
  c.validate();
  QuadField F(D);
  GroupPresentation base = load_presentation(D, data_dir_from_env());
  RingIdeal level = parse_ideal(F, ideal);
  CongruenceOptions opts;
  opts.allow_non_neat = allow_non_neat;
  opts.tietze.max_inflation = inflation;
  CongruenceSubgroup S = principal_congruence_subgroup(base, level, opts);
  bool minus_one = level.contains(RingElement(2));
  json j = {{"D", D},
            {"level", ideal},
            {"level_basis", level.to_string()},
            {"norm", level.norm().get_str()},
            {"index", S.index},
            {"schreier_generators", S.schreier_generator_count},
            {"generators", S.presentation.generator_count()},
            {"relators", S.presentation.relator_count()},
            {"relator_length", S.presentation.total_relator_length()},
            {"neat_by_threshold", S.neat_by_threshold},
            {"cusps_formula", S.cusps.formula_count},
            {"cusps_orbits", S.cusps.orbit_count},
            {"cusp_volume_identity", cusp_volume_consistent(F, level, S.index, S.cusps.orbit_count)},
            {"volume", subgroup_volume(F, S.index, minus_one)},
            {"abelianization", to_json(abelianization(S.presentation))}};
  if (print_relators) {
    json rels = json::array();
    for (const auto& w : S.presentation.relators) rels.push_back(S.presentation.format_word(w));
    j["relator_words"] = rels;
  }
  emit(j.dump(2) + "\n", output);
  return 0;
}

int cmd_hecke(const std::string& qs, const std::string& orders, const std::string& m_range, const std::string& output,
              bool as_json) {
  auto [lo, hi] = parse_range(m_range);
  auto rows = hecke_table(parse_list<uint64_t>(qs), parse_list<unsigned>(orders), lo, hi);
  std::ostringstream os;
  if (as_json) {
    json j = json::array();
    for (const auto& r : rows)
      j.push_back({{"q", r.q},
                   {"chi_order", r.chi_order},
                   {"chi_index", r.chi_index},
                   {"m", r.m},
                   {"ratio", r.ratio},
                   {"re", r.ratio_value.real()},
                   {"im", r.ratio_value.imag()}});
    os << j.dump(2) << "\n";
  } else {
    os << "q,chi_order,chi_index,m,ratio,re,im\n";
    char buf[64];
    for (const auto& r : rows) {
      os << r.q << "," << r.chi_order << "," << r.chi_index << "," << r.m << ",\"" << r.ratio << "\",";
      std::snprintf(buf, sizeof buf, "%.15g,%.15g", r.ratio_value.real(), r.ratio_value.imag());
      os << buf << "\n";
    }
  }
  emit(os.str(), output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twisted homology torsion of principal congruence subgroups of Bianchi groups"};
  app.require_subcommand(1);

  long D = 11;
  int precision = 12;
  std::string output;
  auto* field = app.add_subcommand("field-info", "field invariants, zeta_F(2) and covolume");
  field->add_option("-D,--D", D, "field Q(sqrt(-D))");
  field->add_option("-p,--precision", precision, "decimal digits for zeta_F(2)");
  field->add_option("-o,--output", output, "output file (default stdout)");

  std::string ideal = "3";
  bool allow_non_neat = false, print_relators = false;
  double inflation = 4.0;
  auto* sub = app.add_subcommand("subgroup", "presentation, index and cusps of Gamma(a)");
  sub->add_option("-D,--D", D, "field Q(sqrt(-D))");
  sub->add_option("-a,--ideal", ideal, "level ideal");
  sub->add_option("-o,--output", output, "output file (default stdout)");
  sub->add_option("--tietze-inflation", inflation, "relator length cap during Tietze simplification");
  sub->add_flag("--allow-non-neat", allow_non_neat, "accept levels below the neatness threshold");
  sub->add_flag("--relators", print_relators, "include the relator words");

  RunFlags tf;
  auto* tors = app.add_subcommand("torsion", "H_1 and H^2 torsion for a range of weights");
  add_run_flags(tors, tf);
  bool quiet = false;
  tors->add_flag("-q,--quiet", quiet, "no JSON on stdout when no output directory is given");

  RunFlags bf;
  bf.variants = "barred,standard";
  auto* bnd = app.add_subcommand("bounds", "Gabber-Soule, H_0 and growth checks for a range of weights");
  add_run_flags(bnd, bf);

  std::string qs = "2,3,5,7", orders = "1,2,4", hm = "2..6";
  bool hjson = false;
  auto* hecke = app.add_subcommand("hecke-table", "local intertwining ratios over (q, character order, m)");
  hecke->add_option("--q", qs, "comma-separated prime powers");
  hecke->add_option("--orders", orders, "comma-separated character orders");
  hecke->add_option("-m,--m-range", hm, "a..b with a >= 2");
  hecke->add_option("-o,--output", output, "output file (default stdout)");
  hecke->add_flag("--json", hjson, "JSON instead of CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*field) return cmd_field_info(D, precision, output);
    if (*sub) return cmd_subgroup(D, ideal, allow_non_neat, inflation, output, print_relators);
    if (*hecke) return cmd_hecke(qs, orders, hm, output, hjson);
    if (*tors) {
      RunReport r = run(make_config(tf));
      if (quiet || !r.config.output_dir.empty()) print_torsion_table(r);
      return finish(r, quiet);
    }
    if (*bnd) {
      RunReport r = run(make_config(bf));
      print_torsion_table(r);
      print_bounds_table(r);
      return finish(r, true);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitHardFailure;
  }
  return 0;
}
