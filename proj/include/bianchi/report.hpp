#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bianchi/bounds.hpp"
#include "bianchi/foxhom.hpp"

namespace bianchi {

inline constexpr const char* kReportSchema = "bianchi-torsion-report";
inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  long D = 11;
  std::string ideal = "3";  // comma-separated generators, see parse_ideal
  int m_min = 0;
  int m_max = 2;
  std::vector<LatticeKind> variants = {LatticeKind::Barred};
  unsigned jobs = 1;
  std::string output_dir;  // empty: nothing written
  int volume_digits = 12;  // absolute precision of zeta_F(2)
  SnfMethod snf_method = SnfMethod::Modular;
  double tietze_inflation = 4.0;
  bool allow_non_neat = false;
  GrowthBand band;
  bool snapshots = false;  // write d2 of every run under output_dir/snapshots
  bool resume = true;      // reuse checkpoints under output_dir/checkpoints
  std::optional<std::string> data_dir;

  /// Throws ConfigError describing the first problem found.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Missing keys keep their defaults; unknown keys and bad values throw ConfigError.
RunConfig config_from_json(const nlohmann::json& j);

LatticeKind lattice_kind_from_string(const std::string& s);

nlohmann::json to_json(const AbelianGroup& g);
AbelianGroup abelian_group_from_json(const nlohmann::json& j);
/// Timing fields are written only when include_timings is set.
nlohmann::json to_json(const TorsionReport& r, bool include_timings = true);
TorsionReport torsion_report_from_json(const nlohmann::json& j);

/// Everything computed for one m.
struct MRun {
  int m = 0;
  std::optional<TorsionReport> barred, standard, dual;
  std::optional<SplitPrimeBetti> split_prime;
  std::optional<GabberSouleCheck> gabber_soule;
  std::optional<H0BoundCheck> h0_bound;
  std::optional<std::string> error;
  bool from_checkpoint = false;
};

struct SubgroupSummary {
  std::string level;
  std::string level_basis;
  std::string norm;
  size_t index = 0;
  size_t schreier_generators = 0;
  size_t generators = 0;
  size_t relators = 0;
  size_t relator_length = 0;
  bool neat_by_threshold = false;
  size_t cusps_formula = 0;
  size_t cusps_orbits = 0;
  long translation_level = 0;
  bool contains_minus_one = false;
  double volume = 0;
  bool cusp_volume_identity = false;
  AbelianGroup abelianization;
};

struct RunReport {
  RunConfig config;
  long discriminant = 0;
  int class_number = 0;
  int unit_count = 0;
  SubgroupSummary subgroup;
  std::vector<MRun> runs;  // ascending m
  std::optional<GrowthFit> growth;
  // Literal claims that are reported but, being refuted or
  // trend-based, do not affect the exit status.
  std::vector<std::string> advisories;
  std::vector<std::string> hard_failures;
  double seconds_subgroup = 0;
  double seconds_total = 0;

  bool ok() const { return hard_failures.empty(); }
};

/// Validates, builds Gamma(a) and runs every m in [m_min, m_max], up to
/// config.jobs at a time. Per-m exceptions are recorded in MRun::error.
RunReport run(const RunConfig& config);

/// Recomputes growth, advisories and hard_failures from the runs.
void evaluate_verdicts(RunReport& r);

/// Fields under "run_info" (timings, checkpoint hits, library versions) are
/// the only ones that may differ between runs of the same config.
nlohmann::json to_json(const RunReport& r, bool include_run_info = true);

/// One CSV row per (report, m), ordered by D, level and m.
std::string report_csv(const std::vector<RunReport>& reports);

/// Writes report.json and table.csv into config.output_dir.
void write_outputs(const RunReport& r);

}  // namespace bianchi
