#include "bianchi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace bianchi {

namespace {

// Floating comparisons of logs: allow rounding in the last bits only.
bool log_le(double measured, double bound) { return measured <= bound + 1e-9 * std::max(1.0, std::fabs(bound)); }

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1); }

}  // namespace

double max_generator_norm(const GroupPresentation& p) {
  double c0 = 1;
  for (const auto& g : p.matrices) c0 = std::max(c0, sl2_operator_norm(p.field, g));
  return c0;
}

GabberSouleCheck gabber_soule_check(const GroupPresentation& p, const TorsionReport& r) {
  GabberSouleCheck g;
  g.m = r.m;
  g.generators = p.generator_count();
  g.relators = p.relator_count();
  g.c0 = max_generator_norm(p);
  g.log_alpha = std::log(static_cast<double>(g.generators)) + r.m * std::log(g.c0);
  g.formula_log_bound =
      static_cast<double>(r.m + 1) * static_cast<double>(std::min(g.relators, g.generators)) * g.log_alpha;
  g.matrix_log_bound = static_cast<double>(r.rank_d2) * std::min(r.log_max_row_norm, r.log_max_col_norm);
  g.measured_log = r.h2_tors_log.value_or(r.h1_torsion_log);
  g.formula_holds = log_le(g.measured_log, g.formula_log_bound);
  g.matrix_holds = log_le(g.measured_log, g.matrix_log_bound);
  return g;
}

long minimal_translation_level(const RingIdeal& a) { return a.min_integer().get_si(); }

H0BoundCheck h1_bound_check(const AbelianGroup& h0, int m, long a) {
  if (a < 1) throw std::invalid_argument("h1_bound_check: level must be positive");
  H0BoundCheck c;
  c.m = m;
  c.a = a;
  c.formula_log_bound = (m + 1) * std::log(static_cast<double>(a)) + log_factorial(m);
  c.squared_log_bound = 2 * c.formula_log_bound;
  c.finite = h0.betti == 0;
  if (!c.finite) return c;
  c.measured_log = h0.log_torsion_order();
  c.formula_holds = log_le(c.measured_log, c.formula_log_bound);
  c.squared_holds = log_le(c.measured_log, c.squared_log_bound);
  return c;
}

double subgroup_volume(const QuadField& F, size_t sl2_index, bool contains_minus_one, int digits) {
  if (sl2_index == 0) throw std::invalid_argument("subgroup_volume: index must be positive");
  double base = bianchi_covolume(F, digits);
  double psl_index = contains_minus_one ? static_cast<double>(sl2_index) : static_cast<double>(sl2_index) / 2;
  return base * psl_index;
}

bool cusp_volume_consistent(const QuadField& F, const RingIdeal& level, size_t index, size_t kappa) {
  Int lhs = Int(static_cast<unsigned long>(kappa)) * F.unit_count() * level.norm();
  Int rhs = Int(F.class_number()) * Int(static_cast<unsigned long>(index));
  return lhs == rhs;
}

GrowthFit growth_fit(const std::vector<GrowthPoint>& points, double volume, double level_norm, const GrowthBand& band) {
  std::set<int> ms;
  for (const auto& p : points) ms.insert(p.m);
  if (points.size() < 4 || ms.size() != points.size())
    throw std::invalid_argument("growth_fit: need at least four points with distinct m");
  std::vector<GrowthPoint> pts = points;
  std::sort(pts.begin(), pts.end(), [](const GrowthPoint& a, const GrowthPoint& b) { return a.m < b.m; });

  const double n = static_cast<double>(pts.size());
  double mx = 0, my = 0;
  for (const auto& p : pts) {
    mx += static_cast<double>(p.m) * p.m;
    my += p.log_torsion;
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    double dx = static_cast<double>(p.m) * p.m - mx;
    sxx += dx * dx;
    sxy += dx * (p.log_torsion - my);
  }
  GrowthFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.predicted_slope = volume / std::numbers::pi;
  f.band_low = band.low * f.predicted_slope;
  f.band_high = band.high * f.predicted_slope;
  f.ratio = f.predicted_slope > 0 ? f.slope / f.predicted_slope : 0;
  f.in_band = f.slope >= f.band_low && f.slope <= f.band_high;
  f.eventually_increasing = true;
  for (size_t i = pts.size() / 2; i + 1 < pts.size(); ++i)
    if (!(pts[i + 1].log_torsion > pts[i].log_torsion)) f.eventually_increasing = false;
  f.pass = f.in_band && f.eventually_increasing;
  f.theorem_low = 0.5 * f.predicted_slope * (1 - band.c1 / level_norm);
  f.theorem_high = f.predicted_slope * (1 + band.c2 / level_norm);
  return f;
}

}  // namespace bianchi
