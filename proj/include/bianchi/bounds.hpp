#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bianchi/congruence.hpp"
#include "bianchi/foxhom.hpp"

namespace bianchi {

/// max over generators of ||rho_1(g)||, rounded upward; 1 for an empty set.
double max_generator_norm(const GroupPresentation& p);

struct GabberSouleCheck {
  int m = 0;
  size_t generators = 0;  // N(Gamma, 1)
  size_t relators = 0;    // N(Gamma, 2)
  double c0 = 1;
  double log_alpha = 0;        // log(N(Gamma,1) c0^m)
  double formula_log_bound = 0;  // (m+1) min(N(Gamma,2), N(Gamma,1)) log alpha
  // rank(d2) * log min(max row norm, max column norm) of the actual matrix
  double matrix_log_bound = 0;
  double measured_log = 0;
  bool formula_holds = false;
  bool matrix_holds = false;
};

/// Both bounds against a computed report. The matrix bound follows from
/// Hadamard's inequality applied to a nonzero maximal minor.
GabberSouleCheck gabber_soule_check(const GroupPresentation& p, const TorsionReport& r);

struct H0BoundCheck {
  int m = 0;
  long a = 0;
  double measured_log = 0;
  double formula_log_bound = 0;  // log(a^{m+1} m!)
  double squared_log_bound = 0;  // log((a^{m+1} m!)^2), counting Z-rank 2 per O-coordinate
  bool finite = false;
  bool formula_holds = false;
  bool squared_holds = false;
};

/// Smallest positive integer in the ideal.
long minimal_translation_level(const RingIdeal& a);

/// |H_0(Gamma; Lambda(m))| against the translation-level bound.
H0BoundCheck h1_bound_check(const AbelianGroup& h0_standard, int m, long a);

/// vol(Gamma(a) \ H^3) = covolume of SL_2(O_D) times the index of the image of
/// Gamma(a) in PSL_2, i.e. index / 2 unless -1 lies in Gamma(a).
double subgroup_volume(const QuadField& F, size_t sl2_index, bool contains_minus_one, int digits = 12);

/// kappa * #O^* * N(a) == h_F * index
bool cusp_volume_consistent(const QuadField& F, const RingIdeal& level, size_t index, size_t kappa);

struct GrowthPoint {
  int m = 0;
  double log_torsion = 0;
};

struct GrowthFit {
  double slope = 0;
  double intercept = 0;
  double predicted_slope = 0;  // vol / pi
  double band_low = 0, band_high = 0;
  double ratio = 0;  // slope / predicted_slope
  bool in_band = false;
  // strictly increasing from the middle of the series onward
  bool eventually_increasing = false;
  bool pass = false;
  // [1/2 v (1 - C1/N), v (1 + C2/N)] with the supplied constants
  double theorem_low = 0, theorem_high = 0;
};

struct GrowthBand {
  double low = 0.3;
  double high = 2.0;
  double c1 = 0;
  double c2 = 0;
};

/// Least squares fit of log torsion against m^2 with intercept. Needs at
/// least four points with distinct m; throws std::invalid_argument otherwise.
GrowthFit growth_fit(const std::vector<GrowthPoint>& points, double volume, double level_norm,
                     const GrowthBand& band = {});

}  // namespace bianchi
