#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "bianchi/presentation.hpp"
#include "bianchi/quadfield.hpp"
#include "bianchi/snf.hpp"

namespace bianchi {

struct TietzeOptions {
  // Stop once the total relator length would exceed this multiple of the
  // length before simplification.
  double max_inflation = 4.0;
  // Upper bound on generator eliminations; 0 means unlimited.
  size_t max_eliminations = 0;
};

struct TietzeStats {
  size_t generators_before = 0;
  size_t relators_before = 0;
  size_t length_before = 0;
  size_t generators_after = 0;
  size_t relators_after = 0;
  size_t length_after = 0;
  size_t eliminations = 0;
};

/// Simplifies a presentation in place by eliminating generators that occur
/// exactly once in some relator. Returns the indices of surviving generators.
std::vector<size_t> tietze_simplify(size_t generator_count, std::vector<Word>& relators, const TietzeOptions& opts,
                                    TietzeStats* stats = nullptr);

struct CongruenceOptions {
  uint64_t min_norm = 9;
  bool allow_non_neat = false;
  TietzeOptions tietze;
  size_t max_index = 500000;
};

struct CuspData {
  size_t formula_count = 0;
  size_t orbit_count = 0;
  // One primitive vector (mod a) per cusp class.
  std::vector<std::array<RingElement, 2>> representatives;
};

/// Principal congruence subgroup Gamma(a) of SL_2(O_D).
struct CongruenceSubgroup {
  RingIdeal level;
  // |image of SL_2(O_D) in SL_2(O/a)|
  size_t index = 0;
  size_t schreier_generator_count = 0;
  TietzeStats tietze;
  GroupPresentation presentation;
  CuspData cusps;
  bool neat_by_threshold = false;
};

/// Builds Gamma(a) from a presentation of SL_2(O_D): coset enumeration of the
/// finite image, Reidemeister-Schreier rewriting, Tietze simplification, and
/// exact verification that all generators are congruent to 1 mod a and all
/// relators evaluate to 1.
CongruenceSubgroup principal_congruence_subgroup(const GroupPresentation& base, const RingIdeal& level,
                                                 const CongruenceOptions& opts = {});

/// Cusp count of Gamma(a) computed from the index and independently from
/// unit classes of the orbit of (1, 0) in (O/a)^2.
CuspData cusp_data(const GroupPresentation& base, const RingIdeal& level, size_t index);

/// [Gamma_D cap N : Gamma(a) cap N] for the unipotent radical N of the upper
/// triangular Borel, counted as the number of translations [[1,x],[0,1]] modulo a.
size_t unipotent_index(const QuadField& F, const RingIdeal& level);

/// Z-abelianization: Z^g / (exponent-sum rows of the relators).
AbelianGroup abelianization(const GroupPresentation& p);

}  // namespace bianchi
