#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bianchi/quadfield.hpp"

namespace bianchi {

/// A word in the generators: letter g+1 stands for generator g, -(g+1) for its inverse.
using Word = std::vector<int>;

Word word_inverse(const Word& w);
Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
/// Canonical representative among cyclic rotations of w and its inverse.
Word cyclic_canonical(const Word& w);

/// Finite presentation together with a faithful matrix realization in SL_2(O).
struct GroupPresentation {
  QuadField field{1};
  std::vector<std::string> names;
  std::vector<Mat2> matrices;
  std::vector<Word> relators;
  std::string source;

  size_t generator_count() const { return names.size(); }
  size_t relator_count() const { return relators.size(); }
  size_t total_relator_length() const;

  Mat2 evaluate(const Word& w) const;
  std::string format_word(const Word& w) const;
  /// Throws std::runtime_error unless every generator has determinant one and
  /// every relator evaluates to the identity.
  void validate() const;
};

/// Parses the line-based presentation format:
///   bianchi-presentation 1
///   field <D>
///   generator <name> <a11 b11> <a12 b12> <a21 b21> <a22 b22>
///   relator <word>
/// Words use generator names, x^k (k may be negative), (...)^k and [x,y] = x^-1 y^-1 x y.
GroupPresentation parse_presentation(const std::string& text, const std::string& source = "<string>");

/// Parses a word against a list of generator names.
Word parse_word(const std::string& text, const std::vector<std::string>& names);

std::vector<long> builtin_presentation_fields();
/// Presentation for SL_2(O_D). A file D<D>.pres in data_dir takes precedence
/// over the compiled-in copy.
GroupPresentation load_presentation(long D, const std::optional<std::string>& data_dir = std::nullopt);

/// Directory from the BIANCHI_DATA_DIR environment variable, if set.
std::optional<std::string> data_dir_from_env();

}  // namespace bianchi
