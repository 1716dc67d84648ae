#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bianchi/int_matrix.hpp"

namespace bianchi {

/// Row-wise sparse matrix over Z. Rows are sorted by column and never hold zeros.
class SparseIntMatrix {
 public:
  struct Entry {
    uint32_t col;
    Int value;
  };
  using Row = std::vector<Entry>;

  SparseIntMatrix() = default;
  SparseIntMatrix(size_t rows, size_t cols);
  static SparseIntMatrix from_dense(const IntMatrix& m);

  size_t rows() const { return rows_.size(); }
  size_t cols() const { return cols_; }
  size_t nnz() const;
  size_t max_entry_bits() const;

  Int get(size_t r, size_t c) const;
  void set(size_t r, size_t c, const Int& v);
  void add_to(size_t r, size_t c, const Int& v);
  // Adds a dense block with top-left corner (r0, c0), scaled by sign.
  void add_block(size_t r0, size_t c0, const IntMatrix& b, int sign = 1);

  const Row& row(size_t r) const { return rows_[r]; }

  IntMatrix to_dense() const;
  SparseIntMatrix transpose() const;
  SparseIntMatrix operator*(const SparseIntMatrix& o) const;
  bool is_zero() const;
  bool operator==(const SparseIntMatrix& o) const;

  /// Snapshot format: "rows cols nnz" header followed by "r c value" lines.
  void write_snapshot(std::ostream& os) const;
  static SparseIntMatrix read_snapshot(std::istream& is);
  void save(const std::string& path) const;
  static SparseIntMatrix load(const std::string& path);

 private:
  size_t cols_ = 0;
  std::vector<Row> rows_;
};

}  // namespace bianchi
