#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace bianchi {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense row-major matrix over Z.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(size_t rows, size_t cols);
  IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

  static IntMatrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Int& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& other) const;
  IntMatrix operator+(const IntMatrix& other) const;
  IntMatrix operator-(const IntMatrix& other) const;
  IntMatrix operator*(const Int& s) const;
  bool operator==(const IntMatrix& other) const;
  bool operator!=(const IntMatrix& other) const { return !(*this == other); }

  bool is_zero() const;
  void swap_rows(size_t a, size_t b);
  void swap_cols(size_t a, size_t b);
  // row a += k * row b
  void add_row_multiple(size_t a, size_t b, const Int& k);
  // col a += k * col b
  void add_col_multiple(size_t a, size_t b, const Int& k);
  void negate_row(size_t r);
  void negate_col(size_t c);

  IntMatrix block(size_t r0, size_t c0, size_t nr, size_t nc) const;
  void set_block(size_t r0, size_t c0, const IntMatrix& b);

  std::string to_string() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Int> data_;
};

/// Dense matrix over Q.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(size_t rows, size_t cols);
  explicit RatMatrix(const IntMatrix& m);

  static RatMatrix identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Rat& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const Rat& operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  RatMatrix operator*(const RatMatrix& other) const;
  RatMatrix transpose() const;
  bool operator==(const RatMatrix& other) const;
  bool is_integral() const;
  // Throws std::domain_error if singular.
  RatMatrix inverse() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<Rat> data_;
};

/// Bareiss fraction-free determinant.
Int determinant(const IntMatrix& m);

struct ColumnHnf {
  IntMatrix h;        // rows x rank, columns span the column lattice
  IntMatrix u;        // cols x cols unimodular, m * u = [h | 0]
  IntMatrix u_inv;    // inverse of u
  size_t rank = 0;
};

/// Column Hermite normal form. Pivot rows strictly increase from left to
/// right, pivots are positive and entries left of a pivot in its row are
/// reduced into [0, pivot).
ColumnHnf column_hnf(const IntMatrix& m, bool with_transform = false);

/// Columns spanning {v : m v = 0}, saturated.
IntMatrix kernel_basis(const IntMatrix& m);

}  // namespace bianchi
