#include "bianchi/int_matrix.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace bianchi {

IntMatrix::IntMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
    for (long v : r) data_.emplace_back(v);
  }
}

IntMatrix IntMatrix::identity(size_t n) {
  IntMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("IntMatrix: dimension mismatch in product");
  IntMatrix p(rows_, o.cols_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t k = 0; k < cols_; ++k) {
      const Int& a = (*this)(r, k);
      if (a == 0) continue;
      for (size_t c = 0; c < o.cols_; ++c) {
        if (o(k, c) != 0) mpz_addmul(p(r, c).get_mpz_t(), a.get_mpz_t(), o(k, c).get_mpz_t());
      }
    }
  return p;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: dimension mismatch in sum");
  IntMatrix s(*this);
  for (size_t i = 0; i < data_.size(); ++i) s.data_[i] += o.data_[i];
  return s;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMatrix: dimension mismatch in difference");
  IntMatrix s(*this);
  for (size_t i = 0; i < data_.size(); ++i) s.data_[i] -= o.data_[i];
  return s;
}

IntMatrix IntMatrix::operator*(const Int& s) const {
  IntMatrix r(*this);
  for (auto& v : r.data_) v *= s;
  return r;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool IntMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

void IntMatrix::swap_rows(size_t a, size_t b) {
  if (a == b) return;
  for (size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

void IntMatrix::swap_cols(size_t a, size_t b) {
  if (a == b) return;
  for (size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

void IntMatrix::add_row_multiple(size_t a, size_t b, const Int& k) {
  if (k == 0) return;
  for (size_t c = 0; c < cols_; ++c)
    if ((*this)(b, c) != 0) mpz_addmul((*this)(a, c).get_mpz_t(), k.get_mpz_t(), (*this)(b, c).get_mpz_t());
}

void IntMatrix::add_col_multiple(size_t a, size_t b, const Int& k) {
  if (k == 0) return;
  for (size_t r = 0; r < rows_; ++r)
    if ((*this)(r, b) != 0) mpz_addmul((*this)(r, a).get_mpz_t(), k.get_mpz_t(), (*this)(r, b).get_mpz_t());
}

void IntMatrix::negate_row(size_t r) {
  for (size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

void IntMatrix::negate_col(size_t c) {
  for (size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
}

IntMatrix IntMatrix::block(size_t r0, size_t c0, size_t nr, size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("IntMatrix::block");
  IntMatrix b(nr, nc);
  for (size_t r = 0; r < nr; ++r)
    for (size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void IntMatrix::set_block(size_t r0, size_t c0, const IntMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("IntMatrix::set_block");
  for (size_t r = 0; r < b.rows(); ++r)
    for (size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t r = 0; r < rows_; ++r) {
    os << (r ? "; " : "");
    for (size_t c = 0; c < cols_; ++c) os << (c ? " " : "") << (*this)(r, c);
  }
  os << "]";
  return os.str();
}

RatMatrix::RatMatrix(size_t rows, size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix::RatMatrix(const IntMatrix& m) : RatMatrix(m.rows(), m.cols()) {
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) (*this)(r, c) = Rat(m(r, c));
}

RatMatrix RatMatrix::identity(size_t n) {
  RatMatrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::operator*(const RatMatrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("RatMatrix: dimension mismatch in product");
  RatMatrix p(rows_, o.cols_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t k = 0; k < cols_; ++k) {
      if ((*this)(r, k) == 0) continue;
      for (size_t c = 0; c < o.cols_; ++c) p(r, c) += (*this)(r, k) * o(k, c);
    }
  return p;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool RatMatrix::operator==(const RatMatrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool RatMatrix::is_integral() const {
  for (const auto& v : data_)
    if (v.get_den() != 1) return false;
  return true;
}

RatMatrix RatMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("RatMatrix::inverse: not square");
  size_t n = rows_;
  RatMatrix a(*this);
  RatMatrix inv = identity(n);
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && a(p, c) == 0) ++p;
    if (p == n) throw std::domain_error("RatMatrix::inverse: singular");
    if (p != c)
      for (size_t k = 0; k < n; ++k) {
        std::swap(a(p, k), a(c, k));
        std::swap(inv(p, k), inv(c, k));
      }
    Rat s = 1 / a(c, c);
    for (size_t k = 0; k < n; ++k) {
      a(c, k) *= s;
      inv(c, k) *= s;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rat f = a(r, c);
      for (size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

Int determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a(m);
  Int prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(p, k);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Int v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

namespace {

// Column op helper keeping u and u_inv in sync: col a += k col b.
struct ColOps {
  IntMatrix* m;
  IntMatrix* u;
  IntMatrix* u_inv;
  void add(size_t a, size_t b, const Int& k) {
    m->add_col_multiple(a, b, k);
    if (u) {
      u->add_col_multiple(a, b, k);
      u_inv->add_row_multiple(b, a, -k);
    }
  }
  void swap(size_t a, size_t b) {
    m->swap_cols(a, b);
    if (u) {
      u->swap_cols(a, b);
      u_inv->swap_rows(a, b);
    }
  }
  void negate(size_t a) {
    m->negate_col(a);
    if (u) {
      u->negate_col(a);
      u_inv->negate_row(a);
    }
  }
};

}  // namespace

ColumnHnf column_hnf(const IntMatrix& m, bool with_transform) {
  IntMatrix a(m);
  size_t n = a.cols();
  IntMatrix u, u_inv;
  if (with_transform) {
    u = IntMatrix::identity(n);
    u_inv = IntMatrix::identity(n);
  }
  ColOps ops{&a, with_transform ? &u : nullptr, with_transform ? &u_inv : nullptr};
  size_t k = 0;
  for (size_t i = 0; i < a.rows() && k < n; ++i) {
    while (true) {
      size_t best = n;
      for (size_t j = k; j < n; ++j)
        if (a(i, j) != 0 && (best == n || abs(a(i, j)) < abs(a(i, best)))) best = j;
      if (best == n) break;
      ops.swap(k, best);
      bool clean = true;
      for (size_t j = k + 1; j < n; ++j) {
        if (a(i, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, j).get_mpz_t(), a(i, k).get_mpz_t());
        ops.add(j, k, -q);
        if (a(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (k < n && a(i, k) != 0) {
      if (a(i, k) < 0) ops.negate(k);
      for (size_t j = 0; j < k; ++j) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, j).get_mpz_t(), a(i, k).get_mpz_t());
        ops.add(j, k, -q);
      }
      ++k;
    }
  }
  ColumnHnf out;
  out.rank = k;
  out.h = a.block(0, 0, a.rows(), k);
  if (with_transform) {
    out.u = std::move(u);
    out.u_inv = std::move(u_inv);
  }
  return out;
}

IntMatrix kernel_basis(const IntMatrix& m) {
  ColumnHnf h = column_hnf(m, true);
  size_t n = m.cols();
  return h.u.block(0, h.rank, n, n - h.rank);
}

}  // namespace bianchi
