#include "bianchi/sparse_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace bianchi {

SparseIntMatrix::SparseIntMatrix(size_t rows, size_t cols) : cols_(cols), rows_(rows) {}

SparseIntMatrix SparseIntMatrix::from_dense(const IntMatrix& m) {
  SparseIntMatrix s(m.rows(), m.cols());
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c)
      if (m(r, c) != 0) s.rows_[r].push_back({static_cast<uint32_t>(c), m(r, c)});
  return s;
}

size_t SparseIntMatrix::nnz() const {
  size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

size_t SparseIntMatrix::max_entry_bits() const {
  size_t b = 0;
  for (const auto& r : rows_)
    for (const auto& e : r) b = std::max(b, mpz_sizeinbase(e.value.get_mpz_t(), 2));
  return b;
}

namespace {

template <class RowT>
auto find_col(RowT& row, size_t c) {
  return std::lower_bound(row.begin(), row.end(), c,
                          [](const SparseIntMatrix::Entry& e, size_t col) { return e.col < col; });
}

}  // namespace

Int SparseIntMatrix::get(size_t r, size_t c) const {
  if (r >= rows_.size() || c >= cols_) throw std::out_of_range("SparseIntMatrix::get");
  auto it = find_col(rows_[r], c);
  if (it != rows_[r].end() && it->col == c) return it->value;
  return 0;
}

void SparseIntMatrix::set(size_t r, size_t c, const Int& v) {
  if (r >= rows_.size() || c >= cols_) throw std::out_of_range("SparseIntMatrix::set");
  auto& row = rows_[r];
  auto it = find_col(row, c);
  bool present = it != row.end() && it->col == c;
  if (v == 0) {
    if (present) row.erase(it);
  } else if (present) {
    it->value = v;
  } else {
    row.insert(it, {static_cast<uint32_t>(c), v});
  }
}

void SparseIntMatrix::add_to(size_t r, size_t c, const Int& v) {
  if (v == 0) return;
  if (r >= rows_.size() || c >= cols_) throw std::out_of_range("SparseIntMatrix::add_to");
  auto& row = rows_[r];
  auto it = find_col(row, c);
  if (it != row.end() && it->col == c) {
    it->value += v;
    if (it->value == 0) row.erase(it);
  } else {
    row.insert(it, {static_cast<uint32_t>(c), v});
  }
}

void SparseIntMatrix::add_block(size_t r0, size_t c0, const IntMatrix& b, int sign) {
  if (r0 + b.rows() > rows_.size() || c0 + b.cols() > cols_) throw std::out_of_range("SparseIntMatrix::add_block");
  for (size_t i = 0; i < b.rows(); ++i) {
    auto& row = rows_[r0 + i];
    Row merged;
    merged.reserve(row.size() + b.cols());
    auto it = row.begin();
    for (size_t j = 0; j < b.cols(); ++j) {
      uint32_t c = static_cast<uint32_t>(c0 + j);
      while (it != row.end() && it->col < c) merged.push_back(std::move(*it++));
      Int v = sign > 0 ? b(i, j) : Int(-b(i, j));
      if (it != row.end() && it->col == c) {
        v += it->value;
        ++it;
      }
      if (v != 0) merged.push_back({c, std::move(v)});
    }
    while (it != row.end()) merged.push_back(std::move(*it++));
    row = std::move(merged);
  }
}

IntMatrix SparseIntMatrix::to_dense() const {
  IntMatrix m(rows(), cols_);
  for (size_t r = 0; r < rows(); ++r)
    for (const auto& e : rows_[r]) m(r, e.col) = e.value;
  return m;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  SparseIntMatrix t(cols_, rows());
  for (size_t r = 0; r < rows(); ++r)
    for (const auto& e : rows_[r]) t.rows_[e.col].push_back({static_cast<uint32_t>(r), e.value});
  return t;
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& o) const {
  if (cols_ != o.rows()) throw std::invalid_argument("SparseIntMatrix: dimension mismatch in product");
  SparseIntMatrix p(rows(), o.cols());
  for (size_t r = 0; r < rows(); ++r) {
    std::map<uint32_t, Int> acc;
    for (const auto& e : rows_[r])
      for (const auto& f : o.rows_[e.col]) acc[f.col] += e.value * f.value;
    for (auto& [c, v] : acc)
      if (v != 0) p.rows_[r].push_back({c, std::move(v)});
  }
  return p;
}

bool SparseIntMatrix::is_zero() const {
  for (const auto& r : rows_)
    if (!r.empty()) return false;
  return true;
}

bool SparseIntMatrix::operator==(const SparseIntMatrix& o) const {
  if (cols_ != o.cols_ || rows() != o.rows()) return false;
  for (size_t r = 0; r < rows(); ++r) {
    if (rows_[r].size() != o.rows_[r].size()) return false;
    for (size_t k = 0; k < rows_[r].size(); ++k)
      if (rows_[r][k].col != o.rows_[r][k].col || rows_[r][k].value != o.rows_[r][k].value) return false;
  }
  return true;
}

void SparseIntMatrix::write_snapshot(std::ostream& os) const {
  os << rows() << ' ' << cols_ << ' ' << nnz() << '\n';
  for (size_t r = 0; r < rows(); ++r)
    for (const auto& e : rows_[r]) os << r << ' ' << e.col << ' ' << e.value << '\n';
}

SparseIntMatrix SparseIntMatrix::read_snapshot(std::istream& is) {
  size_t nr, nc, nz;
  if (!(is >> nr >> nc >> nz)) throw std::runtime_error("snapshot: bad header");
  SparseIntMatrix m(nr, nc);
  for (size_t k = 0; k < nz; ++k) {
    size_t r, c;
    std::string v;
    if (!(is >> r >> c >> v)) throw std::runtime_error("snapshot: truncated entry list");
    if (r >= nr || c >= nc) throw std::runtime_error("snapshot: index out of range");
    m.add_to(r, c, Int(v));
  }
  return m;
}

void SparseIntMatrix::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_snapshot(f);
}

SparseIntMatrix SparseIntMatrix::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return read_snapshot(f);
}

}  // namespace bianchi
