#include "conley/gf2.hpp"

#include <stdexcept>
#include <utility>

namespace conley::gf2 {

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_(rows * ((cols + 63) / 64), 0) {}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

void BitMatrix::add_row(std::size_t dst, std::size_t src) {
  std::uint64_t* d = &data_[dst * words_];
  const std::uint64_t* s = &data_[src * words_];
  for (std::size_t w = 0; w < words_; ++w) d[w] ^= s[w];
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) t.set(c, r, true);
  return t;
}

BitMatrix BitMatrix::operator*(const BitMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("BitMatrix product: inner dimensions differ");
  BitMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t* o = &out.data_[r * out.words_];
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!get(r, k)) continue;
      const std::uint64_t* s = &rhs.data_[k * rhs.words_];
      for (std::size_t w = 0; w < out.words_; ++w) o[w] ^= s[w];
    }
  }
  return out;
}

bool BitMatrix::operator==(const BitMatrix& rhs) const {
  return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

bool BitMatrix::is_zero() const {
  for (auto w : data_)
    if (w != 0) return false;
  return true;
}

std::size_t BitMatrix::rank() const {
  BitMatrix m = *this;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows_ && !m.get(pivot, c)) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != rank)
      for (std::size_t w = 0; w < words_; ++w) std::swap(m.data_[pivot * words_ + w], m.data_[rank * words_ + w]);
    for (std::size_t r = 0; r < rows_; ++r)
      if (r != rank && m.get(r, c)) m.add_row(r, rank);
    ++rank;
  }
  return rank;
}

bool BitMatrix::is_invertible() const { return rows_ == cols_ && rank() == rows_; }

BitMatrix BitMatrix::inverse() const {
  if (rows_ != cols_) throw std::domain_error("BitMatrix::inverse: not square");
  const std::size_t n = rows_;
  BitMatrix a = *this;
  BitMatrix inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && !a.get(pivot, c)) ++pivot;
    if (pivot == n) throw std::domain_error("BitMatrix::inverse: singular");
    if (pivot != c) {
      for (std::size_t w = 0; w < a.words_; ++w) std::swap(a.data_[pivot * a.words_ + w], a.data_[c * a.words_ + w]);
      for (std::size_t w = 0; w < inv.words_; ++w)
        std::swap(inv.data_[pivot * inv.words_ + w], inv.data_[c * inv.words_ + w]);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r != c && a.get(r, c)) {
        a.add_row(r, c);
        inv.add_row(r, c);
      }
    }
  }
  return inv;
}

BitMatrix BitMatrix::kernel_basis() const {
  // Reduced row echelon form, then one basis vector per free column.
  BitMatrix m = *this;
  std::vector<std::size_t> pivot_cols;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols_ && row < rows_; ++c) {
    std::size_t pivot = row;
    while (pivot < rows_ && !m.get(pivot, c)) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != row)
      for (std::size_t w = 0; w < words_; ++w) std::swap(m.data_[pivot * words_ + w], m.data_[row * words_ + w]);
    for (std::size_t r = 0; r < rows_; ++r)
      if (r != row && m.get(r, c)) m.add_row(r, row);
    pivot_cols.push_back(c);
    ++row;
  }
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  BitMatrix basis(cols_, free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    const std::size_t f = free_cols[j];
    basis.set(f, j, true);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i)
      if (m.get(i, f)) basis.set(pivot_cols[i], j, true);
  }
  return basis;
}

}  // namespace conley::gf2
