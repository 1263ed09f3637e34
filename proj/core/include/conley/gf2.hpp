#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace conley::gf2 {

/// Dense matrix over GF(2), rows bit-packed into 64-bit words.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  static BitMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t r, std::size_t c) const {
    return (data_[r * words_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool v) {
    auto& w = data_[r * words_ + c / 64];
    const std::uint64_t bit = std::uint64_t{1} << (c % 64);
    w = v ? (w | bit) : (w & ~bit);
  }
  void flip(std::size_t r, std::size_t c) { data_[r * words_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

  /// row(dst) += row(src)
  void add_row(std::size_t dst, std::size_t src);

  BitMatrix transpose() const;
  BitMatrix operator*(const BitMatrix& rhs) const;
  bool operator==(const BitMatrix& rhs) const;
  bool is_zero() const;

  std::size_t rank() const;
  /// Square and full rank.
  bool is_invertible() const;
  /// Throws std::domain_error when singular.
  BitMatrix inverse() const;
  /// Columns form a basis of the kernel {x : A x = 0}; result is cols() x nullity.
  BitMatrix kernel_basis() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> data_;
};

}  // namespace conley::gf2
