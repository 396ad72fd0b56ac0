#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace acdg {

using DenseVector = std::vector<double>;

/// Compressed sparse row matrix. Column indices are strictly increasing in each row.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
            std::vector<std::size_t> col_idx, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }
  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::size_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  DenseVector operator*(std::span<const double> x) const;

  /// Entry (i, j), zero when not stored.
  double at(std::size_t i, std::size_t j) const;
  /// Position of (i, j) in values(), or npos.
  std::size_t find(std::size_t i, std::size_t j) const;
  /// Adds to a stored entry; throws if (i, j) is outside the pattern.
  void add(std::size_t i, std::size_t j, double v);

  double max_abs() const;
  /// max |A_ij - A_ji| over the union of both patterns.
  double asymmetry() const;
  DenseVector diagonal() const;

  /// this + s * other; both must share the same pattern.
  CsrMatrix plus_scaled(double s, const CsrMatrix& other) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// Coordinate-format accumulator; duplicates are summed on build().
class TripletBuilder {
public:
  TripletBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  void add(std::size_t i, std::size_t j, double v);
  void reserve(std::size_t n) { entries_.reserve(n); }
  CsrMatrix build() const;

private:
  struct Entry {
    std::size_t i, j;
    double v;
  };
  std::size_t rows_, cols_;
  std::vector<Entry> entries_;
};

/// MatrixMarket coordinate real general.
void write_matrix_market(const CsrMatrix& a, std::ostream& out);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
/// y += s * x
void axpy(double s, std::span<const double> x, std::span<double> y);

}  // namespace acdg
