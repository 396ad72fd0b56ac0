#include "acdg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <utility>

#include "acdg/error.hpp"

namespace acdg {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || col_idx_.size() != values_.size() ||
      row_ptr_.back() != values_.size()) {
    throw InvalidArgument("inconsistent CSR arrays");
  }
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t* rp = row_ptr_.data();
  const std::size_t* ci = col_idx_.data();
  const double* v = values_.data();
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += v[k] * x[ci[k]];
    y[i] = s;
  }
}

DenseVector CsrMatrix::operator*(std::span<const double> x) const {
  DenseVector y(rows_);
  multiply(x, y);
  return y;
}

std::size_t CsrMatrix::find(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw InvalidArgument("matrix index out of range");
  const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return npos;
  return static_cast<std::size_t>(it - col_idx_.begin());
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const std::size_t k = find(i, j);
  return k == npos ? 0.0 : values_[k];
}

void CsrMatrix::add(std::size_t i, std::size_t j, double v) {
  const std::size_t k = find(i, j);
  if (k == npos) throw InvalidArgument("entry outside the sparsity pattern");
  values_[k] += v;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      m = std::max(m, std::abs(values_[k] - at(col_idx_[k], i)));
    }
  }
  return m;
}

DenseVector CsrMatrix::diagonal() const {
  DenseVector d(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) d[i] = at(i, i);
  return d;
}

CsrMatrix CsrMatrix::plus_scaled(double s, const CsrMatrix& other) const {
  if (other.row_ptr_ != row_ptr_ || other.col_idx_ != col_idx_) {
    throw InvalidArgument("plus_scaled requires identical sparsity patterns");
  }
  CsrMatrix r = *this;
  for (std::size_t k = 0; k < values_.size(); ++k) r.values_[k] += s * other.values_[k];
  return r;
}

void TripletBuilder::add(std::size_t i, std::size_t j, double v) {
  if (i >= rows_ || j >= cols_) throw InvalidArgument("triplet index out of range");
  entries_.push_back({i, j, v});
}

CsrMatrix TripletBuilder::build() const {
  std::vector<Entry> sorted = entries_;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  std::vector<std::size_t> row_ptr(rows_ + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(sorted.size());
  vals.reserve(sorted.size());
  for (std::size_t k = 0; k < sorted.size();) {
    const Entry& e = sorted[k];
    double v = 0.0;
    std::size_t m = k;
    for (; m < sorted.size() && sorted[m].i == e.i && sorted[m].j == e.j; ++m) v += sorted[m].v;
    cols.push_back(e.j);
    vals.push_back(v);
    ++row_ptr[e.i + 1];
    k = m;
  }
  for (std::size_t i = 0; i < rows_; ++i) row_ptr[i + 1] += row_ptr[i];
  return CsrMatrix(rows_, cols_, std::move(row_ptr), std::move(cols), std::move(vals));
}

void write_matrix_market(const CsrMatrix& a, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
      out << i + 1 << ' ' << a.col_idx()[k] + 1 << ' ' << a.values()[k] << '\n';
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double s, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

}  // namespace acdg
