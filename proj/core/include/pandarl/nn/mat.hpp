#pragma once

#include <cassert>
#include <vector>

namespace pandarl::nn {

// Dense row-major matrix of doubles. resize() keeps the allocation when the
// new size fits, so training workspaces do not churn the allocator.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) { resize(rows, cols); }

  void resize(int rows, int cols) {
    rows_ = rows;
    cols_ = cols;
    if (static_cast<std::size_t>(rows) * cols > data_.size()) {
      data_.resize(static_cast<std::size_t>(rows) * cols);
    }
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return static_cast<std::size_t>(rows_) * cols_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
  const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * cols_ + c];
  }

  void fill(double v) {
    for (std::size_t i = 0; i < size(); ++i) data_[i] = v;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// C = A * B (+ C when accumulate). A: MxK, B: KxN, C: MxN.
void gemm_nn(const Mat& a, const Mat& b, Mat& c, bool accumulate = false);

// C = A * B^T. A: MxK, B: NxK, C: MxN.
void gemm_nt(const Mat& a, const Mat& b, Mat& c, bool accumulate = false);

// C = A^T * B. A: KxM, B: KxN, C: MxN.
void gemm_tn(const Mat& a, const Mat& b, Mat& c, bool accumulate = false);

void add_row_vector(Mat& m, const std::vector<double>& v);
void relu_inplace(Mat& m);
void tanh_inplace(Mat& m);
// out[j] = sum over rows of m(:, j)
void column_sums(const Mat& m, std::vector<double>& out);

}  // namespace pandarl::nn
