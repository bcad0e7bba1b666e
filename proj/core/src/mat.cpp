#include "pandarl/nn/mat.hpp"

#include <cmath>
#include <cstring>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace pandarl::nn {

namespace {

inline void scalar_cell(int K, const double* a, const double* b, int ldb, double* c,
                        bool accumulate) {
  double sum = 0.0;
  for (int k = 0; k < K; ++k) sum += a[k] * b[static_cast<std::size_t>(k) * ldb];
  *c = accumulate ? *c + sum : sum;
}

#if defined(__AVX512F__)

// 4 rows of A against a 16-wide panel of B: eight zmm accumulators, two
// loads and four broadcast-FMAs per k step.
template <bool Accumulate>
inline void micro_4x16(int K, const double* a0, const double* a1, const double* a2,
                       const double* a3, const double* b, int ldb, double* c0, double* c1,
                       double* c2, double* c3) {
  __m512d s00 = _mm512_setzero_pd(), s01 = _mm512_setzero_pd();
  __m512d s10 = _mm512_setzero_pd(), s11 = _mm512_setzero_pd();
  __m512d s20 = _mm512_setzero_pd(), s21 = _mm512_setzero_pd();
  __m512d s30 = _mm512_setzero_pd(), s31 = _mm512_setzero_pd();
  const double* bp = b;
  for (int k = 0; k < K; ++k) {
    const __m512d b0 = _mm512_loadu_pd(bp);
    const __m512d b1 = _mm512_loadu_pd(bp + 8);
    bp += ldb;
    __m512d v = _mm512_set1_pd(a0[k]);
    s00 = _mm512_fmadd_pd(v, b0, s00);
    s01 = _mm512_fmadd_pd(v, b1, s01);
    v = _mm512_set1_pd(a1[k]);
    s10 = _mm512_fmadd_pd(v, b0, s10);
    s11 = _mm512_fmadd_pd(v, b1, s11);
    v = _mm512_set1_pd(a2[k]);
    s20 = _mm512_fmadd_pd(v, b0, s20);
    s21 = _mm512_fmadd_pd(v, b1, s21);
    v = _mm512_set1_pd(a3[k]);
    s30 = _mm512_fmadd_pd(v, b0, s30);
    s31 = _mm512_fmadd_pd(v, b1, s31);
  }
  if constexpr (Accumulate) {
    s00 = _mm512_add_pd(s00, _mm512_loadu_pd(c0));
    s01 = _mm512_add_pd(s01, _mm512_loadu_pd(c0 + 8));
    s10 = _mm512_add_pd(s10, _mm512_loadu_pd(c1));
    s11 = _mm512_add_pd(s11, _mm512_loadu_pd(c1 + 8));
    s20 = _mm512_add_pd(s20, _mm512_loadu_pd(c2));
    s21 = _mm512_add_pd(s21, _mm512_loadu_pd(c2 + 8));
    s30 = _mm512_add_pd(s30, _mm512_loadu_pd(c3));
    s31 = _mm512_add_pd(s31, _mm512_loadu_pd(c3 + 8));
  }
  _mm512_storeu_pd(c0, s00);
  _mm512_storeu_pd(c0 + 8, s01);
  _mm512_storeu_pd(c1, s10);
  _mm512_storeu_pd(c1 + 8, s11);
  _mm512_storeu_pd(c2, s20);
  _mm512_storeu_pd(c2 + 8, s21);
  _mm512_storeu_pd(c3, s30);
  _mm512_storeu_pd(c3 + 8, s31);
}

constexpr int kPanel = 16;

#else

// Portable fallback: fixed-trip-count loops that autovectorize under -O3.
template <bool Accumulate>
inline void micro_4x16(int K, const double* a0, const double* a1, const double* a2,
                       const double* a3, const double* b, int ldb, double* c0, double* c1,
                       double* c2, double* c3) {
  constexpr int kNr = 8;
  double acc[4][kNr] = {};
  for (int k = 0; k < K; ++k) {
    const double* brow = b + static_cast<std::size_t>(k) * ldb;
    const double av0 = a0[k], av1 = a1[k], av2 = a2[k], av3 = a3[k];
    for (int n = 0; n < kNr; ++n) {
      const double bv = brow[n];
      acc[0][n] += av0 * bv;
      acc[1][n] += av1 * bv;
      acc[2][n] += av2 * bv;
      acc[3][n] += av3 * bv;
    }
  }
  double* crows[4] = {c0, c1, c2, c3};
  for (int m = 0; m < 4; ++m) {
    for (int n = 0; n < kNr; ++n) {
      crows[m][n] = Accumulate ? crows[m][n] + acc[m][n] : acc[m][n];
    }
  }
}

constexpr int kPanel = 8;

#endif

template <bool Accumulate>
void gemm_rowmajor(const double* a, int lda, const double* b, int ldb, double* c, int ldc,
                   int m, int n, int k) {
  int i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* a0 = a + static_cast<std::size_t>(i) * lda;
    const double* a1 = a0 + lda;
    const double* a2 = a1 + lda;
    const double* a3 = a2 + lda;
    double* c0 = c + static_cast<std::size_t>(i) * ldc;
    double* c1 = c0 + ldc;
    double* c2 = c1 + ldc;
    double* c3 = c2 + ldc;
    int j = 0;
    for (; j + kPanel <= n; j += kPanel) {
      micro_4x16<Accumulate>(k, a0, a1, a2, a3, b + j, ldb, c0 + j, c1 + j, c2 + j, c3 + j);
    }
    for (; j < n; ++j) {
      scalar_cell(k, a0, b + j, ldb, c0 + j, Accumulate);
      scalar_cell(k, a1, b + j, ldb, c1 + j, Accumulate);
      scalar_cell(k, a2, b + j, ldb, c2 + j, Accumulate);
      scalar_cell(k, a3, b + j, ldb, c3 + j, Accumulate);
    }
  }
  for (; i < m; ++i) {
    const double* ai = a + static_cast<std::size_t>(i) * lda;
    double* ci = c + static_cast<std::size_t>(i) * ldc;
    for (int j = 0; j < n; ++j) scalar_cell(k, ai, b + j, ldb, ci + j, Accumulate);
  }
}

void gemm_dispatch(const double* a, int lda, const double* b, int ldb, double* c, int ldc,
                   int m, int n, int k, bool accumulate) {
  if (accumulate) {
    gemm_rowmajor<true>(a, lda, b, ldb, c, ldc, m, n, k);
  } else {
    gemm_rowmajor<false>(a, lda, b, ldb, c, ldc, m, n, k);
  }
}

thread_local std::vector<double> g_transpose_buf;

const double* transposed(const double* src, int rows, int cols) {
  g_transpose_buf.resize(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    const double* srow = src + static_cast<std::size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) {
      g_transpose_buf[static_cast<std::size_t>(c) * rows + r] = srow[c];
    }
  }
  return g_transpose_buf.data();
}

}  // namespace

void gemm_nn(const Mat& a, const Mat& b, Mat& c, bool accumulate) {
  assert(a.cols() == b.rows());
  c.resize(a.rows(), b.cols());
  gemm_dispatch(a.data(), a.cols(), b.data(), b.cols(), c.data(), c.cols(), a.rows(),
                b.cols(), a.cols(), accumulate);
}

void gemm_nt(const Mat& a, const Mat& b, Mat& c, bool accumulate) {
  assert(a.cols() == b.cols());
  c.resize(a.rows(), b.rows());
  // B^T materialized once so the panels stream contiguously.
  const double* bt = transposed(b.data(), b.rows(), b.cols());
  gemm_dispatch(a.data(), a.cols(), bt, b.rows(), c.data(), c.cols(), a.rows(), b.rows(),
                a.cols(), accumulate);
}

void gemm_tn(const Mat& a, const Mat& b, Mat& c, bool accumulate) {
  assert(a.rows() == b.rows());
  c.resize(a.cols(), b.cols());
  const double* at = transposed(a.data(), a.rows(), a.cols());
  gemm_dispatch(at, a.rows(), b.data(), b.cols(), c.data(), c.cols(), a.cols(), b.cols(),
                a.rows(), accumulate);
}

void add_row_vector(Mat& m, const std::vector<double>& v) {
  assert(static_cast<int>(v.size()) == m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    double* row = m.row(r);
    for (int c = 0; c < m.cols(); ++c) row[c] += v[static_cast<std::size_t>(c)];
  }
}

void relu_inplace(Mat& m) {
  double* p = m.data();
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) p[i] = p[i] > 0.0 ? p[i] : 0.0;
}

void tanh_inplace(Mat& m) {
  double* p = m.data();
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) p[i] = std::tanh(p[i]);
}

void column_sums(const Mat& m, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(m.cols()), 0.0);
  for (int r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    for (int c = 0; c < m.cols(); ++c) out[static_cast<std::size_t>(c)] += row[c];
  }
}

}  // namespace pandarl::nn
