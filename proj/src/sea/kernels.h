// sea/kernels.h
//
// Dense kernels behind the model and the similarity code. Every parallel
// loop partitions the OUTPUT: one thread owns each output element and inner
// sums run serially in double, so results are bit-identical for any thread
// count. tests/ref holds the serial twins these are checked against.

#ifndef SEA_KERNELS_H_
#define SEA_KERNELS_H_

#include <cmath>

#include "sea/mat.h"

namespace sea {

namespace detail {
inline void require(bool ok, const char* what) {
  if (!ok) throw Error(Err::shape_mismatch, what);
}
}  // namespace detail

// C = A * B. B is copied transposed first so the inner products read both
// operands contiguously; the per-element summation order (k ascending) is
// unchanged, so results match the strided form bit for bit.
template <typename T>
Mat<T> matmul(const Mat<T>& a, const Mat<T>& b) {
  detail::require(a.cols == b.rows, "matmul inner dims");
  Mat<T> bt(b.cols, b.rows);
  for (int k = 0; k < b.rows; ++k) {
    const T* brow = b.row(k);
    for (int j = 0; j < b.cols; ++j) bt.at(j, k) = brow[j];
  }
  Mat<T> c(a.rows, b.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) {
    const T* arow = a.row(i);
    for (int j = 0; j < b.cols; ++j) {
      const T* btrow = bt.row(j);
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k)
        acc += static_cast<double>(arow[k]) * static_cast<double>(btrow[k]);
      c.at(i, j) = static_cast<T>(acc);
    }
  }
  return c;
}

// C = A * B^T   (B given as n x k)
template <typename T>
Mat<T> matmul_nt(const Mat<T>& a, const Mat<T>& b) {
  detail::require(a.cols == b.cols, "matmul_nt inner dims");
  Mat<T> c(a.rows, b.rows);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) {
    const T* arow = a.row(i);
    for (int j = 0; j < b.rows; ++j) {
      const T* brow = b.row(j);
      double acc = 0.0;
      for (int k = 0; k < a.cols; ++k)
        acc += static_cast<double>(arow[k]) * static_cast<double>(brow[k]);
      c.at(i, j) = static_cast<T>(acc);
    }
  }
  return c;
}

// C = A^T * B   (A given as k x m, result m x n)
template <typename T>
Mat<T> matmul_tn(const Mat<T>& a, const Mat<T>& b) {
  detail::require(a.rows == b.rows, "matmul_tn inner dims");
  Mat<T> c(a.cols, b.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.cols; ++i) {
    for (int j = 0; j < b.cols; ++j) {
      double acc = 0.0;
      for (int k = 0; k < a.rows; ++k)
        acc += static_cast<double>(a.at(k, i)) * static_cast<double>(b.at(k, j));
      c.at(i, j) = static_cast<T>(acc);
    }
  }
  return c;
}

template <typename T>
void add_row_inplace(Mat<T>& m, const Mat<T>& row) {
  detail::require(row.rows == 1 && row.cols == m.cols, "add_row_inplace shape");
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m.rows; ++i) {
    T* r = m.row(i);
    for (int j = 0; j < m.cols; ++j) r[j] += row.at(0, j);
  }
}

template <typename T>
void relu_inplace(Mat<T>& m) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m.rows; ++i) {
    T* r = m.row(i);
    for (int j = 0; j < m.cols; ++j)
      if (r[j] < T(0)) r[j] = T(0);
  }
}

// g <- g masked by (act > 0); the ReLU kink itself passes zero.
template <typename T>
void relu_backward_inplace(Mat<T>& g, const Mat<T>& act) {
  detail::require(g.same_shape(act), "relu_backward shape");
#pragma omp parallel for schedule(static)
  for (int i = 0; i < g.rows; ++i) {
    T* gr = g.row(i);
    const T* ar = act.row(i);
    for (int j = 0; j < g.cols; ++j)
      if (!(ar[j] > T(0))) gr[j] = T(0);
  }
}

// Column sums as a 1 x cols matrix.
template <typename T>
Mat<T> col_sum(const Mat<T>& m) {
  Mat<T> out(1, m.cols);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m.cols; ++j) {
    double acc = 0.0;
    for (int i = 0; i < m.rows; ++i) acc += static_cast<double>(m.at(i, j));
    out.at(0, j) = static_cast<T>(acc);
  }
  return out;
}

// [A | B] side by side.
template <typename T>
Mat<T> hconcat(const Mat<T>& a, const Mat<T>& b) {
  detail::require(a.rows == b.rows, "hconcat rows");
  Mat<T> c(a.rows, a.cols + b.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) {
    T* cr = c.row(i);
    const T* ar = a.row(i);
    const T* br = b.row(i);
    for (int j = 0; j < a.cols; ++j) cr[j] = ar[j];
    for (int j = 0; j < b.cols; ++j) cr[a.cols + j] = br[j];
  }
  return c;
}

template <typename T>
Mat<T> slice_cols(const Mat<T>& m, int begin, int end) {
  detail::require(0 <= begin && begin <= end && end <= m.cols, "slice_cols range");
  Mat<T> out(m.rows, end - begin);
  for (int i = 0; i < m.rows; ++i) {
    const T* src = m.row(i);
    T* dst = out.row(i);
    for (int j = begin; j < end; ++j) dst[j - begin] = src[j];
  }
  return out;
}

template <typename T>
void add_inplace(Mat<T>& dst, const Mat<T>& src) {
  detail::require(dst.same_shape(src), "add_inplace shape");
#pragma omp parallel for schedule(static)
  for (int i = 0; i < dst.rows; ++i) {
    T* d = dst.row(i);
    const T* s = src.row(i);
    for (int j = 0; j < dst.cols; ++j) d[j] += s[j];
  }
}

// n copies of a 1 x k row stacked into an n x k matrix.
template <typename T>
Mat<T> broadcast_rows(const Mat<T>& row, int n) {
  detail::require(row.rows == 1, "broadcast_rows input");
  Mat<T> out(n, row.cols);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    T* r = out.row(i);
    for (int j = 0; j < row.cols; ++j) r[j] = row.at(0, j);
  }
  return out;
}

// Euclidean norm per row, accumulated in double.
template <typename T>
std::vector<double> row_norms(const Mat<T>& m) {
  std::vector<double> out(static_cast<size_t>(m.rows));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m.rows; ++i) {
    const T* r = m.row(i);
    double acc = 0.0;
    for (int j = 0; j < m.cols; ++j)
      acc += static_cast<double>(r[j]) * static_cast<double>(r[j]);
    out[static_cast<size_t>(i)] = std::sqrt(acc);
  }
  return out;
}

}  // namespace sea

#endif  // SEA_KERNELS_H_
