// sea/self_express.h
//
// Self-expression primitives: frame-by-frame cosine Gram, diagonal removal,
// row-sum normalization, and the self-expressed embedding Zbar = W * Z where
// W is the normalized off-diagonal Gram of Z.

#ifndef SEA_SELF_EXPRESS_H_
#define SEA_SELF_EXPRESS_H_

#include <vector>

#include "sea/kernels.h"
#include "sea/mat.h"

namespace sea {

// A[i][j] = <z_i, z_j> / max(|z_i| |z_j|, eps). Symmetric; zero rows give
// zero cosines through the eps guard.
template <typename T>
Mat<T> cosine_gram(const Mat<T>& z, double eps) {
  Mat<T> a(z.rows, z.rows);
  const std::vector<double> norms = row_norms(z);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < z.rows; ++i) {
    const T* zi = z.row(i);
    for (int j = 0; j <= i; ++j) {
      const T* zj = z.row(j);
      double dot = 0.0;
      for (int k = 0; k < z.cols; ++k)
        dot += static_cast<double>(zi[k]) * static_cast<double>(zj[k]);
      double den = norms[i] * norms[j];
      if (den < eps) den = eps;
      T val = static_cast<T>(dot / den);
      a.at(i, j) = val;
      a.at(j, i) = val;
    }
  }
  return a;
}

template <typename T>
Mat<T> zero_diagonal(const Mat<T>& a) {
  if (a.rows != a.cols) throw Error(Err::not_square, "zero_diagonal");
  Mat<T> out = a;
  for (int i = 0; i < a.rows; ++i) out.at(i, i) = T(0);
  return out;
}

// Divides each row by its sum; rows whose sum is below eps come back all
// zero. Input must be non-negative up to rounding. Exceptions must not
// unwind through an OpenMP region, so the scan records a flag per row and
// the throw happens after the loop.
template <typename T>
Mat<T> row_normalize(const Mat<T>& a, double eps) {
  Mat<T> out(a.rows, a.cols);
  std::vector<char> negative(static_cast<size_t>(a.rows), 0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) {
    const T* src = a.row(i);
    double sum = 0.0;
    for (int j = 0; j < a.cols; ++j) {
      if (static_cast<double>(src[j]) < -1e-6) negative[static_cast<size_t>(i)] = 1;
      sum += static_cast<double>(src[j]);
    }
    T* dst = out.row(i);
    if (sum < eps) {
      for (int j = 0; j < a.cols; ++j) dst[j] = T(0);
    } else {
      for (int j = 0; j < a.cols; ++j)
        dst[j] = static_cast<T>(static_cast<double>(src[j]) / sum);
    }
  }
  for (char bad : negative)
    if (bad) throw Error(Err::negative_entry, "row_normalize input");
  return out;
}

template <typename T>
struct SelfExpression {
  Mat<T> zbar;  // W * Z
  Mat<T> w;     // row-normalized off-diagonal Gram
  Mat<T> a;     // Gram with zeroed diagonal
};

template <typename T>
SelfExpression<T> self_express(const Mat<T>& z, double eps) {
  SelfExpression<T> out;
  out.a = zero_diagonal(cosine_gram(z, eps));
  out.w = row_normalize(out.a, eps);
  out.zbar = matmul(out.w, z);
  return out;
}

// Mean over all entries of the squared difference.
template <typename T>
double mse(const Mat<T>& x, const Mat<T>& xhat) {
  if (!x.same_shape(xhat)) throw Error(Err::shape_mismatch, "mse");
  std::vector<double> partial(static_cast<size_t>(x.rows), 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < x.rows; ++i) {
    const T* a = x.row(i);
    const T* b = xhat.row(i);
    double acc = 0.0;
    for (int j = 0; j < x.cols; ++j) {
      double d = static_cast<double>(a[j]) - static_cast<double>(b[j]);
      acc += d * d;
    }
    partial[static_cast<size_t>(i)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total / (static_cast<double>(x.rows) * static_cast<double>(x.cols));
}

}  // namespace sea

#endif  // SEA_SELF_EXPRESS_H_
