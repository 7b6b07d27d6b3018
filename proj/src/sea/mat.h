// sea/mat.h

#ifndef SEA_MAT_H_
#define SEA_MAT_H_

#include <cmath>
#include <cstddef>
#include <vector>

#include "sea/error.h"

namespace sea {

// Dense row-major matrix. Storage is the template scalar (float on the
// training path, double in the gradient-check tests); all kernels accumulate
// in double regardless.
template <typename T>
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<T> v;

  Mat() = default;
  Mat(int r, int c, T fill = T(0))
      : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {}

  bool empty() const { return rows == 0 || cols == 0; }
  size_t size() const { return v.size(); }

  T* row(int i) { return v.data() + static_cast<size_t>(i) * cols; }
  const T* row(int i) const { return v.data() + static_cast<size_t>(i) * cols; }

  T& at(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
  T at(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

  bool all_finite() const {
    for (T x : v)
      if (!std::isfinite(static_cast<double>(x))) return false;
    return true;
  }

  template <typename U>
  Mat<U> cast() const {
    Mat<U> out(rows, cols);
    for (size_t i = 0; i < v.size(); ++i) out.v[i] = static_cast<U>(v[i]);
    return out;
  }
};

using MatF = Mat<float>;
using MatD = Mat<double>;

}  // namespace sea

#endif  // SEA_MAT_H_
