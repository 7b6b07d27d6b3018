// sea/grad_check.h

#ifndef SEA_GRAD_CHECK_H_
#define SEA_GRAD_CHECK_H_

#include <cmath>
#include <functional>
#include <vector>

#include "sea/error.h"

namespace sea {

// Central differences (f(t+h e_i) - f(t-h e_i)) / 2h per coordinate.
// Throws NonFinite if f returns a non-finite value anywhere.
inline std::vector<double> finite_diff_grad(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& theta, double h) {
  std::vector<double> grad(theta.size());
  std::vector<double> probe = theta;
  for (size_t i = 0; i < theta.size(); ++i) {
    probe[i] = theta[i] + h;
    double up = f(probe);
    probe[i] = theta[i] - h;
    double down = f(probe);
    probe[i] = theta[i];
    if (!std::isfinite(up) || !std::isfinite(down))
      throw Error(Err::non_finite, "objective returned non-finite value");
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace sea

#endif  // SEA_GRAD_CHECK_H_
