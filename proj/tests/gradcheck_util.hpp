// distillkit/gradcheck_util.hpp

// Copyright 2026  DistillKit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTILLKIT_TESTS_GRADCHECK_UTIL_HPP_
#define DISTILLKIT_TESTS_GRADCHECK_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace testutil {

/// Relative error between a finite-difference slope and an analytic
/// derivative, floored so near-zero pairs compare absolutely.
inline double rel_err(double fd, double an) {
  const double denom = std::max({std::abs(fd), std::abs(an), 1e-6});
  return std::abs(fd - an) / denom;
}

/// Central difference through an arbitrary scalar functional. The parameter
/// is restored afterwards.
template <typename F>
double central_diff(double* x, double h, F&& f) {
  const double x0 = *x;
  *x = x0 + h;
  const double fp = f();
  *x = x0 - h;
  const double fm = f();
  *x = x0;
  return (fp - fm) / (2.0 * h);
}

}  // namespace testutil

#endif  // DISTILLKIT_TESTS_GRADCHECK_UTIL_HPP_
