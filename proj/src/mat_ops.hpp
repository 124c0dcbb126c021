#pragma once

#include <algorithm>
#include <cstddef>

namespace chemoflow::detail {

// Row-major C(m x k) = op(A) * op(B). op(A)=A with A stored m x n, or A^T
// with A stored n x m; op(B)=B stored n x k, or B^T stored k x n. Each output
// element accumulates over l in a fixed order, so results do not depend on
// the number of threads.
inline void matmul(const double* A, const double* B, double* C, int m, int n, int k,
                   bool a_transposed, bool b_transposed, bool parallel) {
#ifndef _OPENMP
  (void)parallel;
#endif
  if (!b_transposed) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int i = 0; i < m; ++i) {
      double* crow = C + static_cast<size_t>(i) * k;
      std::fill(crow, crow + k, 0.0);
      for (int l = 0; l < n; ++l) {
        const double a = a_transposed ? A[static_cast<size_t>(l) * m + i]
                                      : A[static_cast<size_t>(i) * n + l];
        const double* brow = B + static_cast<size_t>(l) * k;
        for (int j = 0; j < k; ++j) crow[j] += a * brow[j];
      }
    }
  } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int i = 0; i < m; ++i) {
      double* crow = C + static_cast<size_t>(i) * k;
      for (int j = 0; j < k; ++j) {
        const double* bj = B + static_cast<size_t>(j) * n;
        double acc = 0.0;
        for (int l = 0; l < n; ++l) {
          const double a = a_transposed ? A[static_cast<size_t>(l) * m + i]
                                        : A[static_cast<size_t>(i) * n + l];
          acc += a * bj[l];
        }
        crow[j] = acc;
      }
    }
  }
}

}  // namespace chemoflow::detail
