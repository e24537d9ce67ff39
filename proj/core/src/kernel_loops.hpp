#pragma once

// Hot pair-sum loops shared by the velocity evaluators and the rhs assembler.
// Pure arithmetic on raw arrays; compiled separately with fast-math so the
// pow() calls vectorize.  No exceptions, no NaN-dependent logic: callers
// inspect min_r2 afterwards to detect collisions.

namespace msqg::detail {

// For every target node j:
//   s1[j]  = sum_l w_l,            svx/svy[j] = sum_l dy_l * w_l,
//   w_l = (|z_j - y_l|^2 + beta2)^{neg_alpha},
// l running over all source nodes, minus the diagonal when skip_diagonal
// (requires n_target == n_source).  min_r2 receives the smallest squared
// distance encountered (diagonal excluded when skipped).
void block_sums(const double* zx, const double* zy, int n_target,
                const double* yx, const double* yy,
                const double* dyx, const double* dyy, int n_source,
                double neg_alpha, double beta2, bool skip_diagonal,
                double* s1, double* svx, double* svy, double* min_r2);

// Single evaluation point against one source curve: sv = sum_l dy_l * w_l.
void point_sums(double px, double py,
                const double* yx, const double* yy,
                const double* dyx, const double* dyy, int n_source,
                double neg_alpha, double beta2,
                double* svx, double* svy, double* min_r2);

} // namespace msqg::detail
