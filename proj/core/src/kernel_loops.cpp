#include "kernel_loops.hpp"

#include <cmath>

namespace msqg::detail {

namespace {

// Contiguous source range [lo, hi) against one fixed target point.
inline void range_sums(double tx, double ty,
                       const double* yx, const double* yy,
                       const double* dyx, const double* dyy, int lo, int hi,
                       double neg_alpha, double beta2,
                       double& s1, double& svx, double& svy, double& mr2) {
    double acc_s1 = 0.0, acc_x = 0.0, acc_y = 0.0, acc_m = mr2;
    for (int l = lo; l < hi; ++l) {
        const double wx = tx - yx[l];
        const double wy = ty - yy[l];
        const double r2 = wx * wx + wy * wy;
        const double w = std::pow(r2 + beta2, neg_alpha);
        acc_m = r2 < acc_m ? r2 : acc_m;
        acc_s1 += w;
        acc_x += dyx[l] * w;
        acc_y += dyy[l] * w;
    }
    s1 += acc_s1;
    svx += acc_x;
    svy += acc_y;
    mr2 = acc_m;
}

} // namespace

void block_sums(const double* zx, const double* zy, int n_target,
                const double* yx, const double* yy,
                const double* dyx, const double* dyy, int n_source,
                double neg_alpha, double beta2, bool skip_diagonal,
                double* s1, double* svx, double* svy, double* min_r2) {
    double mr2 = 1e300;
    for (int j = 0; j < n_target; ++j) {
        double a = 0.0, bx = 0.0, by = 0.0;
        if (skip_diagonal) {
            range_sums(zx[j], zy[j], yx, yy, dyx, dyy, 0, j, neg_alpha, beta2, a, bx, by, mr2);
            range_sums(zx[j], zy[j], yx, yy, dyx, dyy, j + 1, n_source, neg_alpha, beta2, a, bx,
                       by, mr2);
        } else {
            range_sums(zx[j], zy[j], yx, yy, dyx, dyy, 0, n_source, neg_alpha, beta2, a, bx, by,
                       mr2);
        }
        s1[j] = a;
        svx[j] = bx;
        svy[j] = by;
    }
    *min_r2 = mr2;
}

void point_sums(double px, double py,
                const double* yx, const double* yy,
                const double* dyx, const double* dyy, int n_source,
                double neg_alpha, double beta2,
                double* svx, double* svy, double* min_r2) {
    double s1 = 0.0, bx = 0.0, by = 0.0, mr2 = 1e300;
    range_sums(px, py, yx, yy, dyx, dyy, 0, n_source, neg_alpha, beta2, s1, bx, by, mr2);
    *svx = bx;
    *svy = by;
    *min_r2 = mr2;
}

} // namespace msqg::detail
