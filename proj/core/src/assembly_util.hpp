#pragma once

// Per-curve sample/tangent arrays laid out for the kernel loops, with mirror
// copies for half-plane image terms.

#include <vector>

#include "msqg/curve.hpp"
#include "msqg/spectral.hpp"

namespace msqg::detail {

struct CurveArrays {
    std::vector<double> x, y;   // samples
    std::vector<double> dx, dy; // tangents (spectral)
    std::vector<double> mx, my; // mirrored samples (x, -y)
    std::vector<double> mdx, mdy;
};

inline std::vector<CurveArrays> prepare_arrays(const ContourState& state, bool with_mirror) {
    std::vector<CurveArrays> out(state.curves.size());
    for (size_t i = 0; i < state.curves.size(); ++i) {
        const Curve& c = state.curves[i];
        const int m = c.grid_size();
        const auto dz = spectral_derivative(c, 1);
        CurveArrays& a = out[i];
        a.x.resize(m);
        a.y.resize(m);
        a.dx.resize(m);
        a.dy.resize(m);
        for (int j = 0; j < m; ++j) {
            a.x[j] = c.samples[j].x;
            a.y[j] = c.samples[j].y;
            a.dx[j] = dz[j].x;
            a.dy[j] = dz[j].y;
        }
        if (with_mirror) {
            a.mx = a.x;
            a.mdx = a.dx;
            a.my.resize(m);
            a.mdy.resize(m);
            for (int j = 0; j < m; ++j) {
                a.my[j] = -a.y[j];
                a.mdy[j] = -a.dy[j];
            }
        }
    }
    return out;
}

} // namespace msqg::detail
