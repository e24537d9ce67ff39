#pragma once

#include <vector>

#include "msqg/curve.hpp"
#include "msqg/types.hpp"

namespace msqg {

// Derivative of the trigonometric interpolant of periodic samples, evaluated
// back at the grid.  Exact (to roundoff) for band-limited data.
std::vector<double> spectral_derivative(const std::vector<double>& samples, int order);
std::vector<Vec2> spectral_derivative(const Curve& curve, int order);

// Trigonometric interpolant of periodic scalar samples on the grid
// xi_j = -pi + 2*pi*j/M; supports off-grid evaluation and differentiation.
class TrigInterp {
  public:
    explicit TrigInterp(const std::vector<double>& samples);
    double operator()(double xi) const;
    double derivative(double xi, int order = 1) const;
    int grid_size() const { return grid_size_; }

  private:
    int grid_size_ = 0;
    std::vector<double> cos_coef_; // m = 0..M/2
    std::vector<double> sin_coef_; // m = 0..M/2 (Nyquist entry unused)
};

class CurveInterp {
  public:
    explicit CurveInterp(const Curve& curve);
    Vec2 operator()(double xi) const { return {fx_(xi), fy_(xi)}; }
    Vec2 derivative(double xi, int order = 1) const {
        return {fx_.derivative(xi, order), fy_.derivative(xi, order)};
    }

  private:
    TrigInterp fx_, fy_;
};

// Fourier multiplier at integer mode m of the periodic bump mollifier
// phi_eps(xi) = phi(xi/eps)/eps, phi(s) proportional to exp(-1/(1-s^2)) on
// (-1,1) and normalized to unit mass.  Equals 1 at m=0, decreasing in |m|*eps.
double mollifier_symbol(int mode, double epsilon);

// Periodic convolution with phi_eps (requires 0 < eps < pi).
std::vector<double> mollify_samples(const std::vector<double>& samples, double epsilon);

// Mean of periodic samples and spectrally accurate trapezoid integral over
// [-pi, pi) (the two differ by the factor 2*pi).
double periodic_mean(const std::vector<double>& samples);
double periodic_integral(const std::vector<double>& samples);

// Periodic antiderivative of the zero-mean part of the samples (mode 0 is
// dropped); differentiating the result recovers samples - mean(samples).
std::vector<double> spectral_antiderivative(const std::vector<double>& samples);

} // namespace msqg
