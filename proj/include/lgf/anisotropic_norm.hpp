#pragma once

#include <span>
#include <vector>

namespace lgf::norm {

/// m_a = arccosh(1 + d a^2), the exponential decay rate (inverse correlation length).
double mass(int d, double a);

/// The unique u > 0 with (1/d) sum_i sqrt(1 + x_i^2 u^2) = 1 + a^2. x must be nonzero, a > 0.
double u_scale(std::span<const double> x, int d, double a);

/// |x|_a = (1/m_a) sum_i x_i asinh(x_i u_a(x)), with |0|_a = 0.
double a_norm(std::span<const double> x, int d, double a);

/// Derived quantities for a fixed (d, a, x).
struct NormContext {
    int d = 0;
    double a = 0.0;
    double mass = 0.0;
    std::vector<double> x;
    double u = 0.0;
    double norm = 0.0;
    std::vector<double> x_hat;  ///< x / |x|_a
    double u_hat = 0.0;         ///< u_a(x_hat) = |x|_a u_a(x)

    static NormContext make(std::span<const double> x, double a);
};

struct BallPoint {
    double theta = 0.0;
    double phi = 0.0;  ///< azimuth; only meaningful for d = 3
    std::vector<double> y;
};

/// Points y with |y|_a = 1, one per direction.
///
/// d = 2: n_points directions at theta = 2 pi k / n_points.
/// d = 3: a (n_points/2 + 1) x n_points grid in (polar theta, azimuth phi), rows of
/// constant theta, poles included.
std::vector<BallPoint> unit_ball_boundary(int d, double a, int n_points);

double norm_l1(std::span<const double> x);
double norm_l2(std::span<const double> x);
double norm_linf(std::span<const double> x);

}  // namespace lgf::norm
