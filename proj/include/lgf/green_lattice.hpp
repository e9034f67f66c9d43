#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "lgf/quadrature.hpp"
#include "lgf/special_functions.hpp"

namespace lgf::lattice {

using Coord = std::int64_t;

/// Dimension d, killing parameter a and exponent q of C_a^{(q)}(x).
struct GreenParams {
    int d = 1;
    double a = 0.0;
    double q = 1.0;

    /// DomainError for bad values; DivergenceError when a = 0 and d <= 2q.
    void validate() const;
};

struct QuadratureConfig {
    quad::Transform transform = quad::Transform::log_substitution;
    int max_nodes = 1 << 17;
    double rel_tol = 1e-12;
    /// Values below this are reported through log_value only (value = 0).
    double abs_floor = 0.0;

    void validate() const;
};

enum class Method { bessel_rep, fourier, closed_d1, monte_carlo };

std::string_view method_name(Method m);

struct GreenValue {
    double value = 0.0;
    double log_value = 0.0;
    double est_error = 0.0;
    Method method = Method::bessel_rep;
};

/// C_a^{(q)}(x) = (1/Gamma(q)) int_0^inf t^{q-1} e^{-a^2 t} prod_j Ibar_{x_j}(t/d) dt.
///
/// The Bessel product is accumulated in log space, so log_value stays meaningful far
/// below the double underflow threshold. Throws AccuracyError (carrying the best
/// estimate) when the node budget is exhausted before rel_tol is met.
GreenValue green_bessel(const GreenParams& p, std::span<const Coord> x, const QuadratureConfig& cfg = {});

/// Knobs of the Fourier oracle. The a = 0 singularity at k = 0 is split off with the
/// partition of unity chi = Q(order, beta F(k)) (regularized upper incomplete gamma
/// of the symbol F = 1 - Dhat): (1 - chi)/F^q is smooth enough for the periodic grid
/// and chi/F^q is integrated in polar coordinates over a ball of radius ball_radius.
struct FourierOptions {
    int partition_order = 10;
    double partition_beta = 120.0;
    double ball_radius = 3.0;
    int polar_nodes = 40;
    int azimuth_nodes = 80;
    double radial_tol = 1e-13;
    /// est_error above this fraction of the value means the grid is too coarse.
    double coarse_threshold = 1e-3;
    bool parallel = true;
};

/// Direct quadrature of int e^{ik.x} / (a^2 + 1 - Dhat(k))^q dk/(2pi)^d on an
/// N^d periodic grid (N = grid_n). d <= 3 only.
GreenValue green_fourier_oracle(const GreenParams& p, std::span<const Coord> x, int grid_n,
                                const FourierOptions& opt = {});

/// Grid size for which the periodic-grid aliasing error is expected below rel_tol.
int fourier_grid_for(const GreenParams& p, std::span<const Coord> x, double rel_tol);

/// Closed form for d = 1 and integer q >= 1 (a > 0).
GreenValue green_d1_closed(double a, int q, Coord x);

namespace kernels {

/// (1/N^d) sum over the N^d grid of e^{ik.x} w(F(k)) where w(F) = (F + shift)^{-q},
/// optionally multiplied by the lower incomplete-gamma partition P(order, beta F).
/// Returns real and imaginary parts.
struct GridSum {
    double re = 0.0;
    double im = 0.0;
};

struct GridSpec {
    int d = 1;
    int n = 16;
    double shift = 1.0;  ///< a^2
    double q = 1.0;
    int partition_order = 0;  ///< 0 disables the partition factor
    double partition_beta = 0.0;
};

GridSum fourier_grid_sum_serial(const GridSpec& g, std::span<const Coord> x);
GridSum fourier_grid_sum_omp(const GridSpec& g, std::span<const Coord> x);

/// Regularized lower incomplete gamma P(m, y) for integer m >= 1, accurate for small y.
double partition_lower(int m, double y);

}  // namespace kernels

}  // namespace lgf::lattice
