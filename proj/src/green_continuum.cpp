#include "lgf/green_continuum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lgf/anisotropic_norm.hpp"
#include "lgf/errors.hpp"
#include "lgf/quadrature.hpp"
#include "lgf/special_functions.hpp"

namespace lgf::continuum {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_radius(const ContinuumParams& p, std::span<const double> x) {
    if (static_cast<int>(x.size()) != p.d)
        throw DomainError("x has " + std::to_string(x.size()) + " coordinates, expected d = " + std::to_string(p.d));
    for (double v : x)
        if (!std::isfinite(v)) throw DomainError("x must be finite");
    const double r = norm::norm_l2(x);
    if (r == 0.0) throw DomainError("continuum Green function is singular at x = 0");
    return r;
}

}  // namespace

void ContinuumParams::validate() const {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!std::isfinite(q) || q <= 0.0) throw DomainError("q must be positive and finite");
    if (!std::isfinite(s) || s < 0.0) throw DomainError("s must be nonnegative and finite");
    if (s == 0.0 && d <= 2.0 * q) throw DivergenceError("G_0^{(q)} requires d > 2q");
}

double log_heat_kernel(int d, double t, std::span<const double> x) {
    if (d < 1 || static_cast<int>(x.size()) != d) throw DomainError("heat_kernel: dimension mismatch");
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat_kernel: t must be positive");
    const double r2 = std::pow(norm::norm_l2(x), 2);
    return 0.5 * d * std::log(d / (2.0 * kPi * t)) - d * r2 / (2.0 * t);
}

double heat_kernel(int d, double t, std::span<const double> x) { return std::exp(log_heat_kernel(d, t, x)); }

double massless_coefficient(int d, double q) {
    if (!(d > 2.0 * q)) throw DivergenceError("massless coefficient requires d > 2q");
    return std::exp(q * std::log(static_cast<double>(d)) + std::lgamma(0.5 * (d - 2.0 * q)) - q * std::numbers::ln2 -
                    0.5 * d * std::log(kPi) - std::lgamma(q));
}

double log_green_continuum(const ContinuumParams& p, std::span<const double> x) {
    p.validate();
    const double r = checked_radius(p, x);
    const int d = p.d;
    const double q = p.q;
    if (p.s == 0.0) return std::log(massless_coefficient(d, q)) - (d - 2.0 * q) * std::log(r);

    // G_s(x) = s^{d-2q} G_1(s x),
    // G_1(y) = 2 d^q / (Gamma(q) (2 pi)^{d/2}) (sqrt(2d)/|y|)^{(d-2q)/2} K_{(d-2q)/2}(sqrt(2d) |y|).
    const double alpha = 0.5 * (d - 2.0 * q);
    const double c = std::sqrt(2.0 * d);
    const double y = p.s * r;
    const double log_g1 = std::numbers::ln2 + q * std::log(static_cast<double>(d)) - std::lgamma(q) -
                          0.5 * d * std::log(2.0 * kPi) + alpha * std::log(c / y) +
                          special::log_bessel_k(alpha, c * y);
    return (d - 2.0 * q) * std::log(p.s) + log_g1;
}

double green_continuum(const ContinuumParams& p, std::span<const double> x) {
    return std::exp(log_green_continuum(p, x));
}

double green_continuum_time_integral(const ContinuumParams& p, std::span<const double> x,
                                     const lattice::QuadratureConfig& cfg) {
    p.validate();
    cfg.validate();
    const double r = checked_radius(p, x);
    const int d = p.d;
    const double s2 = p.s * p.s;
    const double half_d_r2 = 0.5 * d * r * r;
    const double log_prefactor = 0.5 * d * std::log(d / (2.0 * kPi)) - std::lgamma(p.q);
    const auto log_f = [&](double t, double log_t) {
        return (p.q - 1.0 - 0.5 * d) * log_t - t * s2 - half_d_r2 / t;
    };
    quad::TrapezoidOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.max_nodes = cfg.max_nodes;
    const auto res = quad::integrate_half_line(log_f, cfg.transform, opt);
    const double value = std::exp(res.log_value + log_prefactor);
    if (!res.converged)
        throw AccuracyError("green_continuum_time_integral: quadrature did not converge", value, res.rel_error * value);
    return value;
}

}  // namespace lgf::continuum
