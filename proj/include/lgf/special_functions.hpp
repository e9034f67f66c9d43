#pragma once

#include <cstdint>

namespace lgf::special {

/// Controls evaluation of the scaled Bessel functions and K_alpha.
struct BesselEvalConfig {
    /// Upper bound on power-series terms before giving up.
    int series_term_cap = 1'000'000;
    /// Ibar_nu(t) uses the power series for t <= max(asymptotic_crossover, nu).
    double asymptotic_crossover = 30.0;
    double target_rel_tol = 1e-15;

    /// Throws ConfigError when series_term_cap < 10 or target_rel_tol is outside (0, 1e-6].
    void validate() const;
};

/// Orders at or above this use the uniform (Debye) expansion past the crossover.
inline constexpr std::int64_t kDebyeMinOrder = 50;

/// Ibar_nu(t) = exp(-t) I_nu(t) for integer nu >= 0, t >= 0.
double scaled_bessel_i(std::int64_t nu, double t, const BesselEvalConfig& cfg = {});

/// log Ibar_nu(t); -inf at t = 0 for nu >= 1. Never underflows.
double log_scaled_bessel_i(std::int64_t nu, double t, const BesselEvalConfig& cfg = {});

/// Modified Bessel function of the second kind, any real order, z > 0.
double bessel_k(double alpha, double z, const BesselEvalConfig& cfg = {});
double log_bessel_k(double alpha, double z, const BesselEvalConfig& cfg = {});

// psi(t) = -t + sqrt(1+t^2) + log(t / (1 + sqrt(1+t^2))) and its first three derivatives.
double psi(double t);
double psi_d1(double t);
double psi_d2(double t);
double psi_d3(double t);

/// L_nu(t) = (2 pi nu)^{-1/2} exp(nu psi(t)) (1+t^2)^{-1/4}, the leading term of Ibar_nu(nu t).
double uniform_l(double nu, double t);
double log_uniform_l(double nu, double t);

namespace detail {
// Individual evaluation branches, exposed for overlap testing.
double log_ibar_series(std::int64_t nu, double t, int term_cap);
double log_ibar_hankel(std::int64_t nu, double t);
double log_ibar_debye(std::int64_t nu, double t);
}  // namespace detail

}  // namespace lgf::special
