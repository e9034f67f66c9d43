#pragma once

#include <span>

#include "lgf/green_lattice.hpp"

namespace lgf::continuum {

/// Dimension d, exponent q and mass s of G_s^{(q)} on R^d.
struct ContinuumParams {
    int d = 3;
    double q = 1.0;
    double s = 0.0;

    void validate() const;
};

/// p_t(x) = (d / 2 pi t)^{d/2} exp(-d |x|^2 / 2t).
double heat_kernel(int d, double t, std::span<const double> x);
double log_heat_kernel(int d, double t, std::span<const double> x);

/// Massless coefficient d^q Gamma((d-2q)/2) / (2^q pi^{d/2} Gamma(q)), so that
/// G_0^{(q)}(x) = coefficient / |x|^{d-2q}. Requires d > 2q.
double massless_coefficient(int d, double q);

/// G_s^{(q)}(x) through the Bessel-K formula (s > 0, with the scaling in s) or the
/// massless power law (s = 0).
double green_continuum(const ContinuumParams& p, std::span<const double> x);
double log_green_continuum(const ContinuumParams& p, std::span<const double> x);

/// Independent route: (1/Gamma(q)) int_0^inf t^{q-1} e^{-t s^2} p_t(x) dt.
double green_continuum_time_integral(const ContinuumParams& p, std::span<const double> x,
                                     const lattice::QuadratureConfig& cfg = {});

}  // namespace lgf::continuum
