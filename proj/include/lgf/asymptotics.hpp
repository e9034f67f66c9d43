#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lgf/green_lattice.hpp"

namespace lgf::asy {

using lattice::Coord;

enum class Regime {
    I_anisotropic_OZ,
    II_isotropic_OZ,
    III_massive_continuum,
    IV_massless_continuum,
};

std::string_view regime_name(Regime r);

/// value = amplitude * power_factor * exp(exp_exponent). log_value stays finite
/// when value underflows.
struct RegimeEstimate {
    Regime regime = Regime::I_anisotropic_OZ;
    double amplitude = 0.0;
    double power_factor = 0.0;
    double exp_exponent = 0.0;
    double value = 0.0;
    double log_value = 0.0;
};

/// c_{0,q} = d^q / ((2 pi)^{(d-1)/2} Gamma(q)), the a -> 0 limit of the OZ amplitude.
double oz_constant_limit(int d, double q);

/// kappa_a(x_hat) = (sum_j x_hat_j^2 prod_{i != j} (1 + u_hat^2 x_hat_i^2)^{1/2})^{-1/2}.
double oz_kappa(std::span<const double> x_hat, double u_hat);

/// c_{a,q,x_hat} = c_{0,q} kappa_a(x_hat) (u_hat / m_a)^{(d-1-2q)/2}.
/// x_hat must satisfy |x_hat|_a = 1 to within 1e-10.
double oz_constant(int d, double q, double a, std::span<const double> x_hat);

/// Anisotropic OZ form c m^{(d-1-2q)/2} (n|x|_a)^{-(d+1-2q)/2} exp(-m n |x|_a).
RegimeEstimate oz_estimate(const lattice::GreenParams& p, std::span<const Coord> x, long n);

/// Isotropic OZ form with the Euclidean norm, c_{0,q} and sqrt(2d) a in place of m_a.
RegimeEstimate oz_isotropic_estimate(const lattice::GreenParams& p, std::span<const Coord> x, long n);

/// Critical form n^{-(d-2q)} G_s^{(q)}(x) for C_{s/n}^{(q)}(nx). Regime III for s > 0, IV for s = 0.
RegimeEstimate critical_estimate(int d, double q, std::span<const Coord> x, long n, double s);

/// Documentation-level label; thresholds are defaults, not part of the asymptotic statements.
struct RegimeThresholds {
    double high = 10.0;  ///< "a n large"
    double low = 0.1;    ///< "a^3 n small"
};
std::optional<Regime> classify_regime(int d, double q, double a, std::span<const Coord> x, long n,
                                      const RegimeThresholds& th = {});

struct GbarDiagnostics {
    double y = 0.0;
    double gbar = 0.0;
    double gbar_d2 = 0.0;  ///< analytic second derivative at y
    double gbar_d3 = 0.0;  ///< analytic third derivative at y
    double gbar_d2_at_1 = 0.0;
    double hbar = 0.0;
};

struct GbarOptions {
    long n = 1;      ///< n of the prefactor hbar_{n,a,x}
    double q = 1.0;  ///< q of the prefactor
};

/// gbar_{a,x}(y) = g_{a,x}(y / u_a(x)) with g_{a,x}(v) = d a^2 v - sum_{x_j != 0} |x_j| psi(v / |x_j|),
/// together with its analytic derivatives and the prefactor hbar_{n,a,x}(y).
std::vector<GbarDiagnostics> gbar_curve(int d, double a, std::span<const double> x, std::span<const double> y_grid,
                                        const GbarOptions& opt = {});

/// kappa1 |x|_a^{-(d-2q)} exp(-kappa m_a |x|_a); at a = 0 the norm is |x|_2 and m_0 = 0.
double uniform_bound_rhs(int d, int q, double a, std::span<const Coord> x, double kappa1, double kappa);

}  // namespace lgf::asy
