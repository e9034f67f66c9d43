#include "lgf/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lgf/errors.hpp"
#include "lgf/quadrature.hpp"

namespace lgf::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Coefficients of the Debye polynomials u_k(p) = sum_j c_j p^{k+2j}, k = 1..8.
constexpr std::array<std::array<double, 9>, 8> kDebye{{
    {0.125, -0.20833333333333334},
    {0.0703125, -0.40104166666666669, 0.3342013888888889},
    {0.0732421875, -0.89121093750000002, 1.8464626736111112, -1.0258125964506173},
    {0.112152099609375, -2.3640869140624998, 8.78912353515625, -11.207002616222994, 4.6695844234262474},
    {0.22710800170898438, -7.3687943594796321, 42.534998745388457, -91.818241543240021, 84.636217674600729,
     -28.212072558200244},
    {0.57250142097473145, -26.491430486951554, 218.19051174421159, -699.57962737613252, 1059.9904525279999,
     -765.25246814118168, 212.57013003921713},
    {1.7277275025844574, -108.09091978839466, 1200.9029132163525, -5305.646978613403, 11655.393336864534,
     -13586.550006434138, 8061.7221817373093, -1919.4576623184071},
    {6.074042001273483, -493.915304773088, 7109.5143024893641, -41192.65496889755, 122200.46498301746,
     -203400.17728041555, 192547.00123253153, -96980.598388637518, 20204.291330966149},
}};

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": argument must be finite");
}

}  // namespace

void BesselEvalConfig::validate() const {
    if (series_term_cap < 10) throw ConfigError("BesselEvalConfig: series_term_cap must be >= 10");
    if (!(target_rel_tol > 0.0 && target_rel_tol <= 1e-6))
        throw ConfigError("BesselEvalConfig: target_rel_tol must lie in (0, 1e-6]");
    if (!(asymptotic_crossover > 0.0)) throw ConfigError("BesselEvalConfig: asymptotic_crossover must be positive");
}

namespace detail {

// Sum of (t/2)^{2k+nu} / (k! (k+nu)!) taken outward from its largest term, in log space.
double log_ibar_series(std::int64_t nu, double t, int term_cap) {
    const double v = static_cast<double>(nu);
    const double half = 0.5 * t;
    const double q2 = half * half;
    const double log_half = std::log(half);
    const double k_peak = std::floor(0.5 * (std::sqrt(v * v + t * t) - v));

    const double log_peak_term =
        (2.0 * k_peak + v) * log_half - std::lgamma(k_peak + 1.0) - std::lgamma(k_peak + v + 1.0);

    double sum = 1.0;
    int terms = 1;
    double r = 1.0;
    for (double k = k_peak;; k += 1.0) {
        r *= q2 / ((k + 1.0) * (k + 1.0 + v));
        sum += r;
        if (r < 0.25 * kEps * sum) break;
        if (++terms > term_cap) throw AccuracyError("Ibar series exceeded term cap", std::exp(log_peak_term - t), 0.0);
    }
    r = 1.0;
    for (double k = k_peak; k > 0.0; k -= 1.0) {
        r *= k * (k + v) / q2;
        sum += r;
        if (r < 0.25 * kEps * sum) break;
        if (++terms > term_cap) throw AccuracyError("Ibar series exceeded term cap", std::exp(log_peak_term - t), 0.0);
    }
    return log_peak_term + std::log(sum) - t;
}

// Large-argument expansion: Ibar_nu(t) ~ (2 pi t)^{-1/2} sum_k (-1)^k a_k(nu) / t^k.
double log_ibar_hankel(std::int64_t nu, double t) {
    const double mu = 4.0 * static_cast<double>(nu) * static_cast<double>(nu);
    double term = 1.0;
    double sum = 1.0;
    double prev_abs = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * t);
        const double a = std::abs(term);
        if (a > prev_abs) break;  // asymptotic series started to diverge
        sum += term;
        if (a < 0.25 * kEps * std::abs(sum)) break;
        prev_abs = a;
    }
    return -0.5 * std::log(2.0 * std::numbers::pi * t) + std::log(sum);
}

// Uniform expansion in the order: log Ibar_nu(nu z) = nu psi(z) - log(2 pi nu)/2 - log(1+z^2)/4 + log(sum u_k(p)/nu^k).
double log_ibar_debye(std::int64_t nu, double t) {
    const double v = static_cast<double>(nu);
    const double z = t / v;
    const double w = std::sqrt(1.0 + z * z);
    const double p = 1.0 / w;
    const double p2 = p * p;
    double series = 1.0;
    double inv_nu_k = 1.0;
    double pk = 1.0;
    for (std::size_t k = 0; k < kDebye.size(); ++k) {
        inv_nu_k /= v;
        pk *= p;
        double poly = 0.0;
        double pj = pk;
        for (std::size_t j = 0; j <= k + 1; ++j) {
            poly += kDebye[k][j] * pj;
            pj *= p2;
        }
        series += poly * inv_nu_k;
    }
    return v * psi(z) - 0.5 * std::log(2.0 * std::numbers::pi * v) - 0.5 * std::log(w) + std::log(series);
}

}  // namespace detail

double log_scaled_bessel_i(std::int64_t nu, double t, const BesselEvalConfig& cfg) {
    check_finite(t, "scaled_bessel_i");
    if (t < 0.0) throw DomainError("scaled_bessel_i: t must be nonnegative");
    if (nu < 0) throw DomainError("scaled_bessel_i: order must be nonnegative");
    if (t == 0.0) return nu == 0 ? 0.0 : kNegInf;

    const double v = static_cast<double>(nu);
    if (t <= std::max(cfg.asymptotic_crossover, v)) return detail::log_ibar_series(nu, t, cfg.series_term_cap);
    if (nu >= kDebyeMinOrder) return detail::log_ibar_debye(nu, t);
    if (t >= 16.0 * v * v) return detail::log_ibar_hankel(nu, t);
    return detail::log_ibar_series(nu, t, cfg.series_term_cap);
}

double scaled_bessel_i(std::int64_t nu, double t, const BesselEvalConfig& cfg) {
    return std::exp(log_scaled_bessel_i(nu, t, cfg));
}

// K_alpha(z) = (1/2) int_R exp(-alpha u - z cosh u) du, the integral representation
// (1/2)(z/2)^alpha int_0^inf t^{-alpha-1} exp(-t - z^2/4t) dt after t = (z/2) e^u.
// The integrand decays doubly exponentially, so the trapezoid rule is spectrally accurate.
double log_bessel_k(double alpha, double z, const BesselEvalConfig& cfg) {
    check_finite(alpha, "bessel_k");
    check_finite(z, "bessel_k");
    if (z <= 0.0) throw DomainError("bessel_k: z must be positive");
    quad::TrapezoidOptions opt;
    opt.rel_tol = std::max(cfg.target_rel_tol, 4.0 * kEps);
    opt.initial_step = 0.25;
    opt.drop = 45.0;
    // K is even in alpha. u = h w with the peak width h ~ z^{-1/2}.
    const double a = std::abs(alpha);
    const double h = 1.0 / std::sqrt(1.0 + z);
    opt.w_min = -60.0 / h;
    opt.w_max = 60.0 / h;
    const auto res = quad::integrate_real_line(
        [&](double w) {
            const double u = h * w;
            return -a * u - z * 2.0 * std::pow(std::sinh(0.5 * u), 2);
        },
        opt);
    const double log_k = res.log_value + std::log(h) - z - std::numbers::ln2;
    if (!res.converged) throw AccuracyError("bessel_k: quadrature did not converge", std::exp(log_k), 0.0);
    return log_k;
}

double bessel_k(double alpha, double z, const BesselEvalConfig& cfg) {
    return std::exp(log_bessel_k(alpha, z, cfg));
}

double psi(double t) {
    if (!(t > 0.0)) throw DomainError("psi: t must be positive");
    const double s = std::sqrt(1.0 + t * t);
    // sqrt(1+t^2) - t in cancellation-free form; log(t/(1+s)) = -asinh(1/t).
    return 1.0 / (s + t) - std::asinh(1.0 / t);
}

double psi_d1(double t) {
    if (!(t > 0.0)) throw DomainError("psi_d1: t must be positive");
    const double it2 = 1.0 / (t * t);
    return it2 / (1.0 + std::sqrt(1.0 + it2));
}

double psi_d2(double t) {
    if (!(t > 0.0)) throw DomainError("psi_d2: t must be positive");
    return -1.0 / (t * t * std::sqrt(1.0 + t * t));
}

double psi_d3(double t) {
    if (!(t > 0.0)) throw DomainError("psi_d3: t must be positive");
    const double t2 = t * t;
    const double s = 1.0 + t2;
    return (2.0 + 3.0 * t2) / (t2 * t * s * std::sqrt(s));
}

double log_uniform_l(double nu, double t) {
    if (!(nu > 0.0) || !(t > 0.0)) throw DomainError("uniform_l: nu and t must be positive");
    return nu * psi(t) - 0.5 * std::log(2.0 * std::numbers::pi * nu) - 0.25 * std::log1p(t * t);
}

double uniform_l(double nu, double t) { return std::exp(log_uniform_l(nu, t)); }

}  // namespace lgf::special
