#include "lgf/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lgf/anisotropic_norm.hpp"
#include "lgf/errors.hpp"
#include "lgf/green_continuum.hpp"
#include "lgf/special_functions.hpp"

namespace lgf::asy {

namespace {

std::vector<double> to_real(std::span<const Coord> x) { return {x.begin(), x.end()}; }

void require_nonzero(std::span<const Coord> x, const char* who) {
    for (Coord v : x)
        if (v != 0) return;
    throw DomainError(std::string(who) + ": x must be nonzero");
}

RegimeEstimate assemble(Regime r, double log_amp, double log_power, double exponent) {
    RegimeEstimate e;
    e.regime = r;
    e.amplitude = std::exp(log_amp);
    e.power_factor = std::exp(log_power);
    e.exp_exponent = exponent;
    e.log_value = log_amp + log_power + exponent;
    e.value = std::exp(e.log_value);
    return e;
}

}  // namespace

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::I_anisotropic_OZ: return "I";
        case Regime::II_isotropic_OZ: return "II";
        case Regime::III_massive_continuum: return "III";
        case Regime::IV_massless_continuum: return "IV";
    }
    return "?";
}

double oz_constant_limit(int d, double q) {
    if (d < 1 || !(q > 0.0)) throw DomainError("oz_constant_limit: need d >= 1, q > 0");
    return std::exp(q * std::log(static_cast<double>(d)) - 0.5 * (d - 1) * std::log(2.0 * std::numbers::pi) -
                    std::lgamma(q));
}

double oz_kappa(std::span<const double> x_hat, double u_hat) {
    double s = 0.0;
    for (std::size_t j = 0; j < x_hat.size(); ++j) {
        double prod = 1.0;
        for (std::size_t i = 0; i < x_hat.size(); ++i)
            if (i != j) prod *= std::sqrt(1.0 + u_hat * u_hat * x_hat[i] * x_hat[i]);
        s += x_hat[j] * x_hat[j] * prod;
    }
    return 1.0 / std::sqrt(s);
}

double oz_constant(int d, double q, double a, std::span<const double> x_hat) {
    if (!(a > 0.0)) throw DomainError("oz_constant: a must be positive");
    if (static_cast<int>(x_hat.size()) != d) throw DomainError("oz_constant: dimension mismatch");
    const double nrm = norm::a_norm(x_hat, d, a);
    if (std::abs(nrm - 1.0) > 1e-10) throw DomainError("oz_constant: x_hat is not a unit vector of |.|_a");
    const double u_hat = norm::u_scale(x_hat, d, a);
    const double m = norm::mass(d, a);
    return oz_constant_limit(d, q) * oz_kappa(x_hat, u_hat) * std::pow(u_hat / m, 0.5 * (d - 1 - 2.0 * q));
}

RegimeEstimate oz_estimate(const lattice::GreenParams& p, std::span<const Coord> x, long n) {
    if (!(p.a > 0.0)) throw DomainError("oz_estimate: a must be positive");
    if (static_cast<int>(x.size()) != p.d) throw DomainError("oz_estimate: dimension mismatch");
    if (n < 1) throw DomainError("oz_estimate: n must be positive");
    require_nonzero(x, "oz_estimate");
    const auto ctx = norm::NormContext::make(to_real(x), p.a);
    const double c = oz_constant_limit(p.d, p.q) * oz_kappa(ctx.x_hat, ctx.u_hat) *
                     std::pow(ctx.u_hat / ctx.mass, 0.5 * (p.d - 1 - 2.0 * p.q));
    const double dist = static_cast<double>(n) * ctx.norm;
    const double log_power =
        0.5 * (p.d - 1 - 2.0 * p.q) * std::log(ctx.mass) - 0.5 * (p.d + 1 - 2.0 * p.q) * std::log(dist);
    return assemble(Regime::I_anisotropic_OZ, std::log(c), log_power, -ctx.mass * dist);
}

RegimeEstimate oz_isotropic_estimate(const lattice::GreenParams& p, std::span<const Coord> x, long n) {
    if (!(p.a > 0.0)) throw DomainError("oz_isotropic_estimate: a must be positive");
    if (static_cast<int>(x.size()) != p.d) throw DomainError("oz_isotropic_estimate: dimension mismatch");
    if (n < 1) throw DomainError("oz_isotropic_estimate: n must be positive");
    require_nonzero(x, "oz_isotropic_estimate");
    const auto xr = to_real(x);
    const double rate = std::sqrt(2.0 * p.d) * p.a;
    const double dist = static_cast<double>(n) * norm::norm_l2(xr);
    const double log_power =
        0.5 * (p.d - 1 - 2.0 * p.q) * std::log(rate) - 0.5 * (p.d + 1 - 2.0 * p.q) * std::log(dist);
    return assemble(Regime::II_isotropic_OZ, std::log(oz_constant_limit(p.d, p.q)), log_power, -rate * dist);
}

RegimeEstimate critical_estimate(int d, double q, std::span<const Coord> x, long n, double s) {
    if (n < 1) throw DomainError("critical_estimate: n must be positive");
    require_nonzero(x, "critical_estimate");
    const continuum::ContinuumParams cp{d, q, s};
    cp.validate();
    const auto xr = to_real(x);
    const double log_n_power = -(d - 2.0 * q) * std::log(static_cast<double>(n));
    if (s == 0.0) {
        const double r = norm::norm_l2(xr);
        return assemble(Regime::IV_massless_continuum, std::log(continuum::massless_coefficient(d, q)),
                        log_n_power - (d - 2.0 * q) * std::log(r), 0.0);
    }
    const double exponent = -std::sqrt(2.0 * d) * s * norm::norm_l2(xr);
    const double log_g = continuum::log_green_continuum(cp, xr);
    return assemble(Regime::III_massive_continuum, log_g - exponent, log_n_power, exponent);
}

std::optional<Regime> classify_regime(int d, double q, double a, std::span<const Coord> x, long n,
                                      const RegimeThresholds& th) {
    const double dn = static_cast<double>(n);
    if (a == 0.0) {
        if (d > 2.0 * q) return Regime::IV_massless_continuum;
        return std::nullopt;
    }
    const double an = a * dn * norm::a_norm(to_real(x), d, a);
    if (an < th.high) return Regime::III_massive_continuum;
    if (a * a * a * dn <= th.low) return Regime::II_isotropic_OZ;
    return Regime::I_anisotropic_OZ;
}

std::vector<GbarDiagnostics> gbar_curve(int d, double a, std::span<const double> x, std::span<const double> y_grid,
                                        const GbarOptions& opt) {
    if (!(a > 0.0)) throw DomainError("gbar_curve: a must be positive");
    if (static_cast<int>(x.size()) != d) throw DomainError("gbar_curve: dimension mismatch");
    const auto ctx = norm::NormContext::make(x, a);
    const double u = ctx.u;
    const double uh = ctx.u_hat;
    const double nrm = ctx.norm;

    int zeros = 0;
    for (double xi : x)
        if (xi == 0.0) ++zeros;

    const auto gbar = [&](double y) {
        const double v = y / u;
        double s = d * a * a * v;
        for (double xi : x)
            if (xi != 0.0) s -= std::abs(xi) * special::psi(v / std::abs(xi));
        return s;
    };
    const auto d2 = [&](double y) {
        double s = 0.0;
        for (double xh : ctx.x_hat) {
            const double x2 = xh * xh;
            s += x2 / (y * y * y * std::sqrt(1.0 + uh * uh * x2 / (y * y)));
        }
        return nrm * uh * s;
    };
    const auto d3 = [&](double y) {
        double s = 0.0;
        for (double xh : ctx.x_hat) {
            const double x2 = xh * xh;
            const double w = 1.0 + uh * uh * x2 / (y * y);
            s += (3.0 * x2 / std::pow(y, 4) + 2.0 * uh * uh * x2 * x2 / std::pow(y, 6)) / (w * std::sqrt(w));
        }
        return -nrm * uh * s;
    };
    const double nn = static_cast<double>(opt.n);
    const auto log_hbar = [&](double y) {
        double s = (opt.q - 1.0) * std::log(y);
        if (zeros > 0)
            s += zeros * (0.5 * std::log(2.0 * std::numbers::pi * nn / u) +
                          special::log_scaled_bessel_i(0, nn * y / u));
        for (double xh : ctx.x_hat)
            if (xh != 0.0) s -= 0.25 * std::log(y * y + uh * uh * xh * xh);
        return s;
    };

    const double d2_at_1 = d2(1.0);
    std::vector<GbarDiagnostics> out;
    out.reserve(y_grid.size());
    for (double y : y_grid) {
        if (!(y > 0.0)) throw DomainError("gbar_curve: y must be positive");
        out.push_back({y, gbar(y), d2(y), d3(y), d2_at_1, std::exp(log_hbar(y))});
    }
    return out;
}

double uniform_bound_rhs(int d, int q, double a, std::span<const Coord> x, double kappa1, double kappa) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("uniform_bound_rhs: kappa must lie in (0, 1)");
    if (!(kappa1 > 0.0)) throw DomainError("uniform_bound_rhs: kappa1 must be positive");
    if (d <= 2 || q < 1 || d <= 2 * q) throw DomainError("uniform_bound_rhs: need d > 2, integer q >= 1, d > 2q");
    if (!(a >= 0.0)) throw DomainError("uniform_bound_rhs: a must be nonnegative");
    if (static_cast<int>(x.size()) != d) throw DomainError("uniform_bound_rhs: dimension mismatch");
    require_nonzero(x, "uniform_bound_rhs");
    const auto xr = to_real(x);
    const double nrm = (a == 0.0) ? norm::norm_l2(xr) : norm::a_norm(xr, d, a);
    const double m = norm::mass(d, a);
    return kappa1 * std::pow(nrm, -(d - 2.0 * q)) * std::exp(-kappa * m * nrm);
}

}  // namespace lgf::asy
