#include "lgf/green_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lgf/anisotropic_norm.hpp"
#include "lgf/errors.hpp"

namespace lgf::lattice {

void GreenParams::validate() const {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (!std::isfinite(a) || a < 0.0) throw DomainError("a must be nonnegative and finite");
    if (!std::isfinite(q) || q <= 0.0) throw DomainError("q must be positive and finite");
    if (a == 0.0 && d <= 2.0 * q)
        throw DivergenceError("C_0^{(q)} diverges: a = 0 requires d > 2q (d = " + std::to_string(d) +
                              ", q = " + std::to_string(q) + ")");
}

void QuadratureConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6)) throw ConfigError("QuadratureConfig: rel_tol must lie in (0, 1e-6]");
    if (max_nodes < 64) throw ConfigError("QuadratureConfig: max_nodes must be >= 64");
    if (!(abs_floor >= 0.0)) throw ConfigError("QuadratureConfig: abs_floor must be nonnegative");
}

std::string_view method_name(Method m) {
    switch (m) {
        case Method::bessel_rep: return "bessel";
        case Method::fourier: return "fourier";
        case Method::closed_d1: return "closed-d1";
        case Method::monte_carlo: return "mc";
    }
    return "unknown";
}

namespace {

void check_dim(const GreenParams& p, std::span<const Coord> x) {
    if (static_cast<int>(x.size()) != p.d)
        throw DomainError("x has " + std::to_string(x.size()) + " coordinates, expected d = " + std::to_string(p.d));
}

GreenValue from_log(double log_value, double rel_err, Method m, double abs_floor = 0.0) {
    GreenValue g;
    g.log_value = log_value;
    g.value = std::exp(log_value);
    if (g.value < abs_floor) g.value = 0.0;
    g.est_error = rel_err * g.value;
    g.method = m;
    return g;
}

}  // namespace

GreenValue green_bessel(const GreenParams& p, std::span<const Coord> x, const QuadratureConfig& cfg) {
    p.validate();
    cfg.validate();
    check_dim(p, x);

    // The integrand only sees |x_j|; group equal orders.
    std::map<Coord, int> orders;
    for (Coord xi : x) ++orders[xi < 0 ? -xi : xi];

    const double a2 = p.a * p.a;
    const double inv_d = 1.0 / p.d;
    const special::BesselEvalConfig bessel_cfg;
    const auto log_f = [&](double t, double log_t) {
        double s = (p.q - 1.0) * log_t - a2 * t;
        for (const auto& [nu, count] : orders) s += count * special::log_scaled_bessel_i(nu, t * inv_d, bessel_cfg);
        return s;
    };

    quad::TrapezoidOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.max_nodes = cfg.max_nodes;
    const auto res = quad::integrate_half_line(log_f, cfg.transform, opt);
    const double log_value = res.log_value - std::lgamma(p.q);
    if (!res.converged) {
        throw AccuracyError("green_bessel: quadrature did not reach rel_tol within max_nodes", std::exp(log_value),
                            res.rel_error * std::exp(log_value));
    }
    return from_log(log_value, res.rel_error, Method::bessel_rep, cfg.abs_floor);
}

namespace {

double sinc_half(double z) {
    // sin(z/2) / z, stable at z = 0
    const double h = 0.5 * z;
    if (std::abs(h) < 1e-4) return 0.5 * (1.0 - h * h / 6.0);
    return std::sin(h) / z;
}

// (2pi)^{-d} int_{|k| < R} Q(M, beta F) e^{ik.x} F^{-q} dk for a = 0, in polar coordinates.
double inner_ball(const GreenParams& p, std::span<const Coord> x, const FourierOptions& opt, double& err) {
    const int d = p.d;
    const int m = opt.partition_order;
    const double beta = opt.partition_beta;
    const double R = opt.ball_radius;
    boost::math::quadrature::tanh_sinh<double> ts;
    err = 0.0;

    // Radial integral along direction w (unit vector).
    const auto radial = [&](const double* w) {
        double wx = 0.0;
        for (int j = 0; j < d; ++j) wx += w[j] * static_cast<double>(x[j]);
        const auto f = [&](double r) {
            // F(r w) = r^2 G with G = (2/d) sum_j (sin(r w_j / 2) / r)^2
            double g = 0.0;
            for (int j = 0; j < d; ++j) {
                const double s = w[j] * sinc_half(r * w[j]);
                g += s * s;
            }
            g *= 2.0 / d;
            const double symbol = r * r * g;
            const double chi = 1.0 - kernels::partition_lower(m, beta * symbol);
            return std::pow(r, d - 1 - 2.0 * p.q) * std::pow(g, -p.q) * chi * std::cos(r * wx);
        };
        double e = 0.0;
        const double v = ts.integrate(f, 0.0, R, opt.radial_tol, &e);
        err += std::abs(e);
        return v;
    };

    double total = 0.0;
    if (d == 1) {
        const double plus[1] = {1.0};
        const double minus[1] = {-1.0};
        total = radial(plus) + radial(minus);
    } else if (d == 2) {
        const int n = opt.azimuth_nodes;
        for (int i = 0; i < n; ++i) {
            const double phi = 2.0 * std::numbers::pi * i / n;
            const double w[2] = {std::cos(phi), std::sin(phi)};
            total += radial(w);
        }
        total *= 2.0 * std::numbers::pi / n;
    } else {
        const auto gl = quad::gauss_legendre(opt.polar_nodes);
        const int n = opt.azimuth_nodes;
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            const double mu = gl.nodes[i];
            const double st = std::sqrt(1.0 - mu * mu);
            double ring = 0.0;
            for (int j = 0; j < n; ++j) {
                const double phi = 2.0 * std::numbers::pi * j / n;
                const double w[3] = {st * std::cos(phi), st * std::sin(phi), mu};
                ring += radial(w);
            }
            total += gl.weights[i] * ring * (2.0 * std::numbers::pi / n);
        }
    }
    const double scale = std::pow(2.0 * std::numbers::pi, -d);
    err *= scale;
    return total * scale;
}

}  // namespace

GreenValue green_fourier_oracle(const GreenParams& p, std::span<const Coord> x, int grid_n,
                                const FourierOptions& opt) {
    p.validate();
    check_dim(p, x);
    if (p.d > 3) throw UnsupportedError("green_fourier_oracle: only d <= 3 is supported");
    const Coord span = static_cast<Coord>(norm::norm_linf(std::vector<double>(x.begin(), x.end())));
    if (grid_n < 2 * span + 4 || grid_n < 8)
        throw AccuracyError("green_fourier_oracle: grid too coarse for |x|_inf = " + std::to_string(span), 0.0, 0.0);

    kernels::GridSpec g;
    g.d = p.d;
    g.shift = p.a * p.a;
    g.q = p.q;
    if (p.a == 0.0) {
        g.partition_order = opt.partition_order;
        g.partition_beta = opt.partition_beta;
    }
    const auto grid = [&](int n) {
        g.n = n;
        return opt.parallel ? kernels::fourier_grid_sum_omp(g, x) : kernels::fourier_grid_sum_serial(g, x);
    };

    const kernels::GridSum fine = grid(grid_n);
    const kernels::GridSum coarse = grid(grid_n - 4);
    double value = fine.re;
    double est = std::abs(fine.re - coarse.re);
    if (p.a == 0.0) {
        double inner_err = 0.0;
        value += inner_ball(p, x, opt, inner_err);
        est += inner_err;
    }
    if (std::abs(fine.im) > 1e-12 * std::max(1.0, std::abs(value)))
        throw AccuracyError("green_fourier_oracle: imaginary part did not cancel", value, std::abs(fine.im));
    if (!(value > 0.0) || est > opt.coarse_threshold * value)
        throw AccuracyError("green_fourier_oracle: grid too coarse", value, est);

    GreenValue out;
    out.value = value;
    out.log_value = std::log(value);
    out.est_error = est;
    out.method = Method::fourier;
    return out;
}

int fourier_grid_for(const GreenParams& p, std::span<const Coord> x, double rel_tol) {
    const double span = norm::norm_linf(std::vector<double>(x.begin(), x.end()));
    int n = 0;
    if (p.a > 0.0) {
        // Aliasing error ~ C(x + N e_j) ~ exp(-m_a (N - |x|_inf)) against C(x) >~ exp(-m_a |x|_1).
        const double m = norm::mass(p.d, p.a);
        const double l1 = norm::norm_l1(std::vector<double>(x.begin(), x.end()));
        n = static_cast<int>(std::ceil(span + l1 + (std::log(1.0 / rel_tol) + 8.0) / m)) + 4;
    } else {
        n = 128;
    }
    n = std::max(n, static_cast<int>(2 * span) + 8);
    n = std::max(n, 16);
    return n + (n % 2);
}

GreenValue green_d1_closed(double a, int q, Coord x) {
    if (!std::isfinite(a) || a <= 0.0) throw DomainError("green_d1_closed: a must be positive");
    if (q < 1) throw UnsupportedError("green_d1_closed: q must be a positive integer");
    const double ax = static_cast<double>(x < 0 ? -x : x);
    const double m = norm::mass(1, a);
    const double sinh_m = a * std::sqrt(2.0 + a * a);
    const double ratio = 1.0 / ((1.0 + a * a + sinh_m) * 2.0 * sinh_m);  // e^{-m} / (2 sinh m)

    // binom(|x| + q - 1, q - 1 - l) binom(q - 1 + l, l) ratio^l
    const auto binom = [](double n, int k) {
        double b = 1.0;
        for (int i = 1; i <= k; ++i) b *= (n - k + i) / i;
        return b;
    };
    double sum = 0.0;
    double rl = 1.0;
    for (int l = 0; l < q; ++l) {
        sum += binom(ax + q - 1, q - 1 - l) * binom(q - 1 + l, l) * rl;
        rl *= ratio;
    }
    const double log_value = -m * ax - q * std::log(sinh_m) + std::log(sum);
    return from_log(log_value, 4.0 * std::numeric_limits<double>::epsilon() * (q + 1), Method::closed_d1);
}

}  // namespace lgf::lattice
