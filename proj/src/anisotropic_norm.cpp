#include "lgf/anisotropic_norm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lgf/errors.hpp"

namespace lgf::norm {

namespace {

void check_args(std::span<const double> x, int d, double a, bool allow_zero_a) {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (static_cast<int>(x.size()) != d)
        throw DomainError("vector has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(d));
    if (!std::isfinite(a) || a < 0.0 || (!allow_zero_a && a == 0.0)) throw DomainError("a must be positive and finite");
    for (double xi : x)
        if (!std::isfinite(xi)) throw DomainError("vector coordinates must be finite");
}

// sqrt(1 + y) - 1 without cancellation.
double sqrt1p_m1(double y) { return y / (std::sqrt(1.0 + y) + 1.0); }

}  // namespace

double norm_l1(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

double norm_l2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double norm_linf(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

double mass(int d, double a) {
    if (d < 1) throw DomainError("mass: dimension must be >= 1");
    if (!std::isfinite(a) || a < 0.0) throw DomainError("mass: a must be nonnegative and finite");
    // arccosh(1 + e) = log1p(e + sqrt(e (2 + e))), accurate for small e.
    const double e = d * a * a;
    return std::log1p(e + std::sqrt(e * (2.0 + e)));
}

double u_scale(std::span<const double> x, int d, double a) {
    check_args(x, d, a, false);
    const double xmax = norm_linf(x);
    if (xmax == 0.0) throw DomainError("u_scale: undefined at x = 0");

    // Solve phi(u) = (1/d) sum_i (sqrt(1 + x_i^2 u^2) - 1) - a^2 = 0; phi is convex and increasing.
    const double a2 = a * a;
    const auto phi = [&](double u, double& dphi) {
        double s = 0.0;
        double ds = 0.0;
        for (double xi : x) {
            const double y = xi * xi * u * u;
            s += sqrt1p_m1(y);
            ds += xi * xi * u / std::sqrt(1.0 + y);
        }
        dphi = ds / d;
        return s / d - a2;
    };

    // The largest coordinate alone cannot exceed d (1 + a^2).
    const double c = d * (1.0 + a2);
    double hi = std::sqrt(((d - 1) + d * a2) * (c + 1.0)) / xmax;
    double lo = 0.0;
    double u = std::min(std::sqrt(2.0 * d) * a / norm_l2(x), hi);

    for (int it = 0; it < 200; ++it) {
        double dphi = 0.0;
        const double f = phi(u, dphi);
        if (f == 0.0) return u;
        if (f > 0.0) hi = std::min(hi, u);
        else lo = std::max(lo, u);
        double next = (dphi > 0.0) ? u - f / dphi : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - u) <= 1e-16 * u || hi - lo <= 1e-16 * hi) return next;
        u = next;
    }
    return u;
}

double a_norm(std::span<const double> x, int d, double a) {
    check_args(x, d, a, false);
    if (norm_linf(x) == 0.0) return 0.0;
    const double u = u_scale(x, d, a);
    double s = 0.0;
    for (double xi : x) s += std::abs(xi) * std::asinh(std::abs(xi) * u);
    return s / mass(d, a);
}

NormContext NormContext::make(std::span<const double> x, double a) {
    NormContext ctx;
    ctx.d = static_cast<int>(x.size());
    ctx.a = a;
    ctx.x.assign(x.begin(), x.end());
    ctx.mass = norm::mass(ctx.d, a);
    ctx.u = u_scale(x, ctx.d, a);
    double s = 0.0;
    for (double xi : x) s += std::abs(xi) * std::asinh(std::abs(xi) * ctx.u);
    ctx.norm = s / ctx.mass;
    ctx.x_hat.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) ctx.x_hat[i] = x[i] / ctx.norm;
    ctx.u_hat = ctx.norm * ctx.u;
    return ctx;
}

std::vector<BallPoint> unit_ball_boundary(int d, double a, int n_points) {
    if (d != 2 && d != 3) throw DomainError("unit_ball_boundary: only d = 2 or 3 is supported");
    if (n_points < 8) throw DomainError("unit_ball_boundary: need at least 8 points");
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("unit_ball_boundary: a must be positive");

    // cos/sin of 2 pi k / n, exact on the axes.
    const auto unit_circle = [](long k, long n, double& c, double& s) {
        if ((4 * k) % n == 0) {
            static constexpr double cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            const long q = ((4 * k) / n) % 4;
            c = cs[q][0];
            s = cs[q][1];
            return;
        }
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        c = std::cos(ang);
        s = std::sin(ang);
    };

    // |e_j|_a = 1 exactly on the axes
    const auto radius = [&](std::span<const double> dir) {
        int nonzero = 0;
        for (double v : dir) nonzero += v != 0.0;
        return nonzero == 1 ? 1.0 : 1.0 / a_norm(dir, d, a);
    };

    std::vector<BallPoint> out;
    if (d == 2) {
        out.reserve(n_points);
        for (long k = 0; k < n_points; ++k) {
            double c = 0.0, s = 0.0;
            unit_circle(k, n_points, c, s);
            const double dir[2] = {c, s};
            const double r = radius(dir);
            out.push_back({2.0 * std::numbers::pi * k / n_points, 0.0, {r * c, r * s}});
        }
        return out;
    }

    const long n_phi = n_points;
    const long n_theta = n_points / 2 + 1;
    out.reserve(static_cast<std::size_t>(n_theta * n_phi));
    for (long i = 0; i < n_theta; ++i) {
        // theta = pi i / (n_theta - 1) is the angle 2 pi i / (2 (n_theta - 1)) on the unit circle.
        double ct = 0.0, st = 0.0;
        unit_circle(i, 2 * (n_theta - 1), ct, st);
        for (long j = 0; j < n_phi; ++j) {
            double cp = 0.0, sp = 0.0;
            unit_circle(j, n_phi, cp, sp);
            const double dir[3] = {st * cp, st * sp, ct};
            const double r = radius(dir);
            out.push_back({std::numbers::pi * i / (n_theta - 1), 2.0 * std::numbers::pi * j / n_phi,
                           {r * dir[0], r * dir[1], r * dir[2]}});
        }
    }
    return out;
}

}  // namespace lgf::norm
