#pragma once

// Trapezoid rule on the real line for log-represented integrands, with adaptive
// truncation and node doubling. The semi-infinite integrals of the library are
// mapped onto R by one of two substitutions before reaching this engine.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lgf/errors.hpp"

namespace lgf::quad {

enum class Transform {
    log_substitution,    ///< t = exp(w)
    double_exponential,  ///< t = exp(pi/2 sinh w)
};

struct TrapezoidOptions {
    double initial_step = 0.5;
    double rel_tol = 1e-13;
    int max_nodes = 1 << 17;
    /// Nodes with log g below (max - drop) end the range scan.
    double drop = 50.0;
    double w_min = -700.0;
    double w_max = 700.0;
    /// Refinements performed before the doubling difference is trusted.
    int min_levels = 2;
};

struct TrapezoidResult {
    double log_value = -std::numeric_limits<double>::infinity();
    /// |T_h - T_{2h}| / T_h at the last level.
    double rel_error = 0.0;
    int nodes = 0;
    int levels = 0;
    bool converged = false;
};

namespace detail {

inline double log_sum_exp_shifted(double sum, double shift) {
    return sum > 0.0 ? shift + std::log(sum) : -std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Integrates exp(log_g(w)) over R. log_g must be unimodal (or -inf) and
/// decay by at least `drop` within [w_min, w_max] on both sides of its peak.
template <class LogG>
TrapezoidResult integrate_real_line(LogG&& log_g, const TrapezoidOptions& opt) {
    const double h0 = opt.initial_step;
    const double ninf = -std::numeric_limits<double>::infinity();
    TrapezoidResult res;

    // Range scan on the coarse grid w = k h0.
    const long k_lo_limit = static_cast<long>(std::ceil(opt.w_min / h0));
    const long k_hi_limit = static_cast<long>(std::floor(opt.w_max / h0));
    const long k_start = std::clamp(0L, k_lo_limit, k_hi_limit);

    std::vector<double> right{log_g(k_start * h0)};
    double peak = right.front();
    long k = k_start;
    while (k < k_hi_limit) {
        ++k;
        const double v = log_g(k * h0);
        right.push_back(v);
        peak = std::max(peak, v);
        const double prev = right[right.size() - 2];
        if (v < peak - opt.drop && v <= prev) break;
        if (v == ninf && peak > ninf) break;
        if (static_cast<long>(right.size()) > opt.max_nodes) break;
    }
    const long k_hi = k;

    std::vector<double> left;
    k = k_start;
    double prev = right.front();
    while (k > k_lo_limit) {
        --k;
        const double v = log_g(k * h0);
        left.push_back(v);
        peak = std::max(peak, v);
        if (v < peak - opt.drop && v <= prev) break;
        if (v == ninf && peak > ninf) break;
        if (static_cast<long>(left.size() + right.size()) > opt.max_nodes) break;
        prev = v;
    }
    const long k_lo = k;
    const bool truncated = (k_hi == k_hi_limit && right.back() > peak - opt.drop) ||
                           (k_lo == k_lo_limit && !left.empty() && left.back() > peak - opt.drop);

    if (peak == ninf) {
        res.converged = true;
        res.nodes = static_cast<int>(left.size() + right.size());
        return res;
    }
    if (std::isnan(peak)) throw AccuracyError("integrand evaluated to NaN", std::nan(""), 0.0);

    const double w_lo = k_lo * h0;

    double sum = 0.0;
    for (double v : left) sum += std::exp(v - peak);
    for (double v : right) sum += std::exp(v - peak);
    double h = h0;
    double t_prev = h * sum;
    long n_intervals = k_hi - k_lo;
    int nodes = static_cast<int>(n_intervals + 1);

    res.log_value = detail::log_sum_exp_shifted(t_prev, peak);
    for (int level = 1;; ++level) {
        if (nodes + n_intervals > opt.max_nodes) {
            res.nodes = nodes;
            res.levels = level - 1;
            res.converged = false;
            return res;
        }
        double mid = 0.0;
        for (long i = 0; i < n_intervals; ++i) {
            const double v = log_g(w_lo + (static_cast<double>(i) + 0.5) * h);
            if (std::isnan(v)) throw AccuracyError("integrand evaluated to NaN", std::exp(res.log_value), 0.0);
            mid += std::exp(v - peak);
        }
        nodes += static_cast<int>(n_intervals);
        sum += mid;
        h *= 0.5;
        n_intervals *= 2;
        const double t_new = h * sum;
        res.log_value = detail::log_sum_exp_shifted(t_new, peak);
        res.rel_error = t_new > 0.0 ? std::abs(t_new - t_prev) / t_new : 0.0;
        res.nodes = nodes;
        res.levels = level;
        if (level >= opt.min_levels && res.rel_error <= opt.rel_tol) {
            res.converged = !truncated;
            return res;
        }
        t_prev = t_new;
    }
}

/// Integrates exp(log_f(t, log t)) over t in (0, inf) via the chosen substitution.
/// log_f receives both t and log t so that it can work when t itself overflows.
template <class LogF>
TrapezoidResult integrate_half_line(LogF&& log_f, Transform transform, TrapezoidOptions opt) {
    if (transform == Transform::log_substitution) {
        return integrate_real_line([&](double w) { return log_f(std::exp(w), w) + w; }, opt);
    }
    constexpr double half_pi = 1.57079632679489661923;
    opt.w_min = std::max(opt.w_min, -6.5);
    opt.w_max = std::min(opt.w_max, 6.5);
    opt.initial_step = std::min(opt.initial_step, 0.125);
    return integrate_real_line(
        [&](double w) {
            const double log_t = half_pi * std::sinh(w);
            return log_f(std::exp(log_t), log_t) + log_t + std::log(half_pi * std::cosh(w));
        },
        opt);
}

}  // namespace lgf::quad

namespace lgf::quad {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
GaussRule gauss_legendre(int n);

}  // namespace lgf::quad
