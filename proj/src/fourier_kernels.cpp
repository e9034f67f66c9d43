// Periodic-grid sums for the Fourier oracle. The OpenMP kernel and the serial
// reference accumulate identical per-slab partial sums and combine them in slab
// order, so both return bit-identical results for any thread count.
// Tables and sums are in long double: for values far below the O(1) grid terms the
// per-term rounding of double would dominate.

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "lgf/errors.hpp"
#include "lgf/green_lattice.hpp"

namespace lgf::lattice::kernels {

double partition_lower(int m, double y) {
    if (y <= 0.0) return 0.0;
    if (y <= m) {
        // P(m, y) = e^{-y} y^m / m! * sum_i y^i / ((m+1)...(m+i))
        double term = 1.0;
        double sum = 1.0;
        for (int i = 1; i < 500; ++i) {
            term *= y / (m + i);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::exp(-y + m * std::log(y) - std::lgamma(m + 1.0)) * sum;
    }
    // 1 - Q(m, y), Q(m, y) = e^{-y} sum_{j<m} y^j / j!
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < m; ++j) {
        term *= y / j;
        sum += term;
    }
    return 1.0 - std::exp(-y) * sum;
}

namespace {

using real = long double;
using cplx = std::complex<real>;
constexpr real kPiL = std::numbers::pi_v<real>;

struct Tables {
    std::vector<std::vector<cplx>> phase;  // e^{i k_j x_j}, one table per axis
};

Tables make_tables(const GridSpec& g, std::span<const Coord> x) {
    Tables t;
    const int n = g.n;
    t.phase.resize(g.d);
    for (int ax = 0; ax < g.d; ++ax) {
        t.phase[ax].resize(n);
        const Coord xm = ((x[ax] % n) + n) % n;
        for (int j = 0; j < n; ++j) {
            // Exact reduction of j x_j modulo n before forming the angle.
            const Coord r = (static_cast<Coord>(j) * xm) % n;
            const real ang = 2 * kPiL * static_cast<real>(r) / n;
            t.phase[ax][j] = {std::cos(ang), std::sin(ang)};
        }
    }
    return t;
}

inline real weight(const GridSpec& g, real symbol) {
    const real base = g.shift + symbol;
    if (base == 0) return 0;  // only reachable with the partition factor, which vanishes faster
    real w;
    const double twice_q = 2.0 * g.q;
    if (twice_q == std::floor(twice_q) && twice_q <= 16.0) {
        // integer and half-integer q without pow
        const int k = static_cast<int>(g.q);
        real p = 1;
        for (int i = 0; i < k; ++i) p *= base;
        if (twice_q != 2.0 * k) p *= std::sqrt(base);
        w = 1 / p;
    } else {
        w = std::pow(base, static_cast<real>(-g.q));
    }
    if (g.partition_order > 0)
        w *= partition_lower(g.partition_order, g.partition_beta * static_cast<double>(symbol));
    return w;
}

std::vector<real> half_symbols(int n) {
    std::vector<real> h(n);
    for (int j = 0; j < n; ++j) {
        const real s = std::sin(kPiL * j / n);
        h[j] = 2 * s * s;
    }
    return h;
}

// Weights w(F(k)) on the grid, row-major in (j0, j1, j2). They do not depend on x.
struct WeightTable {
    GridSpec spec;
    std::vector<real> w;
};

bool same_spec(const GridSpec& a, const GridSpec& b) {
    return a.d == b.d && a.n == b.n && a.shift == b.shift && a.q == b.q && a.partition_order == b.partition_order &&
           a.partition_beta == b.partition_beta;
}

void fill_weights(const GridSpec& g, const std::vector<real>& h, std::vector<real>& w, int j0) {
    const int n = g.n;
    const real inv_d = real{1} / g.d;
    if (g.d == 1) {
        w[j0] = weight(g, h[j0]);
        return;
    }
    for (int j1 = 0; j1 < n; ++j1) {
        const real s1 = h[j0] + h[j1];
        if (g.d == 2) {
            w[static_cast<std::size_t>(j0) * n + j1] = weight(g, s1 * inv_d);
            continue;
        }
        real* row = w.data() + (static_cast<std::size_t>(j0) * n + j1) * n;
        for (int j2 = 0; j2 < n; ++j2) row[j2] = weight(g, (s1 + h[j2]) * inv_d);
    }
}

// Two-entry cache (the oracle alternates a fine and a coarse grid): sweeps over x
// at fixed parameters reuse the weights.
std::mutex cache_mutex;
std::shared_ptr<const WeightTable> cached[2];
int next_slot = 0;

std::shared_ptr<const WeightTable> weights_for(const GridSpec& g, bool parallel) {
    {
        std::lock_guard lock(cache_mutex);
        for (const auto& c : cached)
            if (c && same_spec(c->spec, g)) return c;
    }
    auto t = std::make_shared<WeightTable>();
    t->spec = g;
    std::size_t size = 1;
    for (int i = 0; i < g.d; ++i) size *= static_cast<std::size_t>(g.n);
    if (size > (std::size_t{1} << 26)) throw UnsupportedError("fourier grid sum: grid too large");
    t->w.resize(size);
    const auto h = half_symbols(g.n);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int j0 = 0; j0 < g.n; ++j0) fill_weights(g, h, t->w, j0);
    } else {
        for (int j0 = 0; j0 < g.n; ++j0) fill_weights(g, h, t->w, j0);
    }
    std::lock_guard lock(cache_mutex);
    cached[next_slot] = t;
    next_slot ^= 1;
    return t;
}

// Sum over the grid slab with first index j0.
cplx slab_sum(const GridSpec& g, const Tables& t, const std::vector<real>& w, int j0) {
    const int n = g.n;
    const cplx ph0 = t.phase[0][j0];
    if (g.d == 1) return ph0 * w[j0];

    cplx acc{0, 0};
    for (int j1 = 0; j1 < n; ++j1) {
        const cplx ph1 = ph0 * t.phase[1][j1];
        const std::size_t base = static_cast<std::size_t>(j0) * n + j1;
        if (g.d == 2) {
            acc += ph1 * w[base];
            continue;
        }
        const real* row_w = w.data() + base * n;
        const cplx* ph2 = t.phase[2].data();
        real re = 0, im = 0;
        for (int j2 = 0; j2 < n; ++j2) {
            re += ph2[j2].real() * row_w[j2];
            im += ph2[j2].imag() * row_w[j2];
        }
        acc += ph1 * cplx{re, im};
    }
    return acc;
}

void check_spec(const GridSpec& g, std::span<const Coord> x) {
    if (g.d < 1 || g.d > 3) throw UnsupportedError("fourier grid sum: only d <= 3 is supported");
    if (static_cast<int>(x.size()) != g.d) throw DomainError("fourier grid sum: dimension mismatch");
    if (g.n < 2) throw DomainError("fourier grid sum: grid too small");
}

GridSum combine(const std::vector<cplx>& slabs, int n, int d) {
    cplx total{0, 0};
    for (const auto& s : slabs) total += s;
    const real norm = std::pow(static_cast<real>(n), static_cast<real>(-d));
    return {static_cast<double>(total.real() * norm), static_cast<double>(total.imag() * norm)};
}

}  // namespace

GridSum fourier_grid_sum_serial(const GridSpec& g, std::span<const Coord> x) {
    check_spec(g, x);
    const Tables t = make_tables(g, x);
    const auto w = weights_for(g, false);
    std::vector<cplx> slabs(g.n);
    for (int j0 = 0; j0 < g.n; ++j0) slabs[j0] = slab_sum(g, t, w->w, j0);
    return combine(slabs, g.n, g.d);
}

GridSum fourier_grid_sum_omp(const GridSpec& g, std::span<const Coord> x) {
    check_spec(g, x);
    const Tables t = make_tables(g, x);
    const auto w = weights_for(g, true);
    std::vector<cplx> slabs(g.n);
#pragma omp parallel for schedule(dynamic, 1)
    for (int j0 = 0; j0 < g.n; ++j0) slabs[j0] = slab_sum(g, t, w->w, j0);
    return combine(slabs, g.n, g.d);
}

}  // namespace lgf::lattice::kernels
