#include "lgf/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "lgf/errors.hpp"

namespace lgf::mc {

namespace {

constexpr std::uint64_t kMaxWalks = std::uint64_t{1} << 53;

std::int64_t box_size(int d, int max_box) {
    std::int64_t n = 1;
    for (int i = 0; i < d; ++i) n *= 2 * max_box + 1;
    return n;
}

WalkTally empty_tally(const WalkConfig& cfg) {
    WalkTally t;
    t.d = cfg.d;
    t.max_box = cfg.max_box;
    const auto n = static_cast<std::size_t>(box_size(cfg.d, cfg.max_box));
    t.sum.assign(n, 0);
    t.sum_sq.assign(n, 0);
    t.hits.assign(n, 0);
    t.kills.assign(kKillHistogramBins, 0);
    return t;
}

void merge(WalkTally& into, const WalkTally& from) {
    into.n_walks += from.n_walks;
    for (std::size_t i = 0; i < into.sum.size(); ++i) {
        into.sum[i] += from.sum[i];
        into.sum_sq[i] += from.sum_sq[i];
        into.hits[i] += from.hits[i];
    }
    for (std::size_t i = 0; i < into.kills.size(); ++i) into.kills[i] += from.kills[i];
}

std::uint64_t batch_count(const WalkConfig& cfg) { return (cfg.n_walks + cfg.batch_size - 1) / cfg.batch_size; }

// Walks of one batch, added into t.
void run_batch(const WalkConfig& cfg, std::uint64_t batch, WalkTally& t) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(batch)));
    const std::uint64_t first = batch * cfg.batch_size;
    const std::uint64_t count = std::min(cfg.batch_size, cfg.n_walks - first);
    const double p_kill = cfg.a * cfg.a / (1.0 + cfg.a * cfg.a);
    const int d = cfg.d;
    const int B = cfg.max_box;
    const int dirs = 2 * d;

    std::vector<std::int64_t> stride(d);
    for (int j = 0, s = 1; j < d; ++j, s *= 2 * B + 1) stride[j] = s;

    std::vector<std::uint32_t> visits(t.sum.size(), 0);
    std::vector<std::int64_t> touched;
    std::vector<Coord> pos(d);

    for (std::uint64_t w = 0; w < count; ++w) {
        std::fill(pos.begin(), pos.end(), 0);
        int outside = 0;  // number of coordinates with |pos_j| > B
        std::int64_t idx = 0;
        for (int j = 0; j < d; ++j) idx += B * stride[j];
        std::uint64_t steps = 0;
        for (;;) {
            if (outside == 0) {
                if (visits[idx]++ == 0) touched.push_back(idx);
            }
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (u < p_kill) break;
            int dir = static_cast<int>((u - p_kill) / (1.0 - p_kill) * dirs);
            if (dir >= dirs) dir = dirs - 1;
            const int j = dir >> 1;
            const Coord before = pos[j];
            const Coord after = before + ((dir & 1) ? 1 : -1);
            pos[j] = after;
            const bool was_out = before > B || before < -B;
            const bool now_out = after > B || after < -B;
            outside += static_cast<int>(now_out) - static_cast<int>(was_out);
            idx += (after - before) * stride[j];
            ++steps;
        }
        ++t.kills[std::min<std::uint64_t>(steps, kKillHistogramBins - 1)];
        for (std::int64_t i : touched) {
            const std::uint64_t v = visits[i];
            t.sum[i] += v;
            t.sum_sq[i] += v * v;
            ++t.hits[i];
            visits[i] = 0;
        }
        touched.clear();
    }
    t.n_walks += count;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void WalkConfig::validate() const {
    if (d < 1) throw DomainError("WalkConfig: d must be >= 1");
    if (!std::isfinite(a) || a <= 0.0) throw DomainError("WalkConfig: a must be positive (the walk never dies at a = 0)");
    if (n_walks < 1) throw ConfigError("WalkConfig: n_walks must be >= 1");
    if (n_walks > kMaxWalks) throw ConfigError("WalkConfig: n_walks exceeds 2^53, tallies lose precision");
    if (max_box < 0) throw ConfigError("WalkConfig: max_box must be >= 0");
    if (box_size(d, max_box) > (std::int64_t{1} << 26)) throw ConfigError("WalkConfig: tally box too large");
    if (batch_size < 1) throw ConfigError("WalkConfig: batch_size must be >= 1");
}

std::int64_t box_index(int d, int max_box, std::span<const Coord> x) {
    if (static_cast<int>(x.size()) != d) throw DomainError("box_index: dimension mismatch");
    std::int64_t idx = 0;
    std::int64_t s = 1;
    for (int j = 0; j < d; ++j) {
        if (x[j] > max_box || x[j] < -max_box) return -1;
        idx += (x[j] + max_box) * s;
        s *= 2 * max_box + 1;
    }
    return idx;
}

std::vector<Coord> box_point(int d, int max_box, std::int64_t index) {
    std::vector<Coord> x(d);
    for (int j = 0; j < d; ++j) {
        x[j] = index % (2 * max_box + 1) - max_box;
        index /= 2 * max_box + 1;
    }
    return x;
}

WalkTally run_killed_walks_serial(const WalkConfig& cfg) {
    cfg.validate();
    WalkTally total = empty_tally(cfg);
    const std::uint64_t batches = batch_count(cfg);
    for (std::uint64_t b = 0; b < batches; ++b) run_batch(cfg, b, total);
    return total;
}

WalkTally run_killed_walks_omp(const WalkConfig& cfg) {
    cfg.validate();
    WalkTally total = empty_tally(cfg);
    const auto batches = static_cast<std::int64_t>(batch_count(cfg));
#pragma omp parallel
    {
        WalkTally local = empty_tally(cfg);
#pragma omp for schedule(dynamic, 1) nowait
        for (std::int64_t b = 0; b < batches; ++b) run_batch(cfg, static_cast<std::uint64_t>(b), local);
#pragma omp critical
        merge(total, local);
    }
    return total;
}

VisitEstimate visit_estimate(const WalkTally& t, std::span<const Coord> x) {
    const std::int64_t i = box_index(t.d, t.max_box, x);
    if (i < 0) throw DomainError("visit_estimate: x lies outside the tally box");
    VisitEstimate e;
    e.x.assign(x.begin(), x.end());
    e.n_walks = t.n_walks;
    const double n = static_cast<double>(t.n_walks);
    const double s = static_cast<double>(t.sum[i]);
    const double ss = static_cast<double>(t.sum_sq[i]);
    e.mean = s / n;
    if (t.n_walks > 1) {
        const double var = std::max(0.0, (ss - s * s / n) / (n - 1.0));
        e.std_err = std::sqrt(var / n);
    }
    return e;
}

Interval visit_interval(const WalkTally& t, std::span<const Coord> x, double z) {
    if (!(z > 0.0)) throw DomainError("visit_interval: z must be positive");
    const VisitEstimate e = visit_estimate(t, x);
    const std::int64_t i = box_index(t.d, t.max_box, x);
    if (t.hits[i] >= kMinHitsForNormal) return {e.mean - z * e.std_err, e.mean + z * e.std_err};
    const double alpha = boost::math::erfc(z / std::sqrt(2.0));
    const double s = static_cast<double>(t.sum[i]);
    const double n = static_cast<double>(t.n_walks);
    const double lo = s == 0.0 ? 0.0 : boost::math::gamma_p_inv(s, 0.5 * alpha);
    const double hi = boost::math::gamma_q_inv(s + 1.0, 0.5 * alpha);
    return {lo / n, hi / n};
}

std::map<std::vector<Coord>, VisitEstimate> run_killed_walks(const WalkConfig& cfg) {
    const WalkTally t = cfg.parallel ? run_killed_walks_omp(cfg) : run_killed_walks_serial(cfg);
    std::map<std::vector<Coord>, VisitEstimate> out;
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(t.sum.size()); ++i) {
        auto x = box_point(t.d, t.max_box, i);
        out.emplace(x, visit_estimate(t, x));
    }
    return out;
}

VisitEstimate estimate_green(const WalkConfig& cfg, std::span<const Coord> x) {
    if (static_cast<int>(x.size()) != cfg.d) throw DomainError("estimate_green: dimension mismatch");
    WalkConfig c = cfg;
    Coord span = 0;
    for (Coord v : x) span = std::max(span, v < 0 ? -v : v);
    c.max_box = std::max<int>(c.max_box, static_cast<int>(span));
    const WalkTally t = c.parallel ? run_killed_walks_omp(c) : run_killed_walks_serial(c);
    VisitEstimate e = visit_estimate(t, x);
    const double k = 1.0 + cfg.a * cfg.a;
    e.mean /= k;
    e.std_err /= k;
    return e;
}

std::vector<double> survival_curve(const WalkTally& t) {
    std::vector<double> s(t.kills.size());
    std::uint64_t alive = t.n_walks;
    for (std::size_t n = 0; n < t.kills.size(); ++n) {
        s[n] = static_cast<double>(alive) / static_cast<double>(t.n_walks);
        alive -= t.kills[n];
    }
    return s;
}

}  // namespace lgf::mc
