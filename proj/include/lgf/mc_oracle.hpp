#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "lgf/green_lattice.hpp"

namespace lgf::mc {

using lattice::Coord;

/// Nearest-neighbour walk on Z^d killed with probability a^2/(1+a^2) before each step.
///
/// Walks are processed in batches of batch_size. Batch b draws from an mt19937_64
/// seeded with splitmix64(seed ^ splitmix64(b)), so tallies do not depend on the
/// number of threads.
struct WalkConfig {
    int d = 1;
    double a = 1.0;
    std::uint64_t n_walks = 100000;
    std::uint64_t seed = 0;
    int max_box = 3;  ///< tally window half-width in the sup norm
    std::uint64_t batch_size = 4096;
    bool parallel = true;

    void validate() const;
};

struct VisitEstimate {
    std::vector<Coord> x;
    double mean = 0.0;
    double std_err = 0.0;
    std::uint64_t n_walks = 0;
};

/// Raw integer tallies. sum[i] and sum_sq[i] are the sum over walks of the visit count
/// to box point i and of its square, hits[i] the number of walks that visited it;
/// kills[n] counts walks with N = n, with the last bin holding N >= kills.size() - 1.
struct WalkTally {
    int d = 1;
    int max_box = 0;
    std::uint64_t n_walks = 0;
    std::vector<std::uint64_t> sum;
    std::vector<std::uint64_t> sum_sq;
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> kills;

    bool operator==(const WalkTally&) const = default;
};

inline constexpr int kKillHistogramBins = 64;

WalkTally run_killed_walks_serial(const WalkConfig& cfg);
WalkTally run_killed_walks_omp(const WalkConfig& cfg);

/// Point index of x inside the tally box, or -1 outside.
std::int64_t box_index(int d, int max_box, std::span<const Coord> x);
std::vector<Coord> box_point(int d, int max_box, std::int64_t index);

/// Visit estimate of (1+a^2) C_a(x) for every point of the tally box, keyed by x.
std::map<std::vector<Coord>, VisitEstimate> run_killed_walks(const WalkConfig& cfg);

/// Estimate of C_a(x) = visits / (1 + a^2).
VisitEstimate estimate_green(const WalkConfig& cfg, std::span<const Coord> x);

/// Empirical P(N >= n) for n = 0 .. bins-1.
std::vector<double> survival_curve(const WalkTally& t);

VisitEstimate visit_estimate(const WalkTally& t, std::span<const Coord> x);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr std::uint64_t kMinHitsForNormal = 10;

/// Interval for the expected visit count at x with the two-sided coverage of +-z sigma.
/// mean +- z std_err when at least kMinHitsForNormal walks visited x; otherwise the exact
/// Poisson (Garwood) interval on the total visit count, divided by n_walks.
Interval visit_interval(const WalkTally& t, std::span<const Coord> x, double z = 3.0);

std::uint64_t splitmix64(std::uint64_t z);

}  // namespace lgf::mc
