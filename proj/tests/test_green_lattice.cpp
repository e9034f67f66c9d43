#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "lgf/errors.hpp"
#include "lgf/green_lattice.hpp"

using namespace lgf::lattice;

namespace {

double bessel(int d, double a, double q, const std::vector<Coord>& x, const QuadratureConfig& cfg = {}) {
    return green_bessel({d, a, q}, x, cfg).value;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("fixtures") {
    CHECK(rel(bessel(1, 1.0, 1.0, {0}), 1.0 / std::sqrt(3.0)) < 1e-12);
    const double two = std::pow(2.0 + std::sqrt(3.0), -2.0) / std::sqrt(3.0);
    CHECK(rel(bessel(1, 1.0, 1.0, {2}), two) < 1e-12);
    CHECK(two == doctest::Approx(0.0414519).epsilon(1e-6));
    const double q2 = (1.0 / 3.0) * (1.0 + (2.0 - std::sqrt(3.0)) / std::sqrt(3.0));
    CHECK(q2 == doctest::Approx(0.3849002).epsilon(1e-6));
    CHECK(rel(green_d1_closed(1.0, 2, 0).value, q2) < 1e-14);
    CHECK(rel(bessel(1, 1.0, 2.0, {0}), q2) < 1e-12);
    // C_0(0) in d = 3, pinned by the Bessel and Fourier routes
    CHECK(rel(bessel(3, 0.0, 1.0, {0, 0, 0}), 1.5163860591519780) < 1e-12);
}

TEST_CASE("symmetry under permutations and sign flips") {
    for (double a : {0.0, 0.3, 2.0}) {
        const double v = bessel(3, a, 1.0, {2, 1, 0});
        CHECK(bessel(3, a, 1.0, {0, -1, -2}) == v);
        CHECK(bessel(3, a, 1.0, {1, 0, -2}) == v);
    }
}

TEST_CASE("d = 1 closed form") {
    for (int q = 1; q <= 3; ++q)
        for (double a : {0.1, 0.5, 1.0, 2.0})
            for (Coord x = -20; x <= 20; ++x) {
                CAPTURE(q);
                CAPTURE(a);
                CAPTURE(x);
                CHECK(rel(bessel(1, a, q, {x}), green_d1_closed(a, q, x).value) < 1e-10);
            }
    // q = 1 and q = 2 explicit forms
    for (double a : {0.3, 1.7}) {
        const double m = std::acosh(1.0 + a * a);
        for (Coord x : {0, 3, 9}) {
            CHECK(rel(green_d1_closed(a, 1, x).value, std::exp(-m * x) / std::sinh(m)) < 1e-13);
            const double q2 = std::exp(-m * x) / (std::sinh(m) * std::sinh(m)) * (x + 1.0 + std::exp(-m) / std::sinh(m));
            CHECK(rel(green_d1_closed(a, 2, x).value, q2) < 1e-13);
        }
    }
    CHECK(rel(bessel(1, 0.5, 3.0, {5}), green_d1_closed(0.5, 3, 5).value) < 1e-10);
    CHECK_THROWS_AS(green_d1_closed(0.0, 1, 0), lgf::DomainError);
    CHECK_THROWS_AS(green_d1_closed(1.0, 0, 0), lgf::UnsupportedError);
}

TEST_CASE("Fourier oracle against Bessel and closed form") {
    const auto fourier = [](int d, double a, double q, const std::vector<Coord>& x) {
        const GreenParams p{d, a, q};
        return green_fourier_oracle(p, x, fourier_grid_for(p, x, 1e-10)).value;
    };
    CHECK(rel(fourier(2, 1.0, 1.0, {0, 0}), bessel(2, 1.0, 1.0, {0, 0})) < 1e-8);
    CHECK(rel(fourier(1, 0.5, 2.0, {3}), green_d1_closed(0.5, 2, 3).value) < 1e-10);
    CHECK(rel(fourier(3, 0.3, 1.5, {1, 1, 0}), bessel(3, 0.3, 1.5, {1, 1, 0})) < 1e-8);
    for (double q : {0.5, 1.0}) CHECK(rel(fourier(3, 0.0, q, {2, 1, 0}), bessel(3, 0.0, q, {2, 1, 0})) < 1e-8);
    for (double a : {0.2, 1.0})
        for (double q : {0.5, 2.0}) CHECK(rel(fourier(2, a, q, {5, 3}), bessel(2, a, q, {5, 3})) < 1e-8);
    // tiny values need the extended-precision grid sum
    CHECK(rel(fourier(3, 1.0, 0.5, {5, 5, 5}), bessel(3, 1.0, 0.5, {5, 5, 5})) < 1e-8);
}

TEST_CASE("serial and OpenMP grid sums are identical") {
    const std::vector<Coord> x{3, -1, 2};
    for (int d = 1; d <= 3; ++d) {
        kernels::GridSpec g;
        g.d = d;
        g.n = 36;
        g.shift = 0.09;
        g.q = 0.7;
        const std::span<const Coord> xs(x.data(), d);
        const auto s = kernels::fourier_grid_sum_serial(g, xs);
        const auto o = kernels::fourier_grid_sum_omp(g, xs);
        CHECK(s.re == o.re);
        CHECK(s.im == o.im);
        g.shift = 0.0;
        g.partition_order = 10;
        g.partition_beta = 120.0;
        const auto s0 = kernels::fourier_grid_sum_serial(g, xs);
        const auto o0 = kernels::fourier_grid_sum_omp(g, xs);
        CHECK(s0.re == o0.re);
    }
}

TEST_CASE("partition factor") {
    CHECK(kernels::partition_lower(10, 0.0) == 0.0);
    // P(1, y) = 1 - e^{-y}
    for (double y : {1e-3, 0.5, 3.0}) CHECK(rel(kernels::partition_lower(1, y), -std::expm1(-y)) < 1e-14);
    // P(m, y) + Q(m, y) = 1 across the branch switch at y = m
    const double below = kernels::partition_lower(10, 10.0 - 1e-9);
    const double above = kernels::partition_lower(10, 10.0 + 1e-9);
    CHECK(std::abs(below - above) < 1e-8);
    CHECK(kernels::partition_lower(10, 200.0) == 1.0);
}

TEST_CASE("convolution identity") {
    const double a = 0.5;
    for (Coord x : {0, 1, 4, 11}) {
        double sum = 0.0;
        for (Coord y = -200; y <= 200; ++y) sum += green_d1_closed(a, 1, y).value * green_d1_closed(a, 1, x - y).value;
        CHECK(rel(bessel(1, a, 2.0, {x}), sum) < 1e-9);
    }
}

TEST_CASE("strictly decreasing in a") {
    for (const auto& x : {std::vector<Coord>{0, 0, 0}, std::vector<Coord>{3, 1, 0}}) {
        double prev = bessel(3, 0.0, 1.0, x);
        for (double a : {0.05, 0.2, 0.5, 1.0, 3.0}) {
            const double v = bessel(3, a, 1.0, x);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("submultiplicativity") {
    const auto box = [](int d) {
        std::vector<std::vector<Coord>> pts;
        const int side = 9;
        int total = 1;
        for (int i = 0; i < d; ++i) total *= side;
        for (int k = 0; k < total; ++k) {
            std::vector<Coord> p(d);
            int r = k;
            for (int i = 0; i < d; ++i) {
                p[i] = r % side - 4;
                r /= side;
            }
            pts.push_back(p);
        }
        return pts;
    };
    for (int d = 1; d <= 3; ++d) {
        for (double a : {0.0, 0.2, 1.0}) {
            if (a == 0.0 && d < 3) continue;
            const auto pts = box(d);
            std::map<std::vector<Coord>, double> c;
            const auto C = [&](const std::vector<Coord>& x) {
                auto it = c.find(x);
                if (it != c.end()) return it->second;
                return c[x] = bessel(d, a, 1.0, x);
            };
            const double c0 = C(std::vector<Coord>(d, 0));
            int violations = 0;
            // x in the box, y on a coarser subset to keep the pair count moderate
            for (const auto& x : pts)
                for (std::size_t j = 0; j < pts.size(); j += (d == 3 ? 7 : 1)) {
                    const auto& y = pts[j];
                    std::vector<Coord> xy(d);
                    for (int i = 0; i < d; ++i) xy[i] = x[i] - y[i];
                    if (c0 * C(x) < C(y) * C(xy) * (1.0 - 1e-12)) ++violations;
                }
            CAPTURE(d);
            CAPTURE(a);
            CHECK(violations == 0);
        }
    }
}

TEST_CASE("quadrature transforms agree") {
    QuadratureConfig de;
    de.transform = lgf::quad::Transform::double_exponential;
    for (double a : {0.0, 0.4}) {
        for (double q : {0.5, 1.0}) {
            const std::vector<Coord> x{4, 2, 1};
            CHECK(rel(bessel(3, a, q, x, de), bessel(3, a, q, x)) < 1e-11);
        }
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(green_bessel({2, 0.0, 1.0}, std::vector<Coord>{1, 0}), lgf::DivergenceError);
    CHECK_THROWS_AS(green_bessel({1, 0.0, 0.5}, std::vector<Coord>{0}), lgf::DivergenceError);
    CHECK(green_bessel({1, 0.0, 0.4}, std::vector<Coord>{0}).value > 0.0);
    CHECK_THROWS_AS(green_bessel({3, 0.0, 1.5}, std::vector<Coord>{0, 0, 0}), lgf::DivergenceError);
    CHECK_THROWS_AS(green_bessel({2, -1.0, 1.0}, std::vector<Coord>{0, 0}), lgf::DomainError);
    CHECK_THROWS_AS(green_bessel({2, 1.0, 0.0}, std::vector<Coord>{0, 0}), lgf::DomainError);
    CHECK_THROWS_AS(green_bessel({2, 1.0, 1.0}, std::vector<Coord>{0}), lgf::DomainError);
    const std::vector<Coord> x4{0, 0, 0, 0};
    CHECK_THROWS_AS(green_fourier_oracle({4, 1.0, 1.0}, x4, 32), lgf::UnsupportedError);
    const std::vector<Coord> far{9, 0};
    CHECK_THROWS_AS(green_fourier_oracle({2, 1.0, 1.0}, far, 12), lgf::AccuracyError);
    // a grid that passes the size check but cannot resolve a weak mass
    CHECK_THROWS_AS(green_fourier_oracle({2, 0.01, 1.0}, std::vector<Coord>{4, 0}, 16), lgf::AccuracyError);
    QuadratureConfig bad;
    bad.rel_tol = 1e-3;
    CHECK_THROWS_AS(green_bessel({1, 1.0, 1.0}, std::vector<Coord>{0}, bad), lgf::ConfigError);
    QuadratureConfig tight;
    tight.max_nodes = 64;
    try {
        green_bessel({3, 0.0, 1.0}, std::vector<Coord>{0, 0, 0}, tight);
        CHECK(true);
    } catch (const lgf::AccuracyError& e) {
        CHECK(e.best_estimate() > 0.0);
    }
}

TEST_CASE("log value far below underflow") {
    const auto g = green_bessel({1, 1.0, 1.0}, std::vector<Coord>{800});
    const double m = std::log(2.0 + std::sqrt(3.0));
    CHECK(g.log_value == doctest::Approx(-800.0 * m - std::log(std::sqrt(3.0))).epsilon(1e-12));
    CHECK(g.value == 0.0);
    CHECK(green_d1_closed(1.0, 1, 800).log_value == doctest::Approx(g.log_value).epsilon(1e-13));
    const auto h = green_bessel({3, 2.0, 1.0}, std::vector<Coord>{200, 100, 0});
    CHECK(std::isfinite(h.log_value));
    CHECK(h.log_value < -745.0);
}
