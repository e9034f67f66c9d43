#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "lgf/anisotropic_norm.hpp"
#include "lgf/asymptotics.hpp"
#include "lgf/cli.hpp"
#include "lgf/green_lattice.hpp"
#include "lgf/records.hpp"

using namespace lgf;
using lattice::Coord;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    Run r;
    r.code = cli::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<io::OutputRecord> records(const std::string& text) {
    std::istringstream is(text);
    return io::read_csv(is);
}

std::optional<double> extra(const io::OutputRecord& r, const std::string& key) {
    for (const auto& [k, v] : r.extra)
        if (k == key) return v;
    FAIL("missing column " << key);
    return std::nullopt;
}

}  // namespace

TEST_CASE("eval") {
    auto r = run({"eval", "--d", "1", "--a", "1", "--q", "1", "--x", "0", "--method", "closed-d1"});
    REQUIRE(r.code == 0);
    auto recs = records(r.out);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].value == doctest::Approx(0.5773503).epsilon(1e-7));
    CHECK(recs[0].method == "closed-d1");

    r = run({"eval", "--d", "3", "--a", "0", "--q", "1", "--x", "0,0,0", "--method", "bessel"});
    REQUIRE(r.code == 0);
    recs = records(r.out);
    CHECK(recs[0].value == doctest::Approx(1.5163861).epsilon(1e-7));

    // one record per point, in input order
    r = run({"eval", "--d", "2", "--a", "0.5", "--q", "1", "--x", "1,1", "--x", "0,2", "--x", "3,0"});
    REQUIRE(r.code == 0);
    recs = records(r.out);
    REQUIRE(recs.size() == 3);
    CHECK(recs[1].x == std::vector<double>{0.0, 2.0});
}

TEST_CASE("thin adapter: values are the library values bit for bit") {
    const std::vector<Coord> x{2, 1, 0};
    auto r = run({"eval", "--d", "3", "--a", "0.3", "--q", "1.5", "--x", "2,1,0"});
    REQUIRE(r.code == 0);
    auto rec = records(r.out).at(0);
    const auto lib = lattice::green_bessel({3, 0.3, 1.5}, x);
    CHECK(rec.value == lib.value);
    CHECK(rec.log_value == lib.log_value);
    CHECK(rec.est_error == lib.est_error);

    r = run({"eval", "--d", "1", "--a", "0.5", "--q", "2", "--x", "3", "--method", "fourier", "--grid", "96"});
    REQUIRE(r.code == 0);
    const std::vector<Coord> x3{3};
    CHECK(records(r.out).at(0).value == lattice::green_fourier_oracle({1, 0.5, 2.0}, x3, 96).value);

    r = run({"norm", "--d", "2", "--a", "0.7", "--x", "3,-1.5"});
    REQUIRE(r.code == 0);
    rec = records(r.out).at(0);
    const std::vector<double> xr{3.0, -1.5};
    CHECK(rec.value == norm::a_norm(xr, 2, 0.7));
    CHECK(extra(rec, "m") == norm::mass(2, 0.7));
    CHECK(extra(rec, "u") == norm::u_scale(xr, 2, 0.7));

    r = run({"asy", "--d", "3", "--q", "1", "--x", "1,0,0", "--a", "0.5", "--n-list", "4,8"});
    REQUIRE(r.code == 0);
    const auto asy_recs = records(r.out);
    bool found = false;
    for (const auto& a : asy_recs) {
        if (a.regime == std::optional<std::string>("I") && a.n == 8) {
            const std::vector<Coord> e1{1, 0, 0};
            CHECK(a.value == asy::oz_estimate({3, 0.5, 1.0}, e1, 8).value);
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("exit codes") {
    auto r = run({"eval", "--d", "2", "--a", "0", "--q", "1", "--x", "1,0"});
    CHECK(r.code == cli::kDomainError);
    CHECK(r.err.find("d > 2q") != std::string::npos);
    CHECK(run({"eval", "--d", "2", "--a", "-1", "--q", "1", "--x", "1,0"}).code == cli::kDomainError);
    CHECK(run({"norm", "--d", "2", "--a", "0", "--x", "1,0"}).code == cli::kDomainError);
    // too coarse a grid for a weak mass
    CHECK(run({"eval", "--d", "2", "--a", "0.01", "--q", "1", "--x", "4,0", "--method", "fourier", "--grid", "16"}).code ==
          cli::kAccuracyError);
    CHECK(run({"eval", "--d", "2", "--a", "1", "--q", "1", "--x", "0,0", "--method", "closed-d1"}).code ==
          cli::kUsageError);
    CHECK(run({"eval", "--d", "4", "--a", "1", "--q", "1", "--x", "0,0,0,0", "--method", "fourier"}).code ==
          cli::kUsageError);
    CHECK(run({"eval", "--d", "2", "--a", "1", "--q", "1", "--x", "1"}).code == cli::kUsageError);
    CHECK(run({"eval", "--d", "2", "--a", "1", "--q", "1", "--x", "1,z"}).code == cli::kUsageError);
    CHECK(run({"eval", "--d", "2", "--a", "1", "--q", "1", "--x", "1,0", "--method", "nope"}).code == cli::kUsageError);
    CHECK(run({"eval", "--d", "2", "--a", "1", "--q", "2", "--x", "1,0", "--method", "mc"}).code == cli::kUsageError);
    CHECK(run({"frobnicate"}).code == cli::kUsageError);
    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"ball", "--d", "4", "--a", "1"}).code == cli::kUsageError);
    CHECK(run({"asy", "--d", "3", "--q", "1", "--x", "1,0,0", "--a", "1", "--s", "1", "--n-list", "4"}).code ==
          cli::kUsageError);
    CHECK(run({"gbar", "--d", "1", "--x", "1", "--a-list", "1", "--y-steps", "0"}).code == cli::kUsageError);
    CHECK(run({"bound", "--d", "3", "--kappa1", "1", "--kappa", "1.5"}).code == cli::kUsageError);
    CHECK(run({"bound", "--d", "2", "--kappa1", "1"}).code == cli::kUsageError);
}

TEST_CASE("norm examples") {
    auto recs = records(run({"norm", "--d", "3", "--a", "0.5", "--x", "1,0,0"}).out);
    CHECK(std::abs(recs.at(0).value - 1.0) < 1e-12);
    CHECK(extra(recs[0], "lower_ok") == 1.0);
    CHECK(extra(recs[0], "upper_ok") == 1.0);
    recs = records(run({"norm", "--d", "2", "--a", "0.01", "--x", "3,4"}).out);
    CHECK(std::abs(recs.at(0).value - 5.0) < 1e-3);
    recs = records(run({"norm", "--d", "1", "--a", "1", "--x", "0"}).out);
    CHECK(recs.at(0).value == 0.0);
    CHECK_FALSE(extra(recs[0], "u").has_value());
}

TEST_CASE("ball") {
    auto r = run({"ball", "--d", "2", "--a", "20", "--points", "360"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    REQUIRE(rows.size() == 360);
    // the 45 degree point sits between the l1 diamond and the circle
    CHECK(rows[45][1] > 0.5);
    CHECK(rows[45][1] < std::sqrt(0.5));
    CHECK(rows[45][1] == doctest::Approx(rows[45][2]).epsilon(1e-12));
    CHECK(rows[0][1] == 1.0);
    CHECK(rows[0][2] == 0.0);
    for (const auto& row : rows) {
        const double l2 = std::hypot(row[1], row[2]);
        CHECK(l2 <= 1.0 + 1e-12);
        const std::vector<double> p{row[1], row[2]};
        CHECK(std::abs(norm::a_norm(p, 2, 20.0) - 1.0) < 1e-9);
        CHECK(std::abs(row[1]) + std::abs(row[2]) >= 1.0 - 1e-12);
    }
    r = run({"ball", "--d", "2", "--a", "0.05", "--points", "90"});
    std::istringstream is2(r.out);
    int n = 0;
    while (std::getline(is2, line)) {
        if (line.empty() || !std::isdigit(static_cast<unsigned char>(line[0]))) continue;
        std::istringstream ls(line);
        std::string th, x1, x2;
        std::getline(ls, th, ',');
        std::getline(ls, x1, ',');
        std::getline(ls, x2, ',');
        CHECK(std::abs(std::hypot(std::stod(x1), std::stod(x2)) - 1.0) < 1e-2);
        ++n;
    }
    CHECK(n == 90);
    CHECK(run({"ball", "--d", "3", "--a", "1", "--points", "12"}).code == 0);
}

TEST_CASE("asy") {
    auto r = run({"asy", "--d", "1", "--q", "1", "--x", "1", "--a", "0.5", "--n-list", "1,2,4,8,16,32,64"});
    REQUIRE(r.code == 0);
    for (const auto& rec : records(r.out))
        if (rec.regime == std::optional<std::string>("I")) CHECK(std::abs(*extra(rec, "ratio") - 1.0) < 1e-12);

    r = run({"asy", "--d", "3", "--q", "1", "--x", "1,0,0", "--s", "0", "--n-list", "8,16,32,64"});
    REQUIRE(r.code == 0);
    double prev = 1e300;
    for (const auto& rec : records(r.out)) {
        CHECK(rec.regime == std::optional<std::string>("IV"));
        const double dev = std::abs(*extra(rec, "ratio") - 1.0);
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 0.01);

    r = run({"asy", "--d", "2", "--q", "1", "--x", "1,0", "--a", "1", "--a-power", "-0.5", "--n-list", "16,64,256"});
    REQUIRE(r.code == 0);
    int iso = 0;
    for (const auto& rec : records(r.out))
        if (rec.regime == std::optional<std::string>("II")) {
            ++iso;
            CHECK(std::abs(*extra(rec, "ratio") - 1.0) < 0.2);
        }
    CHECK(iso == 3);
}

TEST_CASE("gbar") {
    auto r = run({"gbar", "--d", "1", "--x", "1", "--a-list", "0.25,0.5,1", "--y-range", "0.1,3", "--y-steps", "291"});
    REQUIRE(r.code == 0);
    const auto recs = records(r.out);
    REQUIRE(recs.size() == 3 * 291);
    for (const auto& rec : recs) {
        CHECK(extra(rec, "convex") == 1.0);
        CHECK(std::abs(*extra(rec, "min_y") - 1.0) < 1e-9);
        CHECK(*extra(rec, "min_value") == doctest::Approx(*extra(rec, "mass_norm")).epsilon(1e-10));
    }
    CHECK(*extra(recs.back(), "min_value") == doctest::Approx(1.3169579).epsilon(1e-7));
    // curves ordered by a at every y
    for (std::size_t i = 0; i < 291; ++i) {
        CHECK(recs[i].value < recs[291 + i].value);
        CHECK(recs[291 + i].value < recs[582 + i].value);
    }
}

TEST_CASE("bound") {
    auto r = run({"bound", "--d", "3", "--q", "1", "--kappa", "0.5", "--kappa1", "0.55", "--a-grid", "0,0.25,1",
                  "--box", "6"});
    CHECK(r.code == cli::kOk);
    auto recs = records(r.out);
    REQUIRE_FALSE(recs.empty());
    CHECK(recs.back().method == "bound-max");
    CHECK(*extra(recs.back(), "ratio") <= 1.0);
    CHECK(*extra(recs.back(), "ratio") > 0.9);

    r = run({"bound", "--d", "3", "--q", "1", "--kappa", "0.5", "--kappa1", "0.4", "--a-grid", "0,0.25,1", "--box", "6"});
    CHECK(r.code == cli::kBoundViolated);
    CHECK_FALSE(r.err.empty());
    recs = records(r.out);
    CHECK(*extra(recs.back(), "ratio") > 1.0);

    r = run({"bound", "--d", "5", "--q", "2", "--kappa", "0.5", "--kappa1", "0.8", "--a-grid", "0,0.25,1,4", "--box",
             "3"});
    CHECK(r.code == cli::kOk);
}

TEST_CASE("record round trip") {
    io::OutputRecord a;
    a.method = "bessel";
    a.d = 2;
    a.a = 0.1;
    a.q = 1.5;
    a.n = 17;
    a.x = {1.0, -3.0};
    a.value = 0.1 + 0.2;
    a.log_value = std::log(a.value);
    a.est_error = 5e-324;
    a.regime = "II";
    a.extra = {{"ratio", 1.0 / 3.0}, {"u", std::nullopt}, {"big", std::numeric_limits<double>::infinity()}};
    io::OutputRecord b = a;
    b.a.reset();
    b.regime.reset();
    b.value = -0.0;
    b.extra[1].second = 2.5;
    const std::vector<io::OutputRecord> recs{a, b};

    std::ostringstream csv;
    io::write_csv(csv, recs);
    CHECK(csv.str().rfind("# schema=1", 0) == 0);
    std::istringstream ci(csv.str());
    CHECK(io::read_csv(ci) == recs);

    std::ostringstream js;
    io::write_json(js, recs);
    std::istringstream ji(js.str());
    CHECK(io::read_json(ji) == recs);

    for (double v : {0.1, 1e-300, 1.7976931348623157e308, -2.5e-17})
        CHECK(io::parse_double(io::format_double(v)) == v);
    CHECK(std::isnan(io::parse_double(io::format_double(std::nan("")))));
}

TEST_CASE("json output and --out") {
    const auto path = std::filesystem::temp_directory_path() / "lgf_cli_test.json";
    std::filesystem::remove(path);
    auto r = run({"eval", "--d", "1", "--a", "1", "--q", "2", "--x", "0", "--json", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    const auto recs = io::read_json(in);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].value == doctest::Approx(0.3849002).epsilon(1e-7));
    std::filesystem::remove(path);
    CHECK(run({"eval", "--d", "1", "--a", "1", "--q", "1", "--x", "0", "--out", "/nonexistent/dir/f.csv"}).code ==
          cli::kUsageError);
}

TEST_CASE("rel-tol from the environment") {
    const std::vector<std::string> args{"eval", "--d", "3", "--a", "0.2", "--q", "1", "--x", "1,0,0"};
    ::setenv(cli::kRelTolEnv, "1e-8", 1);
    const auto loose = run(args);
    ::setenv(cli::kRelTolEnv, "1e-3", 1);
    const auto bad = run(args);
    ::setenv(cli::kRelTolEnv, "abc", 1);
    const auto junk = run(args);
    ::unsetenv(cli::kRelTolEnv);
    const auto tight = run(args);
    REQUIRE(loose.code == 0);
    REQUIRE(tight.code == 0);
    CHECK(bad.code == cli::kUsageError);
    CHECK(junk.code == cli::kUsageError);
    const double lv = records(loose.out).at(0).value;
    const double tv = records(tight.out).at(0).value;
    CHECK(std::abs(lv - tv) <= 1e-8 * tv);
    // an explicit flag wins over the environment
    ::setenv(cli::kRelTolEnv, "1e-3", 1);
    auto with_flag = args;
    with_flag.insert(with_flag.end(), {"--rel-tol", "1e-10"});
    CHECK(run(with_flag).code == 0);
    ::unsetenv(cli::kRelTolEnv);
}
