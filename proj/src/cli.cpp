#include "lgf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "lgf/anisotropic_norm.hpp"
#include "lgf/asymptotics.hpp"
#include "lgf/errors.hpp"
#include "lgf/green_lattice.hpp"
#include "lgf/mc_oracle.hpp"
#include "lgf/records.hpp"
#include "lgf/sweep.hpp"

namespace lgf::cli {

namespace {

using lattice::Coord;
using io::OutputRecord;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw UsageError(std::string(what) + ": empty list entry in '" + s + "'");
        std::size_t used = 0;
        try {
            if constexpr (std::is_same_v<T, double>)
                out.push_back(std::stod(item, &used));
            else
                out.push_back(static_cast<T>(std::stoll(item, &used)));
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size()) throw UsageError(std::string(what) + ": cannot parse '" + item + "'");
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty list");
    return out;
}

double default_rel_tol() {
    if (const char* env = std::getenv(kRelTolEnv)) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0') throw UsageError(std::string(kRelTolEnv) + " is not a number");
        return v;
    }
    return 1e-12;
}

std::vector<double> to_real(std::span<const Coord> x) { return {x.begin(), x.end()}; }

struct Output {
    bool json = false;
    std::string path;
};

void emit(const Output& o, std::ostream& out, const std::vector<OutputRecord>& recs) {
    std::ofstream file;
    std::ostream* os = &out;
    if (!o.path.empty()) {
        file.open(o.path);
        if (!file) throw UsageError("cannot open output file '" + o.path + "'");
        os = &file;
    }
    if (o.json)
        io::write_json(*os, recs);
    else
        io::write_csv(*os, recs);
}

// ---- eval

struct EvalArgs {
    int d = 1;
    double a = 0.0;
    double q = 1.0;
    std::vector<std::string> x;
    std::string method = "bessel";
    std::optional<double> rel_tol;
    std::uint64_t seed = 0;
    std::uint64_t walks = 100000;
    int grid = 0;
};

OutputRecord eval_one(const EvalArgs& e, const std::vector<Coord>& x, double rel_tol) {
    const lattice::GreenParams p{e.d, e.a, e.q};
    OutputRecord r;
    r.d = e.d;
    r.a = e.a;
    r.q = e.q;
    r.x = to_real(x);
    lattice::GreenValue g;
    if (e.method == "bessel") {
        lattice::QuadratureConfig cfg;
        cfg.rel_tol = rel_tol;
        g = lattice::green_bessel(p, x, cfg);
    } else if (e.method == "fourier") {
        p.validate();
        const int n = e.grid > 0 ? e.grid : lattice::fourier_grid_for(p, x, rel_tol);
        g = lattice::green_fourier_oracle(p, x, n);
    } else if (e.method == "closed-d1") {
        g = lattice::green_d1_closed(e.a, static_cast<int>(e.q), x[0]);
    } else {
        mc::WalkConfig cfg;
        cfg.d = e.d;
        cfg.a = e.a;
        cfg.n_walks = e.walks;
        cfg.seed = e.seed;
        cfg.max_box = 0;
        const auto v = mc::estimate_green(cfg, x);
        g.value = v.mean;
        g.log_value = std::log(v.mean);
        g.est_error = v.std_err;
        g.method = lattice::Method::monte_carlo;
    }
    r.method = std::string(lattice::method_name(g.method));
    r.value = g.value;
    r.log_value = g.log_value;
    r.est_error = g.est_error;
    return r;
}

int cmd_eval(const EvalArgs& e, const Output& o, std::ostream& out) {
    if (e.method == "closed-d1") {
        if (e.d != 1) throw UsageError("--method closed-d1 requires --d 1");
        if (e.q != std::floor(e.q) || e.q < 1) throw UsageError("--method closed-d1 requires a positive integer --q");
    }
    if (e.method == "fourier" && e.d > 3) throw UsageError("--method fourier supports d <= 3");
    if (e.method == "mc" && e.q != 1.0) throw UsageError("--method mc requires --q 1");
    const double rel_tol = e.rel_tol.value_or(default_rel_tol());
    std::vector<OutputRecord> recs;
    for (const auto& xs : e.x) {
        const auto x = parse_list<Coord>(xs, "--x");
        if (static_cast<int>(x.size()) != e.d) throw UsageError("--x '" + xs + "' does not have d coordinates");
        recs.push_back(eval_one(e, x, rel_tol));
    }
    emit(o, out, recs);
    return kOk;
}

// ---- norm

struct NormArgs {
    int d = 1;
    double a = 0.0;
    std::vector<std::string> x;
};

int cmd_norm(const NormArgs& n, const Output& o, std::ostream& out) {
    if (!(n.a > 0.0)) throw DomainError("norm: a must be positive");
    std::vector<OutputRecord> recs;
    for (const auto& xs : n.x) {
        const auto x = parse_list<double>(xs, "--x");
        if (static_cast<int>(x.size()) != n.d) throw UsageError("--x '" + xs + "' does not have d coordinates");
        const double nrm = norm::a_norm(x, n.d, n.a);
        const double l1 = norm::norm_l1(x);
        const double l2 = norm::norm_l2(x);
        const bool zero = l1 == 0.0;
        OutputRecord r;
        r.method = "norm";
        r.d = n.d;
        r.a = n.a;
        r.x = x;
        r.value = nrm;
        r.log_value = std::log(nrm);
        r.extra = {{"m", norm::mass(n.d, n.a)},
                   {"u", zero ? std::nullopt : std::optional<double>(norm::u_scale(x, n.d, n.a))},
                   {"l2", l2},
                   {"l1", l1},
                   {"lower_ok", (l2 - 1e-12 <= nrm) ? 1.0 : 0.0},
                   {"upper_ok", (nrm <= l1 + 1e-12) ? 1.0 : 0.0}};
        recs.push_back(std::move(r));
    }
    emit(o, out, recs);
    return kOk;
}

// ---- ball

struct BallArgs {
    int d = 2;
    double a = 1.0;
    int points = 360;
};

int cmd_ball(const BallArgs& b, const Output& o, std::ostream& out) {
    if (b.d != 2 && b.d != 3) throw UsageError("ball: --d must be 2 or 3");
    if (b.points < 8) throw UsageError("ball: --points must be >= 8");
    if (o.json) throw UsageError("ball: only CSV output is available");
    const auto pts = norm::unit_ball_boundary(b.d, b.a, b.points);
    std::ofstream file;
    std::ostream* os = &out;
    if (!o.path.empty()) {
        file.open(o.path);
        if (!file) throw UsageError("cannot open output file '" + o.path + "'");
        os = &file;
    }
    *os << "# schema=" << io::kSchemaVersion << '\n';
    *os << (b.d == 2 ? "theta,x1,x2\n" : "theta,phi,x1,x2,x3\n");
    for (const auto& p : pts) {
        *os << io::format_double(p.theta);
        if (b.d == 3) *os << ',' << io::format_double(p.phi);
        for (double v : p.y) *os << ',' << io::format_double(v);
        *os << '\n';
    }
    return kOk;
}

// ---- asy

struct AsyArgs {
    int d = 1;
    double q = 1.0;
    std::string x;
    std::optional<double> a;
    double a_power = 0.0;
    std::optional<double> s;
    std::string n_list;
    std::optional<double> rel_tol;
};

int cmd_asy(const AsyArgs& A, const Output& o, std::ostream& out) {
    if (A.a.has_value() == A.s.has_value()) throw UsageError("asy: give exactly one of --a and --s");
    if (A.s && A.a_power != 0.0) throw UsageError("asy: --a-power only applies with --a");
    const auto x = parse_list<Coord>(A.x, "--x");
    if (static_cast<int>(x.size()) != A.d) throw UsageError("asy: --x does not have d coordinates");
    const auto ns = parse_list<long>(A.n_list, "--n-list");
    for (long n : ns)
        if (n < 1) throw UsageError("asy: --n-list entries must be positive");
    lattice::QuadratureConfig cfg;
    cfg.rel_tol = A.rel_tol.value_or(default_rel_tol());

    const auto rows_for = [&](long n) {
        const double an = A.a ? *A.a * std::pow(static_cast<double>(n), A.a_power) : *A.s / static_cast<double>(n);
        std::vector<Coord> nx(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) nx[j] = n * x[j];
        const lattice::GreenParams p{A.d, an, A.q};
        const auto exact = lattice::green_bessel(p, nx, cfg);
        std::vector<asy::RegimeEstimate> ests;
        if (A.a) {
            ests.push_back(asy::oz_estimate(p, x, n));
            ests.push_back(asy::oz_isotropic_estimate(p, x, n));
        } else {
            ests.push_back(asy::critical_estimate(A.d, A.q, x, n, *A.s));
        }
        std::vector<OutputRecord> rows;
        for (const auto& e : ests) {
            OutputRecord r;
            r.method = "asy";
            r.d = A.d;
            r.a = an;
            r.q = A.q;
            r.s = A.s;
            r.n = n;
            r.x = to_real(x);
            r.value = e.value;
            r.log_value = e.log_value;
            r.regime = std::string(asy::regime_name(e.regime));
            r.extra = {{"exact", exact.value},
                       {"exact_log", exact.log_value},
                       {"exact_est_error", exact.est_error},
                       {"ratio", std::exp(exact.log_value - e.log_value)}};
            rows.push_back(std::move(r));
        }
        return rows;
    };
    const auto blocks = sweep::map_omp(ns, rows_for);
    std::vector<OutputRecord> recs;
    for (const auto& b : blocks) recs.insert(recs.end(), b.begin(), b.end());
    emit(o, out, recs);
    return kOk;
}

// ---- gbar

struct GbarArgs {
    int d = 1;
    std::string x;
    std::string a_list;
    std::string y_range = "0.2,3";
    int y_steps = 281;
    long n = 1;
    double q = 1.0;
};

int cmd_gbar(const GbarArgs& G, const Output& o, std::ostream& out) {
    const auto x = parse_list<double>(G.x, "--x");
    if (static_cast<int>(x.size()) != G.d) throw UsageError("gbar: --x does not have d coordinates");
    const auto as = parse_list<double>(G.a_list, "--a-list");
    const auto yr = parse_list<double>(G.y_range, "--y-range");
    if (yr.size() != 2 || !(yr[0] > 0.0) || !(yr[1] > yr[0])) throw UsageError("gbar: --y-range must be lo,hi with 0 < lo < hi");
    if (G.y_steps < 2) throw UsageError("gbar: --y-steps must be >= 2");
    if (G.n < 1) throw UsageError("gbar: --n must be positive");
    std::vector<double> ys(G.y_steps);
    for (int i = 0; i < G.y_steps; ++i) ys[i] = yr[0] + (yr[1] - yr[0]) * i / (G.y_steps - 1);

    std::vector<OutputRecord> recs;
    for (double a : as) {
        const auto curve = asy::gbar_curve(G.d, a, x, ys, {G.n, G.q});
        const auto ctx = norm::NormContext::make(x, a);
        std::size_t imin = 0;
        bool convex = true;
        for (std::size_t i = 0; i < curve.size(); ++i) {
            if (curve[i].gbar < curve[imin].gbar) imin = i;
            if (!(curve[i].gbar_d2 > 0.0)) convex = false;
        }
        for (const auto& c : curve) {
            OutputRecord r;
            r.method = "gbar";
            r.d = G.d;
            r.a = a;
            r.q = G.q;
            r.n = G.n;
            r.x = x;
            r.value = c.gbar;
            r.log_value = std::log(c.gbar);
            r.extra = {{"y", c.y},
                       {"gbar_d2", c.gbar_d2},
                       {"gbar_d3", c.gbar_d3},
                       {"hbar", c.hbar},
                       {"min_y", curve[imin].y},
                       {"min_value", curve[imin].gbar},
                       {"mass_norm", ctx.mass * ctx.norm},
                       {"convex", convex ? 1.0 : 0.0}};
            recs.push_back(std::move(r));
        }
    }
    emit(o, out, recs);
    return kOk;
}

// ---- bound

struct BoundArgs {
    int d = 3;
    int q = 1;
    double kappa = 0.5;
    double kappa1 = 1.0;
    std::string a_grid = "0,0.25,1,4";
    int box = 6;
    std::optional<double> rel_tol;
};

// Nonzero x with 0 <= x_1 <= ... <= x_d <= box; C and the bound depend only on sorted |x_j|.
void canonical_points(int d, int box, std::vector<Coord>& cur, std::vector<std::vector<Coord>>& out) {
    if (static_cast<int>(cur.size()) == d) {
        if (cur.back() != 0) out.push_back(cur);
        return;
    }
    const Coord lo = cur.empty() ? 0 : cur.back();
    for (Coord v = lo; v <= box; ++v) {
        cur.push_back(v);
        canonical_points(d, box, cur, out);
        cur.pop_back();
    }
}

int cmd_bound(const BoundArgs& B, const Output& o, std::ostream& out, std::ostream& err) {
    if (!(B.kappa > 0.0 && B.kappa < 1.0)) throw UsageError("bound: --kappa must lie in (0, 1)");
    if (B.d <= 2) throw UsageError("bound: --d must be > 2");
    if (B.q < 1 || B.d <= 2 * B.q) throw UsageError("bound: need integer q >= 1 with d > 2q");
    if (!(B.kappa1 > 0.0)) throw UsageError("bound: --kappa1 must be positive");
    if (B.box < 1) throw UsageError("bound: --box must be >= 1");
    const auto as = parse_list<double>(B.a_grid, "--a-grid");
    lattice::QuadratureConfig cfg;
    cfg.rel_tol = B.rel_tol.value_or(default_rel_tol());

    std::vector<std::vector<Coord>> pts;
    std::vector<Coord> cur;
    canonical_points(B.d, B.box, cur, pts);
    std::vector<std::pair<double, std::vector<Coord>>> jobs;
    for (double a : as)
        for (const auto& x : pts) jobs.emplace_back(a, x);

    const auto eval = [&](const std::pair<double, std::vector<Coord>>& job) {
        const auto& [a, x] = job;
        const lattice::GreenParams p{B.d, a, static_cast<double>(B.q)};
        const auto g = lattice::green_bessel(p, x, cfg);
        const double rhs = asy::uniform_bound_rhs(B.d, B.q, a, x, B.kappa1, B.kappa);
        OutputRecord r;
        r.method = "bound";
        r.d = B.d;
        r.a = a;
        r.q = B.q;
        r.x = to_real(x);
        r.value = g.value;
        r.log_value = g.log_value;
        r.est_error = g.est_error;
        r.extra = {{"rhs", rhs}, {"ratio", g.value / rhs}};
        return r;
    };
    auto recs = sweep::map_omp(jobs, eval);

    std::size_t worst = 0;
    for (std::size_t i = 0; i < recs.size(); ++i)
        if (*recs[i].extra[1].second > *recs[worst].extra[1].second) worst = i;
    OutputRecord summary = recs[worst];
    summary.method = "bound-max";
    recs.push_back(summary);
    emit(o, out, recs);

    const double ratio = *summary.extra[1].second;
    if (ratio > 1.0) {
        err << "bound violated: max C/rhs = " << io::format_double(ratio) << " at a = " << io::format_double(*summary.a)
            << ", x = (";
        for (std::size_t j = 0; j < summary.x.size(); ++j) err << (j ? "," : "") << summary.x[j];
        err << ")\n";
        return kBoundViolated;
    }
    return kOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << '\n';
        return kDomainError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const AccuracyError& e) {
        err << "accuracy error: " << e.what() << " (best estimate " << io::format_double(e.best_estimate())
            << ", estimated error " << io::format_double(e.est_error()) << ")\n";
        return kAccuracyError;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const ConfigError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UnsupportedError& e) {
        err << "unsupported: " << e.what() << '\n';
        return kUsageError;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lattice Green function evaluation and asymptotics", "lgf"};
    app.require_subcommand(1);
    Output o;
    const auto add_output = [&](CLI::App* sub) {
        sub->add_flag("--json", o.json, "JSON records instead of CSV");
        sub->add_option("--out", o.path, "Write to this file instead of stdout");
    };

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Evaluate C_a^{(q)}(x)");
    eval->add_option("--d", ev.d)->required();
    eval->add_option("--a", ev.a)->required();
    eval->add_option("--q", ev.q)->required();
    eval->add_option("--x", ev.x, "Comma-separated integers; repeat for several points")->required();
    eval->add_option("--method", ev.method)->check(CLI::IsMember({"bessel", "fourier", "closed-d1", "mc"}));
    eval->add_option("--rel-tol", ev.rel_tol);
    eval->add_option("--seed", ev.seed);
    eval->add_option("--walks", ev.walks);
    eval->add_option("--grid", ev.grid, "Fourier grid size (default: automatic)");
    add_output(eval);

    NormArgs nm;
    auto* normc = app.add_subcommand("norm", "m_a, u_a(x) and |x|_a");
    normc->add_option("--d", nm.d)->required();
    normc->add_option("--a", nm.a)->required();
    normc->add_option("--x", nm.x, "Comma-separated reals; repeat for several points")->required();
    add_output(normc);

    BallArgs bl;
    auto* ball = app.add_subcommand("ball", "Boundary of the unit ball of |.|_a");
    ball->add_option("--d", bl.d)->required();
    ball->add_option("--a", bl.a)->required();
    ball->add_option("--points", bl.points);
    add_output(ball);

    AsyArgs as;
    auto* asyc = app.add_subcommand("asy", "Exact values against the regime estimates over an n sweep");
    asyc->add_option("--d", as.d)->required();
    asyc->add_option("--q", as.q)->required();
    asyc->add_option("--x", as.x)->required();
    asyc->add_option("--a", as.a);
    asyc->add_option("--a-power", as.a_power, "Use a_n = a n^p");
    asyc->add_option("--s", as.s);
    asyc->add_option("--n-list", as.n_list)->required();
    asyc->add_option("--rel-tol", as.rel_tol);
    add_output(asyc);

    GbarArgs gb;
    auto* gbar = app.add_subcommand("gbar", "gbar_{a,x} curves");
    gbar->add_option("--d", gb.d)->required();
    gbar->add_option("--x", gb.x)->required();
    gbar->add_option("--a-list", gb.a_list)->required();
    gbar->add_option("--y-range", gb.y_range);
    gbar->add_option("--y-steps", gb.y_steps);
    gbar->add_option("--n", gb.n);
    gbar->add_option("--q", gb.q);
    add_output(gbar);

    BoundArgs bd;
    auto* bound = app.add_subcommand("bound", "Sweep C / (kappa1 |x|_a^{-(d-2q)} e^{-kappa m_a |x|_a})");
    bound->add_option("--d", bd.d)->required();
    bound->add_option("--q", bd.q);
    bound->add_option("--kappa", bd.kappa);
    bound->add_option("--kappa1", bd.kappa1)->required();
    bound->add_option("--a-grid", bd.a_grid);
    bound->add_option("--box", bd.box);
    bound->add_option("--rel-tol", bd.rel_tol);
    add_output(bound);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    return guarded(
        [&]() {
            if (eval->parsed()) return cmd_eval(ev, o, out);
            if (normc->parsed()) return cmd_norm(nm, o, out);
            if (ball->parsed()) return cmd_ball(bl, o, out);
            if (asyc->parsed()) return cmd_asy(as, o, out);
            if (gbar->parsed()) return cmd_gbar(gb, o, out);
            return cmd_bound(bd, o, out, err);
        },
        err);
}

}  // namespace lgf::cli
