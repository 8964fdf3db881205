// End-to-end acceptance suite: one PASS/FAIL line per criterion.
#include "vorwave/config.hpp"
#include "vorwave/error.hpp"
#include "vorwave/isp.hpp"
#include "vorwave/nonlinear.hpp"
#include "vorwave/run.hpp"
#include "vorwave/spectrum.hpp"
#include "vorwave/stream.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace vorwave;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[violated: " << what << "] ";
        }
    }
};

struct Settings {
    std::string cli;
    std::string configs;
    std::vector<int> only;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double variation(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
}

// Three negative eigenvalues at d = 1 with sin(sqrt(b)) well away from zero.
constexpr double b_three_modes = 74.0;
constexpr double b_two_modes = 29.85;

RunConfig load(const Settings& s, const std::string& name) { return parse_config((fs::path(s.configs) / name).string()); }

// ---------------------------------------------------------------- 1

void stream_oracle(Outcome& o, const Settings&) {
    StreamOptions opt;
    opt.nodes = 512;
    const auto s = solve_stream(linear_model(1.0), 1.0, opt);
    double err = 0.0;
    for (int i = 0; i < opt.nodes; ++i) err = std::max(err, std::abs(s.u[i] - std::sin(s.z[i]) / std::sin(1.0)));
    const double k = s.slope_at_surface;
    const double bern = 3 * s.r - k * k - 2 * s.d;
    o.detail << "sup|u - sin z/sin 1| = " << sci(err) << ", 3r - k^2 - 2d = " << sci(bern) << "; ";
    o.check(err <= 1e-10, "sup error <= 1e-10");
    o.check(std::abs(bern) <= 4 * std::numeric_limits<double>::epsilon() * (k * k + 2 * s.d), "Bernoulli identity to rounding");
}

// ---------------------------------------------------------------- 2

void dirichlet(Outcome& o, const Settings&) {
    double worst = 0.0;
    for (auto [b, d] : std::vector<std::pair<double, double>>{{1, 1}, {11, 1}, {5, 2}}) {
        const auto lam = dirichlet_spectrum(b, d, 10);
        for (int j = 1; j <= 10; ++j) worst = std::max(worst, std::abs(lam[j - 1] - ((pi * j / d) * (pi * j / d) - b)));
    }
    o.detail << "max deviation " << sci(worst) << "; ";
    o.check(worst <= 1e-12, "deviation <= 1e-12");
}

// ---------------------------------------------------------------- 3

void realization(Outcome& o, const Settings&) {
    for (int N = 1; N <= 4; ++N) {
        const auto rep = select_b_report(N, 1.0, default_closeness(1.0));
        const auto spec = sturm_liouville_spectrum(linear_stream(rep.b, 1.0), linear_model(rep.b), N + 1);
        bool nonresonant = true;
        try {
            check_nonresonant(rep.b, 1.0);
        } catch (const Error&) {
            nonresonant = false;
        }
        const auto dir = dirichlet_spectrum(rep.b, 1.0, N + 1);
        bool inter = spec.pairs[0].mu < dir[0];
        for (int j = 1; j < N; ++j) inter = inter && dir[j - 1] < spec.pairs[j].mu && spec.pairs[j].mu < dir[j];
        o.detail << "N=" << N << " b=" << sci(rep.b) << " count=" << spec.negative_count << "; ";
        o.check(spec.negative_count == N, "negative_count == " + std::to_string(N));
        o.check(nonresonant, "non-resonance at N=" + std::to_string(N));
        o.check(inter && rep.interlacing, "Dirichlet interlacing at N=" + std::to_string(N));
    }
}

// ---------------------------------------------------------------- 4

double characteristic(double b, double d, double kap, double mu) {
    const double s = b + mu;
    if (s > 0) {
        const double q = std::sqrt(s);
        return q * std::cos(q * d) - kap * std::sin(q * d);
    }
    if (s < 0) {
        const double q = std::sqrt(-s);
        return (q * std::cosh(q * d) - kap * std::sinh(q * d)) / std::cosh(q * d);
    }
    return 1.0 - kap * d;
}

void characteristic_residual(Outcome& o, const Settings&) {
    std::vector<std::pair<double, double>> cases{{1, 1}, {b_two_modes, 1}, {b_three_modes, 1}, {34.88, 1.5}};
    for (int N = 1; N <= 4; ++N) cases.emplace_back(select_b(N, 1.0, default_closeness(1.0)), 1.0);
    double worst = 0.0;
    int count = 0;
    for (auto [b, d] : cases) {
        const auto spec = sturm_liouville_spectrum(linear_stream(b, d), linear_model(b), 8);
        for (const auto& p : spec.pairs) {
            worst = std::max(worst, std::abs(characteristic(b, d, spec.kappa, p.mu)));
            ++count;
        }
    }
    o.detail << count << " eigenvalues over " << cases.size() << " streams, max residual " << sci(worst) << "; ";
    o.check(worst < 1e-9, "residual < 1e-9");
}

// ---------------------------------------------------------------- 5

void jacobian(Outcome& o, const Settings&) {
    const double h = 1e-5;
    for (auto [N, b] : std::vector<std::pair<int, double>>{{2, b_two_modes}, {3, b_three_modes}}) {
        const auto ctx = make_isp_context(b, 1.0, N);
        const std::vector<std::pair<std::string, std::vector<SmoothBump>>> bases{
            {"bumps", make_bump_basis(N, BumpLayout{0.1, 0.9, 0.0})}, {"adapted", adapted_basis(ctx).omega}};
        for (const auto& [name, basis] : bases) {
            const auto J = jacobian_analytic(ctx, basis).entries;
            const auto f1 = jacobian_fd(ctx, basis, h).entries;
            const auto f2 = jacobian_fd(ctx, basis, h / 2).entries;
            const Eigen::MatrixXd rich = (4 * f2 - f1) / 3;
            const double scale = J.cwiseAbs().maxCoeff();
            // entries that vanish to rounding are compared against the matrix scale
            double rel = 0.0;
            for (int l = 0; l < N; ++l)
                for (int j = 0; j < N; ++j) {
                    const double ref = std::abs(J(l, j)) > 1e-6 * scale ? std::abs(J(l, j)) : scale;
                    rel = std::max(rel, std::abs(f1(l, j) - J(l, j)) / ref);
                }
            const double confirm = (rich - f1).cwiseAbs().maxCoeff() / scale;
            o.detail << "N=" << N << " " << name << ": rel " << sci(rel) << ", richardson shift " << sci(confirm) << "; ";
            const std::string tag = "N=" + std::to_string(N) + " " + name;
            o.check(rel <= 1e-3, tag + " entrywise relative <= 1e-3");
            o.check(confirm <= 1e-3, tag + " Richardson confirmation");
        }
    }
}

// ---------------------------------------------------------------- 6

void construction(Outcome& o, const Settings&) {
    for (auto [N, b] : std::vector<std::pair<int, double>>{{2, b_two_modes}, {3, b_three_modes}}) {
        const auto ctx = make_isp_context(b, 1.0, N);
        const auto ab = adapted_basis(ctx);
        double cosres = 0.0;
        for (double r : ab.cos_residual) cosres = std::max(cosres, std::abs(r));
        const double fres = ab.f_residual.cwiseAbs().maxCoeff();
        const auto J = jacobian_analytic(ctx, ab.omega);
        const double id = (J.entries - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff();
        const auto folded = folded_jacobian(ctx, mode_profile(ctx), ab.omega);
        const double fold = (folded - J.entries).cwiseAbs().maxCoeff() / J.entries.cwiseAbs().maxCoeff();
        o.detail << "N=" << N << ": f " << sci(fres) << ", cos " << sci(cosres) << ", |J-I| " << sci(id) << ", cond "
                 << sci(J.condition) << ", fold " << sci(fold) << "; ";
        const std::string tag = "N=" + std::to_string(N);
        o.check(fres < 1e-6, tag + " f residual");
        o.check(cosres < 1e-6, tag + " cos residual");
        o.check(id < 1e-3, tag + " identity");
        o.check(J.condition < 2.0, tag + " condition");
        o.check(fold < 1e-8, tag + " folding");
    }
    // a layer deep enough for folded preimage pairs
    const auto ctx = make_isp_context(b_two_modes, 2.4, sturm_liouville_spectrum(linear_stream(b_two_modes, 2.4),
                                                                                 linear_model(b_two_modes), 1)
                                                            .negative_count);
    const auto prof = mode_profile(ctx);
    const auto basis = make_bump_basis(ctx.N, BumpLayout{0.1, 0.9, 0.0});
    const auto J = jacobian_analytic(ctx, basis).entries;
    const double fold = (folded_jacobian(ctx, prof, basis) - J).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff();
    o.detail << "d=2.4 (" << prof.pair_count << " pairs): fold " << sci(fold) << "; ";
    o.check(fold < 1e-8, "deep folding");
}

// ---------------------------------------------------------------- 7

void inversion(Outcome& o, const Settings&) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (auto [N, b] : std::vector<std::pair<int, double>>{{2, b_two_modes}, {3, b_three_modes}}) {
        const auto ctx = make_isp_context(b, 1.0, N);
        const auto basis = adapted_basis(ctx).omega;
        InvertOptions opt;
        opt.tol = 1e-9;
        double hit = 0.0, trip = 0.0;
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<double> target = ctx.lambda, delta(N);
            for (int j = 0; j < N; ++j) target[j] += 1e-3 * unit(rng);
            const auto r = invert_T(target, ctx, basis, opt);
            hit = std::max(hit, max_abs_diff(map_T(r.delta, ctx, basis), target));
            for (int j = 0; j < N; ++j) delta[j] = 1e-3 * unit(rng);
            const auto back = invert_T(map_T(delta, ctx, basis), ctx, basis, opt);
            trip = std::max(trip, max_abs_diff(back.delta, delta));
        }
        o.detail << "N=" << N << ": |T - target| " << sci(hit) << ", round trip " << sci(trip) << "; ";
        o.check(hit < 1e-8, "N=" + std::to_string(N) + " target reached");
        o.check(trip <= 1e-6, "N=" + std::to_string(N) + " round trip");
    }
}

// ---------------------------------------------------------------- 8

void linear_order(Outcome& o, const Settings& s) {
    for (const char* name : {"single_mode.yaml", "bimodal.yaml", "trimodal.yaml"}) {
        const auto cfg = load(s, name);
        const auto p = make_wave_problem(wave_options(cfg));
        const auto& bg = p.background;
        const std::vector<double> amps{1e-3, 2e-3, 4e-3, 8e-3};
        std::vector<double> res;
        for (double a : amps) {
            const auto m = make_modal_state(std::vector<double>(cfg.N, a), p.pattern.mu_star, p.pattern.n,
                                            p.pattern.Lambda_star);
            const auto f = assemble_linear(m, bg.spectrum, bg.stream, p.x);
            const auto phys = to_physical(f, bg.stream, 2);
            res.push_back(residual_strip(phys.strip.Phi, f.eta, bg.model, bernoulli_constant(bg.k(), bg.d()), bg.stream, p.x).max());
        }
        const auto fit = fit_loglog("residual", amps, res);
        o.detail << "N=" << cfg.N << " slope " << sci(fit.slope) << "; ";
        o.check(fit.slope >= 1.85 && fit.slope <= 2.15, "N=" + std::to_string(cfg.N) + " slope in [1.85, 2.15]");
    }
}

// ---------------------------------------------------------------- 9 and 10 share the two-mode problem

const WaveProblem& two_mode(const Settings& s) {
    static const WaveProblem p = make_wave_problem(wave_options(load(s, "bimodal.yaml")));
    return p;
}

void theorem(Outcome& o, const Settings& s) {
    const auto& p = two_mode(s);
    const auto opt = solve_options(load(s, "bimodal.yaml"));
    std::vector<double> C, C1, C2;
    for (double a : {1e-3, 5e-4, 2.5e-4}) {
        const std::vector<double> t{a, a};
        const auto adm = admissibility(t, opt.epsilon, opt.delta_bound);
        const auto r = lyapunov_schmidt_solve(t, p, opt);
        const double t2 = 2 * a * a;
        C.push_back(r.eta_linear_deviation / t2);
        C1.push_back(std::abs(r.mu[0] - p.pattern.mu_star[0]) * a / t2);
        C2.push_back(std::abs(r.mu[1] - p.pattern.mu_star[1]) * a / t2);
        o.detail << "t=" << sci(a) << ": ratio " << sci(adm.ratio[0]) << ", " << r.iterations << " it, last step "
                 << sci(r.history.empty() ? 0.0 : r.history.back()) << ", residual " << sci(r.residual.max())
                 << ", C " << sci(C.back()) << "; ";
        const std::string tag = "t=" + sci(a);
        o.check(r.iterations <= 200, tag + " iterations");
        o.check(r.history.empty() || r.history.back() < 1e-10, tag + " tolerance");
        o.check(r.residual.max() < 1e-9, tag + " residual < 1e-9");
    }
    const double q1 = C[0] / C[1] * 4, q2 = C[1] / C[2] * 4;
    o.detail << "halving ratios " << sci(q1) << ", " << sci(q2) << "; C' variation " << sci(variation(C1)) << ", "
             << sci(variation(C2)) << "; ";
    o.check(std::abs(q1 - 4) < 0.4 && std::abs(q2 - 4) < 0.4, "eta deviation ratio near 4 under halving");
    o.check(variation(C1) < 2 && variation(C2) < 2, "eigenvalue shift constant stable");
}

void smallness(Outcome& o, const Settings& s) {
    const auto& p = two_mode(s);
    const auto opt = solve_options(load(s, "bimodal.yaml"));
    const std::vector<std::vector<double>> directions{{1, 1}, {1, 0.5}, {0.5, 1}, {1, 0.25}, {0.25, 1}};
    const auto amps = load(s, "bimodal.yaml").amplitudes;
    double worst = 0.0;
    double bound = 0.0;
    for (const auto& dir : directions) {
        const double n = std::hypot(dir[0], dir[1]);
        std::map<std::string, std::vector<double>> q;
        for (double a : amps) {
            const std::vector<double> t{a * dir[0] / n, a * dir[1] / n};
            const auto r = lyapunov_schmidt_solve(t, p, opt);
            for (int j = 0; j < 2; ++j) {
                q["zeta" + std::to_string(j + 1)].push_back(r.zeta[j].cwiseAbs().maxCoeff() / (a * a));
                q["G" + std::to_string(j + 1)].push_back(std::abs(r.G[j]) / (a * a));
            }
        }
        std::ostringstream line;
        for (const auto& [name, v] : q) {
            const double var = variation(v);
            worst = std::max(worst, var);
            bound = std::max(bound, *std::max_element(v.begin(), v.end()));
            if (var >= 2) line << name << " " << sci(v.front()) << " -> " << sci(v.back()) << " ";
            o.check(var < 2, name + " along (" + sci(dir[0]) + ", " + sci(dir[1]) + ")");
        }
        if (!line.str().empty()) o.detail << "(" << dir[0] << ", " << dir[1] << "): " << line.str() << "; ";
    }
    o.detail << directions.size() << " directions x " << amps.size() << " amplitudes, largest variation "
             << sci(worst) << ", largest ratio " << sci(bound) << "; ";
}

// ---------------------------------------------------------------- 11

Eigen::MatrixXd test_field(const CosineGrid& x, const StreamSolution& s) {
    Eigen::MatrixXd V(x.size(), s.grid.n);
    for (int i = 0; i < x.size(); ++i)
        for (int m = 0; m < s.grid.n; ++m) {
            const double z = s.z[m] / s.d;
            V(i, m) = std::sin(2.0 * z) * (0.7 + std::cos(x.alpha() * x.node(i))) +
                      0.3 * z * z * std::cos(3 * x.alpha() * x.node(i));
        }
    return V;
}

Eigen::MatrixXd complement(Eigen::MatrixXd V, const DiscreteSpectrum& spec, int modes) {
    for (int i = 0; i < V.rows(); ++i)
        for (int j = 0; j < modes; ++j) V.row(i) -= spec.project(j, V.row(i).transpose()) * spec.phi[j].transpose();
    return V;
}

void round_trips(Outcome& o, const Settings& s) {
    const auto p1 = make_wave_problem(wave_options(load(s, "single_mode.yaml")));
    for (const auto* p : {&p1, &two_mode(s)}) {
        const auto& bg = p->background;
        const Eigen::MatrixXd V = complement(test_field(p->x, bg.stream), bg.spectrum, p->N());
        Eigen::MatrixXd f;
        Eigen::VectorXd g;
        apply_linear(V, bg, p->x, f, g);
        const double tilde = (solve_tilde(f, g, bg, p->N(), p->x).Phi - V).cwiseAbs().maxCoeff();

        const auto& x = p->x;
        const double mu = p->pattern.mu_star[0], a = x.alpha();
        Eigen::VectorXd zeta(x.size()), rhs(x.size());
        for (int i = 0; i < x.size(); ++i) {
            const double xi = x.node(i);
            double z = 0.4, r = -mu * 0.4;
            for (int n : {1, 2, 3, 5}) {
                if (n == p->pattern.n[0]) continue;
                const double c = 0.1 / n;
                z += c * std::cos(n * a * xi);
                r += c * (-(n * a) * (n * a) - mu) * std::cos(n * a * xi);
            }
            zeta(i) = z;
            rhs(i) = r;
        }
        const double modal = (modal_correction(rhs, mu, p->pattern.k[0], x) - zeta).cwiseAbs().maxCoeff();
        o.detail << "N=" << p->N() << ": tilde " << sci(tilde) << ", modal " << sci(modal) << "; ";
        o.check(tilde < 1e-8, "tilde round trip N=" + std::to_string(p->N()));
        o.check(modal < 1e-8, "modal round trip N=" + std::to_string(p->N()));
    }
    std::vector<double> norms;
    for (int nodes : {257, 513, 1025}) {
        const auto bg = make_background(p1.model(p1.delta_star), p1.options.d, nodes, 2);
        const Eigen::MatrixXd V = complement(test_field(p1.x, bg.stream), bg.spectrum, 1);
        Eigen::MatrixXd f;
        Eigen::VectorXd g;
        apply_linear(V, bg, p1.x, f, g);
        const auto sol = solve_tilde(f, g, bg, 1, p1.x);
        norms.push_back(sol.Phi.cwiseAbs().maxCoeff() / std::max(f.cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff()));
    }
    const double r1 = norms[1] / norms[0], r2 = norms[2] / norms[1];
    o.detail << "inverse-norm ratios under doubling " << sci(r1) << ", " << sci(r2) << "; ";
    o.check(std::abs(r1 - 1) < 0.01 && std::abs(r2 - 1) < 0.01, "inverse norm stable within 1%");
}

// ---------------------------------------------------------------- 12

std::map<std::string, std::string> data_files(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().filename() == "report.json") continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

void determinism(Outcome& o, const Settings& s) {
    const auto root = fs::temp_directory_path() / "vorwave_acceptance";
    fs::remove_all(root);
    const auto cfg = (fs::path(s.configs) / "bimodal.yaml").string();
    std::vector<std::map<std::string, std::string>> runs;
    for (const char* tag : {"a", "b"}) {
        const auto dir = root / tag;
        const std::string cmd = "\"" + s.cli + "\" solve --config \"" + cfg + "\" --out \"" + dir.string() + "\" > /dev/null";
        const int status = std::system(cmd.c_str());
        o.check(status == 0, std::string("run ") + tag + " exit status");
        if (status != 0) return;
        runs.push_back(data_files(dir));
    }
    size_t same = 0;
    for (const auto& [name, bytes] : runs[0]) same += runs[1].count(name) && runs[1].at(name) == bytes;
    o.detail << same << " of " << runs[0].size() << " data files identical; ";
    o.check(runs[0].size() == runs[1].size() && same == runs[0].size() && same > 0, "byte-identical data files");
}

struct Criterion {
    int id;
    const char* title;
    double budget;  // seconds
    std::function<void(Outcome&, const Settings&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    Settings settings;
    CLI::App app{"vorwave acceptance suite"};
    app.add_option("--cli", settings.cli, "path to the vorwave executable")->required();
    app.add_option("--configs", settings.configs, "directory holding the example configs")->required();
    app.add_option("--only", settings.only, "criterion numbers to run");
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> criteria{
        {1, "stream closed form", 1, stream_oracle},
        {2, "Dirichlet spectrum", 1, dirichlet},
        {3, "realization of N negative eigenvalues", 30, realization},
        {4, "characteristic-equation residual", 60, characteristic_residual},
        {5, "ISP Jacobian vs finite differences", 120, jacobian},
        {6, "adapted basis construction", 120, construction},
        {7, "ISP inversion", 120, inversion},
        {8, "linear-wave residual order", 120, linear_order},
        {9, "multimodal solve at desk scale", 300, theorem},
        {10, "quadratic smallness", 300, smallness},
        {11, "operator round trips", 120, round_trips},
        {12, "determinism", 120, determinism},
    };

    int failed = 0, ran = 0;
    for (const auto& c : criteria) {
        if (!settings.only.empty() && std::find(settings.only.begin(), settings.only.end(), c.id) == settings.only.end())
            continue;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o, settings);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[error: " << e.what() << "] ";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.check(secs < c.budget, "runtime under " + sci(c.budget) + " s");
        ++ran;
        failed += !o.pass;
        std::string detail = o.detail.str();
        while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
        std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title, detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
