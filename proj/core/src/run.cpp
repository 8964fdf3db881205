#include "vorwave/run.hpp"

#include "vorwave/error.hpp"
#include "vorwave/isp.hpp"
#include "vorwave/nonlinear.hpp"
#include "vorwave/spectrum.hpp"
#include "vorwave/stream.hpp"

#include <json.hpp>

#include <boost/crc.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vorwave {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json matrix(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

json residual_json(const ResidualReport& r) {
    return {{"field", r.sup_field}, {"bernoulli", r.sup_bernoulli}, {"dirichlet", r.sup_dirichlet},
            {"max", r.max()}, {"x_nodes", r.x_nodes}, {"z_nodes", r.z_nodes}};
}

std::string checksum(const std::string& bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", crc.checksum());
    return buf;
}

OutputFile write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "export_results", "cannot open " + path.string() + " for writing");
    out << bytes;
    out.close();
    if (!out) fail(ErrorKind::Io, "export_results", "write failed for " + path.string());
    return {path.string(), bytes.size(), checksum(bytes)};
}

double resolve_b(const RunConfig& c) {
    if (c.b) return *c.b;
    return select_b(c.N, c.d, c.closeness > 0.0 ? c.closeness : default_closeness(c.d));
}

AdaptedBasisOptions basis_options(const RunConfig& c) {
    AdaptedBasisOptions o;
    o.count = c.basis_count;
    o.lo = c.basis_lo;
    o.hi = c.basis_hi;
    o.overlap = c.basis_overlap;
    return o;
}

std::vector<SmoothBump> chosen_basis(const IspContext& ctx, const RunConfig& c) {
    if (c.basis == "adapted") return adapted_basis(ctx, basis_options(c)).omega;
    return make_bump_basis(c.N, BumpLayout{c.basis_lo, c.basis_hi, c.basis_overlap});
}

}  // namespace

WaveProblemOptions wave_options(const RunConfig& c) {
    WaveProblemOptions o;
    o.b = resolve_b(c);
    o.d = c.d;
    o.N = c.N;
    o.z_nodes = c.z_nodes;
    o.stream_tol = c.stream_tol;
    o.q_max = c.q_max;
    o.tune_radius = c.tune_radius;
    o.invert_radius = c.invert_radius;
    o.points_per_wavelength = c.points_per_wavelength;
    o.min_points = c.min_points;
    o.x_intervals = c.x_intervals;
    o.basis = basis_options(c);
    o.mu_star = c.mu_star;
    o.harmonics = c.harmonics;
    o.Lambda_star = c.Lambda_star;
    return o;
}

SolveOptions solve_options(const RunConfig& c) {
    SolveOptions s;
    s.tol = c.solver_tol;
    s.max_iter = c.max_iter;
    s.epsilon = c.epsilon;
    s.delta_bound = c.delta_bound;
    return s;
}

namespace {

json problem_json(const WaveProblem& p) {
    return {{"b", p.options.b},
            {"d", p.options.d},
            {"N", p.N()},
            {"lambda", p.isp.lambda},
            {"mu_star", p.pattern.mu_star},
            {"harmonics", p.pattern.n},
            {"k", p.pattern.k},
            {"Lambda_star", p.pattern.Lambda_star},
            {"pattern_deviation", p.pattern.max_deviation},
            {"delta_star", p.delta_star},
            {"realization_error", p.realization_error},
            {"x_nodes", p.x.size()},
            {"z_nodes", p.background.stream.grid.n}};
}

// eta on the full period and the flattened field as x,z,value triples.
void field_tables(const WaveField& f, const std::string& field_name, Artifacts& a) {
    const auto xs = f.x_full();
    const auto idx = f.full_index();
    std::vector<double> eta;
    for (int i : idx) eta.push_back(f.eta(i));
    a.tables.push_back({"eta", {"x", "eta"}, {xs, eta}});
    a.plots.push_back({"eta", xs, eta});
    std::vector<double> cx, cz, cv;
    for (size_t q = 0; q < xs.size(); ++q)
        for (int m = 0; m < f.z.n; ++m) {
            cx.push_back(xs[q]);
            cz.push_back(f.z.node(m));
            cv.push_back(f.Phi(idx[q], m));
        }
    a.tables.push_back({field_name, {"x", "z", "Phi"}, {cx, cz, cv}});
}

std::vector<double> require_t(const RunConfig& c) {
    if (c.t.empty()) fail(ErrorKind::Validation, "run_command", "field solver.t: required for this command");
    return c.t;
}

Artifacts cmd_select_b(const RunConfig& c, std::vector<std::string>& warnings) {
    if (c.b) warnings.push_back("problem.b is ignored by select-b");
    const double closeness = c.closeness > 0.0 ? c.closeness : default_closeness(c.d);
    const auto r = select_b_report(c.N, c.d, closeness);
    json visited = json::array();
    for (const auto& [b, n] : r.visited) visited.push_back({{"b", b}, {"negative_count", n}});
    json j{{"N", c.N}, {"d", c.d}, {"closeness", closeness}, {"b", r.b}, {"negative_count", r.negative_count},
           {"mu", r.mu}, {"dirichlet", r.dirichlet}, {"interlacing", r.interlacing}, {"visited", visited}};
    Artifacts a;
    a.documents.push_back({"select_b", j.dump(2)});
    return a;
}

Artifacts cmd_spectrum(const RunConfig& c) {
    const double b = resolve_b(c);
    const auto model = linear_model(b);
    StreamOptions so;
    so.tol = c.stream_tol;
    so.nodes = c.z_nodes;
    const auto stream = solve_stream(model, c.d, so);
    const int modes = c.modes > 0 ? c.modes : c.N + 1;
    const auto spec = sturm_liouville_spectrum(stream, model, modes);
    const auto dir = dirichlet_spectrum(b, c.d, modes);
    Artifacts a;
    std::vector<double> jj, mu, pd;
    for (size_t j = 0; j < spec.pairs.size(); ++j) {
        jj.push_back(static_cast<double>(j + 1));
        mu.push_back(spec.pairs[j].mu);
        pd.push_back(spec.pairs[j].phi_at_d);
    }
    a.tables.push_back({"spectrum", {"j", "mu", "phi_at_d"}, {jj, mu, pd}});
    Table ef{"eigenfunctions", {"z"}, {stream.z}};
    for (size_t j = 0; j < spec.pairs.size(); ++j) {
        ef.header.push_back("phi_" + std::to_string(j + 1));
        ef.columns.push_back(spec.pairs[j].phi);
        a.plots.push_back({"phi_" + std::to_string(j + 1), stream.z, spec.pairs[j].phi});
    }
    a.tables.push_back(ef);
    a.tables.push_back({"stream", {"z", "u", "u_prime"}, {stream.z, stream.u, stream.u_prime}});
    a.plots.push_back({"u", stream.z, stream.u});
    json j{{"b", b},
           {"d", c.d},
           {"kappa", spec.kappa},
           {"slope_at_surface", stream.slope_at_surface},
           {"r", stream.r},
           {"negative_count", spec.negative_count},
           {"mu", mu},
           {"dirichlet", dir},
           {"interlacing", dirichlet_interlacing(mu, dir)}};
    a.documents.push_back({"spectrum", j.dump(2)});
    return a;
}

Artifacts cmd_isp_jacobian(const RunConfig& c) {
    const auto ctx = make_isp_context(resolve_b(c), c.d, c.N, c.z_nodes);
    const auto basis = chosen_basis(ctx, c);
    const auto ja = jacobian_analytic(ctx, basis);
    const auto jf = jacobian_fd(ctx, basis, c.fd_step);
    const auto jh = jacobian_fd(ctx, basis, c.fd_step / 2);
    double rel = 0.0, rich = 0.0;
    const double scale = ja.entries.cwiseAbs().maxCoeff();
    for (int i = 0; i < c.N; ++i)
        for (int k = 0; k < c.N; ++k) {
            rel = std::max(rel, std::abs(ja.entries(i, k) - jf.entries(i, k)) / scale);
            rich = std::max(rich, std::abs(jf.entries(i, k) - jh.entries(i, k)) / scale);
        }
    json j{{"b", ctx.b},
           {"d", ctx.d},
           {"basis", c.basis},
           {"lambda", ctx.lambda},
           {"method", to_string(ja.method)},
           {"matrix", matrix(ja.entries)},
           {"condition", ja.condition},
           {"path_disagreement", ja.path_disagreement},
           {"finite_difference",
            {{"method", to_string(jf.method)},
             {"step", c.fd_step},
             {"matrix", matrix(jf.entries)},
             {"condition", jf.condition},
             {"richardson_change", rich}}},
           {"max_relative_difference", rel}};
    Artifacts a;
    a.documents.push_back({"isp_jacobian", j.dump(2)});
    return a;
}

Artifacts cmd_build_basis(const RunConfig& c) {
    const auto ctx = make_isp_context(resolve_b(c), c.d, c.N, c.z_nodes);
    const auto basis = adapted_basis(ctx, basis_options(c));
    const auto J = jacobian_analytic(ctx, basis.omega);
    json cand = json::array();
    for (const auto& s : basis.candidates) cand.push_back({s.lo(), s.hi()});
    json j{{"b", ctx.b},
           {"d", ctx.d},
           {"candidates", cand},
           {"coefficients", matrix(basis.coefficients)},
           {"constraint_condition", basis.constraint_condition},
           {"f_residual", matrix(basis.f_residual)},
           {"cos_residual", basis.cos_residual},
           {"gram_determinant", basis.gram_determinant},
           {"jacobian", matrix(J.entries)},
           {"jacobian_condition", J.condition}};
    Artifacts a;
    a.documents.push_back({"basis", j.dump(2)});
    const int n = 401;
    Table t{"basis", {"p"}, {std::vector<double>(n)}};
    for (int i = 0; i < n; ++i) t.columns[0][i] = static_cast<double>(i) / (n - 1);
    for (int l = 0; l < c.N; ++l) {
        std::vector<double> w(n), al(n);
        for (int i = 0; i < n; ++i) {
            w[i] = basis.omega[l].value(t.columns[0][i]);
            al[i] = basis.alpha[l].value(t.columns[0][i]);
        }
        t.header.push_back("omega_" + std::to_string(l + 1));
        t.columns.push_back(w);
        t.header.push_back("alpha_" + std::to_string(l + 1));
        t.columns.push_back(al);
        a.plots.push_back({"omega_" + std::to_string(l + 1), t.columns[0], w});
    }
    a.tables.push_back(t);
    return a;
}

Artifacts cmd_tune_mu(const RunConfig& c) {
    const auto ctx = make_isp_context(resolve_b(c), c.d, c.N, c.z_nodes);
    const auto basis = chosen_basis(ctx, c);
    CommensuratePattern pat;
    if (!c.mu_star.empty()) {
        const auto p = make_wave_problem(wave_options(c));
        pat = p.pattern;
    } else {
        pat = tune_commensurate(ctx.lambda, c.q_max, c.tune_radius);
    }
    InvertOptions io;
    io.tol = c.invert_tol;
    io.radius = c.invert_radius;
    const auto inv = invert_T(pat.mu_star, ctx, basis, io);
    json j{{"b", ctx.b},
           {"d", ctx.d},
           {"basis", c.basis},
           {"lambda", ctx.lambda},
           {"mu_star", pat.mu_star},
           {"harmonics", pat.n},
           {"k", pat.k},
           {"alpha", pat.alpha},
           {"Lambda_star", pat.Lambda_star},
           {"max_deviation", pat.max_deviation},
           {"delta", inv.delta},
           {"mu", inv.mu},
           {"iterations", inv.iterations},
           {"residual_history", inv.residual_history}};
    Artifacts a;
    a.documents.push_back({"tune", j.dump(2)});
    return a;
}

Artifacts cmd_linear_wave(const RunConfig& c) {
    const auto t = require_t(c);
    const auto p = make_wave_problem(wave_options(c));
    const auto& bg = p.background;
    const auto m = make_modal_state(t, p.pattern.mu_star, p.pattern.n, p.pattern.Lambda_star, c.epsilon, c.delta_bound);
    const auto f = assemble_linear(m, bg.spectrum, bg.stream, p.x);
    const auto phys = to_physical(f, bg.stream, 2);
    const double r = bernoulli_constant(bg.k(), bg.d());
    const auto rep = residual_strip(phys.strip.Phi, f.eta, bg.model, r, bg.stream, p.x);
    json j{{"t", t}, {"problem", problem_json(p)}, {"r", r}, {"residual", residual_json(rep)}};
    Artifacts a;
    a.documents.push_back({"linear_wave", j.dump(2)});
    field_tables(f, "field", a);
    return a;
}

Artifacts cmd_solve(const RunConfig& c) {
    const auto t = require_t(c);
    const auto p = make_wave_problem(wave_options(c));
    const auto r = lyapunov_schmidt_solve(t, p, solve_options(c));
    json j{{"t", t},
           {"problem", problem_json(p)},
           {"mu", r.mu},
           {"delta", r.delta},
           {"tau", r.tau},
           {"G", r.G},
           {"iterations", r.iterations},
           {"history", r.history},
           {"r", r.r},
           {"zeta_sup", r.zeta_sup},
           {"eta_linear_deviation", r.eta_linear_deviation},
           {"residual", residual_json(r.residual)}};
    Artifacts a;
    a.documents.push_back({"solve", j.dump(2)});
    field_tables(r.field, "field", a);
    const auto xs = r.field.x_full();
    const auto idx = r.field.full_index();
    Table prof{"profiles", {"x"}, {xs}};
    for (int k = 0; k < p.N(); ++k) {
        std::vector<double> z, full;
        for (int i : idx) {
            z.push_back(r.zeta[k](i));
            full.push_back(r.tau[k] * std::cos(p.pattern.k[k] * p.x.node(i)) + r.zeta[k](i));
        }
        prof.header.push_back("zeta_" + std::to_string(k + 1));
        prof.columns.push_back(z);
        prof.header.push_back("Phi_" + std::to_string(k + 1));
        prof.columns.push_back(full);
        a.plots.push_back({"zeta_" + std::to_string(k + 1), xs, z});
    }
    a.tables.push_back(prof);
    return a;
}

Artifacts cmd_scan(const RunConfig& c) {
    const auto p = make_wave_problem(wave_options(c));
    const auto dir = c.direction.empty() ? std::vector<double>(c.N, 1.0) : c.direction;
    const auto rep = amplitude_scaling_study(p, dir, c.amplitudes, solve_options(c));
    json fits = json::array();
    for (const auto& f : rep.fits)
        fits.push_back({{"quantity", f.quantity},
                        {"slope", f.slope},
                        {"intercept", f.intercept},
                        {"stderr", f.stderr_slope},
                        {"ci95", {f.ci_low, f.ci_high}}});
    json j{{"problem", problem_json(p)}, {"direction", rep.direction}, {"amplitudes", rep.amplitudes}, {"fits", fits}};
    Artifacts a;
    a.documents.push_back({"scan", j.dump(2)});
    Table t{"scan", {"amplitude", "zeta_sup", "eta_deviation", "iterations", "residual"}, {rep.amplitudes, {}, {}, {}, {}}};
    for (const auto& s : rep.solves) {
        t.columns[1].push_back(s.zeta_sup);
        t.columns[2].push_back(s.eta_linear_deviation);
        t.columns[3].push_back(s.iterations);
        t.columns[4].push_back(s.residual.max());
    }
    for (int k = 0; k < p.N(); ++k) {
        t.header.push_back("G_" + std::to_string(k + 1));
        std::vector<double> g;
        for (const auto& s : rep.solves) g.push_back(s.G[k]);
        t.columns.push_back(g);
    }
    a.tables.push_back(t);
    return a;
}

}  // namespace

std::string format_csv(const Table& table) {
    std::string s;
    for (size_t k = 0; k < table.header.size(); ++k) s += (k ? "," : "") + table.header[k];
    s += "\n";
    const size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
    for (const auto& c : table.columns)
        if (c.size() != rows) fail(ErrorKind::Validation, "export_results", "ragged table " + table.name);
    for (size_t i = 0; i < rows; ++i) {
        for (size_t k = 0; k < table.columns.size(); ++k) s += (k ? "," : "") + num(table.columns[k][i]);
        s += "\n";
    }
    return s;
}

std::string format_plot(const PlotSeries& series) {
    std::string s;
    for (size_t i = 0; i < series.x.size(); ++i) s += num(series.x[i]) + " " + num(series.y[i]) + "\n";
    return s;
}

std::vector<OutputFile> export_results(const Artifacts& artifacts, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorKind::Io, "export_results", "cannot create " + dir + ": " + ec.message());
    std::vector<OutputFile> out;
    for (const auto& d : artifacts.documents) out.push_back(write_file(fs::path(dir) / (d.name + ".json"), d.text + "\n"));
    for (const auto& t : artifacts.tables) out.push_back(write_file(fs::path(dir) / (t.name + ".csv"), format_csv(t)));
    for (const auto& p : artifacts.plots) out.push_back(write_file(fs::path(dir) / (p.name + ".dat"), format_plot(p)));
    return out;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"select-b",  "spectrum",    "isp-jacobian", "build-basis",
                                                "tune-mu",   "linear-wave", "solve",        "scan"};
    return names;
}

Artifacts compute_artifacts(const std::string& command, const RunConfig& cfg, std::vector<std::string>& warnings) {
    validate(cfg);
    if (command == "select-b") return cmd_select_b(cfg, warnings);
    if (command == "spectrum") return cmd_spectrum(cfg);
    if (command == "isp-jacobian") return cmd_isp_jacobian(cfg);
    if (command == "build-basis") return cmd_build_basis(cfg);
    if (command == "tune-mu") return cmd_tune_mu(cfg);
    if (command == "linear-wave") return cmd_linear_wave(cfg);
    if (command == "solve") return cmd_solve(cfg);
    if (command == "scan") return cmd_scan(cfg);
    fail(ErrorKind::Validation, "run_command", "unknown command '" + command + "'");
}

std::string report_json(const RunReport& r) {
    json outs = json::array();
    for (const auto& o : r.outputs) outs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"crc32", o.crc32}});
    json j{{"command", r.command},
           {"ok", r.ok},
           {"exit_status", r.exit_status},
           {"error", r.error},
           {"warnings", r.warnings},
           {"outputs", outs},
           {"wall_seconds", r.wall_seconds},
           {"config", r.config}};
    return j.dump(2) + "\n";
}

RunReport run_command(const std::string& command, const RunConfig& cfg) {
    RunReport rep;
    rep.command = command;
    rep.config = serialize_config(cfg);
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto artifacts = compute_artifacts(command, cfg, rep.warnings);
        rep.outputs = export_results(artifacts, cfg.out);
        rep.ok = true;
    } catch (const Error& e) {
        rep.error = e.what();
        rep.exit_status = exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        rep.error = std::string("export_results: Io: ") + e.what();
        rep.exit_status = exit_code(ErrorKind::Io);
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    std::ofstream out(fs::path(cfg.out) / "report.json", std::ios::binary);
    if (out) out << report_json(rep);
    if (!out && rep.ok) {
        rep.ok = false;
        rep.error = "run_command: Io: cannot write " + (fs::path(cfg.out) / "report.json").string();
        rep.exit_status = exit_code(ErrorKind::Io);
    }
    return rep;
}

}  // namespace vorwave
