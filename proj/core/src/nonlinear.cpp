#include "vorwave/nonlinear.hpp"

#include "vorwave/error.hpp"
#include "vorwave/grid.hpp"

#include <Eigen/SparseLU>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace vorwave {

double ResidualReport::max() const { return std::max({sup_field, sup_bernoulli, sup_dirichlet}); }

namespace {

struct StreamDerivatives {
    std::vector<double> u, up, upp, uppp;
};

StreamDerivatives stream_derivatives(const StreamSolution& s, const VorticityModel& model) {
    StreamDerivatives out;
    out.u = s.u;
    out.up = s.u_prime;
    const size_t n = s.u.size();
    out.upp.resize(n);
    out.uppp.resize(n);
    for (size_t m = 0; m < n; ++m) {
        out.upp[m] = -omega_eval(model, s.u[m]);
        out.uppp[m] = -omega_prime_eval(model, s.u[m]) * s.u_prime[m];
    }
    return out;
}

Eigen::VectorXd row_diff1(const Eigen::MatrixXd& A, int i, double h) {
    const int n = static_cast<int>(A.cols());
    std::vector<double> v(n);
    for (int m = 0; m < n; ++m) v[m] = A(i, m);
    const auto d = diff1(v, h);
    return Eigen::Map<const Eigen::VectorXd>(d.data(), n);
}

Eigen::VectorXd row_diff2(const Eigen::MatrixXd& A, int i, double h) {
    const int n = static_cast<int>(A.cols());
    std::vector<double> v(n);
    for (int m = 0; m < n; ++m) v[m] = A(i, m);
    const auto d = diff2(v, h);
    return Eigen::Map<const Eigen::VectorXd>(d.data(), n);
}

// Residual with Phi_hat = u + z u' zs / d + W, zs = eta - d.
void strip_core(const Eigen::MatrixXd& W, const Eigen::VectorXd& zs, const StreamSolution& s,
                const VorticityModel& model, double r, const CosineGrid& x, Eigen::MatrixXd& F1,
                Eigen::VectorXd& bern) {
    const int nx = x.size();
    const int nz = s.grid.n;
    if (W.rows() != nx || W.cols() != nz) fail(ErrorKind::Validation, "residual_strip", "field shape does not match grids");
    const double d = s.d;
    const double h = s.grid.h();
    const auto sd = stream_derivatives(s, model);
    const Eigen::MatrixXd Wx = x.dx(W);
    const Eigen::MatrixXd Wxx = x.dxx(W);
    const Eigen::VectorXd ex = x.dx(zs);
    const Eigen::VectorXd exx = x.dxx(zs);
    F1 = Eigen::MatrixXd::Zero(nx, nz);
    bern.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const double eta = d + zs(i);
        const Eigen::VectorXd Wz = row_diff1(W, i, h);
        const Eigen::VectorXd Wzz = row_diff2(W, i, h);
        const Eigen::VectorXd Wxz = row_diff1(Wx, i, h);
        const double q = zs(i) / d;
        for (int m = 1; m < nz - 1; ++m) {
            const double z = s.z[m];
            const double ph = sd.u[m] + z * sd.up[m] * q + W(i, m);
            const double ph_z = sd.up[m] + (sd.up[m] + z * sd.upp[m]) * q + Wz(m);
            const double ph_zz = sd.upp[m] + (2 * sd.upp[m] + z * sd.uppp[m]) * q + Wzz(m);
            const double ph_xx = z * sd.up[m] * exx(i) / d + Wxx(i, m);
            const double ph_xz = (sd.up[m] + z * sd.upp[m]) * ex(i) / d + Wxz(m);
            const double zx = z * ex(i) / eta;
            F1(i, m) = ph_xx - 2 * zx * ph_xz - z * exx(i) / eta * ph_z + 2 * zx * ex(i) / eta * ph_z +
                       (zx * zx + (d / eta) * (d / eta)) * ph_zz + omega_eval(model, ph);
        }
        const int t = nz - 1;
        const double ph_z = sd.up[t] + (sd.up[t] + d * sd.upp[t]) * q + Wz(t);
        bern(i) = ph_z * ph_z - (eta * eta / (d * d)) * (3 * r - 2 * eta) / (1 + ex(i) * ex(i));
    }
}

Eigen::MatrixXd remainder_of(const Eigen::MatrixXd& Phi_hat, const Eigen::VectorXd& zs, const StreamSolution& s) {
    Eigen::MatrixXd W = Phi_hat;
    for (int i = 0; i < W.rows(); ++i)
        for (int m = 0; m < W.cols(); ++m) W(i, m) -= s.u[m] + s.z[m] * s.u_prime[m] * zs(i) / s.d;
    return W;
}

}  // namespace

StripResidual strip_residual(const Eigen::MatrixXd& Phi_hat, const Eigen::VectorXd& eta, const VorticityModel& model,
                             double r, const StreamSolution& stream, const CosineGrid& x) {
    for (int i = 0; i < eta.size(); ++i)
        if (!(eta(i) > 0.0)) fail(ErrorKind::NonpositiveDepth, "residual_strip", "eta must be positive");
    const Eigen::VectorXd zs = eta.array() - stream.d;
    StripResidual out;
    strip_core(remainder_of(Phi_hat, zs, stream), zs, stream, model, r, x, out.field, out.bernoulli);
    out.bottom = Phi_hat.col(0);
    out.top = Phi_hat.col(Phi_hat.cols() - 1).array() - 1.0;
    return out;
}

ResidualReport residual_strip(const Eigen::MatrixXd& Phi_hat, const Eigen::VectorXd& eta, const VorticityModel& model,
                              double r, const StreamSolution& stream, const CosineGrid& x) {
    const auto s = strip_residual(Phi_hat, eta, model, r, stream, x);
    ResidualReport rep;
    rep.sup_field = s.field.cwiseAbs().maxCoeff();
    rep.sup_bernoulli = s.bernoulli.cwiseAbs().maxCoeff();
    rep.sup_dirichlet = std::max(s.bottom.cwiseAbs().maxCoeff(), s.top.cwiseAbs().maxCoeff());
    rep.x_nodes = x.size();
    rep.z_nodes = stream.grid.n;
    return rep;
}

void apply_linear(const Eigen::MatrixXd& Phi, const Background& bg, const CosineGrid& x, Eigen::MatrixXd& L1,
                  Eigen::VectorXd& L2) {
    const int nx = x.size();
    const int nz = bg.stream.grid.n;
    const double h = bg.stream.grid.h();
    const Eigen::MatrixXd Pxx = x.dxx(Phi);
    L1 = Eigen::MatrixXd::Zero(nx, nz);
    L2.resize(nx);
    for (int i = 0; i < nx; ++i) {
        const Eigen::VectorXd Pz = row_diff1(Phi, i, h);
        const Eigen::VectorXd Pzz = row_diff2(Phi, i, h);
        for (int m = 1; m < nz - 1; ++m) L1(i, m) = Pxx(i, m) + Pzz(m) + bg.op.omega_prime[m] * Phi(i, m);
        L2(i) = Pz(nz - 1) - bg.op.kappa * Phi(i, nz - 1);
    }
}

OperatorResidual residual_operator(const Eigen::MatrixXd& Phi, const Background& bg, const CosineGrid& x) {
    const auto& s = bg.stream;
    const double k = bg.k();
    const Eigen::VectorXd zs = -Phi.col(Phi.cols() - 1) / k;
    for (int i = 0; i < zs.size(); ++i)
        if (!(s.d + zs(i) > 0.0)) {
            std::ostringstream msg;
            msg << "eta = " << s.d + zs(i) << " at x node " << i;
            fail(ErrorKind::NonpositiveDepth, "residual_operator", msg.str());
        }
    OperatorResidual out;
    Eigen::VectorXd bern;
    strip_core(Phi, zs, s, bg.model, bernoulli_constant(k, s.d), x, out.F1, bern);
    out.F2 = bern / (2 * k);
    apply_linear(Phi, bg, x, out.L1, out.L2);
    out.N1 = out.L1 - out.F1;
    out.N2 = out.L2 - out.F2;
    return out;
}

namespace {

// Packs interior rows of f and the top value g into the unknown indexing of ZOperator.
Eigen::MatrixXd pack(const Eigen::MatrixXd& f, const Eigen::VectorXd& g) {
    const int nx = static_cast<int>(f.rows());
    const int nz = static_cast<int>(f.cols());
    Eigen::MatrixXd w(nx, nz - 1);
    w.leftCols(nz - 2) = f.middleCols(1, nz - 2);
    w.col(nz - 2) = g;
    return w;
}

}  // namespace

TildeSolution solve_tilde(const Eigen::MatrixXd& f, const Eigen::VectorXd& g, const Background& bg, int modes,
                          const CosineGrid& x, double compatibility_tol) {
    const auto& spec = bg.spectrum;
    const auto& op = bg.op;
    const int nz = op.grid.n;
    const int n = op.size();
    if (modes > spec.count()) fail(ErrorKind::Validation, "solve_tilde", "spectrum has fewer pairs than modes");
    if (f.rows() != x.size() || f.cols() != nz || g.size() != x.size())
        fail(ErrorKind::Validation, "solve_tilde", "input shape does not match grids");
    if (spec.negative_count != modes) {
        std::ostringstream msg;
        msg << "spectrum has " << spec.negative_count << " negative eigenvalues, expected " << modes;
        fail(ErrorKind::CountChanged, "solve_tilde", msg.str());
    }
    const Eigen::MatrixXd w = pack(f, g);
    TildeSolution out;
    for (int j = 0; j < modes; ++j) {
        const double scale = spec.psi[j].cwiseAbs().sum() * std::max(w.cwiseAbs().maxCoeff(), 1e-300);
        for (int i = 0; i < w.rows(); ++i) {
            const double c = spec.pair(j, w.row(i).transpose());
            out.max_compatibility = std::max(out.max_compatibility, std::abs(c) / scale);
        }
    }
    if (out.max_compatibility > compatibility_tol) {
        std::ostringstream msg;
        msg << "relative projection onto the kernel modes " << out.max_compatibility << " exceeds " << compatibility_tol;
        fail(ErrorKind::CompatibilityViolation, "solve_tilde", msg.str());
    }
    const Eigen::MatrixXd amp = x.amplitudes(w);
    Eigen::MatrixXd sol_amp(x.size(), n);
    const Eigen::VectorXd e = op.mass();
    for (int p = 0; p < x.size(); ++p) {
        const double ksq = std::pow(p * x.alpha(), 2);
        const Eigen::SparseMatrix<double> A = op.shifted(ksq);
        std::vector<Eigen::Triplet<double>> t;
        for (int c = 0; c < A.outerSize(); ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
        for (int j = 0; j < modes; ++j)
            for (int i = 0; i < n; ++i) {
                const double ephi = e(i) * spec.phi[j](i + 1);
                if (ephi != 0.0) t.emplace_back(i, n + j, ephi);
                const double epsi = e(i) * spec.psi[j](i);
                if (epsi != 0.0) t.emplace_back(n + j, i, epsi);
            }
        Eigen::SparseMatrix<double> B(n + modes, n + modes);
        B.setFromTriplets(t.begin(), t.end());
        B.makeCompressed();
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(B);
        if (lu.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "bordered system singular at Fourier mode n = " << p;
            fail(ErrorKind::SingularMode, "solve_tilde", msg.str());
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + modes);
        rhs.head(n) = amp.row(p).transpose();
        const Eigen::VectorXd v = lu.solve(rhs);
        if (!v.allFinite()) {
            std::ostringstream msg;
            msg << "non-finite solution at Fourier mode n = " << p;
            fail(ErrorKind::SingularMode, "solve_tilde", msg.str());
        }
        sol_amp.row(p) = v.head(n).transpose();
    }
    const Eigen::MatrixXd vals = x.values(sol_amp);
    out.Phi = Eigen::MatrixXd::Zero(x.size(), nz);
    out.Phi.rightCols(n) = vals;
    return out;
}

Eigen::VectorXd modal_correction(const Eigen::VectorXd& rhs, double mu_star, double k, const CosineGrid& x) {
    const int nj = x.harmonic(k);
    if (nj < 0) fail(ErrorKind::Validation, "modal_correction", "k is not a resolved harmonic of the period");
    Eigen::VectorXd a = x.amplitudes(rhs);
    const double leak = std::abs(x.cos_coefficient(rhs, nj));
    if (leak > 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
        std::ostringstream msg;
        msg << "right-hand side has coefficient " << leak << " on the kernel mode n = " << nj;
        fail(ErrorKind::KernelLeakage, "modal_correction", msg.str());
    }
    for (int p = 0; p < a.size(); ++p) {
        if (p == nj) {
            a(p) = 0.0;
            continue;
        }
        const double denom = -std::pow(p * x.alpha(), 2) - mu_star;
        a(p) /= denom;
    }
    return x.values(a);
}

Admissibility admissibility(const std::vector<double>& t, double epsilon, double delta_bound) {
    Admissibility out;
    double s = 0.0;
    for (double v : t) s += v * v;
    out.norm = std::sqrt(s);
    out.within_bound = out.norm < delta_bound || out.norm == 0.0;
    std::ostringstream diag;
    if (!out.within_bound) diag << "|t| = " << out.norm << " >= delta_bound " << delta_bound << "; ";
    out.ok = out.within_bound;
    for (size_t j = 0; j < t.size(); ++j) {
        const double r = t[j] == 0.0 ? 0.0 : s / std::abs(t[j]);
        out.ratio.push_back(r);
        if (r > epsilon) {
            out.ok = false;
            diag << "|t|^2/|t_" << j + 1 << "| = " << r << " > epsilon " << epsilon << "; ";
        }
    }
    out.diagnostic = diag.str();
    if (out.diagnostic.size() >= 2) out.diagnostic.resize(out.diagnostic.size() - 2);
    return out;
}

namespace {

StreamOptions stream_options(const WaveProblemOptions& o) {
    StreamOptions s;
    s.tol = o.stream_tol;
    return s;
}

}  // namespace

VorticityModel WaveProblem::model(const std::vector<double>& delta) const {
    return perturbed_model(isp, basis.omega, delta);
}

std::vector<double> realize_eigenvalues(const WaveProblem& problem, const std::vector<double>& mu_target,
                                        std::vector<double> delta, Background* out, double* error) {
    const int N = problem.N();
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(problem.J0);
    double scale = 1.0;
    for (double m : mu_target) scale = std::max(scale, std::abs(m));
    std::vector<double> history;
    for (int it = 0; it < 60; ++it) {
        Background bg = make_background(problem.model(delta), problem.options.d, problem.options.z_nodes, N + 1, stream_options(problem.options));
        if (bg.spectrum.negative_count != N) fail(ErrorKind::CountChanged, "realize_eigenvalues", "negative eigenvalue count changed");
        Eigen::VectorXd res(N);
        for (int j = 0; j < N; ++j) res(j) = bg.spectrum.mu[j] - mu_target[j];
        const double e = res.lpNorm<Eigen::Infinity>();
        history.push_back(e);
        if (e <= 1e-13 * scale || (it > 3 && e >= 0.5 * history[history.size() - 2] && e <= 1e-11 * scale)) {
            if (out) *out = std::move(bg);
            if (error) *error = e;
            return delta;
        }
        const Eigen::VectorXd step = lu.solve(res);
        for (int j = 0; j < N; ++j) delta[j] -= step(j);
    }
    std::ostringstream msg;
    msg << "eigenvalue mismatch history:";
    for (double h : history) msg << ' ' << h;
    fail(ErrorKind::NoConvergence, "realize_eigenvalues", msg.str());
}

WaveProblem make_wave_problem(const WaveProblemOptions& opt) {
    if (!(opt.d > 0.0)) fail(ErrorKind::Validation, "make_wave_problem", "d must be positive");
    if (opt.z_nodes < 16) fail(ErrorKind::Validation, "make_wave_problem", "z grid too coarse");
    WaveProblem p;
    p.options = opt;
    const double b = opt.b > 0.0 ? opt.b : select_b(opt.N, opt.d, default_closeness(opt.d));
    p.options.b = b;
    p.isp = make_isp_context(b, opt.d, opt.N, opt.z_nodes);
    p.basis = adapted_basis(p.isp, opt.basis);
    p.J0 = jacobian_analytic(p.isp, p.basis.omega).entries;
    if (!opt.mu_star.empty()) {
        if (static_cast<int>(opt.mu_star.size()) != opt.N || opt.harmonics.size() != opt.mu_star.size() || !(opt.Lambda_star > 0))
            fail(ErrorKind::Validation, "make_wave_problem", "mu_star needs N values, N harmonics and Lambda_star");
        p.pattern.mu_star = opt.mu_star;
        p.pattern.n = opt.harmonics;
        p.pattern.Lambda_star = opt.Lambda_star;
        p.pattern.alpha = 2 * std::acos(-1.0) / opt.Lambda_star;
        for (int j = 0; j < opt.N; ++j) {
            p.pattern.k.push_back(opt.harmonics[j] * p.pattern.alpha);
            p.pattern.max_deviation = std::max(p.pattern.max_deviation, std::abs(opt.mu_star[j] - p.isp.lambda[j]));
        }
    } else {
        p.pattern = tune_commensurate(p.isp.lambda, opt.q_max, opt.tune_radius);
    }
    InvertOptions inv;
    inv.radius = opt.invert_radius;
    inv.tol = 1e-10;
    const auto start = invert_T(p.pattern.mu_star, p.isp, p.basis.omega, inv).delta;
    p.delta_star = realize_eigenvalues(p, p.pattern.mu_star, start, &p.background, &p.realization_error);
    const double kmax = *std::max_element(p.pattern.k.begin(), p.pattern.k.end());
    const int m = opt.x_intervals > 0 ? opt.x_intervals
                                      : default_intervals(p.pattern.Lambda_star, kmax, opt.points_per_wavelength, opt.min_points);
    p.x = CosineGrid(p.pattern.Lambda_star, m);
    return p;
}

namespace {

Eigen::MatrixXd assemble(const std::vector<double>& tau, const std::vector<Eigen::VectorXd>& zeta,
                         const Eigen::MatrixXd& tilde, const DiscreteSpectrum& spec, const std::vector<double>& k,
                         const CosineGrid& x) {
    Eigen::MatrixXd Phi = tilde;
    for (size_t j = 0; j < tau.size(); ++j) {
        Eigen::VectorXd prof = zeta[j];
        for (int i = 0; i < x.size(); ++i) prof(i) += tau[j] * std::cos(k[j] * x.node(i));
        Phi += prof * spec.phi[j].transpose();
    }
    return Phi;
}

}  // namespace

SolveResult lyapunov_schmidt_solve(const std::vector<double>& t, const WaveProblem& problem, const SolveOptions& opt) {
    const int N = problem.N();
    if (static_cast<int>(t.size()) != N) fail(ErrorKind::Validation, "lyapunov_schmidt_solve", "t must have N amplitudes");
    const auto adm = admissibility(t, opt.epsilon, opt.delta_bound);
    if (!adm.ok) fail(ErrorKind::NotAdmissible, "lyapunov_schmidt_solve", adm.diagnostic);
    const auto& x = problem.x;
    const auto& pat = problem.pattern;
    const int nx = x.size();

    SolveResult res;
    res.t = t;
    res.delta = problem.delta_star;
    Background bg = problem.background;
    std::vector<double> mu_target = pat.mu_star;
    res.zeta.assign(N, Eigen::VectorXd::Zero(nx));
    res.G.assign(N, 0.0);
    res.tilde = Eigen::MatrixXd::Zero(nx, bg.stream.grid.n);
    const Eigen::PartialPivLU<Eigen::MatrixXd> J0(problem.J0);
    auto taus = [&](const Background& b) {
        std::vector<double> tau(N);
        for (int j = 0; j < N; ++j) tau[j] = t[j] == 0.0 ? 0.0 : reduced_amplitude(t[j], b.k(), b.spectrum.phi_at_d(j));
        return tau;
    };
    res.tau = taus(bg);
    const bool trivial = std::all_of(t.begin(), t.end(), [](double v) { return v == 0.0; });
    Eigen::MatrixXd Phi = assemble(res.tau, res.zeta, res.tilde, bg.spectrum, pat.k, x);

    while (!trivial) {
        if (res.iterations >= opt.max_iter) {
            std::ostringstream msg;
            msg << "no convergence in " << opt.max_iter << " iterations; successive differences:";
            for (size_t i = res.history.size() > 12 ? res.history.size() - 12 : 0; i < res.history.size(); ++i)
                msg << ' ' << res.history[i];
            fail(ErrorKind::NoConvergence, "lyapunov_schmidt_solve", msg.str());
        }
        ++res.iterations;
        const auto opr = residual_operator(Phi, bg, x);
        const Eigen::MatrixXd w = pack(opr.N1, opr.N2);
        // modal right-hand sides n_j(x) = psi_j^T N(x, .)
        std::vector<Eigen::VectorXd> nj(N, Eigen::VectorXd(nx));
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < nx; ++i) nj[j](i) = bg.spectrum.pair(j, w.row(i).transpose());
        double change = 0.0;
        std::vector<double> new_target(N);
        std::vector<Eigen::VectorXd> new_zeta(N);
        for (int j = 0; j < N; ++j) {
            const int hj = x.harmonic(pat.k[j]);
            const double nu = bg.spectrum.mu[j];
            Eigen::VectorXd rhs = nj[j] + (nu - pat.mu_star[j]) * res.zeta[j];
            res.G[j] = x.cos_coefficient(nj[j], hj);
            const double c = x.cos_coefficient(rhs, hj);
            for (int i = 0; i < nx; ++i) rhs(i) -= c * std::cos(pat.k[j] * x.node(i));
            new_zeta[j] = modal_correction(rhs, pat.mu_star[j], pat.k[j], x);
            new_target[j] = res.tau[j] == 0.0 ? pat.mu_star[j] : pat.mu_star[j] - res.G[j] / res.tau[j];
            change = std::max(change, (new_zeta[j] - res.zeta[j]).cwiseAbs().maxCoeff());
            change = std::max(change, std::abs(nu - new_target[j]));
        }
        // tilde right-hand side N - sum_j n_j E phi_j
        Eigen::MatrixXd f = opr.N1;
        for (int j = 0; j < N; ++j) f -= nj[j] * bg.spectrum.phi[j].transpose();
        f.col(0).setZero();
        f.col(f.cols() - 1).setZero();
        const auto tilde = solve_tilde(f, opr.N2, bg, N, x, 1e-8);
        change = std::max(change, (tilde.Phi - res.tilde).cwiseAbs().maxCoeff());
        res.tilde = tilde.Phi;
        res.zeta = new_zeta;
        mu_target = new_target;
        res.history.push_back(change);

        // chord step on delta toward the target eigenvalues
        Eigen::VectorXd mis(N);
        for (int j = 0; j < N; ++j) mis(j) = bg.spectrum.mu[j] - mu_target[j];
        const Eigen::VectorXd step = J0.solve(mis);
        for (int j = 0; j < N; ++j) res.delta[j] -= step(j);
        bg = make_background(problem.model(res.delta), problem.options.d, problem.options.z_nodes, N + 1, stream_options(problem.options));
        if (bg.spectrum.negative_count != N)
            fail(ErrorKind::CountChanged, "lyapunov_schmidt_solve", "negative eigenvalue count changed during iteration");
        res.tau = taus(bg);
        Phi = assemble(res.tau, res.zeta, res.tilde, bg.spectrum, pat.k, x);
        if (change < opt.tol) break;
    }

    res.mu = std::vector<double>(bg.spectrum.mu.begin(), bg.spectrum.mu.begin() + N);
    res.field = zero_field(x, bg.stream.grid, bg.d());
    res.field.Phi = Phi;
    res.field.eta = surface_from_flat(Phi, bg.stream);
    res.eta = res.field.eta;
    res.r = bernoulli_constant(bg.k(), bg.d());
    const auto phys = to_physical(res.field, bg.stream, 2);
    res.residual = residual_strip(phys.strip.Phi, res.eta, bg.model, res.r, bg.stream, x);
    for (const auto& z : res.zeta) res.zeta_sup = std::max(res.zeta_sup, z.cwiseAbs().maxCoeff());
    for (int i = 0; i < nx; ++i) {
        double lin = bg.d();
        for (int j = 0; j < N; ++j) lin += t[j] * std::cos(pat.k[j] * x.node(i));
        res.eta_linear_deviation = std::max(res.eta_linear_deviation, std::abs(res.eta(i) - lin));
    }
    return res;
}

SlopeFit fit_loglog(const std::string& quantity, const std::vector<double>& x, const std::vector<double>& y) {
    SlopeFit f;
    f.quantity = quantity;
    f.values = y;
    const int n = static_cast<int>(x.size());
    if (n < 2 || y.size() != x.size()) fail(ErrorKind::Validation, "fit_loglog", "need at least two samples");
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0)) fail(ErrorKind::Validation, "fit_loglog", "samples must be nonzero");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(std::abs(y[i]));
    }
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) mx += lx[i] / n, my += ly[i] / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) sxx += (lx[i] - mx) * (lx[i] - mx), sxy += (lx[i] - mx) * (ly[i] - my);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double sse = 0;
        for (int i = 0; i < n; ++i) sse += std::pow(ly[i] - f.intercept - f.slope * lx[i], 2);
        f.stderr_slope = std::sqrt(sse / (n - 2) / sxx);
        boost::math::students_t dist(n - 2);
        const double q = boost::math::quantile(dist, 0.975);
        f.ci_low = f.slope - q * f.stderr_slope;
        f.ci_high = f.slope + q * f.stderr_slope;
    } else {
        f.ci_low = f.ci_high = f.slope;
    }
    return f;
}

ScalingReport amplitude_scaling_study(const WaveProblem& problem, const std::vector<double>& direction,
                                      const std::vector<double>& amplitudes, const SolveOptions& opt) {
    const int N = problem.N();
    if (static_cast<int>(direction.size()) != N) fail(ErrorKind::Validation, "amplitude_scaling_study", "direction must have N entries");
    double nrm = 0;
    for (double v : direction) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0)) fail(ErrorKind::Validation, "amplitude_scaling_study", "direction must be nonzero");
    ScalingReport rep;
    for (double v : direction) rep.direction.push_back(v / nrm);
    for (double s : amplitudes)
        if (s > 0) rep.amplitudes.push_back(s);
    if (rep.amplitudes.size() < 4) fail(ErrorKind::Validation, "amplitude_scaling_study", "need at least four nonzero amplitudes");
    std::vector<std::future<SolveResult>> pending;
    for (double s : rep.amplitudes) {
        std::vector<double> t(N);
        for (int j = 0; j < N; ++j) t[j] = s * rep.direction[j];
        pending.push_back(std::async(std::launch::async, [t, &problem, &opt] { return lyapunov_schmidt_solve(t, problem, opt); }));
    }
    std::vector<double> zeta, eta;
    std::vector<std::vector<double>> G(N);
    for (auto& f : pending) {
        auto r = f.get();
        zeta.push_back(r.zeta_sup);
        eta.push_back(r.eta_linear_deviation);
        for (int j = 0; j < N; ++j) G[j].push_back(r.G[j]);
        rep.solves.push_back(std::move(r));
    }
    rep.fits.push_back(fit_loglog("zeta", rep.amplitudes, zeta));
    for (int j = 0; j < N; ++j)
        if (rep.direction[j] != 0.0) rep.fits.push_back(fit_loglog("G_" + std::to_string(j + 1), rep.amplitudes, G[j]));
    rep.fits.push_back(fit_loglog("eta_deviation", rep.amplitudes, eta));
    return rep;
}

}  // namespace vorwave
