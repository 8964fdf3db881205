#include "vorwave/isp.hpp"

#include "vorwave/error.hpp"
#include "vorwave/grid.hpp"
#include "vorwave/ode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>

namespace vorwave {

namespace {

constexpr double pi = std::numbers::pi;
constexpr int kPanels = 32;

}  // namespace

IspContext make_isp_context(double b, double d, int N, int nodes) {
    if (N < 1) fail(ErrorKind::Validation, "make_isp_context", "N must be at least 1");
    if (!(b > 0.0)) fail(ErrorKind::Validation, "make_isp_context", "b must be positive");
    IspContext ctx;
    ctx.b = b;
    ctx.d = d;
    ctx.N = N;
    ctx.stream_options.nodes = nodes;
    ctx.u0 = linear_stream(b, d, nodes);
    ctx.spectrum = sturm_liouville_spectrum(ctx.u0, linear_model(b), N + 1);
    if (ctx.spectrum.negative_count != N) {
        std::ostringstream msg;
        msg << "unperturbed spectrum has " << ctx.spectrum.negative_count << " negative eigenvalues, need " << N;
        fail(ErrorKind::CountChanged, "make_isp_context", msg.str());
    }
    for (int j = 0; j < N; ++j) ctx.lambda.push_back(ctx.spectrum.pairs[j].mu);
    ctx.kappa0 = ctx.spectrum.kappa;
    ctx.k0 = ctx.u0.slope_at_surface;
    return ctx;
}

VorticityModel perturbed_model(const IspContext& ctx, const std::vector<SmoothBump>& basis,
                               const std::vector<double>& delta) {
    VorticityModel m;
    m.b = ctx.b;
    m.basis = basis;
    m.delta = delta;
    m.validate();
    return m;
}

std::vector<double> map_T(const std::vector<double>& delta, const IspContext& ctx, const std::vector<SmoothBump>& basis) {
    if (static_cast<int>(delta.size()) != ctx.N || static_cast<int>(basis.size()) != ctx.N)
        fail(ErrorKind::Validation, "map_T", "delta and basis must have length N");
    const auto model = perturbed_model(ctx, basis, delta);
    StreamOptions opt = ctx.stream_options;
    opt.nodes = 9;
    const auto s = solve_stream(model, ctx.d, opt);
    int negative = 0;
    const auto mu =
        sturm_liouville_eigenvalues(s, model, ctx.N, default_window(ctx.b, ctx.d, ctx.N), &negative);
    if (negative != ctx.N) {
        std::ostringstream msg;
        msg << "negative eigenvalue count " << negative << " != " << ctx.N;
        fail(ErrorKind::CountChanged, "map_T", msg.str());
    }
    return mu;
}

double ModeShape::phi(double z) const { return hyperbolic ? C * std::sinh(s * z) : C * std::sin(s * z); }

ModeShape mode_shape(const IspContext& ctx, int l) {
    ModeShape m;
    m.mu = ctx.lambda.at(l);
    const double e = ctx.b + m.mu;
    if (std::abs(e) < 1e-12) fail(ErrorKind::BranchInconsistent, "mode_profile", "b + lambda vanishes");
    m.hyperbolic = e < 0.0;
    m.s = std::sqrt(std::abs(e));
    const double d = ctx.d;
    const double nrm2 = m.hyperbolic ? std::sinh(2 * m.s * d) / (4 * m.s) - d / 2
                                     : d / 2 - std::sin(2 * m.s * d) / (4 * m.s);
    m.C = 1.0 / std::sqrt(nrm2);
    const double q = std::sqrt(ctx.b);
    const double sd = std::sin(q * d);
    const double pd = m.phi(d);
    m.A = pd * pd * (ctx.b - 2.0 / ctx.k0) / (ctx.k0 * ctx.k0 * sd * sd);
    return m;
}

double ModeProfileData::h_shift(double z) const { return z + Lambda / 2 - (z_start + Lambda / 4); }

double ModeProfileData::f_at(int l, double z) const {
    const auto& m = modes[l];
    const double P = pair_count + 0.5;
    const double c2 = m.C * m.C;
    const double cb = std::cos(2 * sqrt_b * z);
    const double h = h_shift(z);
    if (m.hyperbolic)
        return P * (m.A + c2 + m.A * cb) - c2 * (0.5 * std::cosh(2 * m.s * z) + m.B * std::cosh(2 * m.s * h));
    return P * (m.A - c2 + m.A * cb) + c2 * (0.5 * std::cos(2 * m.s * z) + m.B * std::cos(2 * m.s * h));
}

double ModeProfileData::z_of_p(double p) const {
    const double sd = std::abs(std::sin(sqrt_b * (z_end - z_start)));
    return z_start + std::asin(std::clamp(p * sd, -1.0, 1.0)) / sqrt_b;
}

double ModeProfileData::dz_dp(double p) const {
    const double sd = std::abs(std::sin(sqrt_b * (z_end - z_start)));
    return sd / (sqrt_b * std::sqrt(1.0 - p * p * sd * sd));
}

ModeProfileData mode_profile(const IspContext& ctx, int grid_nodes) {
    ModeProfileData prof;
    const double q = std::sqrt(ctx.b);
    const double d = ctx.d;
    const double sd = std::sin(q * d);
    prof.sqrt_b = q;
    prof.Lambda = 2 * pi / q;
    prof.branch = sd > 0 ? 1 : -1;
    prof.d_star = std::asin(std::abs(sd)) / q;
    prof.z_start = prof.branch > 0 ? 0.0 : prof.Lambda / 2;
    prof.z_end = prof.z_start + prof.d_star;
    const double shift = prof.branch > 0 ? 0.75 : 0.25;
    prof.M = std::max(0, static_cast<int>(std::floor(d / prof.Lambda - shift)));

    const double u_end = std::sin(q * prof.z_end) / sd;
    const double slope_start = q * std::cos(q * prof.z_start) / sd;
    if (std::abs(u_end - 1.0) > 1e-10 || !(slope_start > 0.0) || prof.z_end > d + 1e-12)
        fail(ErrorKind::BranchInconsistent, "mode_profile", "monotone interval does not map onto [0,1]");

    const double centre = prof.z_start + prof.Lambda / 4;
    std::vector<double> gamma;
    for (int k = 0;; ++k) {
        const double g = centre + (k + 0.5) * prof.Lambda;
        if (!(g < d)) break;
        gamma.push_back(g);
    }
    prof.pair_count = static_cast<int>(gamma.size());
    for (int l = 0; l < ctx.N; ++l) {
        auto m = mode_shape(ctx, l);
        m.B = 0.0;
        for (double g : gamma) m.B += m.hyperbolic ? std::cosh(2 * m.s * g) : std::cos(2 * m.s * g);
        prof.modes.push_back(m);
    }
    prof.z.resize(grid_nodes);
    for (int i = 0; i < grid_nodes; ++i)
        prof.z[i] = prof.z_start + prof.d_star * i / (grid_nodes - 1);
    prof.f.assign(ctx.N, std::vector<double>(grid_nodes));
    for (int l = 0; l < ctx.N; ++l)
        for (int i = 0; i < grid_nodes; ++i) prof.f[l][i] = prof.f_at(l, prof.z[i]);
    return prof;
}

const char* to_string(JacobianMethod m) { return m == JacobianMethod::Analytic ? "analytic" : "finite_difference"; }

double condition_number(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

IspJacobian jacobian_analytic(const IspContext& ctx, const std::vector<SmoothBump>& basis) {
    const int N = ctx.N;
    if (static_cast<int>(basis.size()) != N) fail(ErrorKind::Validation, "jacobian_analytic", "basis must have length N");
    const double q = std::sqrt(ctx.b);
    const double d = ctx.d;
    const double sd = std::sin(q * d);
    const double k0 = ctx.k0;
    auto u0 = [&](double z) { return std::sin(q * z) / sd; };

    VorticityModel m = linear_model(ctx.b);
    m.basis = basis;
    m.delta.assign(N, 0.0);
    const auto slope = surface_slope_first_order(m, ctx.b, d);

    std::vector<ModeShape> modes;
    for (int l = 0; l < N; ++l) modes.push_back(mode_shape(ctx, l));

    IspJacobian J;
    J.method = JacobianMethod::Analytic;
    J.entries = Eigen::MatrixXd::Zero(N, N);
    J.second_path = Eigen::MatrixXd::Zero(N, N);
    double floor = 0.0;  // cancellation in the cos^2 integral when u0 sweeps a bump many times
    for (int j = 0; j < N; ++j) {
        const auto& w = basis[j];
        if (w.tail() != 0.0) fail(ErrorKind::Validation, "jacobian_analytic", "basis element is not compactly supported");
        const auto qcos = integrate_adaptive(
            [&](double z) {
                const double c = std::cos(q * z);
                return w.derivative(u0(z)) * c * c;
            },
            0.0, d, kPanels, "jacobian_analytic");
        const double icos = qcos.value;
        for (int l = 0; l < N; ++l) {
            const auto& mode = modes[l];
            const double iphi = integrate_adaptive(
                                    [&](double z) {
                                        const double p = mode.phi(z);
                                        return w.derivative(u0(z)) * p * p;
                                    },
                                    0.0, d, kPanels, "jacobian_analytic")
                                    .value;
            const double pd = mode.phi(d);
            J.entries(l, j) = mode.A * icos - iphi;
            J.second_path(l, j) = slope[j] / (k0 * k0) * (2.0 / k0 - ctx.b) * pd * pd - iphi;
            floor = std::max(floor, 1e-12 * std::abs(mode.A) * qcos.l1);
        }
    }
    J.path_disagreement = (J.entries - J.second_path).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, J.entries.cwiseAbs().maxCoeff());
    if (J.path_disagreement > 1e-8 * scale + floor) {
        std::ostringstream msg;
        msg << "evaluation paths disagree by " << J.path_disagreement;
        fail(ErrorKind::PathDisagreement, "jacobian_analytic", msg.str());
    }
    J.condition = condition_number(J.entries);
    return J;
}

IspJacobian jacobian_fd(const IspContext& ctx, const std::vector<SmoothBump>& basis, double step) {
    const int N = ctx.N;
    if (!(step > 0.0)) fail(ErrorKind::Validation, "jacobian_fd", "step must be positive");
    IspJacobian J;
    J.method = JacobianMethod::FiniteDifference;
    J.entries = Eigen::MatrixXd::Zero(N, N);
    for (int j = 0; j < N; ++j) {
        std::vector<double> dp(N, 0.0), dm(N, 0.0);
        dp[j] = step;
        dm[j] = -step;
        const auto mp = map_T(dp, ctx, basis);
        const auto mm = map_T(dm, ctx, basis);
        for (int l = 0; l < N; ++l) J.entries(l, j) = (mp[l] - mm[l]) / (2 * step);
    }
    J.condition = condition_number(J.entries);
    return J;
}

IspJacobian jacobian_at(const IspContext& ctx, const std::vector<SmoothBump>& basis, const std::vector<double>& delta) {
    const int N = ctx.N;
    const auto model = perturbed_model(ctx, basis, delta);
    StreamOptions opt = ctx.stream_options;
    opt.nodes = 9;
    const auto s = solve_stream(model, ctx.d, opt);
    int negative = 0;
    const auto mu = sturm_liouville_eigenvalues(s, model, N, default_window(ctx.b, ctx.d, N), &negative);
    if (negative != N) fail(ErrorKind::CountChanged, "jacobian_at", "negative eigenvalue count changed");
    const double k = s.slope_at_surface;
    const double w1 = omega_eval(model, 1.0);

    IspJacobian J;
    J.method = JacobianMethod::Analytic;
    J.entries = Eigen::MatrixXd::Zero(N, N);
    const int base = 6 + 2 * N;
    const int size = base + 2 + 2 * N;
    for (int l = 0; l < N; ++l) {
        const double m = mu[l];
        const Rhs rhs = [&model, &basis, m, N, base](const State& x, State& dx, double) {
            const double u = x[0];
            const double wp = omega_prime_eval(model, u);
            const double wpp = omega_second_eval(model, u);
            const double p2 = x[2] * x[2];
            dx[0] = x[1];
            dx[1] = -omega_eval(model, u);
            dx[2] = x[3];
            dx[3] = -(m + wp) * x[2];
            dx[4] = x[5];
            dx[5] = -wp * x[4];
            dx[base] = p2;
            dx[base + 1 + 2 * N] = wpp * x[4] * p2;
            for (int j = 0; j < N; ++j) {
                dx[6 + 2 * j] = x[7 + 2 * j];
                dx[7 + 2 * j] = -wp * x[6 + 2 * j] - basis[j].value(u);
                dx[base + 1 + j] = basis[j].derivative(u) * p2;
                dx[base + 1 + N + j] = wpp * x[6 + 2 * j] * p2;
            }
        };
        State x(size, 0.0);
        x[1] = s.shooting_slope;
        x[3] = 1.0;
        x[5] = 1.0;
        integrate_span(rhs, x, 0.0, ctx.d, OdeTolerance{1e-13, 1e-12});
        const double nrm2 = x[base];
        const double phid2 = x[2] * x[2] / nrm2;
        for (int j = 0; j < N; ++j) {
            const double c = x[6 + 2 * j] / x[4];
            const double vd = x[7 + 2 * j] - c * x[5];
            const double dkappa = (-2.0 / (k * k * k) + w1 / (k * k)) * vd - basis[j].value(1.0) / k;
            const double iw = x[base + 1 + j];
            const double iv = x[base + 1 + N + j] - c * x[base + 1 + 2 * N];
            J.entries(l, j) = -(iw + iv) / nrm2 - dkappa * phid2;
        }
    }
    J.condition = condition_number(J.entries);
    return J;
}

Eigen::MatrixXd folded_jacobian(const IspContext& ctx, const ModeProfileData& prof,
                                const std::vector<SmoothBump>& basis) {
    const int N = ctx.N;
    const double q = prof.sqrt_b;
    const double sd = std::sin(q * ctx.d);
    Eigen::MatrixXd out(N, static_cast<int>(basis.size()));
    for (size_t j = 0; j < basis.size(); ++j)
        for (int l = 0; l < N; ++l)
            out(l, j) = integrate_adaptive(
                            [&](double z) { return basis[j].derivative(std::sin(q * z) / sd) * prof.f_at(l, z); },
                            prof.z_start, prof.z_end, kPanels, "folded_jacobian")
                            .value;
    return out;
}

AdaptedBasis adapted_basis(const IspContext& ctx, const AdaptedBasisOptions& opt) {
    const int N = ctx.N;
    const int K = opt.count > 0 ? opt.count : 4 * N + 2;
    if (K < N + 1) fail(ErrorKind::Validation, "adapted_basis", "bump span smaller than the N + 1 constraints");
    const auto prof = mode_profile(ctx);
    const double q = prof.sqrt_b;
    const double sd = std::sin(q * ctx.d);

    AdaptedBasis out;
    out.candidates = make_bump_basis(K, BumpLayout{opt.lo, opt.hi, opt.overlap});
    out.constraint = Eigen::MatrixXd::Zero(N + 1, K);
    for (int m = 0; m < K; ++m) {
        const auto& beta = out.candidates[m];
        auto row = [&](const std::function<double(double)>& g) {
            return integrate_adaptive([&](double p) { return beta.value(p) * g(prof.z_of_p(p)) * prof.dz_dp(p); },
                                      beta.lo(), beta.hi(), 8, "adapted_basis")
                .value;
        };
        out.constraint(0, m) = row([&](double z) { return std::cos(q * z); });
        for (int l = 0; l < N; ++l) out.constraint(l + 1, m) = row([&](double z) { return prof.f_at(l, z); });
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.constraint, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    out.constraint_condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (!(out.constraint_condition < opt.max_condition)) {
        std::ostringstream msg;
        msg << "constraint matrix condition " << out.constraint_condition << " exceeds " << opt.max_condition
            << "; enlarge the bump span";
        fail(ErrorKind::RankDeficient, "adapted_basis", msg.str());
    }
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(N + 1, N);
    rhs.bottomRows(N) = Eigen::MatrixXd::Identity(N, N);
    out.coefficients = svd.solve(rhs);

    for (int j = 0; j < N; ++j) {
        std::vector<MollifierAtom> atoms;
        for (int m = 0; m < K; ++m) {
            const auto& a = out.candidates[m].atoms().front();
            atoms.push_back({a.center, a.half_width, out.coefficients(m, j)});
        }
        out.alpha.emplace_back(atoms, BumpShape::Profile);
        out.omega.emplace_back(atoms, BumpShape::Integrated);
        if (out.omega.back().tail() != 0.0) {
            std::ostringstream msg;
            msg << "omega_" << j + 1 << "(1) = " << out.omega.back().tail() << " is not zero";
            fail(ErrorKind::RankDeficient, "adapted_basis", msg.str());
        }
    }

    out.f_residual = Eigen::MatrixXd::Zero(N, N);
    for (int j = 0; j < N; ++j) {
        const auto& a = out.alpha[j];
        auto u0 = [&](double z) { return std::sin(q * z) / sd; };
        out.cos_residual.push_back(integrate_adaptive([&](double z) { return a.value(u0(z)) * std::cos(q * z); },
                                                      prof.z_start, prof.z_end, kPanels, "adapted_basis")
                                       .value);
        for (int l = 0; l < N; ++l)
            out.f_residual(l, j) = integrate_adaptive([&](double z) { return a.value(u0(z)) * prof.f_at(l, z); },
                                                      prof.z_start, prof.z_end, kPanels, "adapted_basis")
                                       .value -
                                   (l == j ? 1.0 : 0.0);
    }

    Eigen::MatrixXd gram(N + 1, N + 1);
    auto g = [&](int i, double z) { return i == 0 ? std::cos(q * z) : prof.f_at(i - 1, z); };
    for (int i = 0; i <= N; ++i)
        for (int k = i; k <= N; ++k)
            gram(i, k) = gram(k, i) = integrate_adaptive([&](double z) { return g(i, z) * g(k, z); }, prof.z_start,
                                                         prof.z_end, kPanels, "adapted_basis")
                                          .value;
    Eigen::VectorXd dg = gram.diagonal().cwiseSqrt().cwiseInverse();
    out.gram_determinant = (dg.asDiagonal() * gram * dg.asDiagonal()).determinant();
    return out;
}

InvertResult invert_T(const std::vector<double>& mu_target, const IspContext& ctx,
                      const std::vector<SmoothBump>& basis, const InvertOptions& opt) {
    const int N = ctx.N;
    if (static_cast<int>(mu_target.size()) != N) fail(ErrorKind::Validation, "invert_T", "target must have length N");
    double dist = 0.0;
    for (int j = 0; j < N; ++j) dist = std::max(dist, std::abs(mu_target[j] - ctx.lambda[j]));
    if (dist > opt.radius) {
        std::ostringstream msg;
        msg << "target lies " << dist << " from the unperturbed spectrum, radius " << opt.radius;
        fail(ErrorKind::Validation, "invert_T", msg.str());
    }
    auto residual = [&](const std::vector<double>& mu) {
        Eigen::VectorXd r(N);
        for (int j = 0; j < N; ++j) r(j) = mu[j] - mu_target[j];
        return r;
    };
    InvertResult res;
    res.delta.assign(N, 0.0);
    res.mu = map_T(res.delta, ctx, basis);
    Eigen::VectorXd r = residual(res.mu);
    res.residual_history.push_back(r.lpNorm<Eigen::Infinity>());
    Eigen::MatrixXd J0;
    if (!opt.refresh_jacobian) J0 = jacobian_analytic(ctx, basis).entries;
    while (res.residual_history.back() >= opt.tol) {
        if (res.iterations >= opt.max_iter) {
            std::ostringstream msg;
            msg << "residual history:";
            for (double h : res.residual_history) msg << ' ' << h;
            fail(ErrorKind::NoConvergence, "invert_T", msg.str());
        }
        ++res.iterations;
        const Eigen::MatrixXd J = opt.refresh_jacobian ? jacobian_at(ctx, basis, res.delta).entries : J0;
        const Eigen::VectorXd step = J.fullPivLu().solve(r);
        double lambda = 1.0;
        bool accepted = false;
        for (int halving = 0; halving <= 8 && !accepted; ++halving, lambda *= 0.5) {
            std::vector<double> trial(N);
            for (int j = 0; j < N; ++j) trial[j] = res.delta[j] - lambda * step(j);
            try {
                const auto mu = map_T(trial, ctx, basis);
                const Eigen::VectorXd rt = residual(mu);
                if (rt.lpNorm<Eigen::Infinity>() < res.residual_history.back()) {
                    res.delta = trial;
                    res.mu = mu;
                    r = rt;
                    accepted = true;
                }
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::CountChanged && e.kind() != ErrorKind::NoConvergence) throw;
            }
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "no damped step reduced the residual; history:";
            for (double h : res.residual_history) msg << ' ' << h;
            fail(ErrorKind::NoConvergence, "invert_T", msg.str());
        }
        res.residual_history.push_back(r.lpNorm<Eigen::Infinity>());
    }
    return res;
}

namespace {

void enumerate_patterns(int N, int q_max, std::vector<int>& current, const std::function<void(const std::vector<int>&)>& visit) {
    if (static_cast<int>(current.size()) == N) {
        visit(current);
        return;
    }
    const int upper = current.empty() ? q_max : current.back() - 1;
    const int remaining = N - static_cast<int>(current.size());
    for (int n = upper; n >= remaining; --n) {
        current.push_back(n);
        enumerate_patterns(N, q_max, current, visit);
        current.pop_back();
    }
}

}  // namespace

CommensuratePattern tune_commensurate(const std::vector<double>& mu, int q_max, double radius) {
    const int N = static_cast<int>(mu.size());
    if (N < 1) fail(ErrorKind::Validation, "tune_commensurate", "empty eigenvalue list");
    for (int j = 0; j < N; ++j) {
        if (!(mu[j] < 0.0)) fail(ErrorKind::Validation, "tune_commensurate", "eigenvalues must be negative");
        if (j > 0 && !(mu[j] > mu[j - 1])) fail(ErrorKind::Validation, "tune_commensurate", "eigenvalues must be distinct and increasing");
    }
    if (q_max < N) fail(ErrorKind::Validation, "tune_commensurate", "q_max must be at least N");
    std::vector<double> a(N);
    for (int j = 0; j < N; ++j) a[j] = -mu[j];

    CommensuratePattern best;
    best.max_deviation = std::numeric_limits<double>::infinity();
    std::vector<int> current;
    enumerate_patterns(N, q_max, current, [&](const std::vector<int>& n) {
        std::vector<double> candidates;
        for (int i = 0; i < N; ++i) {
            const double ni = static_cast<double>(n[i]) * n[i];
            candidates.push_back(a[i] / ni);
            for (int j = i + 1; j < N; ++j) {
                const double nj = static_cast<double>(n[j]) * n[j];
                candidates.push_back((a[i] + a[j]) / (ni + nj));
            }
        }
        for (double x : candidates) {
            double dev = 0.0;
            for (int j = 0; j < N; ++j) dev = std::max(dev, std::abs(static_cast<double>(n[j]) * n[j] * x - a[j]));
            const bool better = dev < best.max_deviation * (1.0 - 1e-12) ||
                                (dev <= best.max_deviation * (1.0 + 1e-12) && n.front() < best.n.front());
            if (better) {
                best.max_deviation = dev;
                best.n = n;
                best.alpha = std::sqrt(x);
            }
        }
    });
    if (best.max_deviation > radius) {
        std::ostringstream msg;
        msg << "best pattern deviates by " << best.max_deviation << " > radius " << radius << " with q_max = " << q_max;
        fail(ErrorKind::NoPatternWithinRadius, "tune_commensurate", msg.str());
    }
    best.Lambda_star = 2 * pi / best.alpha;
    for (int j = 0; j < N; ++j) {
        const double k = best.n[j] * best.alpha;
        best.k.push_back(k);
        best.mu_star.push_back(-k * k);
    }
    return best;
}

}  // namespace vorwave
