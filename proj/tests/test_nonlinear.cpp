#include "vorwave/error.hpp"
#include "vorwave/nonlinear.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace vorwave;

namespace {

const WaveProblem& single_mode() {
    static const WaveProblem p = [] {
        WaveProblemOptions o;
        o.N = 1;
        return make_wave_problem(o);
    }();
    return p;
}

const WaveProblem& two_mode() {
    static const WaveProblem p = [] {
        WaveProblemOptions o;
        o.N = 2;
        o.b = 29.85;
        return make_wave_problem(o);
    }();
    return p;
}

// Smooth test field vanishing at z = 0, built from a few resolved cosine harmonics.
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

// Removes the kernel components so the field lies in the range of the bordered solve.
Eigen::MatrixXd complement(Eigen::MatrixXd V, const DiscreteSpectrum& spec, int modes) {
    for (int i = 0; i < V.rows(); ++i)
        for (int j = 0; j < modes; ++j) {
            const double c = spec.project(j, V.row(i).transpose());
            V.row(i) -= c * spec.phi[j].transpose();
        }
    return V;
}

std::vector<double> amplitudes() { return {1e-3, 2e-3, 4e-3, 8e-3}; }

}  // namespace

TEST(Residual, VanishesOnBackground) {
    const auto& p = single_mode();
    const auto& bg = p.background;
    const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(p.x.size(), bg.stream.grid.n);
    const auto op = residual_operator(Z, bg, p.x);
    EXPECT_EQ(op.F1.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(op.F2.cwiseAbs().maxCoeff(), 0.0);
    const Eigen::VectorXd eta = Eigen::VectorXd::Constant(p.x.size(), bg.d());
    const auto phys = to_physical(zero_field(p.x, bg.stream.grid, bg.d()), bg.stream, 2);
    const auto rep = residual_strip(phys.strip.Phi, eta, bg.model, bernoulli_constant(bg.k(), bg.d()), bg.stream, p.x);
    EXPECT_LT(rep.max(), 1e-12);
}

TEST(Residual, LinearizationIsExact) {
    const auto& p = single_mode();
    const auto& bg = p.background;
    const Eigen::MatrixXd V = test_field(p.x, bg.stream);
    std::vector<double> rem;
    for (double eps : {1e-3, 5e-4, 2.5e-4}) {
        const auto op = residual_operator(eps * V, bg, p.x);
        rem.push_back(std::max(op.N1.cwiseAbs().maxCoeff(), op.N2.cwiseAbs().maxCoeff()));
    }
    EXPECT_NEAR(rem[0] / rem[1], 4.0, 0.1);
    EXPECT_NEAR(rem[1] / rem[2], 4.0, 0.1);
}

TEST(Residual, LinearWaveIsSecondOrder) {
    const auto& p = single_mode();
    const auto& bg = p.background;
    std::vector<double> res;
    for (double t : amplitudes()) {
        const auto m = make_modal_state({t}, p.pattern.mu_star, p.pattern.n, p.pattern.Lambda_star);
        const auto f = assemble_linear(m, bg.spectrum, bg.stream, p.x);
        const auto phys = to_physical(f, bg.stream, 2);
        res.push_back(residual_strip(phys.strip.Phi, f.eta, bg.model, bernoulli_constant(bg.k(), bg.d()), bg.stream, p.x).max());
    }
    const auto fit = fit_loglog("residual", amplitudes(), res);
    EXPECT_GT(fit.slope, 1.85);
    EXPECT_LT(fit.slope, 2.15);
}

TEST(Residual, NonpositiveDepth) {
    const auto& p = single_mode();
    const auto& bg = p.background;
    Eigen::MatrixXd Phi = Eigen::MatrixXd::Zero(p.x.size(), bg.stream.grid.n);
    Phi(0, bg.stream.grid.n - 1) = 2 * bg.k() * bg.d();
    EXPECT_THROW(residual_operator(Phi, bg, p.x), Error);
}

TEST(Tilde, InvertsManufacturedField) {
    for (const auto* p : {&single_mode(), &two_mode()}) {
        const auto& bg = p->background;
        const Eigen::MatrixXd V = complement(test_field(p->x, bg.stream), bg.spectrum, p->N());
        Eigen::MatrixXd f;
        Eigen::VectorXd g;
        apply_linear(V, bg, p->x, f, g);
        const auto sol = solve_tilde(f, g, bg, p->N(), p->x);
        EXPECT_LT(sol.max_compatibility, 1e-10);
        EXPECT_LT((sol.Phi - V).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Tilde, RejectsKernelData) {
    const auto& p = single_mode();
    const auto& bg = p.background;
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(p.x.size(), bg.stream.grid.n);
    for (int i = 0; i < p.x.size(); ++i) f.row(i).segment(1, bg.stream.grid.n - 2) = bg.spectrum.phi[0].segment(1, bg.stream.grid.n - 2).transpose();
    const Eigen::VectorXd g = Eigen::VectorXd::Zero(p.x.size());
    try {
        solve_tilde(f, g, bg, 1, p.x);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CompatibilityViolation);
    }
}

TEST(Tilde, InverseNormStableUnderRefinement) {
    const auto& p = single_mode();
    std::vector<double> norms;
    for (int nodes : {257, 513, 1025}) {
        const auto bg = make_background(p.model(p.delta_star), p.options.d, nodes, 2);
        const Eigen::MatrixXd V = complement(test_field(p.x, bg.stream), bg.spectrum, 1);
        Eigen::MatrixXd f;
        Eigen::VectorXd g;
        apply_linear(V, bg, p.x, f, g);
        const auto sol = solve_tilde(f, g, bg, 1, p.x);
        norms.push_back(sol.Phi.cwiseAbs().maxCoeff() / std::max(f.cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff()));
    }
    EXPECT_NEAR(norms[1] / norms[0], 1.0, 0.01);
    EXPECT_NEAR(norms[2] / norms[1], 1.0, 0.01);
}

TEST(Modal, InvertsManufacturedProfile) {
    const auto& p = single_mode();
    const auto& x = p.x;
    const double mu = p.pattern.mu_star[0];
    const double a = x.alpha();
    Eigen::VectorXd zeta(x.size()), rhs(x.size());
    for (int i = 0; i < x.size(); ++i) {
        const double xi = x.node(i);
        zeta(i) = 0.4 + 0.2 * std::cos(2 * a * xi) - 0.1 * std::cos(5 * a * xi);
        rhs(i) = -mu * 0.4 + 0.2 * (-4 * a * a - mu) * std::cos(2 * a * xi) - 0.1 * (-25 * a * a - mu) * std::cos(5 * a * xi);
    }
    const Eigen::VectorXd got = modal_correction(rhs, mu, p.pattern.k[0], x);
    EXPECT_LT((got - zeta).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Modal, KernelLeakage) {
    const auto& p = single_mode();
    Eigen::VectorXd rhs(p.x.size());
    for (int i = 0; i < p.x.size(); ++i) rhs(i) = std::cos(p.pattern.k[0] * p.x.node(i));
    try {
        modal_correction(rhs, p.pattern.mu_star[0], p.pattern.k[0], p.x);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::KernelLeakage);
    }
}

TEST(Admissibility, Examples) {
    const auto a = admissibility({1e-3, 1e-3}, 0.1, 1e-2);
    EXPECT_TRUE(a.ok);
    EXPECT_NEAR(a.ratio[0], 2e-3, 1e-15);
    EXPECT_FALSE(admissibility({1e-3, 1e-6}, 0.1, 1e-2).ok);
    const auto far = admissibility({2e-2}, 0.1, 1e-2);
    EXPECT_FALSE(far.ok);
    EXPECT_FALSE(far.within_bound);
    EXPECT_TRUE(admissibility({0.0, 1e-3}, 0.1, 1e-2).ok);
}

TEST(Solve, ZeroAmplitudeIsTrivial) {
    const auto& p = single_mode();
    const auto r = lyapunov_schmidt_solve({0.0}, p);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.field.Phi.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(r.residual.max(), 1e-12);
}

TEST(Solve, NotAdmissible) {
    try {
        lyapunov_schmidt_solve({1e-3, 1e-6}, two_mode());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotAdmissible);
        EXPECT_EQ(exit_code(e.kind()), 1);
    }
}

TEST(Solve, SingleModeQuadraticCorrection) {
    const auto& p = single_mode();
    std::vector<double> zeta, eta;
    for (double t : {1e-3, 5e-4, 2.5e-4}) {
        const auto r = lyapunov_schmidt_solve({t}, p);
        EXPECT_LT(r.residual.max(), 1e-9);
        zeta.push_back(r.zeta_sup);
        eta.push_back(r.eta_linear_deviation);
    }
    EXPECT_NEAR(zeta[0] / zeta[1], 4.0, 0.1);
    EXPECT_NEAR(zeta[1] / zeta[2], 4.0, 0.1);
    EXPECT_NEAR(eta[0] / eta[1], 4.0, 0.1);
}

TEST(Solve, TwoModes) {
    const auto& p = two_mode();
    const auto r = lyapunov_schmidt_solve({1e-3, 1e-3}, p);
    EXPECT_LT(r.iterations, 200);
    EXPECT_LT(r.history.back(), 1e-10);
    EXPECT_LT(r.residual.max(), 1e-9);
    for (int i = 0; i < p.x.size(); ++i) {
        double lin = p.options.d;
        for (int j = 0; j < 2; ++j) lin += 1e-3 * std::cos(p.pattern.k[j] * p.x.node(i));
        EXPECT_NEAR(r.eta(i), lin, 1e-4);
    }
    for (int j = 0; j < 2; ++j) EXPECT_LT(std::abs(r.mu[j] - p.pattern.mu_star[j]), 1.0);
}

TEST(Fit, ExactPowerLaw) {
    const std::vector<double> x{1, 2, 4, 8};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * v * v);
    const auto f = fit_loglog("y", x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
    EXPECT_NEAR(f.stderr_slope, 0.0, 1e-12);
}
