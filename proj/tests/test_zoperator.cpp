#include "vorwave/error.hpp"
#include "vorwave/grid.hpp"
#include "vorwave/zoperator.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace vorwave;

namespace {

VorticityModel bumped(double b) {
    VorticityModel m = linear_model(b);
    m.basis = make_bump_basis(2, BumpLayout{0.1, 0.9, 0.0});
    m.delta = {0.03, -0.02};
    return m;
}

}  // namespace

TEST(ZOperator, EigenpairsSatisfyDiscreteProblem) {
    const auto model = bumped(29.85);
    StreamOptions opt;
    const auto s = solve_stream(model, 1.0, opt);
    const auto op = make_z_operator(s, model);
    const auto spec = discrete_spectrum(s, model, 3, &op);
    ASSERT_EQ(spec.count(), 3);
    EXPECT_EQ(spec.negative_count, 2);
    const Eigen::VectorXd e = op.mass();
    const int n = s.grid.n;
    for (int j = 0; j < 3; ++j) {
        const Eigen::VectorXd v = spec.phi[j].tail(n - 1);
        const Eigen::VectorXd r = op.L * v + spec.mu[j] * e.cwiseProduct(v);
        EXPECT_LT(r.cwiseAbs().maxCoeff(), 1e-9 * (1 + std::abs(spec.mu[j])) * v.cwiseAbs().maxCoeff());
        const Eigen::VectorXd rl = Eigen::SparseMatrix<double>(op.L.transpose()) * spec.psi[j] + spec.mu[j] * e.cwiseProduct(spec.psi[j]);
        EXPECT_LT(rl.cwiseAbs().maxCoeff(), 1e-9 * (1 + std::abs(spec.mu[j])) * spec.psi[j].cwiseAbs().maxCoeff());
        EXPECT_NEAR(spec.mu[j], spec.continuous_mu[j], 1e-5 * std::max(1.0, std::abs(spec.mu[j])));
        const auto w = gregory_weights(n, s.grid.h());
        double nrm = 0;
        for (int i = 0; i < n; ++i) nrm += w[i] * spec.phi[j](i) * spec.phi[j](i);
        EXPECT_NEAR(nrm, 1.0, 1e-13);
        EXPECT_EQ(spec.phi[j](0), 0.0);
    }
    EXPECT_LT(spec.biorthogonality_error, 1e-10);
}

TEST(ZOperator, EigenvaluesConvergeAtFourthOrder) {
    const auto model = bumped(29.85);
    std::vector<double> err;
    for (int nodes : {257, 513, 1025}) {
        StreamOptions opt;
        opt.nodes = nodes;
        const auto s = solve_stream(model, 1.0, opt);
        const auto spec = discrete_spectrum(s, model, 2);
        err.push_back(std::abs(spec.mu[1] - spec.continuous_mu[1]));
    }
    // pre-asymptotic near the bump edges at 257 nodes, fourth order and better beyond
    EXPECT_GT(err[0] / err[1], 5.0);
    EXPECT_GT(err[1] / err[2], 16.0);
    EXPECT_LT(err[2], 1e-6);
}

TEST(ZOperator, LinearVorticityMatchesCharacteristicRoot) {
    const auto model = linear_model(1.0);
    const auto s = linear_stream(1.0, 1.0);
    const auto spec = discrete_spectrum(s, model, 2);
    // characteristic equation root at the Pruefer value; the FD value is within truncation error
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(spec.mu[j], spec.continuous_mu[j], 1e-8 * std::max(1.0, std::abs(spec.mu[j])));
}
