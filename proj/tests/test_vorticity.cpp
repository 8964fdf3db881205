#include "vorwave/error.hpp"
#include "vorwave/vorticity.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace vorwave;

namespace {

double bump_ref(double p, double lo, double hi) {
    const double s = (p - 0.5 * (lo + hi)) / (0.5 * (hi - lo));
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0) * std::exp(-1.0 / (1.0 - s * s));
}

double simpson(const std::function<double(double)>& f, double a, double b, int m = 20000) {
    const double h = (b - a) / m;
    double s = f(a) + f(b);
    for (int i = 1; i < m; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST(OmegaEval, LinearPart) {
    auto m = linear_model(2.0);
    EXPECT_DOUBLE_EQ(omega_eval(m, 0.5), 1.0);
    EXPECT_EQ(omega_eval(linear_model(1.0), 0.0), 0.0);
    EXPECT_DOUBLE_EQ(omega_prime_eval(linear_model(3.0), 0.37), 3.0);
}

TEST(OmegaEval, SingleBumpMatchesDirectSum) {
    VorticityModel m;
    m.b = 1.0;
    m.basis = make_bump_basis(1, BumpLayout{0.25, 0.75, 0.0});
    m.delta = {0.01};
    for (double p : {0.3, 0.5, 0.61, 0.74}) EXPECT_NEAR(omega_eval(m, p), p + 0.01 * bump_ref(p, 0.25, 0.75), 1e-15);
    EXPECT_EQ(omega_eval(m, 0.0), 0.0);
    EXPECT_EQ(omega_eval(m, 1.0), 1.0);
    EXPECT_EQ(m.basis[0].value(0.25), 0.0);
    EXPECT_EQ(m.basis[0].value(0.75), 0.0);
    EXPECT_DOUBLE_EQ(m.basis[0].value(0.5), 1.0);
}

TEST(OmegaEval, ZeroPerturbationIsExactlyLinear) {
    VorticityModel m;
    m.b = 2.5;
    m.basis = make_bump_basis(3, BumpLayout{0.1, 0.9, 0.0});
    m.delta = {0.0, 0.0, 0.0};
    for (double p = -0.2; p <= 1.2; p += 0.013) EXPECT_EQ(omega_eval(m, p), 2.5 * p);
}

TEST(OmegaPrime, MatchesCentralDifference) {
    VorticityModel m;
    m.b = 1.0;
    m.basis = make_bump_basis(3, BumpLayout{0.1, 0.9, 0.3});
    m.delta = {0.4, -0.7, 0.2};
    const double h = 1e-6;
    for (double p : {0.2, 0.3667, 0.5, 0.62, 0.8}) {
        const double fd = (omega_eval(m, p + h) - omega_eval(m, p - h)) / (2 * h);
        const double exact = omega_prime_eval(m, p);
        EXPECT_LT(std::abs(fd - exact), 1e-6 * std::max(1.0, std::abs(exact))) << p;
    }
    EXPECT_EQ(omega_prime_eval(m, 0.05), 1.0);
    EXPECT_EQ(omega_prime_eval(m, 0.95), 1.0);
}

TEST(OmegaSecond, MatchesCentralDifference) {
    VorticityModel m;
    m.b = 1.0;
    m.basis = make_bump_basis(2, BumpLayout{0.2, 0.8, 0.2});
    m.delta = {0.3, 0.5};
    const double h = 1e-5;
    for (double p : {0.3, 0.45, 0.55, 0.7}) {
        const double fd = (omega_prime_eval(m, p + h) - omega_prime_eval(m, p - h)) / (2 * h);
        EXPECT_NEAR(fd, omega_second_eval(m, p), 1e-5 * std::max(1.0, std::abs(fd)));
    }
}

TEST(BumpBasis, ThirdsAreEvaluable) {
    const auto basis = make_bump_basis(3, BumpLayout{0.1, 0.9, 0.0});
    ASSERT_EQ(basis.size(), 3u);
    EXPECT_NEAR(basis[0].lo(), 0.1, 1e-15);
    EXPECT_NEAR(basis[2].hi(), 0.9, 1e-15);
    for (const auto& b : basis) EXPECT_DOUBLE_EQ(b.value(0.5 * (b.lo() + b.hi())), 1.0);
}

TEST(BumpBasis, OverlappingHalvesHaveNonsingularGram) {
    const auto basis = make_bump_basis(2, BumpLayout{0.1, 0.9, 0.25});
    EXPECT_LT(basis[0].hi(), 0.9);
    EXPECT_GT(basis[0].hi(), basis[1].lo());
    Eigen::Matrix2d g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            g(i, j) = simpson([&](double p) { return basis[i].value(p) * basis[j].value(p); }, 0.0, 1.0);
    EXPECT_GT(std::abs(g.determinant()), 1e-3 * g(0, 0) * g(1, 1));
}

TEST(BumpBasis, RejectsIntervalsTouchingBoundary) {
    EXPECT_THROW(make_bump_basis(2, BumpLayout{0.0, 0.5, 0.0}), Error);
    EXPECT_THROW(make_bump_basis(2, BumpLayout{0.5, 1.0, 0.0}), Error);
    EXPECT_THROW(make_bump_basis(2, BumpLayout{0.1, 0.9, 0.5 / 0.4 * 0.9}), Error);
}

TEST(IntegratedBump, DerivativeIsTheProfile) {
    SmoothBump w({{0.3, 0.1, 1.0}, {0.55, 0.2, -0.5}}, BumpShape::Integrated);
    const double h = 1e-6;
    for (double p : {0.25, 0.3, 0.41, 0.5, 0.7}) {
        const double fd = (w.value(p + h) - w.value(p - h)) / (2 * h);
        EXPECT_NEAR(fd, w.derivative(p), 1e-8);
    }
    const double mass = simpson([&](double p) { return w.derivative(p); }, 0.0, 1.0);
    EXPECT_NEAR(w.value(0.99), mass, 1e-12);
    EXPECT_EQ(w.value(0.05), 0.0);
}

TEST(IntegratedBump, BalancedSeriesVanishesOutsideSupport) {
    SmoothBump w({{0.3, 0.1, 1.0}, {0.6, 0.2, -0.5}}, BumpShape::Integrated);
    EXPECT_EQ(w.tail(), 0.0);
    EXPECT_EQ(w.value(1.0), 0.0);
    EXPECT_EQ(w.value(0.0), 0.0);
    EXPECT_NEAR(w.value(0.79999), 0.0, 1e-14);
}
