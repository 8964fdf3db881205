#pragma once

#include "vorwave/spectrum.hpp"
#include "vorwave/stream.hpp"
#include "vorwave/vorticity.hpp"

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

namespace vorwave {

struct IspContext {
    double b = 0.0;
    double d = 1.0;
    int N = 1;
    StreamSolution u0;
    DispersionSpectrum spectrum;  // N + 1 pairs of the unperturbed triple
    std::vector<double> lambda;   // the N negative eigenvalues
    double kappa0 = 0.0;
    double k0 = 0.0;
    StreamOptions stream_options;
};

IspContext make_isp_context(double b, double d, int N, int nodes = 512);

VorticityModel perturbed_model(const IspContext& ctx, const std::vector<SmoothBump>& basis,
                               const std::vector<double>& delta);

// First N eigenvalues of the triple (omega_delta, d, u_delta); CountChanged if the negative count is not N.
std::vector<double> map_T(const std::vector<double>& delta, const IspContext& ctx, const std::vector<SmoothBump>& basis);

// Closed-form eigenfunction C sin(s z) or C sinh(s z) of the unperturbed problem.
struct ModeShape {
    double mu = 0.0;
    double s = 0.0;
    bool hyperbolic = false;
    double C = 0.0;
    double A = 0.0;
    double B = 0.0;

    double phi(double z) const;
    double phi_at(double z) const { return phi(z); }
};

ModeShape mode_shape(const IspContext& ctx, int l);

struct ModeProfileData {
    double Lambda = 0.0;
    double d_star = 0.0;
    int M = 0;           // bracketing index from Lambda (M + 3/4) < d, clamped at zero
    int pair_count = 0;  // preimage pairs actually present in (0, d)
    int branch = 1;      // sign of sin(sqrt(b) d)
    double z_start = 0.0;
    double z_end = 0.0;
    std::vector<ModeShape> modes;
    std::vector<double> z;                 // grid on [z_start, z_end]
    std::vector<std::vector<double>> f;    // f_l on that grid
    double sqrt_b = 0.0;

    double f_at(int l, double z) const;
    double h_shift(double z) const;
    // Monotone change of variables z(p) on [z_start, z_end] and its derivative.
    double z_of_p(double p) const;
    double dz_dp(double p) const;
};

ModeProfileData mode_profile(const IspContext& ctx, int grid_nodes = 257);

enum class JacobianMethod { Analytic, FiniteDifference };
const char* to_string(JacobianMethod m);

struct IspJacobian {
    Eigen::MatrixXd entries;
    JacobianMethod method = JacobianMethod::Analytic;
    double condition = 0.0;
    Eigen::MatrixXd second_path;    // analytic only: the u_j'(d) based evaluation
    double path_disagreement = 0.0;
};

double condition_number(const Eigen::MatrixXd& m);

IspJacobian jacobian_analytic(const IspContext& ctx, const std::vector<SmoothBump>& basis);
IspJacobian jacobian_fd(const IspContext& ctx, const std::vector<SmoothBump>& basis, double step);
// Hellmann-Feynman Jacobian of T at an arbitrary delta (agrees with jacobian_analytic at delta = 0).
IspJacobian jacobian_at(const IspContext& ctx, const std::vector<SmoothBump>& basis, const std::vector<double>& delta);

// The reduced matrix from the monotone-interval integrals of omega_j' against f_l.
Eigen::MatrixXd folded_jacobian(const IspContext& ctx, const ModeProfileData& prof,
                                const std::vector<SmoothBump>& basis);

struct AdaptedBasisOptions {
    int count = 0;  // 0 selects 4N + 2
    double lo = 0.05;
    double hi = 0.95;
    double overlap = 0.5;
    double max_condition = 1e10;
};

struct AdaptedBasis {
    std::vector<SmoothBump> omega;  // antiderivatives, compactly supported in (0,1)
    std::vector<SmoothBump> alpha;  // their derivatives
    std::vector<SmoothBump> candidates;
    Eigen::MatrixXd coefficients;   // candidates x N
    Eigen::MatrixXd constraint;     // (N + 1) x candidates
    double constraint_condition = 0.0;
    Eigen::MatrixXd f_residual;     // int alpha_j(u0) f_l - delta_lj, N x N
    std::vector<double> cos_residual;
    double gram_determinant = 0.0;  // normalized Gram determinant of {cos, f_1..f_N}
};

AdaptedBasis adapted_basis(const IspContext& ctx, const AdaptedBasisOptions& opt = {});

struct InvertOptions {
    bool refresh_jacobian = true;
    double tol = 1e-8;
    int max_iter = 40;
    double radius = 1.0;
};

struct InvertResult {
    std::vector<double> delta;
    std::vector<double> mu;
    std::vector<double> residual_history;
    int iterations = 0;
};

InvertResult invert_T(const std::vector<double>& mu_target, const IspContext& ctx,
                      const std::vector<SmoothBump>& basis, const InvertOptions& opt = {});

struct CommensuratePattern {
    std::vector<double> mu_star;
    std::vector<int> n;
    std::vector<double> k;
    double alpha = 0.0;  // 2 pi / Lambda_star
    double Lambda_star = 0.0;
    double max_deviation = 0.0;
};

CommensuratePattern tune_commensurate(const std::vector<double>& mu, int q_max,
                                      double radius = std::numeric_limits<double>::infinity());

}  // namespace vorwave
