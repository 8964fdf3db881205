#pragma once

#include "vorwave/fourier.hpp"
#include "vorwave/isp.hpp"
#include "vorwave/wavefield.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace vorwave {

struct ResidualReport {
    double sup_field = 0.0;
    double sup_bernoulli = 0.0;
    double sup_dirichlet = 0.0;
    int x_nodes = 0;
    int z_nodes = 0;

    double max() const;
};

// Residual fields of the flattened problem. Derivatives of the stream part of Phi_hat are taken from the
// stream ODE; only the remainder is differenced (spectrally in x, fourth order in z).
struct StripResidual {
    Eigen::MatrixXd field;       // x nodes by z nodes, interior z rows meaningful
    Eigen::VectorXd bernoulli;   // Phi_hat_z^2 - eta^2/d^2 (3r - 2 eta)/(1 + eta_x^2) at z = d
    Eigen::VectorXd bottom;      // Phi_hat(x, 0)
    Eigen::VectorXd top;         // Phi_hat(x, d) - 1
};

StripResidual strip_residual(const Eigen::MatrixXd& Phi_hat, const Eigen::VectorXd& eta, const VorticityModel& model,
                             double r, const StreamSolution& stream, const CosineGrid& x);

ResidualReport residual_strip(const Eigen::MatrixXd& Phi_hat, const Eigen::VectorXd& eta, const VorticityModel& model,
                              double r, const StreamSolution& stream, const CosineGrid& x);

// F(Phi) with eta eliminated, split as F = L Phi - N. F2 and L2 are normalized by 2 u'(d).
struct OperatorResidual {
    Eigen::MatrixXd F1, L1, N1;  // x nodes by z nodes, interior z rows meaningful
    Eigen::VectorXd F2, L2, N2;
};

OperatorResidual residual_operator(const Eigen::MatrixXd& Phi, const Background& bg, const CosineGrid& x);

// Linear part only: Phi_xx + Phi_zz + omega'(u) Phi and Phi_z(d) - kappa Phi(d).
void apply_linear(const Eigen::MatrixXd& Phi, const Background& bg, const CosineGrid& x, Eigen::MatrixXd& L1,
                  Eigen::VectorXd& L2);

// Solves L Phi = (f, g) on the complement of the first `modes` eigenvectors, mode by mode in x.
struct TildeSolution {
    Eigen::MatrixXd Phi;
    double max_compatibility = 0.0;
};

TildeSolution solve_tilde(const Eigen::MatrixXd& f, const Eigen::VectorXd& g, const Background& bg, int modes,
                          const CosineGrid& x, double compatibility_tol = 1e-10);

// Solves zeta'' - mu_star zeta = rhs with zeta orthogonal to cos(k x).
Eigen::VectorXd modal_correction(const Eigen::VectorXd& rhs, double mu_star, double k, const CosineGrid& x);

struct Admissibility {
    bool ok = true;
    bool within_bound = true;
    double norm = 0.0;
    std::vector<double> ratio;  // |t|^2 / |t_j|, zero for absent modes
    std::string diagnostic;
};

Admissibility admissibility(const std::vector<double>& t, double epsilon, double delta_bound);

struct WaveProblemOptions {
    double b = 0.0;
    double d = 1.0;
    int N = 1;
    int z_nodes = 512;
    double stream_tol = 1e-12;
    int q_max = 8;
    double tune_radius = 1.0;
    double invert_radius = 1.0;
    int points_per_wavelength = 16;
    int min_points = 64;
    int x_intervals = 0;        // 0 selects default_intervals
    AdaptedBasisOptions basis;
    std::vector<double> mu_star;  // empty: tune from the unperturbed spectrum
    std::vector<int> harmonics;   // with mu_star: k_j = n_j alpha
    double Lambda_star = 0.0;
};

struct WaveProblem {
    WaveProblemOptions options;
    IspContext isp;
    AdaptedBasis basis;
    CommensuratePattern pattern;
    Eigen::MatrixXd J0;
    std::vector<double> delta_star;
    Background background;
    CosineGrid x;
    double realization_error = 0.0;

    int N() const { return isp.N; }
    VorticityModel model(const std::vector<double>& delta) const;
};

WaveProblem make_wave_problem(const WaveProblemOptions& opt);

// Chord iteration on delta until the discrete eigenvalues equal mu_target.
std::vector<double> realize_eigenvalues(const WaveProblem& problem, const std::vector<double>& mu_target,
                                        std::vector<double> delta, Background* out = nullptr, double* error = nullptr);

struct SolveOptions {
    double tol = 1e-10;
    int max_iter = 200;
    double epsilon = 0.1;
    double delta_bound = 1e-2;
};

struct SolveResult {
    WaveField field;
    Eigen::VectorXd eta;
    std::vector<double> t;
    std::vector<double> tau;     // reduced-coordinate amplitudes
    std::vector<double> mu;
    std::vector<double> delta;
    std::vector<double> G;
    std::vector<Eigen::VectorXd> zeta;
    Eigen::MatrixXd tilde;
    ResidualReport residual;
    int iterations = 0;
    std::vector<double> history;
    double zeta_sup = 0.0;
    double eta_linear_deviation = 0.0;  // sup |eta - d - sum t_j cos(k_j x)|
    double r = 0.0;
};

SolveResult lyapunov_schmidt_solve(const std::vector<double>& t, const WaveProblem& problem,
                                   const SolveOptions& opt = {});

struct SlopeFit {
    std::string quantity;
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<double> values;
};

struct ScalingReport {
    std::vector<double> direction;
    std::vector<double> amplitudes;
    std::vector<SlopeFit> fits;  // zeta, G_j for present modes, eta deviation
    std::vector<SolveResult> solves;
};

SlopeFit fit_loglog(const std::string& quantity, const std::vector<double>& x, const std::vector<double>& y);

ScalingReport amplitude_scaling_study(const WaveProblem& problem, const std::vector<double>& direction,
                                      const std::vector<double>& amplitudes, const SolveOptions& opt = {});

}  // namespace vorwave
