#pragma once

#include <Eigen/Dense>

#include <vector>

namespace vorwave {

// Even, period-Lambda functions sampled on the half period [0, Lambda/2] at M + 1 nodes.
// Values and cosine amplitudes are related by a DCT-I: f(x) = sum_n a_n cos(n alpha x), alpha = 2 pi / Lambda.
class CosineGrid {
public:
    CosineGrid() = default;
    CosineGrid(double period, int intervals);

    double period() const { return period_; }
    double alpha() const { return alpha_; }
    int intervals() const { return m_; }
    int size() const { return m_ + 1; }
    double node(int i) const;
    std::vector<double> nodes() const;

    Eigen::VectorXd amplitudes(const Eigen::VectorXd& values) const;
    Eigen::VectorXd values(const Eigen::VectorXd& amplitudes) const;
    // Derivatives at the nodes, spectrally exact for resolved modes.
    Eigen::VectorXd dx(const Eigen::VectorXd& values) const;
    Eigen::VectorXd dxx(const Eigen::VectorXd& values) const;
    // Column-wise versions for fields stored x by z.
    Eigen::MatrixXd dx(const Eigen::MatrixXd& field) const;
    Eigen::MatrixXd dxx(const Eigen::MatrixXd& field) const;
    Eigen::MatrixXd amplitudes(const Eigen::MatrixXd& field) const;
    Eigen::MatrixXd values(const Eigen::MatrixXd& amplitudes) const;

    // Average over one period.
    double mean(const Eigen::VectorXd& values) const;
    // (2 / Lambda) int f cos(n alpha x) dx over a period.
    double cos_coefficient(const Eigen::VectorXd& values, int n) const;
    // Index n with n alpha = k, or -1 when k is not a resolved harmonic.
    int harmonic(double k) const;

private:
    double period_ = 0.0;
    double alpha_ = 0.0;
    int m_ = 0;
    Eigen::MatrixXd forward_;  // values -> amplitudes
    Eigen::MatrixXd inverse_;  // amplitudes -> values
    Eigen::MatrixXd dx_;
    Eigen::MatrixXd dxx_;
};

// Half-grid interval count: points_per_wavelength samples of the shortest wave, at least min_points per period.
int default_intervals(double period, double k_max, int points_per_wavelength = 16, int min_points = 64);

}  // namespace vorwave
