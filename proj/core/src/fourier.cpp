#include "vorwave/fourier.hpp"

#include "vorwave/error.hpp"

#include <cmath>
#include <numbers>

namespace vorwave {

CosineGrid::CosineGrid(double period, int intervals) : period_(period), m_(intervals) {
    if (!(period > 0.0) || !std::isfinite(period)) fail(ErrorKind::Validation, "CosineGrid", "period must be positive");
    if (intervals < 2) fail(ErrorKind::Validation, "CosineGrid", "need at least two half-period intervals");
    alpha_ = 2.0 * std::numbers::pi / period;
    const int n = m_ + 1;
    forward_.resize(n, n);
    inverse_.resize(n, n);
    dx_.resize(n, n);
    const double pi = std::numbers::pi;
    for (int k = 0; k < n; ++k) {
        const double wk = (k == 0 || k == m_) ? 0.5 : 1.0;
        for (int i = 0; i < n; ++i) {
            const double wi = (i == 0 || i == m_) ? 0.5 : 1.0;
            const double c = std::cos(pi * static_cast<double>(k) * i / m_);
            forward_(k, i) = 2.0 * wk * wi * c / m_;
            inverse_(i, k) = c;
        }
    }
    Eigen::MatrixXd sine(n, n);
    Eigen::VectorXd ksq(n);
    for (int k = 0; k < n; ++k) {
        ksq(k) = -std::pow(k * alpha_, 2);
        for (int i = 0; i < n; ++i) sine(i, k) = -k * alpha_ * std::sin(pi * static_cast<double>(k) * i / m_);
    }
    dx_ = sine * forward_;
    dxx_ = inverse_ * ksq.asDiagonal() * forward_;
}

double CosineGrid::node(int i) const { return i == m_ ? 0.5 * period_ : 0.5 * period_ * i / m_; }

std::vector<double> CosineGrid::nodes() const {
    std::vector<double> out(size());
    for (int i = 0; i < size(); ++i) out[i] = node(i);
    return out;
}

Eigen::VectorXd CosineGrid::amplitudes(const Eigen::VectorXd& v) const { return forward_ * v; }
Eigen::VectorXd CosineGrid::values(const Eigen::VectorXd& a) const { return inverse_ * a; }
Eigen::VectorXd CosineGrid::dx(const Eigen::VectorXd& v) const { return dx_ * v; }
Eigen::VectorXd CosineGrid::dxx(const Eigen::VectorXd& v) const { return dxx_ * v; }
Eigen::MatrixXd CosineGrid::dx(const Eigen::MatrixXd& f) const { return dx_ * f; }
Eigen::MatrixXd CosineGrid::dxx(const Eigen::MatrixXd& f) const { return dxx_ * f; }
Eigen::MatrixXd CosineGrid::amplitudes(const Eigen::MatrixXd& f) const { return forward_ * f; }
Eigen::MatrixXd CosineGrid::values(const Eigen::MatrixXd& a) const { return inverse_ * a; }

double CosineGrid::mean(const Eigen::VectorXd& v) const { return amplitudes(v)(0); }

double CosineGrid::cos_coefficient(const Eigen::VectorXd& v, int n) const {
    if (n < 0 || n > m_) fail(ErrorKind::Validation, "cos_coefficient", "harmonic outside the grid");
    const double a = forward_.row(n).dot(v);
    return (n == 0 || n == m_) ? 2.0 * a : a;
}

int CosineGrid::harmonic(double k) const {
    const double r = k / alpha_;
    const long n = std::lround(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, r) || n < 0 || n >= m_) return -1;
    return static_cast<int>(n);
}

int default_intervals(double period, double k_max, int points_per_wavelength, int min_points) {
    const double wavelength = 2.0 * std::numbers::pi / k_max;
    const int per_period = static_cast<int>(std::ceil(points_per_wavelength * period / wavelength - 1e-9));
    int points = std::max(per_period, min_points);
    if (points % 2) ++points;
    return points / 2;
}

}  // namespace vorwave
