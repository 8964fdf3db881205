#pragma once

#include <functional>
#include <string>
#include <vector>

namespace vorwave {

// Uniform node set on [0, length] with n nodes (n - 1 cells).
struct UniformGrid {
    double length = 1.0;
    int n = 512;

    double h() const { return length / (n - 1); }
    double node(int i) const { return i == n - 1 ? length : i * h(); }
    std::vector<double> nodes() const;
};

// Trapezoid with Gregory end corrections; exact for polynomials of degree <= 5.
std::vector<double> gregory_weights(int n, double h);

double integrate(const std::vector<double>& weights, const std::vector<double>& f);

// Fourth-order finite differences on a uniform grid.
double diff1_at(const double* v, int n, double h, int i);
double diff2_at(const double* v, int n, double h, int i);
std::vector<double> diff1(const std::vector<double>& v, double h);
std::vector<double> diff2(const std::vector<double>& v, double h);

// Stencil coefficients (node offset, weight) for the operators above.
struct Stencil {
    int first = 0;
    std::vector<double> w;
};
Stencil diff1_stencil(int n, double h, int i);
Stencil diff2_stencil(int n, double h, int i);

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;  // integral of |f|
};

// Adaptive Gauss-Kronrod over equal panels; throws QuadratureFailure naming `operation`.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, int panels,
                                    const std::string& operation, double tol = 1e-13);

// Cubic Lagrange interpolation of grid samples at an arbitrary abscissa.
double interpolate_cubic(const UniformGrid& grid, const std::vector<double>& v, double z);

}  // namespace vorwave
