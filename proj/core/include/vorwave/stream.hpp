#pragma once

#include "vorwave/grid.hpp"
#include "vorwave/vorticity.hpp"

#include <vector>

namespace vorwave {

enum class StreamMethod { ClosedForm, Shooting };

struct StreamSolution {
    double d = 1.0;
    UniformGrid grid;
    std::vector<double> z;
    std::vector<double> u;
    std::vector<double> u_prime;
    std::vector<double> u_second;
    double shooting_slope = 0.0;  // u'(0)
    double slope_at_surface = 0.0;
    double r = 0.0;
    StreamMethod method = StreamMethod::Shooting;

    double bernoulli_defect() const { return 3.0 * r - slope_at_surface * slope_at_surface - 2.0 * d; }
};

const char* to_string(StreamMethod m);

double bernoulli_constant(double slope_at_surface, double d);

// Rejects sqrt(b) within a relative 1e-9 of pi*j/(2d).
void check_nonresonant(double b, double d);

StreamSolution linear_stream(double b, double d, int nodes = 512);

struct StreamOptions {
    double tol = 1e-12;
    int nodes = 512;
    int max_newton = 60;
};

StreamSolution solve_stream(const VorticityModel& model, double d, const StreamOptions& opt = {});

// Sup-norm of u'' + omega(u) over interior nodes, u'' by differencing the stored u'.
double stream_ode_residual(const StreamSolution& s, const VorticityModel& model);

struct FirstOrderStreams {
    std::vector<double> c;
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> u_prime;
    std::vector<double> slope_at_surface;
    double max_error_estimate = 0.0;
};

FirstOrderStreams first_order_streams(const VorticityModel& model, double b, double d, int nodes = 512);

struct SurfaceSlopeForms {
    std::vector<double> via_omega;
    std::vector<double> via_omega_prime;
};

std::vector<double> surface_slope_first_order(const VorticityModel& model, double b, double d,
                                              SurfaceSlopeForms* forms = nullptr);

}  // namespace vorwave
