#pragma once

#include "vorwave/stream.hpp"
#include "vorwave/vorticity.hpp"

#include <vector>

namespace vorwave {

struct EigenPair {
    double mu = 0.0;
    std::vector<double> phi;
    std::vector<double> phi_prime;
    double phi_at_d = 0.0;
    double normalization = 1.0;  // L2 norm of the raw solution with phi'(0) = 1
};

struct DispersionSpectrum {
    double kappa = 0.0;
    std::vector<EigenPair> pairs;
    int negative_count = 0;
    UniformGrid grid;

    std::vector<double> eigenvalues() const;
};

struct MuWindow {
    double lo = 0.0;
    double hi = 0.0;
};

MuWindow default_window(double b, double d, int k_max);

double kappa(const StreamSolution& stream, const VorticityModel& model);

// Pruefer angle theta(d; mu) of the solution with phi(0) = 0, phi'(0) = 1.
double pruefer_angle(const StreamSolution& stream, const VorticityModel& model, double mu);

DispersionSpectrum sturm_liouville_spectrum(const StreamSolution& stream, const VorticityModel& model, int k_max,
                                            MuWindow window);
DispersionSpectrum sturm_liouville_spectrum(const StreamSolution& stream, const VorticityModel& model, int k_max);

// Eigenvalues only (no eigenfunction grids); negative count written to *negative when given.
std::vector<double> sturm_liouville_eigenvalues(const StreamSolution& stream, const VorticityModel& model, int k_max,
                                                MuWindow window, int* negative = nullptr);

int negative_count(const StreamSolution& stream, const VorticityModel& model);

std::vector<double> dirichlet_spectrum(double b, double d, int count);

struct SelectBReport {
    double b = 0.0;
    int negative_count = 0;
    std::vector<double> mu;         // first N + 1 eigenvalues
    std::vector<double> dirichlet;  // first N + 1 Dirichlet eigenvalues
    bool interlacing = false;
    std::vector<std::pair<double, int>> visited;  // (b, count) along the search
};

bool dirichlet_interlacing(const std::vector<double>& mu, const std::vector<double>& dirichlet);

SelectBReport select_b_report(int N, double d, double closeness);
double select_b(int N, double d, double closeness);
double default_closeness(double d);

}  // namespace vorwave
