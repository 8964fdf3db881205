#pragma once

#include "vorwave/spectrum.hpp"
#include "vorwave/stream.hpp"
#include "vorwave/vorticity.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace vorwave {

// Fourth-order finite-difference form of phi'' + omega'(u) phi on the nodes 1..n-1 of the stream grid,
// closed by the Robin row phi'(d) - kappa phi(d) at the top node; phi(0) = 0 is eliminated.
// Unknowns are indexed 0..n-2 for grid nodes 1..n-1.
struct ZOperator {
    UniformGrid grid;
    double kappa = 0.0;
    std::vector<double> omega_prime;  // at grid nodes
    Eigen::SparseMatrix<double> L;

    int size() const { return grid.n - 1; }
    // Mass vector: 1 on interior rows, 0 on the Robin row.
    Eigen::VectorXd mass() const;
    // L - k^2 E
    Eigen::SparseMatrix<double> shifted(double k_squared) const;
};

ZOperator make_z_operator(const StreamSolution& stream, const VorticityModel& model);

// Eigenpairs of L phi = -mu E phi with right vectors phi_j and left vectors psi_j, psi_j^T E phi_l = delta_jl.
// phi_j is scaled to unit Gregory L2 norm with phi_j positive next to the bottom.
struct DiscreteSpectrum {
    double kappa = 0.0;
    UniformGrid grid;
    std::vector<double> mu;
    std::vector<Eigen::VectorXd> phi;  // length n, grid nodes 0..n-1 (phi(0) = 0)
    std::vector<Eigen::VectorXd> psi;  // length n - 1, unknown indexing
    std::vector<double> continuous_mu; // the Pruefer values used as shifts
    int negative_count = 0;
    double biorthogonality_error = 0.0;

    int count() const { return static_cast<int>(mu.size()); }
    double phi_at_d(int j) const { return phi[j](phi[j].size() - 1); }
    // psi_j^T E v for v given at nodes 0..n-1.
    double project(int j, const Eigen::VectorXd& v) const;
    // psi_j^T w for w in unknown indexing (interior rows then the Robin row).
    double pair(int j, const Eigen::VectorXd& w) const;
};

DiscreteSpectrum discrete_spectrum(const StreamSolution& stream, const VorticityModel& model, int count,
                                   const ZOperator* op = nullptr);

}  // namespace vorwave
