#pragma once

#include "vorwave/fourier.hpp"
#include "vorwave/grid.hpp"
#include "vorwave/stream.hpp"
#include "vorwave/vorticity.hpp"
#include "vorwave/zoperator.hpp"

#include <Eigen/Dense>

#include <vector>

namespace vorwave {

// Stream, discrete z-operator and its leading eigenpairs for one vorticity model.
struct Background {
    VorticityModel model;
    StreamSolution stream;
    ZOperator op;
    DiscreteSpectrum spectrum;

    double k() const { return stream.slope_at_surface; }
    double d() const { return stream.d; }
};

Background make_background(const VorticityModel& model, double d, int z_nodes, int count,
                           const StreamOptions& stream_options = {});

struct ModalState {
    std::vector<double> t;        // surface amplitudes
    std::vector<double> mu_star;
    std::vector<double> k;
    std::vector<int> n;           // k_j = n_j * 2 pi / Lambda_star
    double Lambda_star = 0.0;
    double epsilon = 0.1;
    double delta_bound = 1e-2;

    int size() const { return static_cast<int>(t.size()); }
};

ModalState make_modal_state(const std::vector<double>& t, const std::vector<double>& mu_star,
                            const std::vector<int>& harmonics, double Lambda_star, double epsilon = 0.1,
                            double delta_bound = 1e-2);

enum class Frame { Flattened, Physical };
const char* to_string(Frame f);

// Even, Lambda-periodic field stored on the half period x in [0, Lambda/2]; the other half is its mirror.
struct WaveField {
    CosineGrid x;
    UniformGrid z;
    Eigen::MatrixXd Phi;   // x nodes by z nodes
    Eigen::VectorXd eta;
    Frame frame = Frame::Flattened;

    // Nodes on [-Lambda/2, Lambda/2] and the matching row index into Phi.
    std::vector<double> x_full() const;
    std::vector<int> full_index() const;
};

WaveField zero_field(const CosineGrid& x, const UniformGrid& z, double d);

// Reduced-coordinate amplitude a_j of cos(k_j x) phi_j producing surface amplitude t_j.
double reduced_amplitude(double t, double slope_at_surface, double phi_at_d);

WaveField assemble_linear(const ModalState& modal, const DiscreteSpectrum& spectrum, const StreamSolution& stream,
                          const CosineGrid& x);

Eigen::VectorXd surface_from_flat(const Eigen::MatrixXd& Phi, const StreamSolution& stream);
Eigen::VectorXd surface_from_flat(const WaveField& field, const StreamSolution& stream);

struct PhysicalField {
    WaveField strip;                         // Phi_hat on the flattened strip, frame = Physical
    std::vector<std::vector<double>> y;      // per x node: uniform nodes on [0, eta(x)]
    std::vector<std::vector<double>> psi;    // stream function at those nodes
    double bottom_mismatch = 0.0;            // max |psi(x, 0)|
    double surface_mismatch = 0.0;           // max |psi(x, eta) - 1|
};

// Phi_hat = Phi + u + z u'(eta - d)/d and psi(x, y) = Phi_hat(x, y d / eta) by cubic interpolation in z.
PhysicalField to_physical(const WaveField& field, const StreamSolution& stream, int y_nodes = 0);

// Recovers the flattened Phi from a physical field by interpolating psi at y = z eta / d.
Eigen::MatrixXd flatten(const PhysicalField& physical, const StreamSolution& stream);

struct ModalProjection {
    std::vector<Eigen::VectorXd> profiles;  // Phi_j(x) = psi_j^T E Phi(x, .)
    WaveField tilde;
};

ModalProjection project_modal(const WaveField& field, const DiscreteSpectrum& spectrum, int count);

}  // namespace vorwave
