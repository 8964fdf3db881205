#include "vorwave/wavefield.hpp"

#include "vorwave/error.hpp"

#include <cmath>
#include <sstream>

namespace vorwave {

Background make_background(const VorticityModel& model, double d, int z_nodes, int count,
                           const StreamOptions& stream_options) {
    Background bg;
    bg.model = model;
    StreamOptions opt = stream_options;
    opt.nodes = z_nodes;
    bg.stream = solve_stream(model, d, opt);
    bg.op = make_z_operator(bg.stream, model);
    bg.spectrum = discrete_spectrum(bg.stream, model, count, &bg.op);
    return bg;
}

ModalState make_modal_state(const std::vector<double>& t, const std::vector<double>& mu_star,
                            const std::vector<int>& harmonics, double Lambda_star, double epsilon,
                            double delta_bound) {
    const size_t N = mu_star.size();
    if (t.size() != N) fail(ErrorKind::Validation, "ModalState", "t must have one amplitude per mode");
    if (harmonics.size() != N) fail(ErrorKind::Validation, "ModalState", "one harmonic index per mode");
    if (!(Lambda_star > 0.0)) fail(ErrorKind::Validation, "ModalState", "Lambda_star must be positive");
    ModalState m;
    m.t = t;
    m.mu_star = mu_star;
    m.n = harmonics;
    m.Lambda_star = Lambda_star;
    m.epsilon = epsilon;
    m.delta_bound = delta_bound;
    const double alpha = 2 * std::acos(-1.0) / Lambda_star;
    for (size_t j = 0; j < N; ++j) {
        const double k = harmonics[j] * alpha;
        if (std::abs(k * k + mu_star[j]) > 1e-9 * std::max(1.0, std::abs(mu_star[j]))) {
            std::ostringstream msg;
            msg << "mode " << j + 1 << ": k^2 = " << k * k << " does not match -mu* = " << -mu_star[j];
            fail(ErrorKind::Validation, "ModalState", msg.str());
        }
        m.k.push_back(k);
    }
    return m;
}

const char* to_string(Frame f) { return f == Frame::Flattened ? "flattened" : "physical"; }

std::vector<double> WaveField::x_full() const {
    std::vector<double> out;
    const int m = x.intervals();
    for (int i = -m; i <= m; ++i) out.push_back(i < 0 ? -x.node(-i) : x.node(i));
    return out;
}

std::vector<int> WaveField::full_index() const {
    std::vector<int> out;
    const int m = x.intervals();
    for (int i = -m; i <= m; ++i) out.push_back(std::abs(i));
    return out;
}

WaveField zero_field(const CosineGrid& x, const UniformGrid& z, double d) {
    WaveField f;
    f.x = x;
    f.z = z;
    f.Phi = Eigen::MatrixXd::Zero(x.size(), z.n);
    f.eta = Eigen::VectorXd::Constant(x.size(), d);
    return f;
}

double reduced_amplitude(double t, double slope_at_surface, double phi_at_d) {
    if (std::abs(phi_at_d) < 1e-14)
        fail(ErrorKind::ZeroTraceEigenfunction, "assemble_linear", "eigenfunction vanishes at the surface");
    return -t * slope_at_surface / phi_at_d;
}

WaveField assemble_linear(const ModalState& modal, const DiscreteSpectrum& spectrum, const StreamSolution& stream,
                          const CosineGrid& x) {
    const int N = modal.size();
    if (spectrum.count() < N) fail(ErrorKind::Validation, "assemble_linear", "spectrum has fewer pairs than modes");
    if (spectrum.grid.n != stream.grid.n) fail(ErrorKind::Validation, "assemble_linear", "spectrum and stream grids differ");
    for (int j = 0; j < N; ++j)
        if (std::abs(spectrum.mu[j] - modal.mu_star[j]) > 1e-8 * std::max(1.0, std::abs(modal.mu_star[j]))) {
            std::ostringstream msg;
            msg << "mode " << j + 1 << ": spectrum eigenvalue " << spectrum.mu[j] << " differs from mu* " << modal.mu_star[j];
            fail(ErrorKind::Validation, "assemble_linear", msg.str());
        }
    WaveField f = zero_field(x, stream.grid, stream.d);
    for (int j = 0; j < N; ++j) {
        if (modal.t[j] == 0.0) continue;
        const double a = reduced_amplitude(modal.t[j], stream.slope_at_surface, spectrum.phi_at_d(j));
        for (int i = 0; i < x.size(); ++i) {
            const double c = a * std::cos(modal.k[j] * x.node(i));
            f.Phi.row(i) += c * spectrum.phi[j].transpose();
        }
    }
    f.eta = surface_from_flat(f.Phi, stream);
    return f;
}

Eigen::VectorXd surface_from_flat(const Eigen::MatrixXd& Phi, const StreamSolution& stream) {
    const double k = stream.slope_at_surface;
    if (k == 0.0) fail(ErrorKind::DegenerateSlope, "surface_from_flat", "u'(d) = 0");
    Eigen::VectorXd eta = Eigen::VectorXd::Constant(Phi.rows(), stream.d) - Phi.col(Phi.cols() - 1) / k;
    for (int i = 0; i < eta.size(); ++i)
        if (!(eta(i) > 0.0)) {
            std::ostringstream msg;
            msg << "eta = " << eta(i) << " at node " << i;
            fail(ErrorKind::NonpositiveDepth, "surface_from_flat", msg.str());
        }
    return eta;
}

Eigen::VectorXd surface_from_flat(const WaveField& field, const StreamSolution& stream) {
    return surface_from_flat(field.Phi, stream);
}

PhysicalField to_physical(const WaveField& field, const StreamSolution& stream, int y_nodes) {
    const int nz = field.z.n;
    if (stream.grid.n != nz) fail(ErrorKind::Validation, "to_physical", "field and stream grids differ");
    const int ny = y_nodes > 0 ? y_nodes : 2 * (nz - 1) + 1;
    const double d = stream.d;
    const Eigen::VectorXd eta = surface_from_flat(field.Phi, stream);
    PhysicalField out;
    out.strip = field;
    out.strip.frame = Frame::Physical;
    out.strip.eta = eta;
    for (int i = 0; i < field.x.size(); ++i) {
        const double ze = eta(i) - d;
        std::vector<double> col(nz);
        for (int m = 0; m < nz; ++m)
            col[m] = field.Phi(i, m) + stream.u[m] + stream.z[m] * stream.u_prime[m] * ze / d;
        for (int m = 0; m < nz; ++m) out.strip.Phi(i, m) = col[m];
        std::vector<double> y(ny), psi(ny);
        for (int q = 0; q < ny; ++q) {
            const double s = (q == ny - 1) ? 1.0 : static_cast<double>(q) / (ny - 1);
            y[q] = s * eta(i);
            psi[q] = interpolate_cubic(field.z, col, s * d);
        }
        out.bottom_mismatch = std::max(out.bottom_mismatch, std::abs(psi.front()));
        out.surface_mismatch = std::max(out.surface_mismatch, std::abs(psi.back() - 1.0));
        out.y.push_back(std::move(y));
        out.psi.push_back(std::move(psi));
    }
    return out;
}

Eigen::MatrixXd flatten(const PhysicalField& physical, const StreamSolution& stream) {
    const auto& strip = physical.strip;
    const int nz = strip.z.n;
    const double d = stream.d;
    Eigen::MatrixXd Phi(strip.x.size(), nz);
    for (int i = 0; i < strip.x.size(); ++i) {
        const auto& y = physical.y[i];
        const double eta = y.back();
        UniformGrid g{eta, static_cast<int>(y.size())};
        for (int m = 0; m < nz; ++m) {
            const double hat = interpolate_cubic(g, physical.psi[i], stream.z[m] * eta / d);
            Phi(i, m) = hat - stream.u[m] - stream.z[m] * stream.u_prime[m] * (eta - d) / d;
        }
    }
    return Phi;
}

ModalProjection project_modal(const WaveField& field, const DiscreteSpectrum& spectrum, int count) {
    if (count > spectrum.count()) fail(ErrorKind::Validation, "project_modal", "spectrum has fewer pairs than requested");
    if (field.z.n != spectrum.grid.n) fail(ErrorKind::Validation, "project_modal", "field and spectrum grids differ");
    ModalProjection out;
    out.tilde = field;
    for (int j = 0; j < count; ++j) {
        Eigen::VectorXd p(field.x.size());
        for (int i = 0; i < field.x.size(); ++i) p(i) = spectrum.project(j, field.Phi.row(i).transpose());
        out.tilde.Phi -= p * spectrum.phi[j].transpose();
        out.profiles.push_back(std::move(p));
    }
    return out;
}

}  // namespace vorwave
