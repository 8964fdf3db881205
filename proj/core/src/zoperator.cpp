#include "vorwave/zoperator.hpp"

#include "vorwave/error.hpp"
#include "vorwave/grid.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace vorwave {

Eigen::VectorXd ZOperator::mass() const {
    Eigen::VectorXd e = Eigen::VectorXd::Ones(size());
    e(size() - 1) = 0.0;
    return e;
}

Eigen::SparseMatrix<double> ZOperator::shifted(double k_squared) const {
    Eigen::SparseMatrix<double> A = L;
    for (int i = 0; i + 1 < size(); ++i) A.coeffRef(i, i) -= k_squared;
    A.makeCompressed();
    return A;
}

ZOperator make_z_operator(const StreamSolution& stream, const VorticityModel& model) {
    ZOperator op;
    op.grid = stream.grid;
    op.kappa = kappa(stream, model);
    const int n = op.grid.n;
    const double h = op.grid.h();
    op.omega_prime.resize(n);
    for (int i = 0; i < n; ++i) op.omega_prime[i] = omega_prime_eval(model, stream.u[i]);
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 1; i < n - 1; ++i) {
        const auto s = diff2_stencil(n, h, i);
        for (size_t k = 0; k < s.w.size(); ++k) {
            const int node = s.first + static_cast<int>(k);
            if (node > 0) t.emplace_back(i - 1, node - 1, s.w[k]);
        }
        t.emplace_back(i - 1, i - 1, op.omega_prime[i]);
    }
    const auto s = diff1_stencil(n, h, n - 1);
    for (size_t k = 0; k < s.w.size(); ++k) {
        const int node = s.first + static_cast<int>(k);
        if (node > 0) t.emplace_back(n - 2, node - 1, s.w[k]);
    }
    t.emplace_back(n - 2, n - 2, -op.kappa);
    op.L.resize(n - 1, n - 1);
    op.L.setFromTriplets(t.begin(), t.end());
    op.L.makeCompressed();
    return op;
}

double DiscreteSpectrum::project(int j, const Eigen::VectorXd& v) const {
    const int m = static_cast<int>(psi[j].size());
    return psi[j].head(m - 1).dot(v.segment(1, m - 1));
}

double DiscreteSpectrum::pair(int j, const Eigen::VectorXd& w) const { return psi[j].dot(w); }

namespace {

struct InverseIteration {
    double mu;
    Eigen::VectorXd vec;
};

InverseIteration inverse_iteration(const Eigen::SparseMatrix<double>& L, const Eigen::VectorXd& e, double shift,
                                   bool transpose, int j) {
    Eigen::SparseMatrix<double> A = L;
    for (int i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += shift * e(i);
    if (transpose) A = Eigen::SparseMatrix<double>(A.transpose());
    A.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "shifted operator singular at mode " << j + 1;
        fail(ErrorKind::SingularMode, "discrete_spectrum", msg.str());
    }
    Eigen::VectorXd x = Eigen::VectorXd::Ones(A.rows());
    x(A.rows() - 1) = 0.0;
    double rho = 0.0, prev = 0.0;
    for (int it = 0; it < 100; ++it) {
        Eigen::VectorXd y = lu.solve(e.cwiseProduct(x));
        rho = y.dot(x) / x.dot(x);
        x = y / y.norm();
        if (it > 2 && std::abs(rho - prev) <= 1e-15 * std::abs(rho)) break;
        prev = rho;
    }
    return {shift - 1.0 / rho, x};
}

}  // namespace

DiscreteSpectrum discrete_spectrum(const StreamSolution& stream, const VorticityModel& model, int count,
                                   const ZOperator* op_in) {
    if (count < 1) fail(ErrorKind::Validation, "discrete_spectrum", "count must be positive");
    ZOperator local;
    if (!op_in) local = make_z_operator(stream, model);
    const ZOperator& op = op_in ? *op_in : local;
    const auto cont = sturm_liouville_spectrum(stream, model, count);
    DiscreteSpectrum out;
    out.kappa = op.kappa;
    out.grid = op.grid;
    out.negative_count = cont.negative_count;
    const Eigen::VectorXd e = op.mass();
    const int n = op.grid.n;
    const auto w = gregory_weights(n, op.grid.h());
    for (int j = 0; j < count; ++j) {
        const double shift = cont.pairs[j].mu;
        out.continuous_mu.push_back(shift);
        // a second pass with the refined shift sharpens the eigenvalue to rounding level
        auto right = inverse_iteration(op.L, e, shift * (1 + 1e-9) + 1e-9, false, j);
        right = inverse_iteration(op.L, e, right.mu + 1e-10 * std::max(1.0, std::abs(right.mu)), false, j);
        auto left = inverse_iteration(op.L, e, right.mu + 1e-10 * std::max(1.0, std::abs(right.mu)), true, j);
        Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
        phi.tail(n - 1) = right.vec;
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += w[i] * phi(i) * phi(i);
        phi /= std::sqrt(nrm);
        if (phi(1) < 0) phi = -phi;
        Eigen::VectorXd psi = left.vec;
        const double s = psi.dot(e.cwiseProduct(phi.tail(n - 1)));
        if (std::abs(s) < 1e-300) fail(ErrorKind::SingularMode, "discrete_spectrum", "left and right vectors are orthogonal");
        psi /= s;
        out.mu.push_back(right.mu);
        out.phi.push_back(phi);
        out.psi.push_back(psi);
    }
    for (int j = 1; j < count; ++j)
        if (!(out.mu[j] > out.mu[j - 1])) fail(ErrorKind::CountChanged, "discrete_spectrum", "inverse iteration returned eigenvalues out of order");
    for (int j = 0; j < count; ++j)
        for (int l = 0; l < count; ++l) {
            const double g = out.psi[j].dot(e.cwiseProduct(out.phi[l].tail(n - 1)));
            out.biorthogonality_error = std::max(out.biorthogonality_error, std::abs(g - (j == l ? 1.0 : 0.0)));
        }
    return out;
}

}  // namespace vorwave
