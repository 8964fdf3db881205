#include "vorwave/stream.hpp"

#include "vorwave/error.hpp"
#include "vorwave/ode.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <iomanip>
#include <sstream>

namespace vorwave {

const char* to_string(StreamMethod m) { return m == StreamMethod::ClosedForm ? "closed_form" : "shooting"; }

double bernoulli_constant(double slope_at_surface, double d) {
    return (slope_at_surface * slope_at_surface + 2.0 * d) / 3.0;
}

void check_nonresonant(double b, double d) {
    if (!(d > 0.0)) fail(ErrorKind::Validation, "check_nonresonant", "depth must be positive");
    if (b == 0.0) return;
    const double x = 2.0 * d * std::sqrt(b) / std::numbers::pi;
    const double j = std::round(x);
    if (j >= 1.0 && std::abs(x - j) <= 1e-9 * j) {
        std::ostringstream msg;
        msg << "sqrt(b) = pi*j/(2d) with j = " << static_cast<long long>(j) << " (b = " << b << ", d = " << d << ")";
        fail(ErrorKind::NearResonance, "check_nonresonant", msg.str());
    }
}

namespace {

void finalize(StreamSolution& s, const char* op) {
    s.slope_at_surface = s.u_prime.back();
    if (!(std::abs(s.slope_at_surface) > 1e-10)) {
        std::ostringstream msg;
        msg << "surface slope u'(d) = " << s.slope_at_surface;
        fail(ErrorKind::DegenerateSlope, op, msg.str());
    }
    s.r = bernoulli_constant(s.slope_at_surface, s.d);
}

}  // namespace

StreamSolution linear_stream(double b, double d, int nodes) {
    check_nonresonant(b, d);
    if (b < 0.0) fail(ErrorKind::Validation, "linear_stream", "b must be nonnegative");
    StreamSolution s;
    s.d = d;
    s.grid = UniformGrid{d, nodes};
    s.z = s.grid.nodes();
    s.u.resize(nodes);
    s.u_prime.resize(nodes);
    s.u_second.resize(nodes);
    s.method = StreamMethod::ClosedForm;
    if (b == 0.0) {
        for (int i = 0; i < nodes; ++i) {
            s.u[i] = s.z[i] / d;
            s.u_prime[i] = 1.0 / d;
            s.u_second[i] = 0.0;
        }
        s.shooting_slope = 1.0 / d;
    } else {
        const double q = std::sqrt(b);
        const double sd = std::sin(q * d);
        for (int i = 0; i < nodes; ++i) {
            s.u[i] = std::sin(q * s.z[i]) / sd;
            s.u_prime[i] = q * std::cos(q * s.z[i]) / sd;
            s.u_second[i] = -b * s.u[i];
        }
        s.u.back() = 1.0;
        s.shooting_slope = q / sd;
    }
    finalize(s, "linear_stream");
    return s;
}

StreamSolution solve_stream(const VorticityModel& model, double d, const StreamOptions& opt) {
    model.validate();
    check_nonresonant(model.b, d);
    const double q = std::sqrt(model.b);
    double slope = model.b == 0.0 ? 1.0 / d : q / std::sin(q * d);

    const Rhs rhs = [&model](const State& x, State& dx, double) {
        dx[0] = x[1];
        dx[1] = -omega_eval(model, x[0]);
        dx[2] = x[3];
        dx[3] = -omega_prime_eval(model, x[0]) * x[2];
    };
    const OdeTolerance ode{1e-14, 1e-13};

    bool converged = false;
    double mismatch = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    std::ostringstream history;
    for (int it = 0; it < opt.max_newton; ++it) {
        State x{0.0, slope, 0.0, 1.0};
        integrate_span(rhs, x, 0.0, d, ode);
        mismatch = x[0] - 1.0;
        history << mismatch << ' ';
        if (!std::isfinite(mismatch) || x[2] == 0.0) break;
        const double step = mismatch / x[2];
        slope -= step;
        const bool floor = std::abs(mismatch) <= opt.tol && std::abs(mismatch) > 0.5 * std::abs(previous);
        if (std::abs(mismatch) <= 1e-14 || std::abs(step) <= 1e-15 * std::abs(slope) || floor) {
            converged = true;
            break;
        }
        previous = mismatch;
    }
    if (!converged) fail(ErrorKind::NoConvergence, "solve_stream", "shooting mismatch history: " + history.str());

    StreamSolution s;
    s.d = d;
    s.grid = UniformGrid{d, opt.nodes};
    s.z = s.grid.nodes();
    s.u.resize(opt.nodes);
    s.u_prime.resize(opt.nodes);
    s.u_second.resize(opt.nodes);
    s.shooting_slope = slope;
    s.method = StreamMethod::Shooting;
    State x{0.0, slope, 0.0, 1.0};
    integrate_nodes(rhs, x, s.z, ode, [&s, &model](const State& st, int i) {
        s.u[i] = st[0];
        s.u_prime[i] = st[1];
        s.u_second[i] = -omega_eval(model, st[0]);
    });
    double scale = 1.0;
    for (double v : s.u) scale = std::max(scale, std::abs(v));
    if (std::abs(s.u.back() - 1.0) > opt.tol * scale || std::abs(s.u.front()) > opt.tol) {
        std::ostringstream msg;
        msg << "boundary mismatch after shooting: u(d) - 1 = " << s.u.back() - 1.0;
        fail(ErrorKind::NoConvergence, "solve_stream", msg.str());
    }
    finalize(s, "solve_stream");
    return s;
}

double stream_ode_residual(const StreamSolution& s, const VorticityModel& model) {
    const auto upp = diff1(s.u_prime, s.grid.h());
    double worst = 0.0;
    for (size_t i = 1; i + 1 < s.u.size(); ++i)
        worst = std::max(worst, std::abs(upp[i] + omega_eval(model, s.u[i])));
    return worst;
}

namespace {

void require_first_order(double b, double d, const char* op) {
    if (!(b > 0.0)) fail(ErrorKind::Validation, op, "first-order streams need b > 0");
    check_nonresonant(b, d);
}

}  // namespace

FirstOrderStreams first_order_streams(const VorticityModel& model, double b, double d, int nodes) {
    require_first_order(b, d, "first_order_streams");
    const double q = std::sqrt(b);
    const double sd = std::sin(q * d);
    const UniformGrid grid{d, nodes};
    const auto z = grid.nodes();
    FirstOrderStreams out;
    for (const auto& bump : model.basis) {
        auto u0 = [&](double p) { return std::sin(q * p) / sd; };
        auto fc = [&](double p) { return bump.value(u0(p)) * std::cos(q * p); };
        auto fs = [&](double p) { return bump.value(u0(p)) * std::sin(q * p); };
        std::vector<double> ic(nodes, 0.0), is(nodes, 0.0);
        for (int i = 1; i < nodes; ++i) {
            const auto rc = integrate_adaptive(fc, z[i - 1], z[i], 1, "first_order_streams");
            const auto rs = integrate_adaptive(fs, z[i - 1], z[i], 1, "first_order_streams");
            ic[i] = ic[i - 1] + rc.value;
            is[i] = is[i - 1] + rs.value;
            out.max_error_estimate = std::max({out.max_error_estimate, rc.error, rs.error});
        }
        const double c = (std::sin(q * d) * ic.back() - std::cos(q * d) * is.back()) / sd;
        std::vector<double> u(nodes), up(nodes);
        for (int i = 0; i < nodes; ++i) {
            const double s = std::sin(q * z[i]), co = std::cos(q * z[i]);
            u[i] = c * s / q - (s * ic[i] - co * is[i]) / q;
            up[i] = c * co - (co * ic[i] + s * is[i]);
        }
        out.c.push_back(c);
        out.slope_at_surface.push_back(up.back());
        out.u.push_back(std::move(u));
        out.u_prime.push_back(std::move(up));
    }
    return out;
}

std::vector<double> surface_slope_first_order(const VorticityModel& model, double b, double d,
                                              SurfaceSlopeForms* forms) {
    require_first_order(b, d, "surface_slope_first_order");
    const double q = std::sqrt(b);
    const double sd = std::sin(q * d);
    SurfaceSlopeForms local;
    const int panels = 32;
    for (const auto& bump : model.basis) {
        auto u0 = [&](double p) { return std::sin(q * p) / sd; };
        const auto ia = integrate_adaptive([&](double z) { return bump.value(u0(z)) * std::sin(q * z); }, 0.0, d,
                                           panels, "surface_slope_first_order");
        const auto ic = integrate_adaptive(
            [&](double z) {
                const double co = std::cos(q * z);
                return bump.derivative(u0(z)) * co * co;
            },
            0.0, d, panels, "surface_slope_first_order");
        const double a = -ia.value / sd;
        const double c = -ic.value / (sd * sd);
        // the derivative form cancels heavily when u0 sweeps a bump many times
        const double floor = 1e-12 * (ia.l1 / std::abs(sd) + ic.l1 / (sd * sd));
        if (std::abs(a - c) > 1e-8 * std::max(1.0, std::abs(a)) + floor) {
            std::ostringstream msg;
            msg << std::setprecision(17) << "integral forms disagree: " << a << " vs " << c;
            fail(ErrorKind::PathDisagreement, "surface_slope_first_order", msg.str());
        }
        local.via_omega.push_back(a);
        local.via_omega_prime.push_back(c);
    }
    if (forms) *forms = local;
    return local.via_omega;
}

}  // namespace vorwave
