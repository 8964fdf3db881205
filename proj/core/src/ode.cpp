#include "vorwave/ode.hpp"

#include <boost/numeric/odeint.hpp>

namespace vorwave {

namespace odeint = boost::numeric::odeint;

namespace {

auto make_stepper(OdeTolerance tol) {
    return odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
}

}  // namespace

void integrate_span(const Rhs& rhs, State& x, double t0, double t1, OdeTolerance tol) {
    if (t1 == t0) return;
    odeint::integrate_adaptive(make_stepper(tol), rhs, x, t0, t1, (t1 - t0) / 64.0);
}

void integrate_nodes(const Rhs& rhs, State& x, const std::vector<double>& times, OdeTolerance tol,
                     const std::function<void(const State&, int)>& observe) {
    int index = 0;
    auto observer = [&](const State& s, double) { observe(s, index++); };
    const double dt = (times.back() - times.front()) / (4.0 * static_cast<double>(times.size()));
    odeint::integrate_times(make_stepper(tol), rhs, x, times.begin(), times.end(), dt, observer);
}

}  // namespace vorwave
