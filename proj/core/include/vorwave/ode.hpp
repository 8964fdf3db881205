#pragma once

#include <functional>
#include <vector>

namespace vorwave {

using State = std::vector<double>;
using Rhs = std::function<void(const State&, State&, double)>;

struct OdeTolerance {
    double abs = 1e-13;
    double rel = 1e-13;
};

// Integrates from t0 to t1 with an embedded Dormand-Prince 5(4) pair; state updated in place.
void integrate_span(const Rhs& rhs, State& x, double t0, double t1, OdeTolerance tol);

// Integrates through the given increasing times, calling observe(state, index) at each.
void integrate_nodes(const Rhs& rhs, State& x, const std::vector<double>& times, OdeTolerance tol,
                     const std::function<void(const State&, int)>& observe);

}  // namespace vorwave
