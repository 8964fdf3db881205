#include "vorwave/spectrum.hpp"

#include "vorwave/error.hpp"
#include "vorwave/ode.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace vorwave {

namespace {

constexpr double pi = std::numbers::pi;
const OdeTolerance prufer_tol{1e-14, 1e-14};

double robin_angle(double kap) { return std::atan2(1.0, kap); }

int count_below(double theta, double beta) {
    const double x = (theta - beta) / pi;
    const double nearest = std::round(x);
    if (std::abs(x - nearest) < 1e-10 && nearest >= 0.0) return static_cast<int>(nearest);
    return std::max(0, static_cast<int>(std::floor(x)) + 1);
}

}  // namespace

std::vector<double> DispersionSpectrum::eigenvalues() const {
    std::vector<double> out;
    for (const auto& p : pairs) out.push_back(p.mu);
    return out;
}

MuWindow default_window(double b, double d, int k_max) {
    const double top = pi * (k_max + 2) / d;
    return {-b - 10.0, 10.0 * top * top};
}

double kappa(const StreamSolution& stream, const VorticityModel& model) {
    const double k = stream.slope_at_surface;
    if (!(std::abs(k) > 1e-10)) fail(ErrorKind::DegenerateSlope, "kappa", "u'(d) vanishes");
    return 1.0 / (k * k) - omega_eval(model, 1.0) / k;
}

double pruefer_angle(const StreamSolution& stream, const VorticityModel& model, double mu) {
    const Rhs rhs = [&model, mu](const State& x, State& dx, double) {
        dx[0] = x[1];
        dx[1] = -omega_eval(model, x[0]);
        const double c = std::cos(x[2]), s = std::sin(x[2]);
        dx[2] = c * c + (mu + omega_prime_eval(model, x[0])) * s * s;
    };
    State x{0.0, stream.shooting_slope, 0.0};
    integrate_span(rhs, x, 0.0, stream.d, prufer_tol);
    return x[2];
}

int negative_count(const StreamSolution& stream, const VorticityModel& model) {
    const double beta = robin_angle(kappa(stream, model));
    return count_below(pruefer_angle(stream, model, 0.0), beta);
}

namespace {

EigenPair eigenfunction(const StreamSolution& stream, const VorticityModel& model, double mu) {
    const Rhs rhs = [&model, mu](const State& x, State& dx, double) {
        dx[0] = x[1];
        dx[1] = -omega_eval(model, x[0]);
        dx[2] = x[3];
        dx[3] = -(mu + omega_prime_eval(model, x[0])) * x[2];
    };
    const int n = stream.grid.n;
    EigenPair e;
    e.mu = mu;
    e.phi.resize(n);
    e.phi_prime.resize(n);
    State x{0.0, stream.shooting_slope, 0.0, 1.0};
    integrate_nodes(rhs, x, stream.z, prufer_tol, [&e](const State& s, int i) {
        e.phi[i] = s[2];
        e.phi_prime[i] = s[3];
    });
    const auto w = gregory_weights(n, stream.grid.h());
    double nrm2 = 0.0;
    for (int i = 0; i < n; ++i) nrm2 += w[i] * e.phi[i] * e.phi[i];
    e.normalization = std::sqrt(nrm2);
    for (int i = 0; i < n; ++i) {
        e.phi[i] /= e.normalization;
        e.phi_prime[i] /= e.normalization;
    }
    e.phi_at_d = e.phi.back();
    return e;
}

}  // namespace

std::vector<double> sturm_liouville_eigenvalues(const StreamSolution& stream, const VorticityModel& model, int k_max,
                                                MuWindow window, int* negative) {
    if (k_max < 1) fail(ErrorKind::Validation, "sturm_liouville_spectrum", "k_max must be at least 1");
    if (!(window.lo < window.hi)) fail(ErrorKind::Validation, "sturm_liouville_spectrum", "empty mu window");
    const double beta = robin_angle(kappa(stream, model));
    auto theta = [&](double mu) { return pruefer_angle(stream, model, mu); };

    double lo = window.lo;
    double theta_lo = theta(lo);
    for (int expand = 0; theta_lo >= beta; ++expand) {
        if (expand > 60) fail(ErrorKind::BracketFailure, "sturm_liouville_spectrum", "no lower bracket for mu_1");
        lo -= std::max(10.0, std::abs(lo));
        theta_lo = theta(lo);
    }
    const double theta_hi = theta(window.hi);
    if (count_below(theta_hi, beta) < k_max) {
        std::ostringstream msg;
        msg << "only " << count_below(theta_hi, beta) << " eigenvalues below " << window.hi << ", need " << k_max;
        fail(ErrorKind::WindowTooSmall, "sturm_liouville_spectrum", msg.str());
    }

    std::vector<double> mus;
    const double scale = std::max(1.0, (pi / stream.d) * (pi / stream.d));
    for (int j = 1; j <= k_max; ++j) {
        const double target = beta + (j - 1) * pi;
        auto f = [&](double mu) { return theta(mu) - target; };
        double a = lo, fa = theta_lo - target;
        double step = scale;
        double b = a + step, fb = f(b);
        while (fb < 0.0) {
            a = b;
            fa = fb;
            step *= 2.0;
            b = std::min(a + step, window.hi);
            fb = f(b);
            if (b == window.hi && fb < 0.0)
                fail(ErrorKind::BracketFailure, "sturm_liouville_spectrum", "eigenvalue " + std::to_string(j) + " not bracketed");
        }
        double mu = b;
        if (fb != 0.0) {
            std::uintmax_t iters = 200;
            auto tol = [](double x, double y) { return std::abs(x - y) <= 2e-15 * std::max(1.0, std::abs(x)); };
            const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
            mu = 0.5 * (r.first + r.second);
            if (iters >= 200) fail(ErrorKind::BracketFailure, "sturm_liouville_spectrum", "refinement did not terminate");
        }
        if (!mus.empty() && !(mu > mus.back()))
            fail(ErrorKind::BracketFailure, "sturm_liouville_spectrum", "eigenvalues not strictly ordered");
        mus.push_back(mu);
        lo = mu;
        theta_lo = target;
    }
    if (negative) *negative = count_below(theta(0.0), beta);
    return mus;
}

DispersionSpectrum sturm_liouville_spectrum(const StreamSolution& stream, const VorticityModel& model, int k_max,
                                            MuWindow window) {
    DispersionSpectrum spec;
    spec.grid = stream.grid;
    spec.kappa = kappa(stream, model);
    const auto mus = sturm_liouville_eigenvalues(stream, model, k_max, window, &spec.negative_count);
    for (double mu : mus) spec.pairs.push_back(eigenfunction(stream, model, mu));
    return spec;
}

DispersionSpectrum sturm_liouville_spectrum(const StreamSolution& stream, const VorticityModel& model, int k_max) {
    return sturm_liouville_spectrum(stream, model, k_max, default_window(model.b, stream.d, k_max));
}

std::vector<double> dirichlet_spectrum(double b, double d, int count) {
    if (count < 1) fail(ErrorKind::Validation, "dirichlet_spectrum", "count must be at least 1");
    std::vector<double> out(count);
    for (int j = 1; j <= count; ++j) {
        const double q = pi * j / d;
        out[j - 1] = q * q - b;
    }
    return out;
}

bool dirichlet_interlacing(const std::vector<double>& mu, const std::vector<double>& dirichlet) {
    if (mu.empty() || dirichlet.empty()) return false;
    if (!(mu[0] < dirichlet[0])) return false;
    for (size_t j = 1; j < mu.size() && j < dirichlet.size(); ++j) {
        if (!(mu[j] < 0.0)) break;
        if (!(dirichlet[j - 1] < mu[j] && mu[j] < dirichlet[j])) return false;
    }
    return true;
}

double default_closeness(double d) { return 0.1 * (pi / d) * (pi / d); }

SelectBReport select_b_report(int N, double d, double closeness) {
    if (N < 1) fail(ErrorKind::Validation, "select_b", "N must be at least 1");
    if (!(d > 0.0)) fail(ErrorKind::Validation, "select_b", "depth must be positive");
    if (!(closeness > 0.0)) fail(ErrorKind::Validation, "select_b", "closeness must be positive");
    const double unit = (pi / d) * (pi / d);
    const double top = pi * N / d;
    double b = (N == 1) ? unit - closeness : top * top + closeness;

    SelectBReport rep;
    auto count_at = [&](double bb) -> int {
        for (int nudge = 0; nudge < 8; ++nudge) {
            try {
                check_nonresonant(bb, d);
                const auto s = linear_stream(bb, d, 16);
                const int c = negative_count(s, linear_model(bb));
                rep.visited.emplace_back(bb, c);
                b = bb;
                return c;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::NearResonance && e.kind() != ErrorKind::DegenerateSlope) throw;
                bb += 1e-3 * unit;
            }
        }
        fail(ErrorKind::SearchExhausted, "select_b", "could not leave resonant set");
    };

    int count = count_at(b);
    double step = 0.25 * unit;
    int direction = 0;
    for (int it = 0; count != N; ++it) {
        if (it > 64) {
            std::ostringstream msg;
            msg << "counts observed:";
            for (const auto& [bb, c] : rep.visited) msg << " (b=" << bb << ", " << c << ")";
            fail(ErrorKind::SearchExhausted, "select_b", msg.str());
        }
        const int want = count < N ? 1 : -1;
        if (direction != 0 && want != direction) step *= 0.5;
        direction = want;
        double next = b + want * step;
        if (next <= 0.0) next = 0.5 * b;
        count = count_at(next);
    }
    rep.b = b;
    rep.negative_count = count;
    const auto s = linear_stream(b, d);
    const auto spec = sturm_liouville_spectrum(s, linear_model(b), N + 1);
    rep.mu = spec.eigenvalues();
    rep.dirichlet = dirichlet_spectrum(b, d, N + 1);
    rep.interlacing = dirichlet_interlacing(rep.mu, rep.dirichlet);
    if (!rep.interlacing) fail(ErrorKind::SearchExhausted, "select_b", "Dirichlet interlacing violated at selected b");
    return rep;
}

double select_b(int N, double d, double closeness) { return select_b_report(N, d, closeness).b; }

}  // namespace vorwave
