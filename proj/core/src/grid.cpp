#include "vorwave/grid.hpp"

#include "vorwave/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vorwave {

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = node(i);
    return z;
}

namespace {

double binom(int k, int i) {
    double r = 1.0;
    for (int j = 1; j <= i; ++j) r = r * (k - i + j) / j;
    return r;
}

}  // namespace

std::vector<double> gregory_weights(int n, double h) {
    if (n < 2) fail(ErrorKind::Validation, "gregory_weights", "need at least 2 nodes");
    std::vector<double> w(n, h);
    w.front() = w.back() = 0.5 * h;
    if (n < 12) {
        if (n % 2 == 1 && n >= 3) {
            for (int i = 0; i < n; ++i) w[i] = h / 3.0 * (i == 0 || i == n - 1 ? 1.0 : (i % 2 ? 4.0 : 2.0));
        }
        return w;
    }
    static const double gamma[] = {1.0 / 12.0, 1.0 / 24.0, 19.0 / 720.0, 3.0 / 160.0, 863.0 / 60480.0};
    for (int k = 1; k <= 5; ++k) {
        const double g = gamma[k - 1] * h;
        const double left_sign = (k % 2 == 1) ? 1.0 : -1.0;
        for (int i = 0; i <= k; ++i) {
            const double c = binom(k, i);
            w[i] += left_sign * g * c * (((k - i) % 2) ? -1.0 : 1.0);
            w[n - 1 - i] -= g * c * ((i % 2) ? -1.0 : 1.0);
        }
    }
    return w;
}

double integrate(const std::vector<double>& weights, const std::vector<double>& f) {
    double s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += weights[i] * f[i];
    return s;
}

Stencil diff1_stencil(int n, double h, int i) {
    const double s = 1.0 / (12.0 * h);
    if (i == 0) return {0, {-25 * s, 48 * s, -36 * s, 16 * s, -3 * s}};
    if (i == 1) return {0, {-3 * s, -10 * s, 18 * s, -6 * s, 1 * s}};
    if (i == n - 1) return {n - 5, {3 * s, -16 * s, 36 * s, -48 * s, 25 * s}};
    if (i == n - 2) return {n - 5, {-1 * s, 6 * s, -18 * s, 10 * s, 3 * s}};
    return {i - 2, {1 * s, -8 * s, 0.0, 8 * s, -1 * s}};
}

Stencil diff2_stencil(int n, double h, int i) {
    const double s = 1.0 / (12.0 * h * h);
    if (i == 0) return {0, {45 * s, -154 * s, 214 * s, -156 * s, 61 * s, -10 * s}};
    if (i == 1) return {0, {10 * s, -15 * s, -4 * s, 14 * s, -6 * s, 1 * s}};
    if (i == n - 1) return {n - 6, {-10 * s, 61 * s, -156 * s, 214 * s, -154 * s, 45 * s}};
    if (i == n - 2) return {n - 6, {1 * s, -6 * s, 14 * s, -4 * s, -15 * s, 10 * s}};
    return {i - 2, {-1 * s, 16 * s, -30 * s, 16 * s, -1 * s}};
}

namespace {

double apply(const Stencil& st, const double* v) {
    double acc = 0.0;
    for (size_t k = 0; k < st.w.size(); ++k) acc += st.w[k] * v[st.first + k];
    return acc;
}

}  // namespace

double diff1_at(const double* v, int n, double h, int i) { return apply(diff1_stencil(n, h, i), v); }
double diff2_at(const double* v, int n, double h, int i) { return apply(diff2_stencil(n, h, i), v); }

std::vector<double> diff1(const std::vector<double>& v, double h) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = diff1_at(v.data(), n, h, i);
    return out;
}

std::vector<double> diff2(const std::vector<double>& v, double h) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = diff2_at(v.data(), n, h, i);
    return out;
}

namespace {

struct Panel {
    double lo, hi, value, error, l1;
};

Panel gk_panel(const std::function<double(double)>& f, double lo, double hi) {
    using boost::math::quadrature::gauss_kronrod;
    Panel p{lo, hi, 0.0, 0.0, 0.0};
    p.value = gauss_kronrod<double, 31>::integrate(f, lo, hi, 0, 0.0, &p.error, &p.l1);
    p.error *= 0.5 * (hi - lo);  // the non-adaptive path reports on the reference interval
    return p;
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, int panels,
                                    const std::string& operation, double tol) {
    std::vector<Panel> work;
    double l1 = 0.0;
    const double w = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        work.push_back(gk_panel(f, a + k * w, (k + 1 == panels) ? b : a + (k + 1) * w));
        l1 += work.back().l1;
    }
    const double budget = tol * std::max(1.0, l1);
    const double span = b - a;
    QuadratureResult out;
    out.l1 = l1;
    int splits = 0;
    while (!work.empty()) {
        Panel p = work.back();
        work.pop_back();
        const double share = budget * (p.hi - p.lo) / span;
        if (p.error <= share || p.error <= 1e-12 * p.l1 || splits > 200000 || (p.hi - p.lo) < 1e-12 * span) {
            out.value += p.value;
            out.error += p.error;
            continue;
        }
        ++splits;
        const double mid = 0.5 * (p.lo + p.hi);
        work.push_back(gk_panel(f, p.lo, mid));
        work.push_back(gk_panel(f, mid, p.hi));
    }
    if (!std::isfinite(out.value) || out.error > 1e-9 * std::max(1.0, l1)) {
        std::ostringstream msg;
        msg << "adaptive quadrature reached error estimate " << out.error << " (L1 " << l1 << ")";
        fail(ErrorKind::QuadratureFailure, operation, msg.str());
    }
    return out;
}

double interpolate_cubic(const UniformGrid& grid, const std::vector<double>& v, double z) {
    const double h = grid.h();
    const double tol = 1e-12 * grid.length;
    if (z < -tol || z > grid.length + tol)
        fail(ErrorKind::InterpolationRange, "interpolate_cubic", "abscissa " + std::to_string(z) + " outside grid");
    const int n = grid.n;
    int i0 = static_cast<int>(std::floor(z / h)) - 1;
    i0 = std::clamp(i0, 0, n - 4);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        const double za = (i0 + a) * h;
        for (int b = 0; b < 4; ++b) {
            if (b == a) continue;
            l *= (z - (i0 + b) * h) / (za - (i0 + b) * h);
        }
        acc += l * v[i0 + a];
    }
    return acc;
}

}  // namespace vorwave
