#include "vorwave/vorticity.hpp"

#include "vorwave/error.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vorwave {

double mollifier(double s) {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    return std::exp(1.0 - 1.0 / q);
}

double mollifier_d1(double s) {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    const double r = std::exp(1.0 - 1.0 / q);
    if (r == 0.0) return 0.0;
    return r * (-2.0 * s / (q * q));
}

double mollifier_d2(double s) {
    const double q = 1.0 - s * s;
    if (q <= 0.0) return 0.0;
    const double r = std::exp(1.0 - 1.0 / q);
    if (r == 0.0) return 0.0;
    const double g1 = -2.0 * s / (q * q);
    const double g2 = -(2.0 + 6.0 * s * s) / (q * q * q);
    return r * (g1 * g1 + g2);
}

namespace {

struct IntegralTable {
    static constexpr int cells = 2048;
    double h = 2.0 / cells;
    std::vector<double> value;

    IntegralTable() : value(cells + 1, 0.0) {
        using boost::math::quadrature::gauss;
        for (int k = 0; k < cells; ++k) {
            const double a = -1.0 + k * h;
            const double b = (k + 1 == cells) ? 1.0 : a + h;
            value[k + 1] = value[k] + gauss<double, 20>::integrate(mollifier, a, b);
        }
    }

    double operator()(double s) const {
        if (s <= -1.0) return 0.0;
        if (s >= 1.0) return value.back();
        const double x = (s + 1.0) / h;
        const int k = std::min(static_cast<int>(x), cells - 1);
        const double t = x - k;
        const double s0 = -1.0 + k * h;
        const double s1 = s0 + h;
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
        const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
        const double h2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
        const double h3 = 0.5 * (t3 - 2 * t4 + t5);
        const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
        const double h5 = 10 * t3 - 15 * t4 + 6 * t5;
        return value[k] * h0 + h * mollifier(s0) * h1 + h * h * mollifier_d1(s0) * h2 +
               h * h * mollifier_d1(s1) * h3 + h * mollifier(s1) * h4 + value[k + 1] * h5;
    }
};

const IntegralTable& integral_table() {
    static const IntegralTable table;
    return table;
}

}  // namespace

double mollifier_integral(double s) { return integral_table()(s); }

double mollifier_mass() { return integral_table().value.back(); }

SmoothBump::SmoothBump(std::vector<MollifierAtom> atoms, BumpShape shape) : atoms_(std::move(atoms)), shape_(shape) {
    if (atoms_.empty()) fail(ErrorKind::Validation, "SmoothBump", "no atoms");
    lo_ = std::numeric_limits<double>::infinity();
    hi_ = -lo_;
    double scale = 0.0;
    double mass = 0.0;
    for (const auto& a : atoms_) {
        if (!(a.half_width > 0.0)) fail(ErrorKind::Validation, "SmoothBump", "half width must be positive");
        lo_ = std::min(lo_, a.center - a.half_width);
        hi_ = std::max(hi_, a.center + a.half_width);
        mass += a.weight * a.half_width;
        scale += std::abs(a.weight * a.half_width);
    }
    if (shape_ == BumpShape::Integrated) {
        tail_ = mass * mollifier_mass();
        if (std::abs(mass) <= 1e-13 * scale) tail_ = 0.0;
    }
}

SmoothBump SmoothBump::on_interval(double lo, double hi) {
    return SmoothBump({MollifierAtom{0.5 * (lo + hi), 0.5 * (hi - lo), 1.0}}, BumpShape::Profile);
}

double SmoothBump::value(double p) const {
    if (p <= lo_) return 0.0;
    if (p >= hi_) return tail_;
    double acc = 0.0;
    if (shape_ == BumpShape::Profile) {
        for (const auto& a : atoms_) acc += a.weight * mollifier((p - a.center) / a.half_width);
    } else {
        for (const auto& a : atoms_) acc += a.weight * a.half_width * mollifier_integral((p - a.center) / a.half_width);
    }
    return acc;
}

double SmoothBump::derivative(double p) const {
    if (p <= lo_ || p >= hi_) return 0.0;
    double acc = 0.0;
    if (shape_ == BumpShape::Profile) {
        for (const auto& a : atoms_) acc += a.weight / a.half_width * mollifier_d1((p - a.center) / a.half_width);
    } else {
        for (const auto& a : atoms_) acc += a.weight * mollifier((p - a.center) / a.half_width);
    }
    return acc;
}

double SmoothBump::second_derivative(double p) const {
    if (p <= lo_ || p >= hi_) return 0.0;
    double acc = 0.0;
    if (shape_ == BumpShape::Profile) {
        for (const auto& a : atoms_)
            acc += a.weight / (a.half_width * a.half_width) * mollifier_d2((p - a.center) / a.half_width);
    } else {
        for (const auto& a : atoms_) acc += a.weight / a.half_width * mollifier_d1((p - a.center) / a.half_width);
    }
    return acc;
}

std::vector<double> SmoothBump::nodes() const {
    std::vector<double> out;
    for (const auto& a : atoms_) out.push_back(a.center);
    return out;
}

std::vector<double> SmoothBump::coeffs() const {
    std::vector<double> out;
    for (const auto& a : atoms_) out.push_back(a.weight);
    return out;
}

SmoothBump SmoothBump::derivative_bump() const {
    if (shape_ != BumpShape::Integrated) fail(ErrorKind::Validation, "derivative_bump", "bump is not an antiderivative");
    return SmoothBump(atoms_, BumpShape::Profile);
}

std::vector<std::pair<double, double>> layout_intervals(int n, const BumpLayout& layout) {
    if (n < 1) fail(ErrorKind::Validation, "make_bump_basis", "n must be at least 1");
    if (!(layout.lo < layout.hi)) fail(ErrorKind::Validation, "make_bump_basis", "empty layout interval");
    if (layout.overlap < 0.0) fail(ErrorKind::Validation, "make_bump_basis", "overlap must be nonnegative");
    const double w = (layout.hi - layout.lo) / n;
    const double pad = 0.5 * layout.overlap * w;
    std::vector<std::pair<double, double>> out;
    for (int i = 0; i < n; ++i) out.emplace_back(layout.lo + i * w - pad, layout.lo + (i + 1) * w + pad);
    return out;
}

std::vector<SmoothBump> make_bump_basis(const std::vector<std::pair<double, double>>& intervals) {
    std::vector<SmoothBump> out;
    for (const auto& [lo, hi] : intervals) {
        if (!(lo > 0.0) || !(hi < 1.0) || !(lo < hi)) {
            std::ostringstream msg;
            msg << "sub-interval [" << lo << ", " << hi << "] must lie strictly inside (0,1)";
            fail(ErrorKind::Validation, "make_bump_basis", msg.str());
        }
        out.push_back(SmoothBump::on_interval(lo, hi));
    }
    return out;
}

std::vector<SmoothBump> make_bump_basis(int n, const BumpLayout& layout) {
    return make_bump_basis(layout_intervals(n, layout));
}

bool VorticityModel::unperturbed() const {
    return std::all_of(delta.begin(), delta.end(), [](double x) { return x == 0.0; });
}

void VorticityModel::validate() const {
    if (!(b >= 0.0) || !std::isfinite(b)) fail(ErrorKind::Validation, "VorticityModel", "b must be a nonnegative finite number");
    if (basis.size() != delta.size())
        fail(ErrorKind::Validation, "VorticityModel", "basis and delta lengths differ");
    for (double x : delta)
        if (!std::isfinite(x)) fail(ErrorKind::Validation, "VorticityModel", "delta must be finite");
}

VorticityModel VorticityModel::with_delta(std::vector<double> d) const {
    VorticityModel m = *this;
    m.delta = std::move(d);
    m.validate();
    return m;
}

VorticityModel linear_model(double b) {
    VorticityModel m;
    m.b = b;
    return m;
}

double omega_eval(const VorticityModel& model, double p) {
    double acc = model.b * p;
    for (size_t j = 0; j < model.basis.size(); ++j)
        if (model.delta[j] != 0.0) acc += model.delta[j] * model.basis[j].value(p);
    return acc;
}

double omega_prime_eval(const VorticityModel& model, double p) {
    double acc = model.b;
    for (size_t j = 0; j < model.basis.size(); ++j)
        if (model.delta[j] != 0.0) acc += model.delta[j] * model.basis[j].derivative(p);
    return acc;
}

double omega_second_eval(const VorticityModel& model, double p) {
    double acc = 0.0;
    for (size_t j = 0; j < model.basis.size(); ++j)
        if (model.delta[j] != 0.0) acc += model.delta[j] * model.basis[j].second_derivative(p);
    return acc;
}

}  // namespace vorwave
