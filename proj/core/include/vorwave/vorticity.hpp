#pragma once

#include <utility>
#include <vector>

namespace vorwave {

// Standard mollifier e*exp(-1/(1-s^2)) on (-1,1), scaled to unit maximum.
double mollifier(double s);
double mollifier_d1(double s);
double mollifier_d2(double s);
// Antiderivative from -1; mollifier_integral(1) is the total mass.
double mollifier_integral(double s);
double mollifier_mass();

struct MollifierAtom {
    double center = 0.5;
    double half_width = 0.1;
    double weight = 1.0;
};

enum class BumpShape {
    Profile,     // sum of weighted mollifiers
    Integrated,  // antiderivative of such a sum
};

class SmoothBump {
public:
    SmoothBump() = default;
    SmoothBump(std::vector<MollifierAtom> atoms, BumpShape shape);

    static SmoothBump on_interval(double lo, double hi);

    double value(double p) const;
    double derivative(double p) const;
    double second_derivative(double p) const;

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    BumpShape shape() const { return shape_; }
    const std::vector<MollifierAtom>& atoms() const { return atoms_; }
    std::vector<double> nodes() const;
    std::vector<double> coeffs() const;
    // Value carried to the right of the support (zero for Profile and balanced Integrated series).
    double tail() const { return tail_; }

    // Derivative of an Integrated bump as a Profile bump.
    SmoothBump derivative_bump() const;

private:
    std::vector<MollifierAtom> atoms_;
    BumpShape shape_ = BumpShape::Profile;
    double lo_ = 0.0;
    double hi_ = 0.0;
    double tail_ = 0.0;
};

struct BumpLayout {
    double lo = 0.1;
    double hi = 0.9;
    double overlap = 0.0;  // fraction of a cell width shared by neighbours
};

std::vector<std::pair<double, double>> layout_intervals(int n, const BumpLayout& layout);
std::vector<SmoothBump> make_bump_basis(int n, const BumpLayout& layout);
std::vector<SmoothBump> make_bump_basis(const std::vector<std::pair<double, double>>& intervals);

struct VorticityModel {
    double b = 1.0;
    std::vector<SmoothBump> basis;
    std::vector<double> delta;

    int size() const { return static_cast<int>(basis.size()); }
    bool unperturbed() const;
    void validate() const;
    VorticityModel with_delta(std::vector<double> d) const;
};

VorticityModel linear_model(double b);

double omega_eval(const VorticityModel& model, double p);
double omega_prime_eval(const VorticityModel& model, double p);
double omega_second_eval(const VorticityModel& model, double p);

}  // namespace vorwave
