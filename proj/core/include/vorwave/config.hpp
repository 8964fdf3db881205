#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace vorwave {

struct RunConfig {
    // problem
    int N = 1;
    double d = 1.0;
    std::optional<double> b;
    double closeness = 0.0;  // 0 selects default_closeness(d)

    // stream
    double stream_tol = 1e-12;

    // grid
    int z_nodes = 512;
    int x_intervals = 0;  // 0 selects default_intervals
    int points_per_wavelength = 16;
    int min_points = 64;

    // spectrum
    int modes = 0;  // 0 selects N + 1

    // isp
    std::string basis = "adapted";  // adapted | bumps
    int basis_count = 0;
    double basis_lo = 0.05;
    double basis_hi = 0.95;
    double basis_overlap = 0.5;
    double fd_step = 1e-5;
    double invert_tol = 1e-10;
    double invert_radius = 1.0;
    int q_max = 8;
    double tune_radius = 1.0;
    std::vector<double> mu_star;
    std::vector<int> harmonics;
    double Lambda_star = 0.0;

    // solver
    std::vector<double> t;
    double solver_tol = 1e-10;
    int max_iter = 200;
    double epsilon = 0.1;
    double delta_bound = 1e-2;

    // scan
    std::vector<double> direction;
    std::vector<double> amplitudes{1e-3, 2e-3, 4e-3, 8e-3};

    std::string out = "out";
    std::uint64_t seed = 0;
};

// Structured text (YAML). Unknown keys and malformed values are rejected with the field path.
RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Canonical form: fixed section and key order, 17 significant digits.
std::string serialize_config(const RunConfig& cfg);

void validate(const RunConfig& cfg);

}  // namespace vorwave
