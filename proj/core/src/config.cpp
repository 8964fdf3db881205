#include "vorwave/config.hpp"

#include "vorwave/error.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vorwave {

namespace {

const std::vector<std::pair<std::string, std::vector<std::string>>>& schema() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> s{
        {"problem", {"N", "d", "b", "closeness"}},
        {"stream", {"tol"}},
        {"grid", {"z_nodes", "x_intervals", "points_per_wavelength", "min_points"}},
        {"spectrum", {"modes"}},
        {"isp",
         {"basis", "basis_count", "basis_lo", "basis_hi", "basis_overlap", "fd_step", "invert_tol", "invert_radius",
          "q_max", "tune_radius", "mu_star", "harmonics", "Lambda_star"}},
        {"solver", {"t", "tol", "max_iter", "epsilon", "delta_bound"}},
        {"scan", {"direction", "amplitudes"}},
        {"output", {"dir"}},
        {"seed", {}},
    };
    return s;
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
    fail(ErrorKind::Validation, "parse_config", "field " + path + ": " + what);
}

std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    if (m.is_null()) return "";
    std::ostringstream s;
    s << " (line " << m.line + 1 << ", column " << m.column + 1 << ")";
    return s.str();
}

template <class T>
T scalar(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) field_error(path, "expected a scalar" + where(n));
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        field_error(path, "cannot read '" + n.Scalar() + "'" + where(n));
    }
}

template <class T>
std::vector<T> sequence(const YAML::Node& n, const std::string& path) {
    if (n.IsNull()) return {};
    if (!n.IsSequence()) field_error(path, "expected a sequence" + where(n));
    std::vector<T> out;
    for (size_t i = 0; i < n.size(); ++i) out.push_back(scalar<T>(n[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

void check_keys(const YAML::Node& root) {
    if (root.IsNull()) return;
    if (!root.IsMap()) fail(ErrorKind::Validation, "parse_config", "top level must be a mapping");
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        auto it = std::find_if(schema().begin(), schema().end(), [&](const auto& s) { return s.first == key; });
        if (it == schema().end()) field_error(key, "unknown key" + where(kv.first));
        if (it->second.empty()) continue;
        if (kv.second.IsNull()) continue;
        if (!kv.second.IsMap()) field_error(key, "expected a mapping" + where(kv.second));
        for (const auto& inner : kv.second) {
            const auto name = inner.first.as<std::string>();
            if (std::find(it->second.begin(), it->second.end(), name) == it->second.end())
                field_error(key + "." + name, "unknown key" + where(inner.first));
        }
    }
}

void apply_override(YAML::Node& root, const std::string& item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) fail(ErrorKind::Validation, "parse_config", "override '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    YAML::Node value;
    try {
        value = YAML::Load(item.substr(eq + 1));
    } catch (const YAML::ParserException& e) {
        field_error(key, std::string("override value does not parse: ") + e.msg);
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        root[key] = value;
    } else {
        YAML::Node section = root[key.substr(0, dot)];
        section[key.substr(dot + 1)] = value;
    }
}

template <class F>
void read(const YAML::Node& root, const std::string& section, const std::string& key, F&& f) {
    if (!root[section] || root[section].IsNull()) return;
    const YAML::Node n = root[section][key];
    if (n) f(n, section + "." + key);
}

RunConfig from_yaml(YAML::Node root) {
    check_keys(root);
    RunConfig c;
    read(root, "problem", "N", [&](auto n, auto p) { c.N = scalar<int>(n, p); });
    read(root, "problem", "d", [&](auto n, auto p) { c.d = scalar<double>(n, p); });
    read(root, "problem", "b", [&](auto n, auto p) {
        if (!n.IsNull()) c.b = scalar<double>(n, p);
    });
    read(root, "problem", "closeness", [&](auto n, auto p) { c.closeness = scalar<double>(n, p); });
    read(root, "stream", "tol", [&](auto n, auto p) { c.stream_tol = scalar<double>(n, p); });
    read(root, "grid", "z_nodes", [&](auto n, auto p) { c.z_nodes = scalar<int>(n, p); });
    read(root, "grid", "x_intervals", [&](auto n, auto p) { c.x_intervals = scalar<int>(n, p); });
    read(root, "grid", "points_per_wavelength", [&](auto n, auto p) { c.points_per_wavelength = scalar<int>(n, p); });
    read(root, "grid", "min_points", [&](auto n, auto p) { c.min_points = scalar<int>(n, p); });
    read(root, "spectrum", "modes", [&](auto n, auto p) { c.modes = scalar<int>(n, p); });
    read(root, "isp", "basis", [&](auto n, auto p) { c.basis = scalar<std::string>(n, p); });
    read(root, "isp", "basis_count", [&](auto n, auto p) { c.basis_count = scalar<int>(n, p); });
    read(root, "isp", "basis_lo", [&](auto n, auto p) { c.basis_lo = scalar<double>(n, p); });
    read(root, "isp", "basis_hi", [&](auto n, auto p) { c.basis_hi = scalar<double>(n, p); });
    read(root, "isp", "basis_overlap", [&](auto n, auto p) { c.basis_overlap = scalar<double>(n, p); });
    read(root, "isp", "fd_step", [&](auto n, auto p) { c.fd_step = scalar<double>(n, p); });
    read(root, "isp", "invert_tol", [&](auto n, auto p) { c.invert_tol = scalar<double>(n, p); });
    read(root, "isp", "invert_radius", [&](auto n, auto p) { c.invert_radius = scalar<double>(n, p); });
    read(root, "isp", "q_max", [&](auto n, auto p) { c.q_max = scalar<int>(n, p); });
    read(root, "isp", "tune_radius", [&](auto n, auto p) { c.tune_radius = scalar<double>(n, p); });
    read(root, "isp", "mu_star", [&](auto n, auto p) { c.mu_star = sequence<double>(n, p); });
    read(root, "isp", "harmonics", [&](auto n, auto p) { c.harmonics = sequence<int>(n, p); });
    read(root, "isp", "Lambda_star", [&](auto n, auto p) { c.Lambda_star = scalar<double>(n, p); });
    read(root, "solver", "t", [&](auto n, auto p) { c.t = sequence<double>(n, p); });
    read(root, "solver", "tol", [&](auto n, auto p) { c.solver_tol = scalar<double>(n, p); });
    read(root, "solver", "max_iter", [&](auto n, auto p) { c.max_iter = scalar<int>(n, p); });
    read(root, "solver", "epsilon", [&](auto n, auto p) { c.epsilon = scalar<double>(n, p); });
    read(root, "solver", "delta_bound", [&](auto n, auto p) { c.delta_bound = scalar<double>(n, p); });
    read(root, "scan", "direction", [&](auto n, auto p) { c.direction = sequence<double>(n, p); });
    read(root, "scan", "amplitudes", [&](auto n, auto p) { c.amplitudes = sequence<double>(n, p); });
    read(root, "output", "dir", [&](auto n, auto p) { c.out = scalar<std::string>(n, p); });
    if (root["seed"]) c.seed = scalar<std::uint64_t>(root["seed"], "seed");
    validate(c);
    return c;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string list(const std::vector<T>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_floating_point_v<T>)
            s += num(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s + "]";
}

std::string quoted(const std::string& v) {
    YAML::Emitter e;
    e << YAML::DoubleQuoted << v;
    return e.c_str();
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void validate(const RunConfig& c) {
    if (c.N < 1) field_error("problem.N", "must be at least 1");
    if (!positive(c.d)) field_error("problem.d", "must be positive");
    if (c.b && !(std::isfinite(*c.b) && *c.b >= 0.0)) field_error("problem.b", "must be nonnegative");
    if (!(c.closeness >= 0.0)) field_error("problem.closeness", "must be nonnegative");
    if (!positive(c.stream_tol)) field_error("stream.tol", "must be positive");
    if (c.z_nodes < 16) field_error("grid.z_nodes", "must be at least 16");
    if (c.x_intervals < 0) field_error("grid.x_intervals", "must be nonnegative");
    if (c.points_per_wavelength < 4) field_error("grid.points_per_wavelength", "must be at least 4");
    if (c.min_points < 4) field_error("grid.min_points", "must be at least 4");
    if (c.modes < 0) field_error("spectrum.modes", "must be nonnegative");
    if (c.basis != "adapted" && c.basis != "bumps") field_error("isp.basis", "must be 'adapted' or 'bumps'");
    if (c.basis_count < 0) field_error("isp.basis_count", "must be nonnegative");
    if (!(c.basis_lo > 0.0 && c.basis_hi < 1.0 && c.basis_lo < c.basis_hi)) field_error("isp.basis_lo", "need 0 < basis_lo < basis_hi < 1");
    if (!(c.basis_overlap >= 0.0 && c.basis_overlap < 1.0)) field_error("isp.basis_overlap", "must lie in [0, 1)");
    if (!positive(c.fd_step)) field_error("isp.fd_step", "must be positive");
    if (!positive(c.invert_tol)) field_error("isp.invert_tol", "must be positive");
    if (!positive(c.invert_radius)) field_error("isp.invert_radius", "must be positive");
    if (c.q_max < 1) field_error("isp.q_max", "must be at least 1");
    if (!positive(c.tune_radius)) field_error("isp.tune_radius", "must be positive");
    if (!c.mu_star.empty()) {
        if (static_cast<int>(c.mu_star.size()) != c.N) field_error("isp.mu_star", "must have length N");
        if (c.harmonics.size() != c.mu_star.size()) field_error("isp.harmonics", "must have length N when mu_star is set");
        if (!positive(c.Lambda_star)) field_error("isp.Lambda_star", "must be positive when mu_star is set");
    }
    if (!c.t.empty() && static_cast<int>(c.t.size()) != c.N) field_error("solver.t", "must have length N");
    for (double v : c.t)
        if (!std::isfinite(v)) field_error("solver.t", "entries must be finite");
    if (!positive(c.solver_tol)) field_error("solver.tol", "must be positive");
    if (c.max_iter < 1) field_error("solver.max_iter", "must be at least 1");
    if (!positive(c.epsilon)) field_error("solver.epsilon", "must be positive");
    if (!positive(c.delta_bound)) field_error("solver.delta_bound", "must be positive");
    if (!c.direction.empty() && static_cast<int>(c.direction.size()) != c.N) field_error("scan.direction", "must have length N");
    for (double a : c.amplitudes)
        if (!(std::isfinite(a) && a >= 0.0)) field_error("scan.amplitudes", "entries must be nonnegative");
    if (c.out.empty()) field_error("output.dir", "must not be empty");
}

RunConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream msg;
        msg << "line " << e.mark.line + 1 << ", column " << e.mark.column + 1 << ": " << e.msg;
        fail(ErrorKind::Validation, "parse_config", msg.str());
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    for (const auto& o : overrides) apply_override(root, o);
    return from_yaml(root);
}

RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "parse_config", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream s;
    s << "problem:\n"
      << "  N: " << c.N << "\n"
      << "  d: " << num(c.d) << "\n"
      << "  b: " << (c.b ? num(*c.b) : std::string("null")) << "\n"
      << "  closeness: " << num(c.closeness) << "\n"
      << "stream:\n"
      << "  tol: " << num(c.stream_tol) << "\n"
      << "grid:\n"
      << "  z_nodes: " << c.z_nodes << "\n"
      << "  x_intervals: " << c.x_intervals << "\n"
      << "  points_per_wavelength: " << c.points_per_wavelength << "\n"
      << "  min_points: " << c.min_points << "\n"
      << "spectrum:\n"
      << "  modes: " << c.modes << "\n"
      << "isp:\n"
      << "  basis: " << c.basis << "\n"
      << "  basis_count: " << c.basis_count << "\n"
      << "  basis_lo: " << num(c.basis_lo) << "\n"
      << "  basis_hi: " << num(c.basis_hi) << "\n"
      << "  basis_overlap: " << num(c.basis_overlap) << "\n"
      << "  fd_step: " << num(c.fd_step) << "\n"
      << "  invert_tol: " << num(c.invert_tol) << "\n"
      << "  invert_radius: " << num(c.invert_radius) << "\n"
      << "  q_max: " << c.q_max << "\n"
      << "  tune_radius: " << num(c.tune_radius) << "\n"
      << "  mu_star: " << list(c.mu_star) << "\n"
      << "  harmonics: " << list(c.harmonics) << "\n"
      << "  Lambda_star: " << num(c.Lambda_star) << "\n"
      << "solver:\n"
      << "  t: " << list(c.t) << "\n"
      << "  tol: " << num(c.solver_tol) << "\n"
      << "  max_iter: " << c.max_iter << "\n"
      << "  epsilon: " << num(c.epsilon) << "\n"
      << "  delta_bound: " << num(c.delta_bound) << "\n"
      << "scan:\n"
      << "  direction: " << list(c.direction) << "\n"
      << "  amplitudes: " << list(c.amplitudes) << "\n"
      << "output:\n"
      << "  dir: " << quoted(c.out) << "\n"
      << "seed: " << c.seed << "\n";
    return s.str();
}

}  // namespace vorwave
