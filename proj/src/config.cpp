#include "qvr/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qvr {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw config_error(key, "expected a number, got '" + text + "'");
    return v;
}

}  // namespace

KeyValues KeyValues::parse_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno),
                               "expected key = value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty())
            throw config_error("line " + std::to_string(lineno), "empty key");
        kv.kv_[key] = trim(s.substr(eq + 1));
    }
    return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

void KeyValues::set(const std::string& key, const std::string& value) {
    kv_[trim(key)] = trim(value);
}

bool KeyValues::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string KeyValues::get_string(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw config_error(key, "missing required key");
    return it->second;
}

std::string KeyValues::get_string(const std::string& key,
                                  const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key) const {
    return parse_number(key, get_string(key));
}

double KeyValues::get_double(const std::string& key, double fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : parse_number(key, it->second);
}

int KeyValues::get_int(const std::string& key, int fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    const double v = parse_number(key, it->second);
    if (v != std::floor(v)) throw config_error(key, "expected an integer");
    return static_cast<int>(v);
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw config_error(key, "expected true/false, got '" + it->second + "'");
}

std::vector<double> GridSpec::make() const {
    if (points < 1) throw config_error("grid.points", "need at least one point");
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = min;
        return g;
    }
    if (!(max > min))
        throw config_error("grid", "need min < max for a multi-point grid");
    if (log) {
        if (!(min > 0.0 && max > 0.0))
            throw config_error("grid", "log grid requires positive bounds");
        const double l0 = std::log(min), l1 = std::log(max);
        for (int i = 0; i < points; ++i)
            g[i] = std::exp(l0 + (l1 - l0) * i / (points - 1));
    } else {
        for (int i = 0; i < points; ++i)
            g[i] = min + (max - min) * i / (points - 1);
    }
    return g;
}

double PhysicalScale::omega_a_per_second() const {
    const double base = frequency_ghz * 1e9;
    return angular ? base : 2.0 * M_PI * base;
}

namespace {

const std::vector<std::string> kTasks = {
    "flux-density", "flux",   "pair-correlation", "voltage-noise", "squeezing",
    "wigner",       "negativity", "witness",      "stability"};

const std::vector<std::string> kSweepable = {
    "model.eta_over_eta_c", "model.gamma_over_omega_a", "model.epsilon_over_gamma",
    "model.omega_d", "model.omega_th_over_omega_a"};

double resolve_drive(const std::string& token, const ModelParams& partial) {
    if (token.rfind("resonant", 0) == 0) {
        int sub = 1;
        if (token.size() > 8) {
            if (token[8] != ':')
                throw config_error("model.omega_d", "malformed token '" + token + "'");
            try {
                sub = std::stoi(token.substr(9));
            } catch (...) {
                throw config_error("model.omega_d", "malformed token '" + token + "'");
            }
            if (sub < 1)
                throw config_error("model.omega_d",
                                   "resonant:n needs n >= 1, got '" + token + "'");
        }
        return 2.0 * effective_frequency(partial) / sub;
    }
    return parse_number("model.omega_d", token);
}

GridSpec grid_from(const KeyValues& kv, const std::string& prefix, double dmin,
                   double dmax, int dpoints) {
    GridSpec g;
    g.min = kv.get_double(prefix + ".min", dmin);
    g.max = kv.get_double(prefix + ".max", dmax);
    g.points = kv.get_int(prefix + ".points", dpoints);
    g.log = kv.get_bool(prefix + ".log", false);
    return g;
}

std::vector<double> parse_value_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        const std::string s = trim(cur);
        if (s.empty()) continue;
        out.push_back(parse_number(key, s));
    }
    return out;
}

std::optional<SweepAxis> sweep_axis_from(const KeyValues& kv,
                                         const std::string& axis_key,
                                         const std::string& values_key,
                                         const std::string& range_prefix) {
    if (!kv.has(axis_key)) return std::nullopt;
    SweepAxis ax;
    ax.key = kv.get_string(axis_key);
    if (std::find(kSweepable.begin(), kSweepable.end(), ax.key) == kSweepable.end())
        throw config_error(axis_key, "'" + ax.key + "' is not a sweepable ratio field");
    if (kv.has(values_key)) {
        ax.values = parse_value_list(values_key, kv.get_string(values_key));
    } else if (kv.has(range_prefix + ".min")) {
        ax.values = grid_from(kv, range_prefix, 0.0, 0.0, 0).make();
    }
    if (ax.values.empty()) throw config_error(values_key, "empty sweep");
    return ax;
}

}  // namespace

RunConfig resolve_config(const KeyValues& kv) {
    RunConfig rc;
    rc.raw = kv.entries();

    rc.task = kv.get_string("task", "flux-density");
    if (std::find(kTasks.begin(), kTasks.end(), rc.task) == kTasks.end())
        throw config_error("task", "unknown task '" + rc.task + "'");

    ModelParams m;
    m.omega_a = 1.0;
    const double eta_ratio = kv.get_double("model.eta_over_eta_c", 0.9);
    m.eta0 = eta_ratio * 0.25;
    m.gamma = kv.get_double("model.gamma_over_omega_a", 1e-2);
    m.epsilon = kv.get_double("model.epsilon_over_gamma", 1e-2) * m.gamma;
    m.omega_th = kv.get_double("model.omega_th_over_omega_a", 0.0);

    // Drive tokens resolve against the static coupling before validation.
    const std::string drive = kv.get_string("model.omega_d", "resonant");
    try {
        m.omega_d = resolve_drive(drive, m);
    } catch (const supercritical_parameter& e) {
        throw config_error("model.eta_over_eta_c", e.what());
    }

    const std::string order = kv.get_string("solver.order", "auto");
    if (order != "auto") {
        const int n = static_cast<int>(parse_number("solver.order", order));
        if (n < 1) throw config_error("solver.order", "order must be >= 1");
        rc.solver.fixed_order = n;
        m.n_harmonics = n;
    }
    rc.solver.rel_tol = kv.get_double("solver.rel_tol", 1e-8);
    rc.solver.max_order = kv.get_int("solver.max_order", 512);

    {
        const auto report = validate_report(m);
        if (!report.empty()) {
            std::string joined;
            for (const auto& r : report) joined += (joined.empty() ? "" : "; ") + r;
            throw config_error("model", joined);
        }
    }
    rc.model = m;

    rc.quad.rel_tol = kv.get_double("quad.rel_tol", 1e-8);
    rc.quad.max_panels = kv.get_int("quad.max_panels", 20000);
    if (kv.has("flux.window_min")) rc.flux_window.lo = kv.get_double("flux.window_min");
    if (kv.has("flux.window_max")) rc.flux_window.hi = kv.get_double("flux.window_max");

    rc.grid = grid_from(kv, "grid", 1e-3, 3.0 * m.omega_d, 400);
    rc.delta_omega = kv.get_double("grid.delta_omega", 0.0);

    const std::string theta = kv.get_string("theta", "opt");
    rc.theta = (theta == "opt") ? std::numeric_limits<double>::quiet_NaN()
                                : parse_number("theta", theta);

    rc.stability.omega_d =
        grid_from(kv, "stability.omega_d", 0.5 * m.omega_d, 1.5 * m.omega_d, 40);
    const std::string axis2 = kv.get_string("stability.axis2", "eta_over_eta_c");
    if (axis2 == "eta_over_eta_c") {
        rc.stability.kind = Axis2::eta_ratio;
        rc.stability.axis2 = grid_from(kv, "stability.eta_over_eta_c", 0.99, 0.9999, 40);
    } else if (axis2 == "epsilon_over_gamma") {
        rc.stability.kind = Axis2::epsilon;
        rc.stability.axis2 =
            grid_from(kv, "stability.epsilon_over_gamma", 0.0, 0.2, 40);
    } else {
        throw config_error("stability.axis2", "unknown axis '" + axis2 + "'");
    }

    if (auto ax = sweep_axis_from(kv, "sweep.axis", "sweep.values", "sweep.range"))
        rc.sweep.push_back(*ax);
    if (auto ax = sweep_axis_from(kv, "sweep.axis2", "sweep.values2", "sweep.range2")) {
        if (rc.sweep.empty())
            throw config_error("sweep.axis2", "sweep.axis2 given without sweep.axis");
        rc.sweep.push_back(*ax);
    }

    if (kv.has("physical.omega_a_ghz")) {
        PhysicalScale ps;
        ps.frequency_ghz = kv.get_double("physical.omega_a_ghz");
        ps.angular = kv.get_bool("physical.angular", true);
        if (!(ps.frequency_ghz > 0.0))
            throw config_error("physical.omega_a_ghz", "must be positive");
        rc.physical = ps;
    }

    rc.out_path = kv.get_string("output.path", "out.csv");
    rc.format = kv.get_string("output.format", "csv");
    if (rc.format != "csv" && rc.format != "json")
        throw config_error("output.format", "expected csv or json");

    const int threads = kv.get_int("threads", 0);
    if (threads < 0) throw config_error("threads", "must be >= 0");
    rc.exec.threads = threads;
    rc.exec.parallel = threads != 1;
    return rc;
}

}  // namespace qvr
