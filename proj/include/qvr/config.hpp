#ifndef QVR_CONFIG_HPP
#define QVR_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qvr/correlators.hpp"
#include "qvr/stability.hpp"

namespace qvr {

/// Flat key/value configuration with dotted paths, e.g.
/// `model.eta_over_eta_c = 0.99`. Lines starting with # are comments.
class KeyValues {
  public:
    static KeyValues parse_text(const std::string& text);
    static KeyValues parse_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    bool log = false;

    std::vector<double> make() const;
};

struct SweepAxis {
    std::string key;  ///< config key the axis varies
    std::vector<double> values;
};

struct PhysicalScale {
    double frequency_ghz = 0.0;  ///< omega_a expressed in GHz
    bool angular = true;         ///< true: the number is rad/s; false: cycles/s

    /// omega_a in 1/s for flux conversion (cycles pick up the 2 pi).
    double omega_a_per_second() const;
};

struct StabilityAxes {
    GridSpec omega_d;
    GridSpec axis2;
    Axis2 kind = Axis2::eta_ratio;
};

/// Fully resolved run: dimensionless ModelParams (omega_a = 1), task, grids,
/// output destination. `resonant` / `resonant:n` drive tokens are resolved
/// before validation.
struct RunConfig {
    ModelParams model;
    std::string task;
    SolverOptions solver;
    QuadOptions quad;
    FluxWindow flux_window;
    GridSpec grid;
    double delta_omega = 0.0;  ///< mode offset for pointwise tasks
    double theta = std::numeric_limits<double>::quiet_NaN();  ///< NaN = theta_opt
    StabilityAxes stability;
    std::vector<SweepAxis> sweep;
    std::optional<PhysicalScale> physical;
    std::string out_path = "out.csv";
    std::string format = "csv";
    Exec exec;
    std::map<std::string, std::string> raw;  ///< canonical snapshot for hashing
};

/// Validates and resolves a key/value set into a RunConfig; throws
/// config_error with the offending field path.
RunConfig resolve_config(const KeyValues& kv);

}  // namespace qvr

#endif
