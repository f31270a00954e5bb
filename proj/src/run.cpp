#include "qvr/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "qvr/version.hpp"

namespace qvr {

namespace {

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void base_provenance(const RunConfig& rc, ResultTable& t) {
    t.provenance["version"] = version;
    t.provenance["task"] = rc.task;
    t.provenance["config_hash"] = config_hash(rc.raw);
    t.provenance["generated"] = timestamp_utc();
}

int representative_order(const RunConfig& rc) {
    if (rc.solver.fixed_order) return *rc.solver.fixed_order;
    return converged_coefficients(rc.model, 0.5 * rc.model.omega_d, rc.solver).order;
}

double theta_or_opt(const RunConfig& rc, double Omega) {
    if (!std::isnan(rc.theta)) return rc.theta;
    try {
        return optimal_angle(rc.model, Omega, Omega, rc.solver);
    } catch (const undefined_angle&) {
        return 0.0;  // unsqueezed state
    }
}

// Per-point numerical failures surface with the grid point attached.
template <typename F>
auto at_point(const char* label, double x, F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << e.what() << " (at " << label << " = " << format_double(x) << ")";
        throw std::runtime_error(msg.str());
    }
}

ResultTable task_flux_density(const RunConfig& rc) {
    ResultTable t;
    t.columns = {"omega_over_omega_a", "n_out"};
    t.units = {{"omega_over_omega_a", "omega_a"}, {"n_out", "dimensionless"}};
    const auto grid = rc.grid.make();
    const auto vals = map_grid(
        grid,
        [&](double w) {
            return at_point("omega", w, [&] {
                return std::max(0.0, flux_density(rc.model, w, rc.solver));
            });
        },
        rc.exec);
    for (std::size_t i = 0; i < grid.size(); ++i)
        t.rows.push_back({grid[i], vals[i]});
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

ResultTable task_flux(const RunConfig& rc) {
    ResultTable t;
    const double flux = photon_flux(rc.model, rc.flux_window, rc.solver, rc.quad);
    if (rc.physical) {
        t.columns = {"n_out_total", "n_out_per_second"};
        t.units = {{"n_out_total", "omega_a"}, {"n_out_per_second", "1/s"}};
        t.rows.push_back({flux, flux * rc.physical->omega_a_per_second()});
        t.provenance["flux_scale"] = rc.physical->angular ? "rad_per_s" : "cycles_per_s";
    } else {
        t.columns = {"n_out_total"};
        t.units = {{"n_out_total", "omega_a"}};
        t.rows.push_back({flux});
    }
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

ResultTable task_pair_correlation(const RunConfig& rc) {
    ResultTable t;
    t.columns = {"delta_omega_over_omega_a", "re_value", "im_value", "abs_value"};
    const double half = 0.5 * rc.model.omega_d;
    GridSpec g = rc.grid;
    if (!std::isfinite(g.max) || g.max >= half) g.max = 0.45 * rc.model.omega_d;
    if (g.points > 1 && !(g.min < g.max))
        throw config_error("grid", "detuning grid must start below 0.45 omega_d");
    const auto dws = g.make();
    std::vector<std::vector<double>> rows(dws.size());
    for_each_index(
        dws.size(),
        [&](std::size_t i) {
            const auto pc = at_point("delta_omega", dws[i], [&] {
                return pair_correlation(rc.model, half - dws[i], half + dws[i],
                                        rc.solver);
            });
            rows[i] = {dws[i], std::real(pc.value), std::imag(pc.value),
                       std::abs(pc.value)};
        },
        rc.exec);
    t.rows = std::move(rows);
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

ResultTable task_voltage_noise(const RunConfig& rc) {
    ResultTable t;
    t.columns = {"omega_over_omega_a", "integrand"};
    GridSpec g = rc.grid;
    const double half = 0.5 * rc.model.omega_d;
    if (!(g.max < half)) g.max = 0.9 * half;
    if (!(g.min > 0.0)) g.min = 0.02 * half;
    if (!(g.min < g.max))
        throw config_error("grid", "voltage-noise grid must lie inside (0, omega_d/2)");
    const auto ws = g.make();
    const auto vals = map_grid(
        ws,
        [&](double w) {
            return at_point("omega", w, [&] {
                return voltage_noise_integrand(rc.model, w, rc.solver);
            });
        },
        rc.exec);
    for (std::size_t i = 0; i < ws.size(); ++i) t.rows.push_back({ws[i], vals[i]});
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

ResultTable task_squeezing(const RunConfig& rc) {
    ResultTable t;
    const double Omega = 0.5 * rc.model.omega_d;
    GridSpec g = rc.grid;
    if (!(g.max < Omega)) g.max = 0.5 * Omega;
    if (g.min < 0.0) g.min = 0.0;
    if (g.points > 1 && !(g.min < g.max))
        throw config_error("grid", "detuning grid must start below omega_d/4");
    const auto r = squeeze_scan(rc.model, g.make(), rc.theta, Omega, rc.solver, rc.exec);
    t.columns = {"delta_omega_over_omega_a", "s_value"};
    for (std::size_t i = 0; i < r.spectrum.grid.size(); ++i)
        t.rows.push_back({r.spectrum.grid[i], r.spectrum.values[i]});
    t.provenance["theta"] = format_double(r.theta);
    t.provenance["theta_opt"] = format_double(r.theta_opt);
    t.provenance["s_min"] = format_double(r.s_min);
    t.provenance["squeezing_percent"] = format_double(r.percent);
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

ResultTable task_wigner(const RunConfig& rc) {
    ResultTable t;
    const double Omega = 0.5 * rc.model.omega_d;
    const auto cov =
        covariance_matrix(rc.model, Omega + rc.delta_omega, Omega, rc.solver);
    const auto red = reduced_rotated_covariance(cov);
    GridSpec g = rc.grid;
    // A grid that never goes negative was left at task defaults; replace it
    // with a box of +-4 standard deviations of the wider principal axis.
    if (!(g.min < 0.0)) {
        const double span = 4.0 * std::sqrt(std::max(red(0, 0), red(1, 1)));
        g.min = -span;
        g.max = span;
    }
    if (g.points > 161) g.points = 161;
    const auto axis = g.make();
    t.columns = {"lambda1", "lambda2", "density"};
    const double det = red.determinant();
    if (!(det > 0.0)) throw invalid_state("wigner: reduced covariance not positive");
    const Eigen::Matrix2d inv = red.inverse();
    for (const double l2 : axis)
        for (const double l1 : axis) {
            const Eigen::Vector2d v(l1, l2);
            const double dens =
                std::exp(-0.5 * v.dot(inv * v)) / (2.0 * M_PI * std::sqrt(det));
            t.rows.push_back({l1, l2, dens});
        }
    t.provenance["axis_ratio"] = format_double(principal_std_ratio(red));
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

ResultTable task_negativity(const RunConfig& rc) {
    ResultTable t;
    const double Omega = 0.5 * rc.model.omega_d;
    const auto cov =
        covariance_matrix(rc.model, Omega + rc.delta_omega, Omega, rc.solver);
    const auto n = log_negativity(cov);
    t.columns = {"log_negativity", "nu_minus"};
    t.units = {{"log_negativity", "nats"}};
    t.rows.push_back({n.log_negativity, n.nu_minus});
    t.provenance["log_base"] = "e";
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

ResultTable task_witness(const RunConfig& rc) {
    ResultTable t;
    const double Omega = 0.5 * rc.model.omega_d;
    const double theta = theta_or_opt(rc, Omega);
    GridSpec g = rc.grid;
    if (!(g.max < Omega)) g.max = 0.5 * Omega;
    if (g.min < 0.0) g.min = 0.0;
    if (g.points > 1 && !(g.min < g.max))
        throw config_error("grid", "detuning grid must start below omega_d/4");
    const auto dws = g.make();
    const auto vals = map_grid(
        dws,
        [&](double dw) {
            return at_point("delta_omega", dw, [&] {
                return nonclassicality_witness(rc.model, Omega + dw, Omega, theta,
                                               rc.solver);
            });
        },
        rc.exec);
    t.columns = {"delta_omega_over_omega_a", "witness"};
    for (std::size_t i = 0; i < dws.size(); ++i) t.rows.push_back({dws[i], vals[i]});
    t.provenance["theta"] = format_double(theta);
    t.provenance["n_used"] = std::to_string(representative_order(rc));
    return t;
}

// Config stability axes are ratio-valued (eta/eta_c, epsilon/gamma); the
// epsilon axis converts to absolute units for the map and keeps the ratio
// values for the emitted table.
StabilityMap compute_stability_map(const RunConfig& rc) {
    std::vector<double> axis2 = rc.stability.axis2.make();
    if (rc.stability.kind == Axis2::epsilon)
        for (double& v : axis2) v *= rc.model.gamma;
    return stability_map(rc.model, rc.stability.omega_d.make(), std::move(axis2),
                         rc.stability.kind, {}, {}, rc.exec);
}

double axis2_table_value(const RunConfig& rc, double map_value) {
    return rc.stability.kind == Axis2::epsilon ? map_value / rc.model.gamma
                                               : map_value;
}

ResultTable stability_table(const RunConfig& rc, const StabilityMap& map) {
    ResultTable t;
    const std::string axis2_name = rc.stability.kind == Axis2::eta_ratio
                                       ? "eta_over_eta_c"
                                       : "epsilon_over_gamma";
    t.columns = {"omega_d_over_omega_a", axis2_name, "stable", "margin"};
    for (std::size_t row = 0; row < map.axis2.size(); ++row)
        for (std::size_t col = 0; col < map.omega_d.size(); ++col) {
            const auto& c = map.at(row, col);
            t.rows.push_back({map.omega_d[col], axis2_table_value(rc, map.axis2[row]),
                              c.stable ? 1.0 : 0.0, c.margin});
        }
    t.provenance["hill_boundary_count"] = std::to_string(map.hill_boundaries.size());
    return t;
}

ResultTable task_stability(const RunConfig& rc) {
    return stability_table(rc, compute_stability_map(rc));
}

double sweep_scalar(const RunConfig& rc, ResultTable* detail) {
    const double Omega = 0.5 * rc.model.omega_d;
    if (rc.task == "flux-density")
        return flux_density(rc.model, Omega, rc.solver);
    if (rc.task == "flux")
        return photon_flux(rc.model, rc.flux_window, rc.solver, rc.quad);
    if (rc.task == "squeezing") {
        const double th = theta_or_opt(rc, Omega);
        return squeezing_spectrum(rc.model, rc.delta_omega, th, Omega, rc.solver);
    }
    if (rc.task == "negativity") {
        const auto cov =
            covariance_matrix(rc.model, Omega + rc.delta_omega, Omega, rc.solver);
        return log_negativity(cov).log_negativity;
    }
    if (rc.task == "witness") {
        const double th = theta_or_opt(rc, Omega);
        return nonclassicality_witness(rc.model, Omega + rc.delta_omega, Omega, th,
                                       rc.solver);
    }
    if (rc.task == "pair-correlation")
        return std::abs(anomalous_correlator(rc.model, Omega - rc.delta_omega,
                                             Omega + rc.delta_omega, rc.solver));
    if (rc.task == "voltage-noise")
        return voltage_noise_integrand(
            rc.model, rc.delta_omega > 0.0 ? rc.delta_omega : 0.1 * Omega, rc.solver);
    (void)detail;
    throw config_error("task", "task '" + rc.task + "' is not sweepable");
}

std::string sweep_column_name(const std::string& task) {
    if (task == "flux-density") return "n_out_at_half_drive";
    if (task == "flux") return "n_out_total";
    if (task == "squeezing") return "s_value";
    if (task == "negativity") return "log_negativity";
    if (task == "witness") return "witness";
    if (task == "pair-correlation") return "abs_pair_amplitude";
    if (task == "voltage-noise") return "integrand";
    return "value";
}

}  // namespace

ResultTable run_task(const RunConfig& rc) {
    ResultTable t;
    if (rc.task == "flux-density")
        t = task_flux_density(rc);
    else if (rc.task == "flux")
        t = task_flux(rc);
    else if (rc.task == "pair-correlation")
        t = task_pair_correlation(rc);
    else if (rc.task == "voltage-noise")
        t = task_voltage_noise(rc);
    else if (rc.task == "squeezing")
        t = task_squeezing(rc);
    else if (rc.task == "wigner")
        t = task_wigner(rc);
    else if (rc.task == "negativity")
        t = task_negativity(rc);
    else if (rc.task == "witness")
        t = task_witness(rc);
    else if (rc.task == "stability")
        t = task_stability(rc);
    else
        throw config_error("task", "unknown task '" + rc.task + "'");
    base_provenance(rc, t);
    return t;
}

ResultTable run_sweep(const RunConfig& rc, const ResultTable* existing) {
    if (rc.sweep.empty()) throw config_error("sweep.axis", "no sweep axis configured");

    const auto& a0 = rc.sweep[0];
    const bool two = rc.sweep.size() > 1;
    const std::size_t n0 = a0.values.size();
    const std::size_t n1 = two ? rc.sweep[1].values.size() : 1;
    const std::size_t total = n0 * n1;

    ResultTable t;
    t.columns = {a0.key};
    if (two) t.columns.push_back(rc.sweep[1].key);
    t.columns.push_back(sweep_column_name(rc.task));
    t.columns.push_back("n_used");
    t.rows.assign(total, {});
    t.row_errors.assign(total, "");

    // Completed rows from a previous partial run, keyed on formatted axis values.
    std::map<std::string, std::pair<std::vector<double>, std::string>> done;
    if (existing && existing->columns == t.columns) {
        for (std::size_t r = 0; r < existing->rows.size(); ++r) {
            const auto& row = existing->rows[r];
            if (row.size() != t.columns.size()) continue;
            std::string key = format_double(row[0]);
            if (two) key += "," + format_double(row[1]);
            const std::string err =
                existing->row_errors.empty() ? "" : existing->row_errors[r];
            if (err.empty() && !std::isnan(row[two ? 2 : 1]))
                done[key] = {row, err};
        }
    }

    for_each_index(
        total,
        [&](std::size_t i) {
            const std::size_t i0 = i / n1, i1 = i % n1;
            std::vector<double> axes{a0.values[i0]};
            if (two) axes.push_back(rc.sweep[1].values[i1]);

            std::string key = format_double(axes[0]);
            if (two) key += "," + format_double(axes[1]);
            if (const auto it = done.find(key); it != done.end()) {
                t.rows[i] = it->second.first;
                t.row_errors[i] = it->second.second;
                return;
            }

            std::vector<double> row = axes;
            try {
                KeyValues kv;
                for (const auto& [k, v] : rc.raw) kv.set(k, v);
                kv.set(a0.key, format_double(axes[0]));
                if (two) kv.set(rc.sweep[1].key, format_double(axes[1]));
                RunConfig point = resolve_config(kv);
                point.sweep.clear();
                point.exec.parallel = false;  // points already run in parallel
                row.push_back(sweep_scalar(point, nullptr));
                row.push_back(static_cast<double>(representative_order(point)));
            } catch (const std::exception& e) {
                row.resize(axes.size());
                row.push_back(std::nan(""));
                row.push_back(std::nan(""));
                t.row_errors[i] = e.what();
            }
            t.rows[i] = std::move(row);
        },
        rc.exec);

    base_provenance(rc, t);
    t.provenance["sweep_points"] = std::to_string(total);
    return t;
}

std::vector<std::string> run_to_files(const RunConfig& rc) {
    std::vector<std::string> written;
    if (!rc.sweep.empty()) {
        ResultTable existing;
        const ResultTable* prior = nullptr;
        if (std::filesystem::exists(rc.out_path)) {
            try {
                existing = read_table(rc.out_path, rc.format);
                prior = &existing;
            } catch (...) {
                prior = nullptr;  // unreadable partial file; recompute everything
            }
        }
        write_table(run_sweep(rc, prior), rc.out_path, rc.format);
        written.push_back(rc.out_path);
        return written;
    }

    if (rc.task == "stability") {
        const auto map = compute_stability_map(rc);
        ResultTable t = stability_table(rc, map);
        base_provenance(rc, t);
        write_table(t, rc.out_path, rc.format);
        written.push_back(rc.out_path);

        ResultTable b;
        b.columns = {"axis2_value", "omega_d_over_omega_a", "parity_odd"};
        for (const auto& bd : map.hill_boundaries)
            b.rows.push_back({axis2_table_value(rc, map.axis2[bd.row]), bd.omega_d,
                              bd.parity == HillParity::odd ? 1.0 : 0.0});
        base_provenance(rc, b);
        const std::string bpath = rc.out_path + ".boundaries";
        write_table(b, bpath, rc.format);
        written.push_back(bpath);
        return written;
    }

    const ResultTable t = run_task(rc);
    write_table(t, rc.out_path, rc.format);
    written.push_back(rc.out_path);
    return written;
}

}  // namespace qvr
