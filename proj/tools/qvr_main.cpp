#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qvr/run.hpp"
#include "qvr/version.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qvr - vacuum-radiation observables of a periodically modulated "
        "dissipative mode near its critical point"};
    app.set_version_flag("--version", qvr::version);

    std::string config_path;
    std::string task;
    std::string out_path;
    std::string format;
    int threads = -1;
    std::vector<std::string> overrides;

    app.add_option("--config", config_path, "key/value configuration file");
    app.add_option("--task", task,
                   "flux-density|flux|pair-correlation|voltage-noise|squeezing|"
                   "wigner|negativity|witness|stability");
    app.add_option("--set", overrides, "override config entries, key=value")
        ->take_all();
    app.add_option("--out", out_path, "output file path");
    app.add_option("--format", format, "csv|json");
    app.add_option("--threads", threads, "worker threads (1 = serial)");

    CLI11_PARSE(app, argc, argv);

    try {
        qvr::KeyValues kv;
        if (!config_path.empty()) kv = qvr::KeyValues::parse_file(config_path);
        for (const auto& ov : overrides) {
            const auto eq = ov.find('=');
            if (eq == std::string::npos)
                throw qvr::config_error("--set", "expected key=value, got '" + ov + "'");
            kv.set(ov.substr(0, eq), ov.substr(eq + 1));
        }
        if (!task.empty()) kv.set("task", task);
        if (!out_path.empty()) kv.set("output.path", out_path);
        if (!format.empty()) kv.set("output.format", format);
        if (threads >= 0) kv.set("threads", std::to_string(threads));

        const qvr::RunConfig rc = qvr::resolve_config(kv);
        const auto files = qvr::run_to_files(rc);
        for (const auto& f : files) std::cout << "wrote " << f << "\n";
        return 0;
    } catch (const qvr::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const qvr::invalid_parameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
