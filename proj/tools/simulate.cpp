#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlcsim/mlcsim.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ',')) out.push_back(mlc::detail::trim(tok));
    return out;
}

void print_summary(const mlc::SweepTable& table) {
    auto num = [](double v) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(3) << v;
        return s.str();
    };
    std::cout << std::left << std::setw(16) << "param" << std::right << std::setw(6) << "runs"
              << std::setw(12) << "mean_fnd" << std::setw(12) << "mean_hnd" << std::setw(15)
              << "mean_overhead" << std::setw(12) << "mean_hops" << '\n';
    for (const auto& [label, result] : table) {
        auto opt = [&](const std::optional<double>& v) {
            return v ? num(*v) : std::string("censored");
        };
        std::cout << std::left << std::setw(16) << label << std::right << std::setw(6)
                  << result.outcomes.size() << std::setw(12) << opt(result.mean_fnd)
                  << std::setw(12) << opt(result.mean_hnd) << std::setw(15)
                  << num(result.mean_overhead) << std::setw(12) << num(result.mean_hops) << '\n';
        if (result.censored_runs > 0)
            std::cout << "  (" << result.censored_runs
                      << " run(s) hit the round cap; excluded from fnd/hnd means)\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Round-based lifetime simulator for multi-level clustering protocols"};
    std::string config_path;
    std::string out_dir;
    std::string format = "both";
    std::string sweep_arg;
    std::vector<std::string> sets;
    bool series = false;
    app.add_option("config", config_path, "Path to a key = value config file")->required();
    app.add_option("--set", sets, "Override a config key after parsing (key=value)");
    app.add_option("--out", out_dir, "Output directory (default: $MLCSIM_OUT_DIR or .)");
    app.add_option("--format", format, "Output files to write")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--sweep", sweep_arg, "Sweep one parameter: name=value1,value2,...");
    app.add_flag("--series", series, "Keep per-round series in the JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad invocation is a configuration error
    }

    mlc::SimConfig cfg;
    std::optional<mlc::SweepSpec> spec;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "config error: cannot read '" << config_path << "'\n";
            return 2;
        }
        std::stringstream buf;
        buf << in.rdbuf();
        mlc::ParsedConfig parsed = mlc::parse_config(buf.str());
        cfg = parsed.config;
        std::vector<std::string> keys_seen = parsed.keys_seen;
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw mlc::ConfigError("--set expects key=value, got '" + kv + "'");
            const std::string key = mlc::detail::trim(kv.substr(0, eq));
            const std::string value = mlc::detail::trim(kv.substr(eq + 1));
            mlc::apply_key(cfg, key, value, "--set " + kv);
            keys_seen.push_back(key);
        }
        cfg.validate();
        if (!sweep_arg.empty()) {
            const auto eq = sweep_arg.find('=');
            if (eq == std::string::npos)
                throw mlc::ConfigError("--sweep expects name=v1,v2,..., got '" + sweep_arg + "'");
            spec = mlc::SweepSpec{mlc::detail::trim(sweep_arg.substr(0, eq)),
                                  split_csv(sweep_arg.substr(eq + 1))};
            spec->validate();
            for (const std::string& v : spec->values) {
                mlc::SimConfig probe = cfg;  // surface bad sweep values before running
                mlc::apply_key(probe, spec->parameter, v, "sweep value '" + v + "'");
                probe.validate();
            }
        }
        for (const std::string& w : mlc::config_warnings(cfg, keys_seen))
            std::cerr << "warning: " << w << '\n';
    } catch (const mlc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        const mlc::SweepTable table =
            spec ? mlc::sweep(cfg, *spec, series)
                 : mlc::single_table(mlc::run_experiment(cfg, series));

        std::filesystem::path dir = ".";
        if (!out_dir.empty()) {
            dir = out_dir;
        } else if (const char* env = std::getenv("MLCSIM_OUT_DIR"); env && *env) {
            dir = env;
        }
        std::filesystem::create_directories(dir);
        if (format == "csv" || format == "both") {
            const auto path = dir / "results.csv";
            mlc::emit_csv(table, path.string());
            std::cout << "wrote " << path.string() << '\n';
        }
        if (format == "json" || format == "both") {
            const auto path = dir / "results.json";
            mlc::emit_json(table, path.string());
            std::cout << "wrote " << path.string() << '\n';
        }
        print_summary(table);
        return 0;
    } catch (const mlc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
