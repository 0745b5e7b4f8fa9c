#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdint/scenario.hpp"

// Scenario runner. Exit codes: 0 success, 2 config validation failure,
// 3 physics/numerics failure.

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw qdint::ValidationError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw qdint::ValidationError("cannot open output file: " + path);
    out << text;
}

std::vector<qdint::ParamValue> parse_sweep_values(const std::string& csv)
{
    std::vector<qdint::ParamValue> values;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double d = std::stod(item, &used);
            if (used == item.size()) {
                values.emplace_back(d);
                continue;
            }
        } catch (...) {
        }
        values.emplace_back(item);
    }
    return values;
}

// out.csv -> out.3.csv for sweep point 3
std::string indexed_path(const std::string& path, std::size_t idx)
{
    const std::size_t dot = path.find_last_of('.');
    const std::size_t slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "." + std::to_string(idx);
    return path.substr(0, dot) + "." + std::to_string(idx) + path.substr(dot);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qdint: quantum interference and correlated-decay scenario runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format;
    std::string sweep_spec;

    for (const std::string& name : qdint::known_scenarios()) {
        CLI::App* sub = app.add_subcommand(name, "run the '" + name + "' scenario");
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_path, "output path (default: config output or stdout)");
        sub->add_option("--format", format, "csv or json (overrides the config)");
        sub->add_option("--sweep", sweep_spec, "axis sweep, e.g. gamma12=0,0.5,1");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string scenario = app.get_subcommands().front()->get_name();

    try {
        qdint::ScenarioConfig cfg = qdint::parse_config(read_file(config_path));
        if (cfg.scenario.empty())
            cfg.scenario = scenario;
        else if (cfg.scenario != scenario)
            throw qdint::ValidationError("config scenario '" + cfg.scenario +
                                         "' does not match subcommand '" + scenario + "'");
        if (!format.empty()) {
            if (format != "csv" && format != "json")
                throw qdint::ValidationError("--format must be csv or json");
            cfg.format = format;
        }
        if (!out_path.empty())
            cfg.output = out_path;

        const auto render = [&](const qdint::ResultEnvelope& env) {
            return cfg.format == "json" ? qdint::render_json(env) : qdint::render_csv(env);
        };

        if (sweep_spec.empty()) {
            const qdint::ResultEnvelope env = qdint::run_scenario(cfg);
            write_output(cfg.output, render(env));
            return kExitOk;
        }

        const std::size_t eq = sweep_spec.find('=');
        if (eq == std::string::npos || eq == 0)
            throw qdint::ValidationError("--sweep expects key=v1,v2,...");
        const std::string axis = sweep_spec.substr(0, eq);
        const std::vector<qdint::ParamValue> values =
            parse_sweep_values(sweep_spec.substr(eq + 1));

        const std::vector<qdint::ResultEnvelope> results = qdint::sweep(cfg, axis, values);
        bool all_ok = true;
        if (cfg.format == "json") {
            std::string text = "[\n";
            for (std::size_t i = 0; i < results.size(); ++i) {
                text += qdint::render_json(results[i]);
                if (i + 1 < results.size())
                    text += ",";
            }
            text += "]\n";
            write_output(cfg.output, text);
        } else {
            for (std::size_t i = 0; i < results.size(); ++i) {
                const std::string path =
                    cfg.output.empty() ? cfg.output : indexed_path(cfg.output, i);
                write_output(path, qdint::render_csv(results[i]));
            }
        }
        for (const qdint::ResultEnvelope& env : results)
            all_ok = all_ok && env.ok;
        if (!all_ok) {
            for (const qdint::ResultEnvelope& env : results)
                if (!env.ok)
                    std::cerr << "sweep point failed: " << env.error << "\n";
            return kExitPhysics;
        }
        return kExitOk;
    } catch (const qdint::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPhysics;
    }
}
