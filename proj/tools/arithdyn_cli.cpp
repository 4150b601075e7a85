#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "arithdyn/experiments.hpp"

using namespace arithdyn;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return j;
}

Point parse_point_arg(const std::string& s) {
    return point_from_json(json::parse(s));
}

void emit(const json& report, const std::string& csv, const std::string& format,
          const std::string& out) {
    if (!out.empty()) {
        std::ofstream js(out + ".json", std::ios::binary);
        js << report.dump(2) << "\n";
        std::ofstream cs(out + ".csv", std::ios::binary);
        cs << csv;
    }
    if (format == "csv") std::cout << csv;
    else std::cout << report.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamical and arithmetic degrees for self-maps of projective varieties"};
    app.require_subcommand(1);

    std::string map_path, config_path, point_str, out_path, format = "json";
    long n_iter = 20;
    unsigned long seed = 1;
    size_t bit_budget = 1u << 20;
    double tolerance = 0.05;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "deterministic sampling seed");
        cmd->add_option("--bit-budget", bit_budget, "per-coordinate bit budget");
        cmd->add_option("--tolerance", tolerance, "verdict tolerance on |alpha - delta|");
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", out_path, "output basename (.json/.csv appended)");
    };

    auto* cmd_delta = app.add_subcommand("delta", "certified dynamical degree of a map");
    cmd_delta->add_option("map", map_path, "map description JSON")->required();
    add_common(cmd_delta);

    auto* cmd_orbit = app.add_subcommand("orbit", "iterate an orbit with exact heights");
    cmd_orbit->add_option("map", map_path)->required();
    cmd_orbit->add_option("--point", point_str, "point JSON")->required();
    cmd_orbit->add_option("--n", n_iter, "iteration count");
    add_common(cmd_orbit);

    auto* cmd_alpha = app.add_subcommand("alpha", "arithmetic-degree estimates along an orbit");
    cmd_alpha->add_option("map", map_path)->required();
    cmd_alpha->add_option("--point", point_str)->required();
    cmd_alpha->add_option("--n", n_iter, "iteration count");
    add_common(cmd_alpha);

    auto* cmd_canonical = app.add_subcommand("canonical", "canonical height with certified tail bound");
    cmd_canonical->add_option("map", map_path)->required();
    cmd_canonical->add_option("--point", point_str)->required();
    cmd_canonical->add_option("--n", n_iter, "iteration count");
    add_common(cmd_canonical);

    auto* cmd_verify = app.add_subcommand("verify-ks", "verdict sweep from a config file");
    cmd_verify->add_option("config", config_path)->required();
    add_common(cmd_verify);

    auto* cmd_find = app.add_subcommand("find-points", "search for points of full arithmetic complexity");
    cmd_find->add_option("config", config_path)->required();
    add_common(cmd_find);

    auto* cmd_disjoint = app.add_subcommand("disjoint-orbits", "greedy pairwise-disjoint orbit family");
    cmd_disjoint->add_option("config", config_path)->required();
    add_common(cmd_disjoint);

    auto* cmd_ns = app.add_subcommand("ns-check", "NS model / pullback action checks");
    cmd_ns->add_option("model", config_path)->required();
    add_common(cmd_ns);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_delta->parsed()) {
            SelfMap f = map_from_json(load_json(map_path));
            json out = {{"map_id", f.id}};
            try {
                auto ns = ns_action_of(f);
                auto sr = spectral_radius(ns.action.matrix);
                out["delta"] = format_double(sr.value);
                out["error_bound"] = format_double(sr.error_bound);
                out["deg"] = ns.action.deg_f.get_str();
            } catch (const Unavailable&) {
                out["delta"] = format_double(delta_of(f));
                out["ns_action"] = "unavailable";
            }
            std::string csv = "map_id,delta\n" + f.id + "," + out["delta"].get<std::string>() + "\n";
            emit(out, csv, format, out_path);
        } else if (cmd_orbit->parsed()) {
            SelfMap f = map_from_json(load_json(map_path));
            OrbitOptions opts;
            opts.n_max = static_cast<size_t>(n_iter);
            opts.bit_budget = bit_budget;
            auto orbit = iterate_orbit(f, parse_point_arg(point_str), opts);
            json rows = json::array();
            std::string csv = "n,point,height\n";
            for (size_t i = 0; i < orbit.points.size(); ++i) {
                rows.push_back({{"n", i},
                                {"point", point_key(orbit.points[i])},
                                {"height", format_double(orbit.heights[i].value)}});
                csv += std::to_string(i) + "," + point_key(orbit.points[i]) + "," +
                       format_double(orbit.heights[i].value) + "\n";
            }
            emit({{"status", status_name(orbit.status)}, {"orbit", rows}}, csv, format, out_path);
        } else if (cmd_alpha->parsed()) {
            SelfMap f = map_from_json(load_json(map_path));
            OrbitOptions opts;
            opts.n_max = static_cast<size_t>(n_iter);
            opts.bit_budget = bit_budget;
            auto orbit = iterate_orbit(f, parse_point_arg(point_str), opts);
            json out = {{"map_id", f.id}, {"status", status_name(orbit.status)}};
            auto root = alpha_root(orbit);
            out["alpha_root"] = format_double(root.value);
            out["alpha_root_err"] = format_double(root.error_bar);
            try {
                auto ratio = alpha_ratio(orbit);
                out["alpha_ratio"] = format_double(ratio.value);
                out["alpha_ratio_err"] = format_double(ratio.error_bar);
            } catch (const Error& e) {
                out["alpha_ratio"] = e.code();
            }
            std::string csv = "estimator,value,error\nroot," + format_double(root.value) + "," +
                              format_double(root.error_bar) + "\n";
            emit(out, csv, format, out_path);
        } else if (cmd_canonical->parsed()) {
            SelfMap f = map_from_json(load_json(map_path));
            Point P = parse_point_arg(point_str);
            double delta = delta_of(f);
            auto h = canonical_height(f, delta, P, static_cast<size_t>(n_iter));
            json out = {{"map_id", f.id},
                        {"delta", format_double(delta)},
                        {"hhat", format_double(h.value)},
                        {"tail_bound", format_double(h.tail_bound)},
                        {"empirical_defect", h.empirical_defect}};
            std::string csv = "hhat,tail_bound\n" + format_double(h.value) + "," +
                              format_double(h.tail_bound) + "\n";
            emit(out, csv, format, out_path);
        } else {
            json cj = load_json(config_path);
            if (cmd_ns->parsed() && !cj.contains("experiment")) {
                json wrapped = {{"experiment", "ns-check"}, {"ns_model", cj}};
                cj = wrapped;
            }
            ExperimentConfig config = ExperimentConfig::from_json(cj);
            if (!out_path.empty()) config.out_path = out_path;
            CLI::App* sub = app.get_subcommands().front();
            if (sub->count("--seed")) config.seed = seed;
            if (sub->count("--bit-budget")) config.bit_budget = bit_budget;
            if (sub->count("--tolerance")) config.tolerance = tolerance;
            if (cmd_verify->parsed()) config.experiment = "verify-ks";
            if (cmd_find->parsed()) config.experiment = "find-points";
            if (cmd_disjoint->parsed()) config.experiment = "disjoint-orbits";
            auto res = run_experiment_to_files(config);
            if (format == "csv") std::cout << res.csv;
            else std::cout << res.report.dump(2) << "\n";
            return res.exit_code;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
