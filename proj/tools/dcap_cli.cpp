// Batch driver: runs scenario files against the library and emits
// machine-readable JSON reports. Exit codes reflect execution health only
// (0 ok, 2 parse error, 3 unknown operation); mathematical verdicts live
// inside the report.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dcap/scenario.hpp"

namespace {

const std::vector<std::string>& builtin_scenarios() {
    static const std::vector<std::string> names = {
        "cech_disk_cover",     "coadmissible_towers", "commutator_division", "derham_disk",
        "dichotomy_kernels",   "duality_rank1",       "kashiwara_roundtrip", "limit_cokernel_forms",
        "roos_tower",          "spencer_exactness",   "strictness_ladder",   "tensor_leibniz"};
    return names;
}

int run_cmd(const std::string& path, const std::string& out_path, const dcap::Json& overrides) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read scenario file: " << path << "\n";
        return 2;
    }
    dcap::Json report;
    auto t0 = std::chrono::steady_clock::now();
    try {
        dcap::Json j = dcap::Json::parse(in);
        for (auto& [k, v] : overrides.items()) j["caps"][k] = v;
        dcap::Scenario s = dcap::load_scenario(j);
        report = dcap::run_scenario(s);
    } catch (const dcap::UnknownOperation& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const dcap::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const dcap::Json::exception& e) {
        std::cerr << "scenario parse error: " << e.what() << "\n";
        return 2;
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "cannot write report: " << out_path << "\n";
            return 2;
        }
        out << text;
    }
    std::cerr << "wall_ms " << ms.count() << "\n";
    return 0;
}

int validate_cmd(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cout << "diagnostic: cannot read scenario file: " << path << "\n";
        return 0;
    }
    std::vector<std::string> diags;
    try {
        dcap::Json j = dcap::Json::parse(in);
        diags = dcap::validate_scenario(j);
    } catch (const dcap::Json::exception& e) {
        diags.push_back(std::string("not valid JSON: ") + e.what());
    }
    for (auto& d : diags) std::cout << "diagnostic: " << d << "\n";
    if (diags.empty()) std::cout << "ok\n";
    return 0;
}

int list_cmd() {
    std::cout << "operations:\n";
    for (auto& op : dcap::known_operations()) std::cout << "  " << op << "\n";
    std::cout << "coverings:\n  disk_two_cover\n";
    std::cout << "example scenarios (scenarios/<name>.json):\n";
    for (auto& n : builtin_scenarios()) std::cout << "  " << n << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated p-adic differential-operator scenario driver"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, ladder_str;
    unsigned long p = 0;
    int deg = 0, opc = 0, levels = 0;

    CLI::App* run = app.add_subcommand("run", "execute a scenario and emit its report");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_path, "report path (default stdout)");
    run->add_option("--p", p, "prime override");
    run->add_option("--deg-cap", deg, "series degree cap override");
    run->add_option("--op-cap", opc, "operator order cap override");
    run->add_option("--levels", levels, "level count override");
    run->add_option("--ladder", ladder_str, "cap ladder override, e.g. 32,64,128");

    CLI::App* val = app.add_subcommand("validate", "schema diagnostics only, no computation");
    val->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    app.add_subcommand("list-builtins", "print operations, coverings, and example scenarios");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("validate")) return validate_cmd(scenario_path);
    if (app.got_subcommand("list-builtins")) return list_cmd();

    dcap::Json overrides = dcap::Json::object();
    if (p) overrides["p"] = p;
    if (deg) overrides["deg"] = deg;
    if (opc) overrides["op"] = opc;
    if (levels) overrides["levels"] = levels;
    if (!ladder_str.empty()) {
        std::vector<long> ladder;
        std::stringstream ss(ladder_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) ladder.push_back(std::stol(tok));
        overrides["ladder"] = ladder;
    }
    return run_cmd(scenario_path, out_path, overrides);
}
