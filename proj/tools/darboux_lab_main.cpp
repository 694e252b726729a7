// darboux-lab: command line front end.
//
// Exit codes: 0 success, 2 configuration error, 3 certification failure,
// 4 numerical failure, 5 verification failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dlab/errors.hpp"
#include "dlab/scenario.hpp"
#include "dlab/verify_suite.hpp"

namespace fs = std::filesystem;

namespace {

int resolve_threads(int cli_threads) {
    if (cli_threads < 0)
        throw dlab::ConfigError("--threads must be positive");
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("DARBOUX_LAB_THREADS")) {
        int n = 0;
        try {
            n = std::stoi(env);
        } catch (const std::exception&) {
            throw dlab::ConfigError(
                "DARBOUX_LAB_THREADS must be a positive integer");
        }
        if (n <= 0)
            throw dlab::ConfigError(
                "DARBOUX_LAB_THREADS must be a positive integer");
        return n;
    }
    return 0;  // hardware concurrency
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Exactly solvable nonstationary oscillators via time-dependent "
        "Darboux deformation"};
    app.require_subcommand(1);

    std::string config;
    std::string preset;
    std::string out;
    std::string suite = "all";
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        auto* c = cmd->add_option("--config", config, "scenario JSON file");
        auto* p =
            cmd->add_option("--preset", preset, "shipped preset (fig1..fig8)");
        c->excludes(p);
        p->excludes(c);
        cmd->add_option("--out", out, "output directory (overrides scenario)");
        cmd->add_option("--threads", threads,
                        "worker threads (default: DARBOUX_LAB_THREADS or all)");
    };

    auto* cmd_pot = app.add_subcommand(
        "potential", "write V0/V1 curves and the space-time potential map");
    auto* cmd_states = app.add_subcommand(
        "states", "write |psi_n|^2 (or |phi_n|^2) density maps");
    auto* cmd_coh =
        app.add_subcommand("coherent", "write coherent-packet density maps");
    auto* cmd_ver =
        app.add_subcommand("verify", "run the verification batteries");
    for (auto* c : {cmd_pot, cmd_states, cmd_coh, cmd_ver}) add_common(c);
    cmd_ver->add_option("--suite", suite,
                        "classical | modes | darboux | coherent | all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (config.empty() && preset.empty())
            throw dlab::ConfigError("need --config <file> or --preset <name>");
        dlab::scenario::set_thread_count(resolve_threads(threads));

        std::vector<dlab::scenario::Scenario> runs;
        if (!preset.empty())
            runs = dlab::scenario::preset(preset);
        else
            runs.push_back(dlab::scenario::load_scenario(config));
        if (!out.empty())
            for (auto& sc : runs) sc.output_dir = out;

        bool verified = true;
        for (const auto& sc : runs) {
            std::vector<fs::path> files;
            if (app.got_subcommand(cmd_pot)) {
                files = dlab::scenario::cmd_potential(sc, sc.output_dir);
            } else if (app.got_subcommand(cmd_states)) {
                files = dlab::scenario::cmd_states(sc, sc.n_list, sc.output_dir);
            } else if (app.got_subcommand(cmd_coh)) {
                files = dlab::scenario::cmd_coherent(sc, sc.z_list, sc.family,
                                                     sc.output_dir);
            } else {
                const auto outcome = dlab::scenario::cmd_verify(sc, suite);
                std::cout << "== " << sc.name << " ==\n" << outcome.text;
                fs::create_directories(sc.output_dir);
                const fs::path jp =
                    fs::path(sc.output_dir) / (sc.name + "_verify.json");
                std::ofstream os(jp);
                os << outcome.json << "\n";
                if (!os) throw dlab::Error("cannot write " + jp.string());
                files.push_back(jp);
                verified = verified && outcome.pass;
            }
            for (const auto& f : files) std::cout << f.string() << "\n";
        }
        return verified ? 0 : 5;
    } catch (const dlab::CertificationFailure& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return 3;
    } catch (const dlab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const dlab::NonPositiveParameter& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const dlab::ErmakovConditionViolated& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const dlab::ZeroLambda& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const dlab::GridMismatch& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const dlab::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
}
