#include <cstdio>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hallmhd/errors.hpp"
#include "hallmhd/runner.hpp"

using namespace hallmhd;

namespace {

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

void print_outcome(const RunArtifacts& art) {
    std::cout << "status: " << art.summary["status"].get<std::string>()
              << "  t_final: " << art.outcome.t_final << "  steps: " << art.outcome.steps
              << "\n";
    if (art.outcome.blowup)
        std::cout << "blow-up at t=" << art.outcome.blowup->t << " in field '"
                  << art.outcome.blowup->field << "' (|.|_inf=" << art.outcome.blowup->value
                  << ")\n";
    std::cout << "trajectory: " << art.csv_path << "\nsummary: " << art.summary_path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hallmhd: pseudo-spectral Hall MHD simulator and diagnostics"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run a scenario from a config file");
    std::string run_config;
    std::string run_out_override;
    run_cmd->add_option("-c,--config", run_config, "config file")->required();
    run_cmd->add_option("-o,--output-dir", run_out_override, "override [output] dir");

    // resume
    auto* resume_cmd = app.add_subcommand("resume", "continue a run from a checkpoint");
    std::string res_config, res_ckpt, res_out;
    resume_cmd->add_option("-c,--config", res_config, "config file")->required();
    resume_cmd->add_option("-k,--checkpoint", res_ckpt, "checkpoint file")->required();
    resume_cmd->add_option("-o,--output-dir", res_out, "override [output] dir")->required();

    // audit
    auto* audit_cmd = app.add_subcommand("audit", "print the smallness report without running");
    std::string audit_config;
    audit_cmd->add_option("-c,--config", audit_config, "config file")->required();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "re-analyze decay exponents from a trajectory CSV");
    std::string fit_file;
    std::vector<std::string> fit_quantities{"grad_psi_l2", "z_l2"};
    double fit_t0 = 4.0, fit_t1 = 0.0;
    fit_cmd->add_option("csv", fit_file, "trajectory CSV")->required();
    fit_cmd->add_option("-q,--quantity", fit_quantities, "columns to fit");
    fit_cmd->add_option("--t0", fit_t0, "window start");
    fit_cmd->add_option("--t1", fit_t1, "window end")->required();

    // identities
    auto* id_cmd = app.add_subcommand("identities", "run the commutator identity suite");
    int id_n = 128;
    double id_l = 2.0 * std::numbers::pi;
    std::uint64_t id_seed = 7;
    int id_trials = 20;
    id_cmd->add_option("--n", id_n, "grid points per side");
    id_cmd->add_option("--l", id_l, "box side length");
    id_cmd->add_option("--seed", id_seed, "random seed");
    id_cmd->add_option("--trials", id_trials, "number of random field pairs");

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd) {
        return guarded([&] {
            RunConfig c = parse_config_file(run_config);
            if (!run_out_override.empty()) c.out_dir = run_out_override;
            RunArtifacts art = execute_run(c);
            print_outcome(art);
            return art.exit_code;
        });
    }
    if (*resume_cmd) {
        return guarded([&] {
            RunConfig c = parse_config_file(res_config);
            c.out_dir = res_out;
            Checkpoint cp = read_checkpoint(res_ckpt);
            RunArtifacts art = execute_run(c, std::move(cp));
            print_outcome(art);
            return art.exit_code;
        });
    }
    if (*audit_cmd) {
        return guarded([&] {
            RunConfig c = parse_config_file(audit_config);
            const SmallnessReport rep = hallmhd::audit_config(c);
            nlohmann::json j{{"name", rep.name},
                             {"value", rep.value},
                             {"threshold", rep.threshold},
                             {"pass", rep.pass},
                             {"formula", rep.formula}};
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        });
    }
    if (*fit_cmd) {
        return guarded([&] {
            std::cout << fit_csv(fit_file, fit_quantities, fit_t0, fit_t1).dump(2) << "\n";
            return kExitOk;
        });
    }
    if (*id_cmd) {
        return guarded([&] {
            const IdentityReport rep = run_identity_suite(id_n, id_l, id_seed, id_trials);
            std::cout << identity_report_json(rep).dump(2) << "\n";
            return rep.pass ? kExitOk : kExitConfig;
        });
    }
    return kExitConfig;
}
