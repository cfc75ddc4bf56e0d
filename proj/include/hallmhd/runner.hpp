#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "hallmhd/config.hpp"
#include "hallmhd/output.hpp"

namespace hallmhd {

// CLI exit-status contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBlowup = 3;
inline constexpr int kExitIo = 4;

struct RunArtifacts {
    RunOutcome outcome;
    std::vector<DiagnosticsRecord> trajectory;
    std::vector<Field> final_state;
    nlohmann::json summary;
    std::string csv_path;
    std::string summary_path;
    int exit_code = kExitOk;
};

/// Build the model for a config's scenario.
std::unique_ptr<Model> make_model(const RunConfig& c);

/// Effective sponge for a config (enabled for case1 quadratic backgrounds).
SpongeParams effective_sponge(const RunConfig& c);

/// Run a scenario end to end: initial data, time loop, streaming CSV, JSON
/// summary (fits, audits, functionals). With `resume`, the state and clock come
/// from the checkpoint while the diagnostics context is rebuilt from the config.
RunArtifacts execute_run(const RunConfig& c, std::optional<Checkpoint> resume = std::nullopt);

/// Smallness audit for a config without running it.
SmallnessReport audit_config(const RunConfig& c);

/// Commutator identity suite on random band-limited pairs (|mode| <= n/6).
struct IdentityReport {
    int trials = 0;
    double max_antisym = 0.0;      // |[f,g] + [g,f]| / scale
    double max_self = 0.0;         // |[f,f]| / |grad f|_inf^2
    double max_cyclic_self = 0.0;  // |int f [f,g]| relative
    double max_cyclic = 0.0;       // |int f [g,h] - int g [h,f]| relative
    double max_product_rule = 0.0; // lap [f,g] vs expansion, max-norm relative
    bool pass = false;
};
IdentityReport run_identity_suite(int n, double l, std::uint64_t seed, int trials);
nlohmann::json identity_report_json(const IdentityReport& rep);

/// Decay-fit re-analysis of an existing trajectory CSV.
nlohmann::json fit_csv(const std::string& csv_path, const std::vector<std::string>& quantities,
                       double t0, double t1);

} // namespace hallmhd
