#pragma once

#include <optional>
#include <string>

#include "hallmhd/diagnostics.hpp"
#include "hallmhd/presets.hpp"
#include "hallmhd/timestepper.hpp"

namespace hallmhd {

/// A full run description. File format: sectioned key = value text (grammar in
/// docs/formats.md); unknown sections or keys are rejected, parse errors carry
/// line numbers, semantic errors name the field.
struct RunConfig {
    Scenario scenario = Scenario::hall;
    int threads = 1;

    int n = 128;
    double l = 32.0 * 3.14159265358979323846;

    InitialData initial;

    std::optional<HarmonicBackground> background; // perturbation scenarios only
    SpongeParams sponge;                          // active for case1 quadratic

    IntegratorConfig integ;

    double cadence = 0.1;
    Lp serrin_p = Lp::four;
    double serrin_q = 4.0;
    double fit_t0 = 4.0;
    std::optional<double> fit_t1; // default: t_box
    bool asymptotics = false;
    double kernel_t_origin = 0.0;
    std::optional<double> k_const; // user constant k for the eps2/eps3 audits
    double eps_threshold = 1.0;

    std::string out_dir = "out";
    double checkpoint_interval = 0.0;
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<string>");
RunConfig parse_config_file(const std::string& path);

/// Canonical serialization: every key in a fixed order, full double precision.
/// parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& c);

/// Cross-field checks (scenario-required sections, serrin pair, background rules).
void validate_config(const RunConfig& c);

} // namespace hallmhd
