#include "hallmhd/runner.hpp"

#include <cmath>
#include <filesystem>

#include "hallmhd/errors.hpp"
#include "hallmhd/oracle.hpp"

namespace hallmhd {

namespace fs = std::filesystem;
using nlohmann::json;

std::unique_ptr<Model> make_model(const RunConfig& c) {
    switch (c.scenario) {
    case Scenario::hall:
    case Scenario::heat_validation:
        return std::make_unique<HallModel>(c.threads);
    case Scenario::perturb_case1:
        return std::make_unique<HallModel>(HallModel::Variant::case1, *c.background,
                                           effective_sponge(c), c.threads);
    case Scenario::perturb_case2:
        return std::make_unique<HallModel>(HallModel::Variant::case2, *c.background,
                                           SpongeParams{}, c.threads);
    case Scenario::mhd:
        return std::make_unique<MhdModel>(c.threads);
    }
    throw ConfigError("unhandled scenario");
}

SpongeParams effective_sponge(const RunConfig& c) {
    SpongeParams sp = c.sponge;
    sp.enabled = c.scenario == Scenario::perturb_case1 && c.background &&
                 c.background->kind != HarmonicBackground::Kind::linear;
    return sp;
}

SmallnessReport audit_config(const RunConfig& c) {
    auto grid = Grid::make(c.n, c.l);
    auto u = build_initial(grid, c.scenario, c.initial);
    switch (c.scenario) {
    case Scenario::hall:
    case Scenario::heat_validation:
        return smallness_eps1(u[0], u[1], c.eps_threshold);
    case Scenario::perturb_case1:
        return smallness_eps2(u[0], u[1], *c.background, c.k_const.value_or(0.0),
                              c.eps_threshold);
    case Scenario::perturb_case2:
        return smallness_eps3(u[0], u[1], *c.background, c.k_const.value_or(0.0),
                              c.eps_threshold);
    case Scenario::mhd: {
        MhdState s(u[0], u[1], u[2], u[3]);
        return smallness_eps4(s, c.eps_threshold);
    }
    }
    throw ConfigError("unhandled scenario");
}

namespace {

json report_json(const SmallnessReport& r) {
    return json{{"name", r.name},
                {"value", r.value},
                {"threshold", r.threshold},
                {"pass", r.pass},
                {"formula", r.formula}};
}

json fit_json(const DecayFit& f) {
    return json{{"quantity", f.quantity}, {"t0", f.t0},       {"t1", f.t1},
                {"exponent", f.exponent}, {"r2", f.r_squared}, {"n_samples", f.n_samples}};
}

// Standard fitted quantities per scenario; sums are norm-level (not squared).
std::vector<std::pair<std::string, std::vector<std::string>>> fit_quantities(Scenario s) {
    std::vector<std::pair<std::string, std::vector<std::string>>> q = {
        {"grad_psi_plus_z", {"grad_psi_l2", "z_l2"}},
        {"lap_psi_plus_grad_z", {"lap_psi_l2", "grad_z_l2"}},
        {"grad_lap_psi_plus_lap_z", {"grad_lap_psi_l2", "lap_z_l2"}},
        {"grad_psi_l2", {"grad_psi_l2"}},
        {"lap_psi_l2", {"lap_psi_l2"}},
        {"z_l2", {"z_l2"}},
        {"grad_z_l2", {"grad_z_l2"}},
        {"psi_l1", {"psi_l1"}},
        {"psi_l2", {"psi_l2"}},
    };
    if (s == Scenario::mhd) q.push_back({"sqrt_P2", {"P2"}});
    return q;
}

std::vector<SeriesPoint> combined_series(const std::vector<DiagnosticsRecord>& traj,
                                         const std::string& name,
                                         const std::vector<std::string>& cols) {
    std::vector<SeriesPoint> s;
    s.reserve(traj.size());
    const bool sqrt_single = name.rfind("sqrt_", 0) == 0;
    for (const auto& r : traj) {
        double y = 0.0;
        for (const auto& c : cols) y += r.get(c);
        if (sqrt_single) y = std::sqrt(y);
        s.push_back({r.t(), y});
    }
    return s;
}

} // namespace

RunArtifacts execute_run(const RunConfig& c, std::optional<Checkpoint> resume) {
    auto grid = Grid::make(c.n, c.l);
    auto model = make_model(c);
    auto init = build_initial(grid, c.scenario, c.initial);

    std::vector<Field> u = init;
    double t_start = 0.0;
    if (resume) {
        if (static_cast<int>(resume->n) != c.n)
            throw ConfigError("checkpoint grid n does not match config");
        if (resume->scenario_id != scenario_id(c.scenario))
            throw ConfigError("checkpoint scenario does not match config");
        if (std::abs(resume->l - c.l) > 1e-12 * std::max(1.0, c.l))
            throw ConfigError("checkpoint box length does not match config");
        if (resume->n_fields != u.size())
            throw ConfigError("checkpoint field count does not match scenario");
        for (std::size_t f = 0; f < u.size(); ++f)
            u[f] = Field::from_spec(grid, resume->fields[f]);
        t_start = resume->t;
    }

    DiagnosticsOptions opts;
    opts.serrin_p = c.serrin_p;
    opts.serrin_q = c.serrin_q;
    opts.asymptotics = c.asymptotics;
    opts.kernel_t_origin = c.kernel_t_origin;
    opts.heat_reference = c.scenario == Scenario::heat_validation;
    const SpongeParams sponge = effective_sponge(c);
    if (sponge.enabled) opts.sponge = sponge;

    DiagnosticsEngine engine(c.scenario, {init[0], init[1]}, 0.0, opts,
                             initial_center_x(*grid, c.initial),
                             initial_center_y(*grid, c.initial));

    fs::create_directories(c.out_dir);
    RunArtifacts art;
    art.csv_path = (fs::path(c.out_dir) / "trajectory.csv").string();
    art.summary_path = (fs::path(c.out_dir) / "summary.json").string();

    CsvWriter csv(art.csv_path, "scenario=" + scenario_name(c.scenario) +
                                    " n=" + std::to_string(c.n) + " seed=" +
                                    std::to_string(c.initial.seed));

    RunControl ctl;
    ctl.integ = c.integ;
    ctl.cadence = c.cadence;
    ctl.checkpoint_interval = c.checkpoint_interval;
    ctl.t_start = t_start;

    RunCallbacks cb;
    cb.record = [&](const std::vector<Field>& fields, double t) {
        DiagnosticsRecord r = engine.record(fields, t);
        art.trajectory.push_back(r);
        csv.write(r);
    };
    int cp_index = 0;
    cb.checkpoint = [&](const std::vector<Field>& fields, double t, double dt) {
        char name[32];
        std::snprintf(name, sizeof(name), "checkpoint_%04d.ckpt", ++cp_index);
        const std::string numbered = (fs::path(c.out_dir) / name).string();
        write_checkpoint(numbered, scenario_id(c.scenario), dt, fields, t);
        // refresh the crash-resume alias
        fs::copy_file(numbered, fs::path(c.out_dir) / "checkpoint.ckpt",
                      fs::copy_options::overwrite_existing);
    };

    auto build_summary = [&](const char* status, double t_now) {
        json s;
        s["config"] = serialize_config(c);
        s["scenario"] = scenario_name(c.scenario);
        s["seed"] = c.initial.seed;
        s["status"] = status;
        s["t_final"] = t_now;
        s["records"] = art.trajectory.size();
        s["t_box"] = t_box(*grid);
        s["gamma0"] = engine.gamma0();
        s["eta0"] = engine.eta0();
        try {
            s["audit"] = report_json(audit_config(c));
        } catch (const ConfigError& e) {
            s["audit"] = {{"error", e.what()}};
        }
        if (engine.sponge_warning()) s["sponge_warning"] = true;
        if (c.initial.preset == InitialData::Preset::kernel_exact &&
            !kernel_width_ok(*grid, c.initial.t0))
            s["kernel_width_warning"] = "sqrt(4 t0) exceeds l/4; kernel tail not negligible";

        if (art.trajectory.size() >= 2) {
            auto B = blowup_functional(art.trajectory, c.serrin_p, c.serrin_q);
            auto I = serrin_integral(art.trajectory, c.serrin_p, c.serrin_q);
            s["blowup_B_final"] = B.back().y;
            s["serrin_final"] = I.back().y;
            const double t_half = 0.5 * B.back().t;
            for (const auto& p : B)
                if (p.t <= t_half) s["blowup_B_half"] = p.y;
        }

        const double f_t1 = std::min(c.fit_t1.value_or(t_box(*grid)), t_now);
        json fits = json::array();
        for (const auto& [name, cols] : fit_quantities(c.scenario)) {
            try {
                auto ser = combined_series(art.trajectory, name, cols);
                fits.push_back(fit_json(decay_fit(ser, c.fit_t0, f_t1, name)));
            } catch (const DataError& e) {
                fits.push_back({{"quantity", name}, {"error", e.what()}});
            }
        }
        s["fits"] = fits;
        return s;
    };
    cb.checkpoint = [&, inner = cb.checkpoint](const std::vector<Field>& fields, double t,
                                               double dt) {
        inner(fields, t, dt);
        write_text_file(art.summary_path, build_summary("running", t).dump(2) + "\n");
    };

    art.outcome = run_loop(*model, u, ctl, cb, c.threads);
    art.final_state = u;

    json s = build_summary(art.outcome.status == RunStatus::completed ? "completed" : "blew_up",
                           art.outcome.t_final);
    s["steps"] = art.outcome.steps;
    if (art.outcome.blowup) {
        s["blowup"] = {{"t", art.outcome.blowup->t},
                       {"field", art.outcome.blowup->field},
                       {"value", art.outcome.blowup->value}};
    }
    art.summary = s;
    write_text_file(art.summary_path, s.dump(2) + "\n");
    art.exit_code = art.outcome.status == RunStatus::completed ? kExitOk : kExitBlowup;
    return art;
}

IdentityReport run_identity_suite(int n, double l, std::uint64_t seed, int trials) {
    IdentityReport rep;
    rep.trials = trials;
    auto grid = Grid::make(n, l);
    const int band = n / 6;

    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t s = seed + 1000ull * trial;
        Field f = random_bandlimited_field(grid, s, band, 1.0);
        Field g = random_bandlimited_field(grid, s + 1, band, 1.0);
        Field h = random_bandlimited_field(grid, s + 2, band, 1.0);

        Field fg = poisson_bracket(f, g);
        Field gf = poisson_bracket(g, f);
        const double scale_fg = std::max(lp_norm(fg, Lp::inf), 1e-300);
        rep.max_antisym = std::max(rep.max_antisym, lp_norm(fg + gf, Lp::inf) / scale_fg);

        Field ff = poisson_bracket(f, f);
        const double gradf = grad_inf_norm(f);
        rep.max_self = std::max(rep.max_self, lp_norm(ff, Lp::inf) / (gradf * gradf));

        const double self_int = std::abs(inner_product(f, fg));
        const double self_scale =
            std::max(lp_norm(f, Lp::two) * lp_norm(fg, Lp::two), 1e-300);
        rep.max_cyclic_self = std::max(rep.max_cyclic_self, self_int / self_scale);

        Field gh = poisson_bracket(g, h);
        Field hf = poisson_bracket(h, f);
        const double lhs = inner_product(f, gh);
        const double rhs = inner_product(g, hf);
        const double cyc_scale = std::max(
            {std::abs(lhs), std::abs(rhs), lp_norm(f, Lp::two) * lp_norm(gh, Lp::two)});
        rep.max_cyclic = std::max(rep.max_cyclic, std::abs(lhs - rhs) / cyc_scale);

        // lap [f,g] = [lap f, g] + [f, lap g] + 2 [f_x, g_x] + 2 [f_y, g_y]
        Field lhs_pr = laplacian(fg);
        Field rhs_pr = poisson_bracket(laplacian(f), g) + poisson_bracket(f, laplacian(g)) +
                       2.0 * poisson_bracket(deriv(f, Axis::x, 1), deriv(g, Axis::x, 1)) +
                       2.0 * poisson_bracket(deriv(f, Axis::y, 1), deriv(g, Axis::y, 1));
        const double pr_scale = std::max(lp_norm(lhs_pr, Lp::inf), 1e-300);
        rep.max_product_rule =
            std::max(rep.max_product_rule, lp_norm(lhs_pr - rhs_pr, Lp::inf) / pr_scale);
    }
    rep.pass = rep.max_antisym <= 1e-12 && rep.max_self <= 1e-12 &&
               rep.max_cyclic_self <= 1e-10 && rep.max_cyclic <= 1e-10 &&
               rep.max_product_rule <= 1e-9;
    return rep;
}

json identity_report_json(const IdentityReport& rep) {
    return json{{"trials", rep.trials},
                {"antisymmetry", rep.max_antisym},
                {"self_bracket", rep.max_self},
                {"integral_self", rep.max_cyclic_self},
                {"integral_cyclic", rep.max_cyclic},
                {"product_rule", rep.max_product_rule},
                {"pass", rep.pass}};
}

json fit_csv(const std::string& csv_path, const std::vector<std::string>& quantities, double t0,
             double t1) {
    const CsvData data = read_csv(csv_path);
    json fits = json::array();
    for (const auto& q : quantities) {
        try {
            fits.push_back(fit_json(decay_fit(series(data.records, q), t0, t1, q)));
        } catch (const std::exception& e) {
            fits.push_back({{"quantity", q}, {"error", e.what()}});
        }
    }
    return json{{"csv", csv_path}, {"t0", t0}, {"t1", t1}, {"fits", fits}};
}

} // namespace hallmhd
