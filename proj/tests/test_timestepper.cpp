#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "hallmhd/errors.hpp"
#include "hallmhd/models.hpp"
#include "hallmhd/oracle.hpp"
#include "hallmhd/presets.hpp"
#include "hallmhd/timestepper.hpp"
#include "test_helpers.hpp"

using namespace hallmhd;
using namespace hallmhd::test;

namespace {

std::vector<Field> hall_fields(Field psi, Field z) {
    std::vector<Field> u;
    u.push_back(std::move(psi));
    u.push_back(std::move(z));
    return u;
}

} // namespace

TEST_CASE("integrating factor is exact on the linear part") {
    auto g = Grid::make(32, 2.0 * kPi);
    Field psi = field_from(g, [](double x, double) { return std::sin(x); });
    Field z(g);
    auto u = hall_fields(psi, z);

    HallModel model;
    IfStepper stepper(g, 2, 1);
    double t = 0.0;
    const double dt = 0.01;
    const int steps = 100;
    for (int i = 0; i < steps; ++i) stepper.step(model, u, t, dt, Scheme::if_rk4);

    // |k| = 1 mode decays as exp(-t); allow 1e-13 per step
    CHECK(max_abs_diff(u[0], [&](double x, double) { return std::exp(-t) * std::sin(x); }) <=
          1e-13 * steps);
    CHECK(lp_norm(u[1], Lp::inf) < 1e-12);
}

TEST_CASE("heat evolution of a gaussian matches the kernel oracle") {
    auto g = Grid::make(128, 32.0 * kPi);
    const double c = 16.0 * kPi;
    Field psi0 = heat_kernel(g, {4.0, c, c, 1.0});
    Field z0(g);
    auto u = hall_fields(psi0, z0);

    HallModel model;
    IfStepper stepper(g, 2, 1);
    double t = 0.0;
    while (t < 1.0 - 1e-12) stepper.step(model, u, t, 1e-3, Scheme::if_rk4);

    Field expect = heat_kernel(g, {4.0 + t, c, c, 1.0});
    CHECK(max_abs_diff(u[0], expect) <= 1e-8);
}

TEST_CASE("rk4 self-convergence order on a nonlinear hall run") {
    auto g = Grid::make(64, 32.0 * kPi);
    const double c = 16.0 * kPi;
    Field psi0 = heat_kernel(g, {2.0, c + 2.0, c, 2.0});
    Field z0 = heat_kernel(g, {3.0, c, c + 1.5, 2.0});
    HallModel model;

    auto run_dt = [&](double dt) {
        auto u = hall_fields(psi0, z0);
        IfStepper stepper(g, 2, 1);
        double t = 0.0;
        while (t < 2.0 - 1e-12) stepper.step(model, u, t, dt, Scheme::if_rk4);
        return u;
    };
    auto u1 = run_dt(0.04);
    auto u2 = run_dt(0.02);
    auto u3 = run_dt(0.01);
    const double e1 = lp_norm(u1[0] - u2[0], Lp::inf) + lp_norm(u1[1] - u2[1], Lp::inf);
    const double e2 = lp_norm(u2[0] - u3[0], Lp::inf) + lp_norm(u2[1] - u3[1], Lp::inf);
    const double ratio = e1 / e2;
    CHECK(ratio > 16.0 * 0.8);
    CHECK(ratio < 16.0 * 1.2);
}

TEST_CASE("euler variant converges at first order") {
    auto g = Grid::make(32, 32.0 * kPi);
    const double c = 16.0 * kPi;
    Field psi0 = heat_kernel(g, {2.0, c + 2.0, c, 1.0});
    Field z0 = heat_kernel(g, {3.0, c, c, 1.0});
    HallModel model;
    auto run_dt = [&](double dt) {
        auto u = hall_fields(psi0, z0);
        IfStepper stepper(g, 2, 1);
        double t = 0.0;
        while (t < 1.0 - 1e-12) stepper.step(model, u, t, dt, Scheme::if_euler);
        return u;
    };
    auto u1 = run_dt(0.02);
    auto u2 = run_dt(0.01);
    auto u3 = run_dt(0.005);
    const double e1 = lp_norm(u1[0] - u2[0], Lp::inf);
    const double e2 = lp_norm(u2[0] - u3[0], Lp::inf);
    CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("adaptive step formula") {
    IntegratorConfig cfg;
    cfg.cfl = 0.05;
    cfg.dt_max = 0.1;

    auto g = Grid::make(64, 2.0 * kPi);
    HallModel model;
    std::vector<Field> zero = hall_fields(Field(g), Field(g));
    CHECK(adapt_dt(model, zero, *g, cfg) == doctest::Approx(0.05).epsilon(1e-9));

    Field psi = field_from(g, [](double x, double) { return std::sin(x); });
    auto u1 = hall_fields(psi, Field(g));
    auto u2 = hall_fields(psi * 2.0, Field(g));
    const double d1 = adapt_dt(model, u1, *g, cfg);
    const double d2 = adapt_dt(model, u2, *g, cfg);
    CHECK(d1 / d2 > 1.7);
    CHECK(d1 / d2 <= 2.0 + 1e-9);

    auto g2 = Grid::make(128, 2.0 * kPi);
    Field psi2 = field_from(g2, [](double x, double) { return std::sin(x); });
    auto u3 = hall_fields(psi2, Field(g2));
    const double d3 = adapt_dt(model, u3, *g2, cfg);
    CHECK(d1 / d3 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("run loop records, conservation, endpoints") {
    auto g = Grid::make(64, 32.0 * kPi);
    const double c = 16.0 * kPi;
    HallModel model;

    std::vector<double> times;
    std::vector<double> masses;
    RunCallbacks cb;
    cb.record = [&](const std::vector<Field>& u, double t) {
        times.push_back(t);
        masses.push_back(integral(u[0]));
    };

    // t_end = 0: exactly one record, state untouched
    {
        auto u = hall_fields(heat_kernel(g, {2.0, c, c, 1.0}), Field(g));
        RunControl ctl;
        ctl.integ.t_end = 0.0;
        ctl.cadence = 0.1;
        auto out = run_loop(model, u, ctl, cb);
        CHECK(out.status == RunStatus::completed);
        CHECK(times.size() == 1);
        CHECK(times[0] == 0.0);
    }

    // pure heat conserves the psi mass to 1e-12 relative
    times.clear();
    masses.clear();
    {
        auto u = hall_fields(heat_kernel(g, {2.0, c, c, 1.0}), Field(g));
        RunControl ctl;
        ctl.integ.t_end = 1.0;
        ctl.integ.dt = 0.01;
        ctl.cadence = 0.25;
        auto out = run_loop(model, u, ctl, cb);
        CHECK(out.status == RunStatus::completed);
        CHECK(out.t_final == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(times.size() == 5); // 0, .25, .5, .75, 1.0; the t_end duplicate is suppressed
        for (double m : masses) CHECK(m == doctest::Approx(masses[0]).epsilon(1e-12));
    }
}

TEST_CASE("monotone energy between records on a hall run") {
    auto g = Grid::make(64, 32.0 * kPi);
    const double c = 16.0 * kPi;
    HallModel model;
    auto u = hall_fields(heat_kernel(g, {2.0, c + 1.0, c, 0.5}),
                         heat_kernel(g, {3.0, c, c, 0.5}));
    std::vector<double> energy;
    RunCallbacks cb;
    cb.record = [&](const std::vector<Field>& v, double) {
        const double e = sobolev_seminorm(v[0], 1) * sobolev_seminorm(v[0], 1) +
                         sobolev_seminorm(v[1], 0) * sobolev_seminorm(v[1], 0);
        energy.push_back(e);
    };
    RunControl ctl;
    ctl.integ.t_end = 2.0;
    ctl.integ.dt = 0.01;
    ctl.cadence = 0.2;
    run_loop(model, u, ctl, cb);
    for (std::size_t i = 1; i < energy.size(); ++i)
        CHECK(energy[i] <= energy[i - 1] * (1.0 + 1e-12));
}

TEST_CASE("oversized explicit step on a large-amplitude run raises the blow-up signal") {
    auto g = Grid::make(32, 2.0 * kPi);
    Field psi = random_bandlimited_field(g, 5, 4, 5.0);
    Field z = random_bandlimited_field(g, 6, 4, 5.0);
    HallModel model;
    auto u = hall_fields(psi, z);
    RunControl ctl;
    ctl.integ.t_end = 50.0;
    ctl.integ.dt = 0.05; // far beyond the whistler limit, small enough that
                         // dissipation cannot mask the explicit instability
    ctl.cadence = 10.0;
    RunCallbacks cb;
    auto out = run_loop(model, u, ctl, cb);
    CHECK(out.status == RunStatus::blew_up);
    CHECK(out.blowup.has_value());
    CHECK(out.t_final < 50.0);
}

TEST_CASE("hall flow commutes with the scaling map") {
    auto g = Grid::make(64, 2.0 * kPi);
    Field psi0 = random_bandlimited_field(g, 71, 2, 0.05);
    Field z0 = random_bandlimited_field(g, 72, 2, 0.05);
    HallModel model;

    auto evolve = [&](std::vector<Field> u, double t_end, double dt) {
        IfStepper stepper(g, 2, 1);
        double t = 0.0;
        while (t < t_end - 1e-12) stepper.step(model, u, t, dt, Scheme::if_rk4);
        return u;
    };

    const double T = 0.2;
    // route A: evolve, then rescale
    auto uA = evolve(hall_fields(psi0, z0), T, 1e-3);
    HallState rA = rescale(HallState(uA[0], uA[1], T), 2.0);
    // route B: rescale, then evolve for T / lambda^2
    HallState s0 = rescale(HallState(psi0, z0, 0.0), 2.0);
    auto uB = evolve(hall_fields(s0.psi, s0.z), T / 4.0, 2.5e-4);

    CHECK(lp_norm(rA.psi - uB[0], Lp::inf) <= 1e-6);
    CHECK(lp_norm(rA.z - uB[1], Lp::inf) <= 1e-6);
}

TEST_CASE("checkpoint round trip and resumed bitwise continuation") {
    namespace fs = std::filesystem;
    auto g = Grid::make(32, 32.0 * kPi);
    const double c = 16.0 * kPi;
    HallModel model;
    const std::string path = (fs::temp_directory_path() / "hallmhd_test.ckpt").string();

    auto initial = hall_fields(heat_kernel(g, {2.0, c + 1.0, c, 0.5}),
                               heat_kernel(g, {3.0, c, c, 0.5}));

    struct Snap {
        double t;
        std::vector<std::vector<std::complex<double>>> data;
    };
    std::vector<Snap> a_records;
    bool wrote = false;

    RunControl ctl;
    ctl.integ.t_end = 1.0;
    ctl.integ.dt = 0.01;
    ctl.cadence = 0.1;
    ctl.checkpoint_interval = 0.5;

    RunCallbacks cb;
    cb.record = [&](const std::vector<Field>& u, double t) {
        Snap s;
        s.t = t;
        for (const auto& f : u) s.data.emplace_back(f.spec().begin(), f.spec().end());
        a_records.push_back(std::move(s));
    };
    cb.checkpoint = [&](const std::vector<Field>& u, double t, double dt) {
        if (!wrote) {
            write_checkpoint(path, 0, dt, u, t);
            wrote = true;
        }
    };
    auto u = initial;
    run_loop(model, u, ctl, cb);
    REQUIRE(wrote);

    Checkpoint cp = read_checkpoint(path);
    CHECK(cp.n == 32);
    CHECK(cp.n_fields == 2);
    CHECK(cp.t == doctest::Approx(0.5).epsilon(1e-12));

    // resume from the checkpoint: trailing records must be bitwise identical
    std::vector<Snap> b_records;
    RunCallbacks cb2;
    cb2.record = [&](const std::vector<Field>& v, double t) {
        Snap s;
        s.t = t;
        for (const auto& f : v) s.data.emplace_back(f.spec().begin(), f.spec().end());
        b_records.push_back(std::move(s));
    };
    std::vector<Field> v;
    for (const auto& d : cp.fields) v.push_back(Field::from_spec(g, d));
    RunControl ctl2 = ctl;
    ctl2.t_start = cp.t;
    run_loop(model, v, ctl2, cb2);

    std::size_t ai = 0;
    while (ai < a_records.size() && a_records[ai].t <= cp.t) ++ai;
    std::size_t bi = 1; // skip the re-emitted record at the checkpoint time
    REQUIRE(a_records.size() - ai == b_records.size() - bi);
    for (; ai < a_records.size(); ++ai, ++bi) {
        CHECK(a_records[ai].t == b_records[bi].t);
        for (std::size_t f = 0; f < 2; ++f)
            CHECK(a_records[ai].data[f] == b_records[bi].data[f]);
    }
    fs::remove(path);
}

TEST_CASE("stepping is bitwise deterministic across thread counts") {
    auto g = Grid::make(64, 32.0 * kPi);
    const double c = 16.0 * kPi;
    Field psi0 = heat_kernel(g, {2.0, c + 1.0, c, 1.0});
    Field z0 = heat_kernel(g, {3.0, c, c, 1.0});

    auto run_threads = [&](int threads) {
        HallModel model(threads);
        auto u = hall_fields(psi0, z0);
        IfStepper stepper(g, 2, threads);
        double t = 0.0;
        for (int i = 0; i < 20; ++i) stepper.step(model, u, t, 0.01, Scheme::if_rk4);
        return u;
    };
    auto u1 = run_threads(1);
    auto u4 = run_threads(4);
    for (int f = 0; f < 2; ++f) {
        auto a = u1[f].spec();
        auto b = u4[f].spec();
        bool equal = a.size() == b.size();
        for (std::size_t i = 0; equal && i < a.size(); ++i) equal = a[i] == b[i];
        CHECK(equal);
    }
}
