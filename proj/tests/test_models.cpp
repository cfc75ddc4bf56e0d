#include <doctest.h>

#include <numbers>

#include "hallmhd/errors.hpp"
#include "hallmhd/models.hpp"
#include "hallmhd/oracle.hpp"
#include "hallmhd/presets.hpp"
#include "hallmhd/spectral.hpp"
#include "test_helpers.hpp"

using namespace hallmhd;
using namespace hallmhd::test;

namespace {

// test-local direct-summation derivative, independent of the FFT path
std::vector<double> direct_deriv(const Field& f, bool x_axis) {
    const Grid& g = f.grid();
    const int n = g.n();
    std::vector<double> scratch;
    const auto& v = phys_ref(f, scratch);
    const double tau = 2.0 * kPi;
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(n) * n);
    for (int px = 0; px < n; ++px)
        for (int py = 0; py < n; ++py) {
            std::complex<double> acc{0.0, 0.0};
            for (int jx = 0; jx < n; ++jx)
                for (int jy = 0; jy < n; ++jy) {
                    const double ph = -tau * (double(px) * jx + double(py) * jy) / n;
                    acc += v[std::size_t(jx) * n + jy] *
                           std::complex<double>{std::cos(ph), std::sin(ph)};
                }
            spec[std::size_t(px) * n + py] = acc;
        }
    const double k0 = tau / g.l();
    std::vector<double> out(v.size());
    for (int jx = 0; jx < n; ++jx)
        for (int jy = 0; jy < n; ++jy) {
            std::complex<double> acc{0.0, 0.0};
            for (int px = 0; px < n; ++px)
                for (int py = 0; py < n; ++py) {
                    const int mx = px <= n / 2 ? px : px - n;
                    const int my = py <= n / 2 ? py : py - n;
                    const int m = x_axis ? mx : my;
                    if (std::abs(m) == n / 2) continue;
                    const double ph = tau * (double(px) * jx + double(py) * jy) / n;
                    acc += std::complex<double>{0.0, k0 * m} * spec[std::size_t(px) * n + py] *
                           std::complex<double>{std::cos(ph), std::sin(ph)};
                }
            out[std::size_t(jx) * n + jy] = acc.real() / (double(n) * n);
        }
    return out;
}

} // namespace

TEST_CASE("hall rhs closed forms") {
    auto g = Grid::make(64, 32.0 * kPi);
    const double c = 16.0 * kPi;

    // radial pair: both brackets vanish (radial fields commute)
    Field psi = heat_kernel(g, {4.0, c, c, 1.0});
    Field z = psi * 0.6;
    HallState s(psi, z);
    HallRhs r = hall_rhs(s);
    const double scale = std::max(lp_norm(psi, Lp::inf), 1e-30);
    CHECK(lp_norm(r.dpsi - laplacian(psi), Lp::inf) <= 1e-9 * scale);
    CHECK(lp_norm(r.dz - laplacian(z), Lp::inf) <= 1e-9 * scale);

    // psi = 0: pure heat on Z
    Field zero(g);
    Field zr = random_bandlimited_field(g, 9, 6, 1.0);
    HallRhs r2 = hall_rhs(HallState(zero, zr));
    CHECK(lp_norm(r2.dpsi, Lp::inf) < 1e-14);
    CHECK(max_abs_diff(r2.dz, laplacian(zr)) < 1e-12);
}

TEST_CASE("hall rhs single-mode example") {
    auto g = Grid::make(32, 2.0 * kPi);
    Field psi = field_from(g, [](double x, double) { return std::sin(x); });
    Field z = field_from(g, [](double, double y) { return std::sin(y); });
    HallRhs r = hall_rhs(HallState(psi, z));
    CHECK(max_abs_diff(r.dpsi, [](double x, double y) {
              return -std::sin(x) + std::cos(x) * std::cos(y);
          }) < 1e-10);
    // [lap psi, psi] = [-sin x, sin x] = 0, so dz is pure heat on Z
    CHECK(max_abs_diff(r.dz, [](double, double y) { return -std::sin(y); }) < 1e-10);
}

TEST_CASE("mhd rhs reduces to the hall pair when the fluid is off") {
    auto g = Grid::make(32, 2.0 * kPi);
    Field psi = random_bandlimited_field(g, 41, 5, 0.8);
    Field z = random_bandlimited_field(g, 42, 5, 0.8);
    Field zero(g);
    MhdState s(psi, z, zero, zero);
    MhdRhs m = mhd_rhs(s);
    HallRhs h = hall_rhs(HallState(psi, z));

    CHECK(lp_norm(m.dpsi - h.dpsi, Lp::inf) <= 1e-10);
    CHECK(lp_norm(m.dz - h.dz, Lp::inf) <= 1e-10);
    Field psi_z = poisson_bracket(psi, z);
    Field hall_term = poisson_bracket(laplacian(psi), psi);
    CHECK(lp_norm(m.dw + psi_z, Lp::inf) <= 1e-10);
    CHECK(lp_norm(m.domega - hall_term, Lp::inf) <= 1e-10);

    MhdRhs all0 = mhd_rhs(MhdState(zero, zero, zero, zero));
    CHECK(lp_norm(all0.dpsi, Lp::inf) == 0.0);
    CHECK(lp_norm(all0.dz, Lp::inf) == 0.0);
    CHECK(lp_norm(all0.dw, Lp::inf) == 0.0);
    CHECK(lp_norm(all0.domega, Lp::inf) == 0.0);
}

TEST_CASE("mhd rhs against the direct-summation oracle") {
    auto g = Grid::make(16, 2.0 * kPi);
    // band-limited so products are alias-free for the no-dealias oracle
    Field psi = field_from(g, [](double x, double) { return std::sin(x); });
    Field z = field_from(g, [](double, double y) { return std::sin(y); });
    Field w = field_from(g, [](double x, double y) { return 0.1 * std::sin(x + y); });
    Field omega = field_from(g, [](double x, double) { return std::sin(2.0 * x); });
    MhdState s(psi, z, w, omega);
    MhdRhs m = mhd_rhs(s);

    const Field phi = inv_laplacian(omega);
    const Field lap_psi = laplacian(psi);
    Field dpsi_o = laplacian(psi) + brute_bracket(psi, z) - brute_bracket(psi, phi);
    Field dz_o = laplacian(z) + brute_bracket(lap_psi, psi) - brute_bracket(z, phi) +
                 brute_bracket(w, psi);
    Field dw_o = laplacian(w) - brute_bracket(w, phi) - brute_bracket(psi, z);
    Field domega_o = laplacian(omega) - brute_bracket(omega, phi) + brute_bracket(lap_psi, psi);

    CHECK(lp_norm(m.dpsi - dealias(dpsi_o), Lp::inf) <= 1e-9);
    CHECK(lp_norm(m.dz - dealias(dz_o), Lp::inf) <= 1e-9);
    CHECK(lp_norm(m.dw - dealias(dw_o), Lp::inf) <= 1e-9);
    CHECK(lp_norm(m.domega - dealias(domega_o), Lp::inf) <= 1e-9);

    Field biased = field_from(g, [](double, double) { return 1.0; });
    CHECK_THROWS_AS(mhd_rhs(MhdState(psi, z, w, biased)), PreconditionError);
}

TEST_CASE("case1 background forms") {
    auto g = Grid::make(32, 2.0 * kPi);
    HarmonicBackground lin{HarmonicBackground::Kind::linear,
                           HarmonicBackground::Target::psi_bar, 1.3, -0.4, 0.0};

    // [psi_bar, Z] = a Z_y - b Z_x for Z = sin y: a cos y
    Field z = field_from(g, [](double, double y) { return std::sin(y); });
    CHECK(max_abs_diff(background_bracket(lin, z), [&](double, double y) {
              return 1.3 * std::cos(y) - 0.0;
          }) < 1e-9);

    // rho = 0: drho = [psi_bar, Z], dz = lap Z
    Field zero(g);
    HallRhs r = case1_rhs(HallState(zero, z), lin);
    CHECK(max_abs_diff(r.dpsi, background_bracket(lin, z)) < 1e-12);
    CHECK(max_abs_diff(r.dz, laplacian(z)) < 1e-12);

    HarmonicBackground bad{HarmonicBackground::Kind::quadratic_saddle,
                           HarmonicBackground::Target::z_bar, 0, 0, 1.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("case1 quadratic background against the direct-summation oracle") {
    auto g = Grid::make(16, 2.0 * kPi);
    const double c = 0.7;
    HarmonicBackground saddle{HarmonicBackground::Kind::quadratic_saddle,
                              HarmonicBackground::Target::psi_bar, 0, 0, c};
    // compactly-supported-ish bump away from the boundary
    Field z = field_from(g, [](double x, double y) {
        const double dx = x - kPi, dy = y - kPi;
        return std::exp(-(dx * dx + dy * dy));
    });
    Field mine = background_bracket(saddle, z);

    auto zx = direct_deriv(z, true);
    auto zy = direct_deriv(z, false);
    const int n = g->n();
    std::vector<double> prod(g->phys_size());
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
            const double xc = g->x(ix) - kPi, yc = g->y(iy) - kPi;
            prod[std::size_t(ix) * n + iy] = 2.0 * c * xc * zy[std::size_t(ix) * n + iy] +
                                             2.0 * c * yc * zx[std::size_t(ix) * n + iy];
        }
    Field oracle = dealias(Field::from_phys(g, std::move(prod)));
    CHECK(lp_norm(mine - oracle, Lp::inf) <= 1e-9 * std::max(1.0, lp_norm(oracle, Lp::inf)));
}

TEST_CASE("case2 forms") {
    auto g = Grid::make(32, 2.0 * kPi);
    HarmonicBackground zb{HarmonicBackground::Kind::linear, HarmonicBackground::Target::z_bar,
                          0.0, 1.0, 0.0};
    Field psi = field_from(g, [](double x, double) { return std::sin(x); });
    Field zero(g);
    HallRhs r = case2_rhs(HallState(psi, zero), zb);
    CHECK(max_abs_diff(r.dpsi, [](double x, double) { return -std::sin(x) + std::cos(x); }) <
          1e-10);
    CHECK(lp_norm(r.dz, Lp::inf) < 1e-12);

    // zero background reduces to hall
    HarmonicBackground zb0{HarmonicBackground::Kind::linear, HarmonicBackground::Target::z_bar,
                           0.0, 0.0, 0.0};
    Field om = random_bandlimited_field(g, 3, 5, 0.5);
    Field ps = random_bandlimited_field(g, 4, 5, 0.5);
    HallRhs a = case2_rhs(HallState(ps, om), zb0);
    HallRhs b = hall_rhs(HallState(ps, om));
    CHECK(lp_norm(a.dpsi - b.dpsi, Lp::inf) <= 1e-14);
    CHECK(lp_norm(a.dz - b.dz, Lp::inf) <= 1e-14);

    // radial pair: the mutual bracket vanishes for any (a, b)
    auto gl = Grid::make(64, 32.0 * kPi);
    const double ctr = 16.0 * kPi;
    Field pr = heat_kernel(gl, {3.0, ctr, ctr, 1.0});
    Field wr = heat_kernel(gl, {5.0, ctr, ctr, 0.4});
    HarmonicBackground zb2{HarmonicBackground::Kind::linear, HarmonicBackground::Target::z_bar,
                           0.8, -1.1, 0.0};
    HallRhs rr = case2_rhs(HallState(pr, wr), zb2);
    Field residual = rr.dpsi - laplacian(pr) + background_bracket(zb2, pr);
    CHECK(lp_norm(residual, Lp::inf) <= 1e-9 * lp_norm(pr, Lp::inf));

    HarmonicBackground badkind{HarmonicBackground::Kind::quadratic_xy,
                               HarmonicBackground::Target::z_bar, 0, 0, 1.0};
    CHECK_THROWS_AS(case2_rhs(HallState(ps, om), badkind), ConfigError);
}

TEST_CASE("rescale") {
    auto g = Grid::make(32, 2.0 * kPi);
    Field psi = field_from(g, [](double x, double) { return std::sin(x); });
    Field z = field_from(g, [](double x, double) { return std::sin(x); });
    HallState s(psi, z, 1.0);

    HallState id = rescale(s, 1.0);
    CHECK(max_abs_diff(id.psi, psi) == 0.0);
    CHECK(id.t == 1.0);

    HallState up = rescale(s, 2.0);
    CHECK(max_abs_diff(up.psi, [](double x, double) { return 0.5 * std::sin(2.0 * x); }) <
          1e-12);
    CHECK(max_abs_diff(up.z, [](double x, double) { return std::sin(2.0 * x); }) < 1e-12);
    CHECK(up.t == doctest::Approx(0.25));

    Field psi2 = field_from(g, [](double x, double) { return std::sin(2.0 * x); });
    HallState down = rescale(HallState(psi2, psi2, 1.0), 0.5);
    CHECK(max_abs_diff(down.psi, [](double x, double) { return 2.0 * std::sin(x); }) < 1e-12);
    CHECK(max_abs_diff(down.z, [](double x, double) { return std::sin(x); }) < 1e-12);
    CHECK(down.t == doctest::Approx(4.0));

    CHECK_THROWS_AS(rescale(s, 1.5), ConfigError);
}

TEST_CASE("discrete energy identity for the hall pair") {
    auto g = Grid::make(64, 2.0 * kPi);
    for (unsigned seed : {11u, 12u}) {
        Field psi = random_bandlimited_field(g, seed, 8, 1.0);
        Field z = random_bandlimited_field(g, seed + 50, 8, 1.0);
        Field pb1 = poisson_bracket(psi, z);
        Field pb2 = poisson_bracket(laplacian(psi), psi);
        const double lhs = -inner_product(laplacian(psi), pb1) + inner_product(z, pb2);
        const double scale = std::abs(inner_product(laplacian(psi), pb1)) +
                             lp_norm(z, Lp::two) * lp_norm(pb2, Lp::two);
        CHECK(std::abs(lhs) <= 1e-9 * std::max(scale, 1e-30));
    }
}

TEST_CASE("full-mhd nonlinear terms cancel in the first energy bundle") {
    auto g = Grid::make(64, 2.0 * kPi);
    Field psi = random_bandlimited_field(g, 61, 8, 1.0);
    Field z = random_bandlimited_field(g, 62, 8, 1.0);
    Field w = random_bandlimited_field(g, 63, 8, 1.0);
    Field omega = random_bandlimited_field(g, 64, 8, 1.0);
    omega.spec_mut()[0] = 0.0;

    MhdModel model;
    std::vector<Field> u{psi, z, w, omega};
    std::vector<Field> nl{Field(g), Field(g), Field(g), Field(g)};
    model.nonlinear(u, nl);

    const Field phi = inv_laplacian(omega);
    const double total = -inner_product(laplacian(psi), nl[0]) + inner_product(z, nl[1]) +
                         inner_product(w, nl[2]) - inner_product(phi, nl[3]);
    double scale = 0.0;
    scale += lp_norm(laplacian(psi), Lp::two) * lp_norm(nl[0], Lp::two);
    scale += lp_norm(z, Lp::two) * lp_norm(nl[1], Lp::two);
    scale += lp_norm(w, Lp::two) * lp_norm(nl[2], Lp::two);
    scale += lp_norm(phi, Lp::two) * lp_norm(nl[3], Lp::two);
    CHECK(std::abs(total) <= 1e-9 * scale);
}

TEST_CASE("sponge profile and support monitor") {
    auto g = Grid::make(64, 32.0 * kPi);
    SpongeParams sp{true, 1.0, 0.9};
    auto sigma = sponge_profile(*g, sp);
    const int n = g->n();
    // zero well inside, positive in the outer annulus
    CHECK(sigma[std::size_t(n / 2) * n + n / 2] == 0.0);
    CHECK(sigma[0] > 0.0); // box corner is deepest into the annulus

    const double c = 16.0 * kPi;
    Field centered = heat_kernel(g, {1.0, c, c, 1.0});
    CHECK(sponge_mass_fraction(centered, centered, sp) < 1e-6);
    Field wide = field_from(g, [](double, double) { return 1.0; });
    CHECK(sponge_mass_fraction(wide, wide, sp) > 0.05);
}
