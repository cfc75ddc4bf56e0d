#include "hallmhd/presets.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hallmhd/errors.hpp"
#include "hallmhd/oracle.hpp"

namespace hallmhd {

namespace {

double wrap_half(double d, double l) {
    d = std::fmod(d, l);
    if (d < -0.5 * l) d += l;
    if (d >= 0.5 * l) d -= l;
    return d;
}

// unit-mass Gaussian of std-dev w, nearest image
Field gaussian_bump(GridPtr grid, double w, double cx, double cy, double mass) {
    const int n = grid->n();
    std::vector<double> phys(grid->phys_size());
    const double amp = mass / (2.0 * std::numbers::pi * w * w);
    for (int ix = 0; ix < n; ++ix) {
        const double dx = wrap_half(grid->x(ix) - cx, grid->l());
        for (int iy = 0; iy < n; ++iy) {
            const double dy = wrap_half(grid->y(iy) - cy, grid->l());
            phys[static_cast<std::size_t>(ix) * n + iy] =
                amp * std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
        }
    }
    return Field::from_phys(std::move(grid), std::move(phys));
}

// amp * (x/w) * exp(-r^2 / 2 w^2): odd in x, zero mean
Field dipole_bump(GridPtr grid, double w, double cx, double cy, double amp) {
    const int n = grid->n();
    std::vector<double> phys(grid->phys_size());
    for (int ix = 0; ix < n; ++ix) {
        const double dx = wrap_half(grid->x(ix) - cx, grid->l());
        for (int iy = 0; iy < n; ++iy) {
            const double dy = wrap_half(grid->y(iy) - cy, grid->l());
            phys[static_cast<std::size_t>(ix) * n + iy] =
                amp * (dx / w) * std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
        }
    }
    return Field::from_phys(std::move(grid), std::move(phys));
}

Field sine_sum(GridPtr grid, const std::vector<InitialData::SineMode>& modes, bool z_side) {
    const int n = grid->n();
    const double k0 = 2.0 * std::numbers::pi / grid->l();
    std::vector<double> phys(grid->phys_size(), 0.0);
    for (const auto& m : modes) {
        const double amp = z_side ? m.amp_z : m.amp_psi;
        if (amp == 0.0) continue;
        for (int ix = 0; ix < n; ++ix)
            for (int iy = 0; iy < n; ++iy)
                phys[static_cast<std::size_t>(ix) * n + iy] +=
                    amp * std::sin(k0 * (m.mx * grid->x(ix) + m.my * grid->y(iy)));
    }
    return Field::from_phys(std::move(grid), std::move(phys));
}

} // namespace

double initial_center_x(const Grid& grid, const InitialData& init) {
    return init.center_x.value_or(0.5 * grid.l());
}
double initial_center_y(const Grid& grid, const InitialData& init) {
    return init.center_y.value_or(0.5 * grid.l());
}

Field random_bandlimited_field(GridPtr grid, std::uint64_t seed, int band, double amplitude) {
    const int n = grid->n();
    if (band < 1 || 3 * band > n)
        throw ConfigError("random_bandlimited band must satisfy 1 <= band <= n/3");
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto coef = [&]() {
        return std::complex<double>{2.0 * u01() - 1.0, 2.0 * u01() - 1.0};
    };

    const int nyc = grid->nyc();
    std::vector<std::complex<double>> spec(grid->spec_size());
    // my = 0 column: fill positive mx, mirror the conjugate into -mx
    for (int mx = 1; mx <= band; ++mx) {
        const auto c = coef();
        spec[static_cast<std::size_t>(mx) * nyc] = c;
        spec[static_cast<std::size_t>(n - mx) * nyc] = std::conj(c);
    }
    // my > 0 columns are free
    for (int my = 1; my <= band; ++my) {
        for (int mx = -band; mx <= band; ++mx) {
            const int row = mx >= 0 ? mx : mx + n;
            spec[static_cast<std::size_t>(row) * nyc + my] = coef();
        }
    }
    Field f = Field::from_spec(std::move(grid), std::move(spec));
    const double m = lp_norm(f, Lp::inf);
    if (m > 0.0) f *= amplitude / m;
    return f;
}

std::vector<Field> build_initial(GridPtr grid, Scenario scenario, const InitialData& init) {
    const double cx = initial_center_x(*grid, init);
    const double cy = initial_center_y(*grid, init);

    Field psi(grid), z(grid);
    switch (init.preset) {
    case InitialData::Preset::gaussian_pair:
        psi = gaussian_bump(grid, init.width, cx, cy, init.gamma);
        // a width contrast keeps the pair away from the translated-radial
        // degeneracy, where all brackets vanish identically
        if (init.dipole_amp != 0.0)
            psi += dipole_bump(grid, init.dipole_width.value_or(init.width), cx, cy,
                               init.dipole_amp);
        z = gaussian_bump(grid, init.width, cx, cy, init.eta);
        break;
    case InitialData::Preset::dipole_pair:
        psi = dipole_bump(grid, init.dipole_width.value_or(init.width), cx, cy,
                          init.dipole_amp);
        z = gaussian_bump(grid, init.width, cx, cy, init.eta);
        break;
    case InitialData::Preset::kernel_exact: {
        if (!(init.t0 > 0.0)) throw ConfigError("kernel_exact needs t0 > 0");
        psi = heat_kernel(grid, KernelParams{init.t0, cx, cy, init.gamma});
        z = heat_kernel(grid, KernelParams{init.t0, cx, cy, init.eta});
        break;
    }
    case InitialData::Preset::sine_modes:
        psi = sine_sum(grid, init.modes, false);
        z = sine_sum(grid, init.modes, true);
        break;
    case InitialData::Preset::random_bandlimited:
        psi = random_bandlimited_field(grid, init.seed, init.band, init.amplitude);
        z = random_bandlimited_field(grid, init.seed + 1, init.band, init.amplitude);
        break;
    }

    std::vector<Field> out;
    out.push_back(std::move(psi));
    out.push_back(std::move(z));
    if (scenario == Scenario::mhd) {
        out.push_back(gaussian_bump(grid, init.w_width, cx, cy, init.w_mass));
        out.push_back(dipole_bump(grid, init.omega_width, cx, cy, init.omega_amp));
    }
    return out;
}

} // namespace hallmhd
