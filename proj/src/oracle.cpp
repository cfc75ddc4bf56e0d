#include "hallmhd/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "hallmhd/errors.hpp"
#include "hallmhd/spectral.hpp"

namespace hallmhd {

namespace {

double wrap_half(double d, double l) {
    // map displacement into [-l/2, l/2)
    d = std::fmod(d, l);
    if (d < -0.5 * l) d += l;
    if (d >= 0.5 * l) d -= l;
    return d;
}

// Direct-summation full complex DFT of a real grid function; fwd=false applies
// the inverse including 1/n^2. Deliberately independent of the FFT path.
std::vector<std::complex<double>> direct_dft(const std::vector<std::complex<double>>& in, int n,
                                             bool fwd) {
    const double sgn = fwd ? -1.0 : 1.0;
    const double tau = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * n);
    for (int px = 0; px < n; ++px) {
        for (int py = 0; py < n; ++py) {
            std::complex<double> acc{0.0, 0.0};
            for (int jx = 0; jx < n; ++jx) {
                for (int jy = 0; jy < n; ++jy) {
                    const double phase = sgn * tau * (static_cast<double>(px) * jx + static_cast<double>(py) * jy) / n;
                    acc += in[static_cast<std::size_t>(jx) * n + jy] *
                           std::complex<double>{std::cos(phase), std::sin(phase)};
                }
            }
            out[static_cast<std::size_t>(px) * n + py] = acc;
        }
    }
    if (!fwd) {
        const double inv = 1.0 / (static_cast<double>(n) * n);
        for (auto& c : out) c *= inv;
    }
    return out;
}

std::vector<double> brute_deriv(const std::vector<double>& phys, int n, double l, bool x_axis) {
    std::vector<std::complex<double>> cin(phys.begin(), phys.end());
    auto spec = direct_dft(cin, n, true);
    const double k0 = 2.0 * std::numbers::pi / l;
    for (int px = 0; px < n; ++px) {
        for (int py = 0; py < n; ++py) {
            const int mx = px <= n / 2 ? px : px - n;
            const int my = py <= n / 2 ? py : py - n;
            const int m = x_axis ? mx : my;
            std::complex<double> f{0.0, k0 * m};
            if (std::abs(m) == n / 2) f = 0.0; // odd derivative at Nyquist
            spec[static_cast<std::size_t>(px) * n + py] *= f;
        }
    }
    auto back = direct_dft(spec, n, false);
    std::vector<double> out(back.size());
    for (std::size_t i = 0; i < back.size(); ++i) out[i] = back[i].real();
    return out;
}

} // namespace

Field heat_kernel(GridPtr grid, const KernelParams& p) {
    if (!(p.t > 0.0)) throw PreconditionError("heat_kernel requires t > 0");
    const int n = grid->n();
    const double l = grid->l();
    std::vector<double> phys(grid->phys_size());
    const double amp = p.mass / (4.0 * std::numbers::pi * p.t);
    for (int ix = 0; ix < n; ++ix) {
        const double dxc = wrap_half(grid->x(ix) - p.center_x, l);
        for (int iy = 0; iy < n; ++iy) {
            const double dyc = wrap_half(grid->y(iy) - p.center_y, l);
            phys[static_cast<std::size_t>(ix) * n + iy] =
                amp * std::exp(-(dxc * dxc + dyc * dyc) / (4.0 * p.t));
        }
    }
    return Field::from_phys(std::move(grid), std::move(phys));
}

double kernel_tail_mass(const Field& kernel, double mass) {
    if (mass == 0.0) return 0.0;
    return std::abs(mass - integral(kernel)) / std::abs(mass);
}

bool kernel_width_ok(const Grid& grid, double t) {
    return std::sqrt(4.0 * t) < grid.l() / 4.0;
}

Field heat_evolve(const Field& f0, double t) {
    if (t < 0.0) throw PreconditionError("heat_evolve requires t >= 0");
    const Grid& g = f0.grid();
    Field out(f0.grid_ptr());
    auto src = f0.spec();
    auto dst = out.spec_mut();
    const int nyc = g.nyc();
    for (int ix = 0; ix < g.n(); ++ix) {
        const double kx = g.kx(ix);
        const std::size_t row = static_cast<std::size_t>(ix) * nyc;
        for (int iyc = 0; iyc < nyc; ++iyc) {
            const double ky = g.ky_half(iyc);
            dst[row + iyc] = std::exp(-(kx * kx + ky * ky) * t) * src[row + iyc];
        }
    }
    return out;
}

Field brute_bracket(const Field& f, const Field& g) {
    require_same_grid(f, g, "brute_bracket");
    const Grid& grid = f.grid();
    const int n = grid.n();
    if (n > 32) throw PreconditionError("brute_bracket refuses n > 32 (O(n^4) cost guard)");

    std::vector<double> sf, sg;
    const std::vector<double>& fp = phys_ref(f, sf);
    const std::vector<double>& gp = phys_ref(g, sg);

    auto fx = brute_deriv(fp, n, grid.l(), true);
    auto fy = brute_deriv(fp, n, grid.l(), false);
    auto gx = brute_deriv(gp, n, grid.l(), true);
    auto gy = brute_deriv(gp, n, grid.l(), false);

    std::vector<double> prod(fp.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = fx[i] * gy[i] - fy[i] * gx[i];
    return Field::from_phys(f.grid_ptr(), std::move(prod));
}

} // namespace hallmhd
