#include "hallmhd/models.hpp"

#include <cmath>
#include <numbers>

#include "hallmhd/errors.hpp"
#include "hallmhd/parallel.hpp"
#include "hallmhd/spectral.hpp"

namespace hallmhd {

HallState::HallState(Field psi_, Field z_, double t_)
    : psi(std::move(psi_)), z(std::move(z_)), t(t_) {
    require_same_grid(psi, z, "HallState");
    if (t < 0.0) throw ConfigError("state time must be nonnegative");
}

MhdState::MhdState(Field psi_, Field z_, Field w_, Field omega_, double t_)
    : psi(std::move(psi_)), z(std::move(z_)), w(std::move(w_)), omega(std::move(omega_)), t(t_) {
    require_same_grid(psi, z, "MhdState");
    require_same_grid(psi, w, "MhdState");
    require_same_grid(psi, omega, "MhdState");
    if (t < 0.0) throw ConfigError("state time must be nonnegative");
}

void HarmonicBackground::validate() const {
    if (target == Target::z_bar && kind != Kind::linear)
        throw ConfigError("z_bar backgrounds must be linear (a*x + b*y)");
}

double HarmonicBackground::hessian_inf() const {
    switch (kind) {
    case Kind::linear: return 0.0;
    case Kind::quadratic_saddle: return 2.0 * std::abs(c);
    case Kind::quadratic_xy: return std::abs(c);
    }
    return 0.0;
}

double HarmonicBackground::grad_inf_linear() const {
    if (kind != Kind::linear) throw ConfigError("grad_inf_linear only defined for linear backgrounds");
    return std::sqrt(a * a + b * b);
}

namespace {

// Centered coordinate value at sample index i: x(i) - l/2.
double centered_coord(const Grid& g, int i) { return g.x(i) - 0.5 * g.l(); }

} // namespace

Field background_bracket(const HarmonicBackground& bg, const Field& g, int threads) {
    const Grid& grid = g.grid();
    if (bg.kind == HarmonicBackground::Kind::linear) {
        // [f_bar, g] = a g_y - b g_x, exact in spectral space
        return deriv(g, Axis::y, 1) * bg.a - deriv(g, Axis::x, 1) * bg.b;
    }
    // quadratic kinds: coefficient fields x, y on the box; grid product, then dealias
    const std::size_t np = grid.phys_size();
    std::vector<double> gx(np), gy(np);
    {
        Field t = deriv(g, Axis::x, 1);
        grid.inverse(t.spec().data(), gx.data());
        t = deriv(g, Axis::y, 1);
        grid.inverse(t.spec().data(), gy.data());
    }
    std::vector<double> prod(np);
    const int n = grid.n();
    const bool saddle = bg.kind == HarmonicBackground::Kind::quadratic_saddle;
    const double c = bg.c;
    parallel_for(np, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const int ix = static_cast<int>(i) / n;
            const int iy = static_cast<int>(i) % n;
            const double xc = centered_coord(grid, ix);
            const double yc = centered_coord(grid, iy);
            // saddle f = c(x^2-y^2): grad = (2cx, -2cy); xy f = cxy: grad = (cy, cx)
            const double fbx = saddle ? 2.0 * c * xc : c * yc;
            const double fby = saddle ? -2.0 * c * yc : c * xc;
            prod[i] = fbx * gy[i] - fby * gx[i];
        }
    });
    Field out(g.grid_ptr());
    grid.forward(prod.data(), out.spec_mut().data());
    auto dst = out.spec_mut();
    const auto& mask = grid.dealias_mask();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= mask[i];
    return out;
}

std::vector<double> sponge_profile(const Grid& grid, const SpongeParams& sp) {
    const int n = grid.n();
    std::vector<double> sigma(grid.phys_size(), 0.0);
    if (!sp.enabled) return sigma;
    const double r0 = sp.start_frac * 0.5 * grid.l();
    const double r1 = 0.5 * grid.l();
    for (int ix = 0; ix < n; ++ix) {
        const double xc = centered_coord(grid, ix);
        for (int iy = 0; iy < n; ++iy) {
            const double yc = centered_coord(grid, iy);
            const double r = std::sqrt(xc * xc + yc * yc);
            if (r <= r0) continue;
            const double s = std::min(1.0, (r - r0) / (r1 - r0));
            sigma[static_cast<std::size_t>(ix) * n + iy] =
                sp.strength * 0.5 * (1.0 - std::cos(std::numbers::pi * s));
        }
    }
    return sigma;
}

double sponge_mass_fraction(const Field& a, const Field& b, const SpongeParams& sp) {
    require_same_grid(a, b, "sponge_mass_fraction");
    auto sigma = sponge_profile(a.grid(), sp);
    std::vector<double> sa, sb;
    const auto& va = phys_ref(a, sa);
    const auto& vb = phys_ref(b, sb);
    double inside = 0.0, total = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) {
        const double m = std::abs(va[i]) + std::abs(vb[i]);
        total += m;
        if (sigma[i] > 0.0) inside += m;
    }
    return total > 0.0 ? inside / total : 0.0;
}

HallRhs hall_rhs(const HallState& s, int threads) {
    Field dpsi = laplacian(s.psi) + poisson_bracket(s.psi, s.z, threads);
    Field dz = laplacian(s.z) + poisson_bracket(laplacian(s.psi), s.psi, threads);
    return {std::move(dpsi), std::move(dz)};
}

MhdRhs mhd_rhs(const MhdState& s, int threads) {
    const Field phi = inv_laplacian(s.omega);
    Field hall_term = poisson_bracket(laplacian(s.psi), s.psi, threads);
    Field psi_z = poisson_bracket(s.psi, s.z, threads);

    Field dpsi = laplacian(s.psi) + psi_z - poisson_bracket(s.psi, phi, threads);
    Field dz = laplacian(s.z) + hall_term - poisson_bracket(s.z, phi, threads) +
               poisson_bracket(s.w, s.psi, threads);
    Field dw = laplacian(s.w) - poisson_bracket(s.w, phi, threads) - psi_z;
    Field domega = laplacian(s.omega) - poisson_bracket(s.omega, phi, threads) + hall_term;
    return {std::move(dpsi), std::move(dz), std::move(dw), std::move(domega)};
}

HallRhs case1_rhs(const HallState& s, const HarmonicBackground& bg, int threads) {
    bg.validate();
    if (bg.target != HarmonicBackground::Target::psi_bar)
        throw ConfigError("case1_rhs requires a psi_bar background");
    const Field lap_rho = laplacian(s.psi);
    Field drho = laplacian(s.psi) + poisson_bracket(s.psi, s.z, threads) +
                 background_bracket(bg, s.z, threads);
    // [lap rho, psi_bar] = -[psi_bar, lap rho]
    Field dz = laplacian(s.z) + poisson_bracket(lap_rho, s.psi, threads) -
               background_bracket(bg, lap_rho, threads);
    return {std::move(drho), std::move(dz)};
}

HallRhs case2_rhs(const HallState& s, const HarmonicBackground& bg, int threads) {
    bg.validate();
    if (bg.target != HarmonicBackground::Target::z_bar)
        throw ConfigError("case2_rhs requires a z_bar background");
    // [psi, z_bar] = b psi_x - a psi_y = -[z_bar, psi]
    Field dpsi = laplacian(s.psi) + poisson_bracket(s.psi, s.z, threads) -
                 background_bracket(bg, s.psi, threads);
    Field domega = laplacian(s.z) + poisson_bracket(laplacian(s.psi), s.psi, threads);
    return {std::move(dpsi), std::move(domega)};
}

HallState rescale(const HallState& s, double lambda) {
    if (!(lambda > 0.0)) throw ConfigError("rescale requires lambda > 0");
    const Grid& g = s.psi.grid();
    const int n = g.n();
    const int nyc = g.nyc();

    int up = 0, down = 0;
    const double r = std::round(lambda);
    const double rinv = std::round(1.0 / lambda);
    if (std::abs(lambda - r) < 1e-12 && r >= 1.0) {
        up = static_cast<int>(r);
    } else if (std::abs(1.0 / lambda - rinv) < 1e-12 && rinv >= 1.0) {
        down = static_cast<int>(rinv);
    } else {
        throw ConfigError("rescale: lambda must be an integer or the reciprocal of one");
    }

    auto remap = [&](const Field& f, double amp) {
        std::vector<std::complex<double>> out(g.spec_size());
        auto src = f.spec();
        for (int ix = 0; ix < n; ++ix) {
            const int mx = g.mode_index(ix);
            for (int iyc = 0; iyc < nyc; ++iyc) {
                int tx, ty;
                if (up) {
                    tx = mx * up;
                    ty = iyc * up;
                } else {
                    if (mx % down != 0 || iyc % down != 0) continue;
                    tx = mx / down;
                    ty = iyc / down;
                }
                if (std::abs(tx) > n / 2 || ty > n / 2) continue;
                const int row = tx >= 0 ? tx : tx + n;
                out[static_cast<std::size_t>(row) * nyc + ty] =
                    amp * src[static_cast<std::size_t>(ix) * nyc + iyc];
            }
        }
        return Field::from_spec(f.grid_ptr(), std::move(out));
    };

    if (up == 1) return s;
    Field psi = remap(s.psi, 1.0 / lambda);
    Field z = remap(s.z, 1.0);
    return HallState(std::move(psi), std::move(z), s.t / (lambda * lambda));
}

HallModel::HallModel(Variant v, HarmonicBackground bg, SpongeParams sponge, int threads)
    : variant_(v), bg_(bg), sponge_(sponge), threads_(threads) {
    if (variant_ != Variant::plain) bg_.validate();
    if (variant_ == Variant::case2 && bg_.kind != HarmonicBackground::Kind::linear)
        throw ConfigError("case2 backgrounds must be linear");
}

std::vector<std::string> HallModel::field_names() const {
    switch (variant_) {
    case Variant::plain: return {"psi", "z"};
    case Variant::case1: return {"rho", "z"};
    case Variant::case2: return {"psi", "omega"};
    }
    return {"psi", "z"};
}

void HallModel::nonlinear(const std::vector<Field>& u, std::vector<Field>& out) const {
    const Field& a = u[0];
    const Field& b = u[1];
    out[0] = poisson_bracket(a, b, threads_);
    const Field lap_a = laplacian(a);
    out[1] = poisson_bracket(lap_a, a, threads_);
    if (variant_ == Variant::case1) {
        out[0] += background_bracket(bg_, b, threads_);
        out[1] -= background_bracket(bg_, lap_a, threads_);
    } else if (variant_ == Variant::case2) {
        out[0] -= background_bracket(bg_, a, threads_);
    }
    if (sponge_.enabled) {
        const Grid& grid = a.grid();
        auto sigma = sponge_profile(grid, sponge_);
        for (int f = 0; f < 2; ++f) {
            std::vector<double> scratch;
            const auto& v = phys_ref(u[f], scratch);
            std::vector<double> damped(v.size());
            for (std::size_t i = 0; i < v.size(); ++i) damped[i] = -sigma[i] * v[i];
            Field d(a.grid_ptr());
            grid.forward(damped.data(), d.spec_mut().data());
            out[f] += d;
        }
    }
}

Model::CflInputs HallModel::cfl_inputs(const std::vector<Field>& u) const {
    return {grad_inf_norm(u[0]), grad_inf_norm(u[1])};
}

void MhdModel::nonlinear(const std::vector<Field>& u, std::vector<Field>& out) const {
    const Field& psi = u[0];
    const Field& z = u[1];
    const Field& w = u[2];
    const Field& omega = u[3];
    const Field phi = inv_laplacian(omega);
    const Field hall_term = poisson_bracket(laplacian(psi), psi, threads_);
    const Field psi_z = poisson_bracket(psi, z, threads_);

    out[0] = psi_z - poisson_bracket(psi, phi, threads_);
    out[1] = hall_term - poisson_bracket(z, phi, threads_) + poisson_bracket(w, psi, threads_);
    out[2] = Field(psi.grid_ptr()) - poisson_bracket(w, phi, threads_) - psi_z;
    out[3] = hall_term - poisson_bracket(omega, phi, threads_);
}

Model::CflInputs MhdModel::cfl_inputs(const std::vector<Field>& u) const {
    const Field phi = inv_laplacian(u[3]);
    const double w_inf = lp_norm(u[2], Lp::inf);
    return {grad_inf_norm(u[0]), grad_inf_norm(u[1]) + grad_inf_norm(phi) + w_inf};
}

} // namespace hallmhd
