#include "hallmhd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "hallmhd/errors.hpp"
#include "hallmhd/parallel.hpp"

namespace hallmhd {

namespace {

const std::complex<double> I{0.0, 1.0};

// Apply a per-mode complex factor computed from (ix, iyc).
template <typename FactorFn>
Field apply_factor(const Field& f, FactorFn&& factor) {
    const Grid& g = f.grid();
    Field out(f.grid_ptr());
    auto src = f.spec();
    auto dst = out.spec_mut();
    const int nyc = g.nyc();
    for (int ix = 0; ix < g.n(); ++ix) {
        const std::size_t row = static_cast<std::size_t>(ix) * nyc;
        for (int iyc = 0; iyc < nyc; ++iyc)
            dst[row + iyc] = factor(ix, iyc) * src[row + iyc];
    }
    return out;
}

} // namespace

Field deriv(const Field& f, Axis axis, int order) {
    if (order < 1) throw ConfigError("derivative order must be positive");
    const Grid& g = f.grid();
    const int nq = g.n() / 2;
    const bool odd = (order % 2) != 0;
    return apply_factor(f, [&](int ix, int iyc) {
        const double k = (axis == Axis::x) ? g.kx(ix) : g.ky_half(iyc);
        // the Nyquist mode has no well-defined sign for odd derivatives
        if (odd && ((axis == Axis::x && ix == nq) || (axis == Axis::y && iyc == nq)))
            return std::complex<double>{0.0, 0.0};
        std::complex<double> c{1.0, 0.0};
        const std::complex<double> ik = I * k;
        for (int p = 0; p < order; ++p) c *= ik;
        return c;
    });
}

Field laplacian(const Field& f) { return laplacian_power(f, 1); }

Field laplacian_power(const Field& f, int p) {
    if (p < 0) throw ConfigError("laplacian_power: negative power");
    const Grid& g = f.grid();
    return apply_factor(f, [&](int ix, int iyc) {
        const double kx = g.kx(ix), ky = g.ky_half(iyc);
        const double m = -(kx * kx + ky * ky);
        double c = 1.0;
        for (int q = 0; q < p; ++q) c *= m;
        return std::complex<double>{c, 0.0};
    });
}

Field inv_laplacian(const Field& f) {
    const Grid& g = f.grid();
    auto src = f.spec();
    double rms2 = 0.0;
    for (const auto& c : src) rms2 += std::norm(c);
    const double rms = std::sqrt(rms2 / static_cast<double>(src.size()));
    const double zero_mag = std::abs(src[0]);
    if (zero_mag > 1e-10 * std::max(rms, 1e-300))
        throw PreconditionError("inv_laplacian requires a mean-free field; zero-mode magnitude " +
                                std::to_string(zero_mag) + " vs rms " + std::to_string(rms));
    Field out = apply_factor(f, [&](int ix, int iyc) {
        const double kx = g.kx(ix), ky = g.ky_half(iyc);
        const double k2 = kx * kx + ky * ky;
        return std::complex<double>{k2 > 0.0 ? -1.0 / k2 : 0.0, 0.0};
    });
    out.spec_mut()[0] = 0.0;
    return out;
}

Field dealias(const Field& f) {
    const Grid& g = f.grid();
    Field out(f.grid_ptr());
    auto src = f.spec();
    auto dst = out.spec_mut();
    const auto& mask = g.dealias_mask();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = mask[i] * src[i];
    return out;
}

Field poisson_bracket(const Field& f, const Field& g, int threads) {
    require_same_grid(f, g, "poisson_bracket");
    const Grid& grid = f.grid();
    const std::size_t np = grid.phys_size();

    std::vector<double> fx(np), fy(np), gx(np), gy(np);
    {
        Field t = deriv(f, Axis::x, 1);
        grid.inverse(t.spec().data(), fx.data());
        t = deriv(f, Axis::y, 1);
        grid.inverse(t.spec().data(), fy.data());
        t = deriv(g, Axis::x, 1);
        grid.inverse(t.spec().data(), gx.data());
        t = deriv(g, Axis::y, 1);
        grid.inverse(t.spec().data(), gy.data());
    }
    std::vector<double> prod(np);
    parallel_for(np, threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) prod[i] = fx[i] * gy[i] - fy[i] * gx[i];
    });
    Field out(f.grid_ptr());
    grid.forward(prod.data(), out.spec_mut().data());
    const auto& mask = grid.dealias_mask();
    auto dst = out.spec_mut();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] *= mask[i];
    return out;
}

double lp_norm(const Field& f, Lp p) {
    std::vector<double> scratch;
    const auto& v = phys_ref(f, scratch);
    const double w = f.grid().dx() * f.grid().dx();
    switch (p) {
    case Lp::one: {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return w * s;
    }
    case Lp::two: {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(w * s);
    }
    case Lp::four: {
        double s = 0.0;
        for (double x : v) s += (x * x) * (x * x);
        return std::pow(w * s, 0.25);
    }
    case Lp::inf: {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    }
    throw ConfigError("unsupported Lp");
}

double l2_sq_spectral(const Field& f) {
    const Grid& g = f.grid();
    auto src = f.spec();
    const int nyc = g.nyc();
    double s = 0.0;
    for (int ix = 0; ix < g.n(); ++ix) {
        const std::size_t row = static_cast<std::size_t>(ix) * nyc;
        for (int iyc = 0; iyc < nyc; ++iyc)
            s += g.col_weight(iyc) * std::norm(src[row + iyc]);
    }
    const double n2 = static_cast<double>(g.n()) * g.n();
    return s * (g.l() * g.l()) / (n2 * n2);
}

double sobolev_seminorm(const Field& f, int s) {
    if (s < 0 || s > 4) throw PreconditionError("sobolev_seminorm: s must be in 0..4");
    const Grid& g = f.grid();
    auto src = f.spec();
    const int nyc = g.nyc();
    double acc = 0.0;
    for (int ix = 0; ix < g.n(); ++ix) {
        const std::size_t row = static_cast<std::size_t>(ix) * nyc;
        const double kx = g.kx(ix);
        for (int iyc = 0; iyc < nyc; ++iyc) {
            const double ky = g.ky_half(iyc);
            const double k2 = kx * kx + ky * ky;
            double wk = 1.0;
            for (int q = 0; q < s; ++q) wk *= k2;
            acc += g.col_weight(iyc) * wk * std::norm(src[row + iyc]);
        }
    }
    const double n2 = static_cast<double>(g.n()) * g.n();
    return std::sqrt(acc * (g.l() * g.l()) / (n2 * n2));
}

double inner_product(const Field& f, const Field& g) {
    require_same_grid(f, g, "inner_product");
    std::vector<double> sf, sg;
    const auto& vf = phys_ref(f, sf);
    const auto& vg = phys_ref(g, sg);
    double s = 0.0;
    for (std::size_t i = 0; i < vf.size(); ++i) s += vf[i] * vg[i];
    return s * f.grid().dx() * f.grid().dx();
}

double integral(const Field& f) {
    // zero spectral mode times the quadrature weight
    const Grid& g = f.grid();
    return f.spec()[0].real() * g.dx() * g.dx();
}

double mean(const Field& f) { return integral(f) / (f.grid().l() * f.grid().l()); }

double grad_inf_norm(const Field& f) {
    const Grid& g = f.grid();
    std::vector<double> fx(g.phys_size()), fy(g.phys_size());
    Field t = deriv(f, Axis::x, 1);
    g.inverse(t.spec().data(), fx.data());
    t = deriv(f, Axis::y, 1);
    g.inverse(t.spec().data(), fy.data());
    double m = 0.0;
    for (std::size_t i = 0; i < fx.size(); ++i)
        m = std::max(m, fx[i] * fx[i] + fy[i] * fy[i]);
    return std::sqrt(m);
}

} // namespace hallmhd
