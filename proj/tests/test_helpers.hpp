#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hallmhd/field.hpp"
#include "hallmhd/spectral.hpp"

namespace hallmhd::test {

inline constexpr double kPi = std::numbers::pi;

inline Field field_from(GridPtr grid, const std::function<double(double, double)>& fn) {
    const int n = grid->n();
    std::vector<double> phys(grid->phys_size());
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            phys[static_cast<std::size_t>(ix) * n + iy] = fn(grid->x(ix), grid->y(iy));
    return Field::from_phys(std::move(grid), std::move(phys));
}

inline double max_abs_diff(const Field& f, const std::function<double(double, double)>& fn) {
    const Grid& g = f.grid();
    std::vector<double> scratch;
    const auto& v = phys_ref(f, scratch);
    double m = 0.0;
    for (int ix = 0; ix < g.n(); ++ix)
        for (int iy = 0; iy < g.n(); ++iy)
            m = std::max(m, std::abs(v[static_cast<std::size_t>(ix) * g.n() + iy] -
                                     fn(g.x(ix), g.y(iy))));
    return m;
}

inline double max_abs_diff(const Field& a, const Field& b) {
    return lp_norm(a - b, Lp::inf);
}

inline Field white_noise(GridPtr grid, unsigned seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::vector<double> phys(grid->phys_size());
    for (auto& x : phys)
        x = amp * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
    return Field::from_phys(std::move(grid), std::move(phys));
}

} // namespace hallmhd::test
