#pragma once

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Parameters of the 2-D heat kernel mass/(4 pi t) * exp(-|x-center|^2 / 4t).
struct KernelParams {
    double t = 1.0;
    double center_x = 0.0;
    double center_y = 0.0;
    double mass = 1.0;
};

/// Sample the kernel with the nearest-image convention. Valid (tail below 1e-8)
/// while the effective width sqrt(4t) stays under l/4; the caller can check
/// kernel_tail_mass when operating near that limit.
Field heat_kernel(GridPtr grid, const KernelParams& p);

/// |mass - box integral of the sampled kernel| / |mass|: the mass the box tail loses.
double kernel_tail_mass(const Field& kernel, double mass);

/// True when sqrt(4t) < l/4.
bool kernel_width_ok(const Grid& grid, double t);

/// Exact heat semigroup on the torus: multiply each mode by exp(-|k|^2 t), t >= 0.
Field heat_evolve(const Field& f0, double t);

/// Independent Poisson-bracket oracle: direct-summation discrete transforms
/// (O(n^4)) for derivatives, pointwise product, no dealiasing. Refuses n > 32.
Field brute_bracket(const Field& f, const Field& g);

} // namespace hallmhd
