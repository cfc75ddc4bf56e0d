#pragma once

#include "hallmhd/field.hpp"

namespace hallmhd {

enum class Axis { x, y };

/// Lp norms supported by the quadrature path.
enum class Lp { one, two, four, inf };

/// Spectral derivative: multiplication by (i k_axis)^order. Odd orders zero the
/// Nyquist row/column so the result stays the transform of a real field.
Field deriv(const Field& f, Axis axis, int order);

/// Multiplication by -|k|^2.
Field laplacian(const Field& f);

/// Multiplication by (-|k|^2)^p, p >= 0.
Field laplacian_power(const Field& f, int p);

/// Divide each nonzero mode by -|k|^2 and zero the mean. The input must be
/// mean-free: |zero mode| <= 1e-10 * spectral rms, else PreconditionError.
Field inv_laplacian(const Field& f);

/// Zero every mode with either |mode index| > n/3.
Field dealias(const Field& f);

/// [f, g] = f_x g_y - f_y g_x: derivatives in spectral space, product on the
/// grid, then the two-thirds mask. `threads` parallelizes the pointwise product.
Field poisson_bracket(const Field& f, const Field& g, int threads = 1);

/// Rectangle-rule L^p norm, p in {1,2,4,inf}; spectrally accurate for smooth
/// periodic integrands. p=2 matches the Parseval value to roundoff.
double lp_norm(const Field& f, Lp p);

/// ( sum |k|^{2s} |f_k|^2, Parseval-normalized )^{1/2}, s in 0..4.
/// s=0 is the L^2 norm, s=1 is |grad f|_2, s=2 is |lap f|_2, ...
double sobolev_seminorm(const Field& f, int s);

/// Quadrature inner product (dx)^2 sum f g.
double inner_product(const Field& f, const Field& g);

/// (dx)^2 sum f  (the box integral).
double integral(const Field& f);
double mean(const Field& f);

/// max over the grid of sqrt(f_x^2 + f_y^2).
double grad_inf_norm(const Field& f);

/// Parseval value of the squared L^2 norm computed purely spectrally.
double l2_sq_spectral(const Field& f);

} // namespace hallmhd
