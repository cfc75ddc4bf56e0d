#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace hallmhd {

/// Periodic square box [0, l)^2 sampled on an n x n grid, plus the spectral
/// machinery attached to it: signed wavenumber tables, the two-thirds dealias
/// mask, and cached FFT plans.
///
/// Transform convention: the forward transform is the unnormalized real-to-complex
/// DFT (half-spectrum in y, n x (n/2+1) modes); the inverse divides by n^2 so that
/// inverse(forward(f)) == f. All norms are defined so they do not depend on this
/// convention.
///
/// Layout: physical index (ix, iy) -> ix*n + iy; spectral index (ix, iyc) ->
/// ix*(n/2+1) + iyc. Row ix carries the signed x-mode (ix <= n/2 ? ix : ix - n),
/// column iyc the nonnegative y-mode.
class Grid : public std::enable_shared_from_this<Grid> {
public:
    /// n must be a power of two, n >= 8; l > 0.
    static std::shared_ptr<const Grid> make(int n, double l);
    ~Grid();

    Grid(const Grid&) = delete;
    Grid& operator=(const Grid&) = delete;

    int n() const { return n_; }
    double l() const { return l_; }
    int nyc() const { return n_ / 2 + 1; }
    std::size_t phys_size() const { return static_cast<std::size_t>(n_) * n_; }
    std::size_t spec_size() const { return static_cast<std::size_t>(n_) * nyc(); }
    double dx() const { return l_ / n_; }

    /// Signed mode index for row/column of the full n-entry tables.
    int mode_index(int i) const { return i <= n_ / 2 ? i : i - n_; }

    /// Full signed wavenumber tables, n entries each; entry = 2*pi/l * mode index.
    const std::vector<double>& kx_table() const { return k_table_; }
    const std::vector<double>& ky_table() const { return k_table_; }

    /// Wavenumbers addressed by spectral storage indices.
    double kx(int ix) const { return k_table_[ix]; }
    double ky_half(int iyc) const { return two_pi_over_l_ * iyc; }
    /// Largest per-axis wavenumber magnitude, 2*pi/l * n/2.
    double k_max() const { return two_pi_over_l_ * (n_ / 2); }

    /// Two-thirds rule: keep a mode iff both |mode index| <= n/3.
    bool dealias_keep(int ix, int iyc) const {
        const int mx = mode_index(ix);
        return 3 * std::abs(mx) <= n_ && 3 * iyc <= n_;
    }
    /// Mask as multiplicative factors (1.0 keep / 0.0 zero), spectral layout.
    const std::vector<double>& dealias_mask() const { return dealias_mask_; }

    /// Parseval column weight: 1 for the my=0 and my=n/2 columns, else 2.
    double col_weight(int iyc) const { return (iyc == 0 || iyc == n_ / 2) ? 1.0 : 2.0; }

    /// Unnormalized forward r2c transform. Input not modified.
    void forward(const double* phys, std::complex<double>* spec) const;
    /// Inverse transform including the 1/n^2 normalization. Input not modified.
    void inverse(const std::complex<double>* spec, double* phys) const;

    /// Physical coordinates of sample (ix, iy).
    double x(int ix) const { return dx() * ix; }
    double y(int iy) const { return dx() * iy; }

private:
    Grid(int n, double l);

    int n_;
    double l_;
    double two_pi_over_l_;
    std::vector<double> k_table_;
    std::vector<double> dealias_mask_;
    void* plan_r2c_ = nullptr; // fftw_plan
    void* plan_c2r_ = nullptr;
};

using GridPtr = std::shared_ptr<const Grid>;

} // namespace hallmhd
