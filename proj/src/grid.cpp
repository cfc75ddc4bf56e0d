#include "hallmhd/grid.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {
// FFTW plan creation is not thread-safe; execution with new arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
} // namespace

Grid::Grid(int n, double l) : n_(n), l_(l) {
    two_pi_over_l_ = 2.0 * std::numbers::pi / l_;
    k_table_.resize(n_);
    for (int i = 0; i < n_; ++i) k_table_[i] = two_pi_over_l_ * mode_index(i);

    dealias_mask_.resize(spec_size());
    for (int ix = 0; ix < n_; ++ix)
        for (int iyc = 0; iyc < nyc(); ++iyc)
            dealias_mask_[static_cast<std::size_t>(ix) * nyc() + iyc] =
                dealias_keep(ix, iyc) ? 1.0 : 0.0;

    // ESTIMATE keeps planning deterministic (no runtime measurement); UNALIGNED
    // lets plans execute on any std::vector storage via the new-array interface.
    std::vector<double> rbuf(phys_size());
    std::vector<std::complex<double>> cbuf(spec_size());
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_r2c_ = fftw_plan_dft_r2c_2d(n_, n_, rbuf.data(),
                                     reinterpret_cast<fftw_complex*>(cbuf.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_c2r_ = fftw_plan_dft_c2r_2d(n_, n_,
                                     reinterpret_cast<fftw_complex*>(cbuf.data()),
                                     rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_r2c_ || !plan_c2r_) throw ConfigError("FFT planning failed for n=" + std::to_string(n_));
}

Grid::~Grid() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
    if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
}

std::shared_ptr<const Grid> Grid::make(int n, double l) {
    if (n < 8 || !is_pow2(n))
        throw ConfigError("grid n must be a power of two >= 8, got " + std::to_string(n));
    if (!(l > 0.0)) throw ConfigError("grid l must be positive");
    return std::shared_ptr<const Grid>(new Grid(n, l));
}

void Grid::forward(const double* phys, std::complex<double>* spec) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_r2c_), const_cast<double*>(phys),
                         reinterpret_cast<fftw_complex*>(spec));
}

void Grid::inverse(const std::complex<double>* spec, double* phys) const {
    // Multi-dimensional c2r destroys its input; work on a scratch copy.
    std::vector<std::complex<double>> scratch(spec, spec + spec_size());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_c2r_),
                         reinterpret_cast<fftw_complex*>(scratch.data()), phys);
    const double inv = 1.0 / (static_cast<double>(n_) * n_);
    for (std::size_t i = 0; i < phys_size(); ++i) phys[i] *= inv;
}

} // namespace hallmhd
