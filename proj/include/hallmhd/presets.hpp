#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hallmhd/diagnostics.hpp"
#include "hallmhd/field.hpp"

namespace hallmhd {

/// Named initial-data presets. Unless given, centers default to the box center.
///
///   gaussian_pair(gamma, eta, width):  psi0 = gamma G_w, Z0 = eta G_w with
///       G_w = exp(-r^2 / 2 w^2) / (2 pi w^2) (unit mass); a nonzero
///       dipole_amp adds the zero-mean dipole of dipole_pair to psi0.
///   dipole_pair(dipole_amp, eta, width): psi0 = dipole_amp (x/w) exp(-r^2/2w^2)
///       (zero mean), Z0 = eta G_w.
///   kernel_exact(gamma, eta, t0): psi0 = gamma Gamma(t0), Z0 = eta Gamma(t0).
///   sine_modes(list of mx,my,amp_psi,amp_z): sums of sin(2 pi (mx x + my y)/l).
///   random_bandlimited(seed, band, amplitude): modes with 1 <= max|m| <= band,
///       coefficients from a documented mt19937_64 stream.
struct InitialData {
    enum class Preset { gaussian_pair, dipole_pair, kernel_exact, sine_modes, random_bandlimited };

    Preset preset = Preset::gaussian_pair;
    double gamma = 0.0;
    double eta = 0.0;
    double width = 2.0;
    double t0 = 4.0;
    double dipole_amp = 0.0;
    std::optional<double> dipole_width; // defaults to width
    std::optional<double> center_x, center_y;

    struct SineMode {
        int mx = 0, my = 0;
        double amp_psi = 0.0, amp_z = 0.0;
    };
    std::vector<SineMode> modes;

    std::uint64_t seed = 1;
    int band = 4;
    double amplitude = 0.1;

    // extra fields for the mhd scenario
    double w_mass = 0.0;
    double w_width = 2.0;
    double omega_amp = 0.0;
    double omega_width = 2.0;
};

/// Fields in model order: (psi, z) or (psi, z, w, omega).
std::vector<Field> build_initial(GridPtr grid, Scenario scenario, const InitialData& init);

double initial_center_x(const Grid& grid, const InitialData& init);
double initial_center_y(const Grid& grid, const InitialData& init);

/// Real field with conjugate-symmetric random modes, 1 <= max(|mx|, |my|) <= band.
/// Coefficients come from mt19937_64(seed) via the raw-bits-to-[0,1) mapping
/// u = (rng() >> 11) * 2^-53, so trajectories reproduce across platforms.
/// The field is scaled so its max-norm equals `amplitude`.
Field random_bandlimited_field(GridPtr grid, std::uint64_t seed, int band, double amplitude);

} // namespace hallmhd
