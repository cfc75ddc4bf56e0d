#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Magnetic pair (psi, Z): psi the in-plane stream function, Z the out-of-plane
/// component. Also reused as (rho, Z) and (psi, omega) in the perturbation systems.
struct HallState {
    Field psi;
    Field z;
    double t = 0.0;

    HallState(Field psi_, Field z_, double t_ = 0.0);
};

/// Full coupled state: magnetic (psi, Z), fluid (W, Omega = lap phi).
/// Omega must be mean-free so the stream function phi is recoverable.
struct MhdState {
    Field psi;
    Field z;
    Field w;
    Field omega;
    double t = 0.0;

    MhdState(Field psi_, Field z_, Field w_, Field omega_, double t_ = 0.0);
};

/// Harmonic background for the perturbation systems.
///   linear:           a*x + b*y        (coordinates relative to box center)
///   quadratic_saddle: c*(x^2 - y^2)
///   quadratic_xy:     c*x*y
/// Backgrounds targeting z_bar must be linear; quadratic coefficient fields are
/// non-periodic and require a sponge plus a support monitor (see SpongeParams).
struct HarmonicBackground {
    enum class Kind { linear, quadratic_saddle, quadratic_xy };
    enum class Target { psi_bar, z_bar };

    Kind kind = Kind::linear;
    Target target = Target::psi_bar;
    double a = 0.0, b = 0.0; // linear coefficients
    double c = 0.0;          // quadratic coefficient

    void validate() const;
    /// max |Hessian entry|; zero for linear backgrounds.
    double hessian_inf() const;
    /// sup |grad| for linear backgrounds (sqrt(a^2+b^2)); quadratic grows unboundedly.
    double grad_inf_linear() const;
};

/// Cosine-ramp damping in the outer 10% annulus (radial from box center).
struct SpongeParams {
    bool enabled = false;
    double strength = 1.0;    // peak damping rate
    double start_frac = 0.9;  // ramp begins at start_frac * l/2
};

struct HallRhs {
    Field dpsi;
    Field dz;
};

struct MhdRhs {
    Field dpsi;
    Field dz;
    Field dw;
    Field domega;
};

/// d/dt psi = lap psi + [psi, Z];  d/dt Z = lap Z + [lap psi, psi].
HallRhs hall_rhs(const HallState& s, int threads = 1);

/// With phi = inv_lap(Omega):
///   d/dt psi   = lap psi   + [psi, Z] - [psi, phi]
///   d/dt Z     = lap Z     + [lap psi, psi] - [Z, phi] + [W, psi]
///   d/dt W     = lap W     - [W, phi] - [psi, Z]
///   d/dt Omega = lap Omega - [Omega, phi] + [lap psi, psi]
MhdRhs mhd_rhs(const MhdState& s, int threads = 1);

/// Perturbation around harmonic psi_bar; state holds (rho, Z):
///   d/dt rho = lap rho + [rho, Z] + [psi_bar, Z]
///   d/dt Z   = lap Z + [lap rho, rho] + [lap rho, psi_bar]
/// Background brackets use the closed-form gradient of psi_bar.
HallRhs case1_rhs(const HallState& s, const HarmonicBackground& bg, int threads = 1);

/// Perturbation around linear z_bar = a*x + b*y; state holds (psi, omega):
///   d/dt psi   = lap psi + [psi, omega] + (b psi_x - a psi_y)
///   d/dt omega = lap omega + [lap psi, psi]
HallRhs case2_rhs(const HallState& s, const HarmonicBackground& bg, int threads = 1);

/// Scaling map psi -> lambda^{-1} psi(lambda^2 t, lambda x), Z -> Z(lambda^2 t, lambda x),
/// realized by spectral mode re-indexing on the same grid. lambda must be a positive
/// integer or the reciprocal of one; modes that cannot be represented are dropped
/// (spectral resampling). Bookkeeping: t' = t / lambda^2.
HallState rescale(const HallState& s, double lambda);

/// Nonlinear (non-Laplacian) part of one model's right-hand side, the piece the
/// integrating-factor stepper advances explicitly.
class Model {
public:
    virtual ~Model() = default;
    virtual int n_fields() const = 0;
    virtual std::vector<std::string> field_names() const = 0;
    virtual void nonlinear(const std::vector<Field>& u, std::vector<Field>& out) const = 0;

    struct CflInputs {
        double grad_psi_inf = 0.0; // whistler scale, enters with k_max^2
        double advect_inf = 0.0;   // |grad Z| + |grad phi| + |W| sups, enters with k_max
    };
    virtual CflInputs cfl_inputs(const std::vector<Field>& u) const = 0;
};

/// Hall pair; also serves heat validation (same equations, heat-dominated data)
/// and both perturbation systems when a background is attached.
class HallModel final : public Model {
public:
    enum class Variant { plain, case1, case2 };

    explicit HallModel(int threads = 1) : threads_(threads) {}
    HallModel(Variant v, HarmonicBackground bg, SpongeParams sponge, int threads = 1);

    int n_fields() const override { return 2; }
    std::vector<std::string> field_names() const override;
    void nonlinear(const std::vector<Field>& u, std::vector<Field>& out) const override;
    CflInputs cfl_inputs(const std::vector<Field>& u) const override;

    Variant variant() const { return variant_; }
    const SpongeParams& sponge() const { return sponge_; }

private:
    Variant variant_ = Variant::plain;
    HarmonicBackground bg_{};
    SpongeParams sponge_{};
    int threads_ = 1;
};

class MhdModel final : public Model {
public:
    explicit MhdModel(int threads = 1) : threads_(threads) {}
    int n_fields() const override { return 4; }
    std::vector<std::string> field_names() const override { return {"psi", "z", "w", "omega"}; }
    void nonlinear(const std::vector<Field>& u, std::vector<Field>& out) const override;
    CflInputs cfl_inputs(const std::vector<Field>& u) const override;

private:
    int threads_ = 1;
};

/// [f_bar, g] with the closed-form gradient of the background (f_bar harmonic).
Field background_bracket(const HarmonicBackground& bg, const Field& g, int threads = 1);

/// Damping-rate profile sigma(x) on the grid (zero outside the annulus).
std::vector<double> sponge_profile(const Grid& grid, const SpongeParams& sp);

/// Mass fraction of |a| + |b| inside the sponge annulus.
double sponge_mass_fraction(const Field& a, const Field& b, const SpongeParams& sp);

} // namespace hallmhd
