#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hallmhd/models.hpp"
#include "hallmhd/oracle.hpp"
#include "hallmhd/spectral.hpp"

namespace hallmhd {

enum class Scenario { hall, mhd, perturb_case1, perturb_case2, heat_validation };

std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);
std::uint32_t scenario_id(Scenario s);

/// One time-stamped row of monitored quantities. Columns are fixed by the
/// scenario at engine construction and frozen for the whole trajectory.
struct DiagnosticsRecord {
    std::vector<std::pair<std::string, double>> cols;

    double t() const { return get("t"); }
    double get(const std::string& name) const;
    bool has(const std::string& name) const;
    void set(std::string name, double value) { cols.emplace_back(std::move(name), value); }
};

struct SeriesPoint {
    double t;
    double y;
};

/// Extract a named column as a time series.
std::vector<SeriesPoint> series(const std::vector<DiagnosticsRecord>& traj,
                                const std::string& col);

/// 1/p + 1/q = 1/2 with the norms this build computes: (4, 4) or (inf, 2).
void validate_serrin_pair(Lp p, double q);

/// B(t): cumulative trapezoid of |grad Z|_{L^p}^q over the trajectory.
std::vector<SeriesPoint> blowup_functional(const std::vector<DiagnosticsRecord>& traj, Lp p,
                                           double q);

/// Cumulative trapezoid of |lap psi|_{L^p}^q + |grad Z|_{L^p}^q.
std::vector<SeriesPoint> serrin_integral(const std::vector<DiagnosticsRecord>& traj, Lp p,
                                         double q);

struct DecayFit {
    std::string quantity;
    double t0 = 0.0, t1 = 0.0;
    double exponent = 0.0;
    double r_squared = 0.0;
    int n_samples = 0;
};

/// Least-squares slope of log y against log(1+t) over [t0, t1].
/// Requires t0 >= 1, at least 8 samples in the window, and positive samples.
DecayFit decay_fit(const std::vector<SeriesPoint>& s, double t0, double t1,
                   const std::string& quantity);

struct SmallnessReport {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string formula;
};

/// eps1 = |lap psi0|_2^2 + |grad Z0|_2^2.
SmallnessReport smallness_eps1(const Field& psi0, const Field& z0, double threshold);
/// eps2 = C1^2 F1(0) + C1 F2(0) + F3(0), C1 = k |hess psi_bar|_inf^2 (k user-supplied).
SmallnessReport smallness_eps2(const Field& rho0, const Field& z0, const HarmonicBackground& bg,
                               double k_const, double threshold);
/// eps3 = C2^3 |psi0|_2^2 + C2^2 K1(0) + C2 K2(0) + K3(0), C2 = k |grad z_bar|_inf^2.
SmallnessReport smallness_eps3(const Field& psi0, const Field& omega0,
                               const HarmonicBackground& bg, double k_const, double threshold);
/// eps4 = |grad psi0|_{H1}^2 + |Z0|_{H1}^2 + |grad phi0|_{H1}^2 + |W0|_{H1}^2.
SmallnessReport smallness_eps4(const MhdState& s, double threshold);

struct FieldMoments {
    double mass = 0.0; // box integral
    double mx = 0.0;   // first moments about the box center
    double my = 0.0;
};
FieldMoments field_moments(const Field& f);

/// t^rho * |f - gamma * Gamma(t + t_origin, . - center)|_inf, rho = 3/2. t must be > 0.
double asym_error_gamma(const Field& f, double t, double gamma, double cx, double cy,
                        double t_origin);
/// t^rho * |f - heat_evolve(f0, t)|_inf; rho = 3/2 for psi, 2 for Z.
double asym_error_convolved(const Field& f, double t, const Field& f0, double rho);

/// Measurement horizon: the time at which the diffusion length sqrt(4t)
/// reaches l/8; fits past this point see the box.
double t_box(const Grid& grid);

struct DiagnosticsOptions {
    Lp serrin_p = Lp::four;
    double serrin_q = 4.0;
    bool asymptotics = false;
    double kernel_t_origin = 0.0; // comparator time offset for the gamma-kernel mode
    std::optional<SpongeParams> sponge;
    bool heat_reference = false; // per-record max-norm error vs the heat semigroup
};

/// Streaming record builder. Keeps the previous record for the finite-difference
/// energy residual and the functional increments, and the initial fields for
/// moment capture and the asymptotic comparators.
class DiagnosticsEngine {
public:
    DiagnosticsEngine(Scenario scenario, std::vector<Field> initial_fields, double t0,
                      DiagnosticsOptions opts, double center_x, double center_y);

    DiagnosticsRecord record(const std::vector<Field>& u, double t);

    double gamma0() const { return gamma0_; }
    double eta0() const { return eta0_; }
    Scenario scenario() const { return scenario_; }
    /// True once a support-monitor violation (sponge mass fraction >= 1e-6) was seen.
    bool sponge_warning() const { return sponge_warning_; }

private:
    Scenario scenario_;
    std::vector<Field> init_;
    DiagnosticsOptions opts_;
    double cx_, cy_;
    double gamma0_ = 0.0, eta0_ = 0.0;
    std::optional<DiagnosticsRecord> prev_;
    bool sponge_warning_ = false;
};

/// Identity residual of a consecutive record pair:
/// (E1 - E0) / (2 dt) + (D1 + D0) / 2, with (E, D) the scenario's first energy
/// pair (e.g. E = |grad psi|^2 + |Z|^2, D = |lap psi|^2 + |grad Z|^2).
double energy_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b);

} // namespace hallmhd
