#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hallmhd/models.hpp"

namespace hallmhd {

enum class Scheme { if_rk4, if_euler };

struct IntegratorConfig {
    Scheme scheme = Scheme::if_rk4;
    double dt = 1e-2;
    double cfl = 0.5;
    bool adaptive = false;
    double t_end = 1.0;
    double dt_min = 1e-9;
    double dt_max = 0.1;
};

/// Whistler-aware step control:
/// dt = cfl / (k_max^2 * max(|grad psi|_inf, 1e-12) + k_max * (|grad Z|_inf + |grad phi|_inf + |W|_inf) + 1),
/// clamped to [dt_min, dt_max].
double adapt_dt(const Model& model, const std::vector<Field>& u, const Grid& grid,
                const IntegratorConfig& cfg);

/// Integrating-factor stepper: the Laplacian advances exactly via exp(-|k|^2 dt)
/// mode factors; the model nonlinearity advances by classical RK4 or forward
/// Euler in the transformed variable.
class IfStepper {
public:
    IfStepper(GridPtr grid, int n_fields, int threads = 1);

    void step(const Model& model, std::vector<Field>& u, double& t, double dt, Scheme scheme);

private:
    void ensure_factors(double dt);

    GridPtr grid_;
    int threads_;
    double cached_dt_ = -1.0;
    std::vector<double> e_half_, e_full_;
    std::vector<Field> ka_, kb_, kc_, kd_, stage_;
};

struct BlowupInfo {
    double t = 0.0;
    std::string field;
    double value = 0.0;
};

/// Max-norm / finiteness scan of all unknowns; reports the first offender.
std::optional<BlowupInfo> detect_blowup(const std::vector<Field>& u,
                                        const std::vector<std::string>& names, double t,
                                        double threshold = 1e8);

enum class RunStatus { completed, blew_up };

struct RunControl {
    IntegratorConfig integ;
    double cadence = 0.1;             // diagnostics interval; <= 0 emits only endpoints
    double checkpoint_interval = 0.0; // <= 0 disables checkpoints
    double t_start = 0.0;
    double blowup_threshold = 1e8;
};

struct RunCallbacks {
    /// Called at t_start, at every cadence mark, and at the final time.
    std::function<void(const std::vector<Field>&, double t)> record;
    /// Called right after a record when a checkpoint mark has been crossed.
    std::function<void(const std::vector<Field>&, double t, double dt)> checkpoint;
};

struct RunOutcome {
    RunStatus status = RunStatus::completed;
    double t_final = 0.0;
    std::size_t steps = 0;
    std::optional<BlowupInfo> blowup;
};

/// Advance u from t_start until t_end or a blow-up signal. The final step is
/// clipped to land exactly on t_end. All scheduling decisions are pure
/// functions of (t, config), so a run resumed from a checkpoint reproduces the
/// uninterrupted trajectory bitwise.
RunOutcome run_loop(const Model& model, std::vector<Field>& u, const RunControl& ctl,
                    const RunCallbacks& cb, int threads = 1);

// --- checkpoint file: little-endian, 64-bit floats ---
// magic "HMHDCKPT", u32 version, u32 scenario_id, u32 n, u32 n_fields,
// f64 l, f64 t, f64 dt, then per unknown n*(n/2+1) complex modes (re, im)
// in the model's field order.

struct Checkpoint {
    std::uint32_t version = 1;
    std::uint32_t scenario_id = 0;
    std::uint32_t n = 0;
    std::uint32_t n_fields = 0;
    double l = 0.0;
    double t = 0.0;
    double dt = 0.0;
    std::vector<std::vector<std::complex<double>>> fields;
};

void write_checkpoint(const std::string& path, std::uint32_t scenario_id, double dt,
                      const std::vector<Field>& u, double t);
Checkpoint read_checkpoint(const std::string& path);

} // namespace hallmhd
