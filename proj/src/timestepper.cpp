#include "hallmhd/timestepper.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "hallmhd/errors.hpp"
#include "hallmhd/parallel.hpp"
#include "hallmhd/spectral.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace hallmhd {

double adapt_dt(const Model& model, const std::vector<Field>& u, const Grid& grid,
                const IntegratorConfig& cfg) {
    const auto in = model.cfl_inputs(u);
    const double kmax = grid.k_max();
    const double denom =
        kmax * kmax * std::max(in.grad_psi_inf, 1e-12) + kmax * in.advect_inf + 1.0;
    return std::clamp(cfg.cfl / denom, cfg.dt_min, cfg.dt_max);
}

IfStepper::IfStepper(GridPtr grid, int n_fields, int threads)
    : grid_(std::move(grid)), threads_(threads) {
    for (int f = 0; f < n_fields; ++f) {
        ka_.emplace_back(grid_);
        kb_.emplace_back(grid_);
        kc_.emplace_back(grid_);
        kd_.emplace_back(grid_);
        stage_.emplace_back(grid_);
    }
}

void IfStepper::ensure_factors(double dt) {
    if (dt == cached_dt_) return;
    const Grid& g = *grid_;
    const int nyc = g.nyc();
    e_half_.resize(g.spec_size());
    e_full_.resize(g.spec_size());
    for (int ix = 0; ix < g.n(); ++ix) {
        const double kx = g.kx(ix);
        const std::size_t row = static_cast<std::size_t>(ix) * nyc;
        for (int iyc = 0; iyc < nyc; ++iyc) {
            const double ky = g.ky_half(iyc);
            const double k2 = kx * kx + ky * ky;
            e_half_[row + iyc] = std::exp(-k2 * 0.5 * dt);
            e_full_[row + iyc] = std::exp(-k2 * dt);
        }
    }
    cached_dt_ = dt;
}

void IfStepper::step(const Model& model, std::vector<Field>& u, double& t, double dt,
                     Scheme scheme) {
    ensure_factors(dt);
    const std::size_t ns = grid_->spec_size();
    const int nf = model.n_fields();

    auto span_of = [](std::vector<Field>& v, int f) { return v[f].spec_mut(); };

    if (scheme == Scheme::if_euler) {
        model.nonlinear(u, ka_);
        for (int f = 0; f < nf; ++f) {
            auto us = span_of(u, f);
            auto as = ka_[f].spec();
            parallel_for(ns, threads_, [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i)
                    us[i] = e_full_[i] * (us[i] + dt * as[i]);
            });
        }
        t += dt;
        return;
    }

    // classical RK4 in the integrating-factor variable
    model.nonlinear(u, ka_);
    for (int f = 0; f < nf; ++f) {
        auto ss = span_of(stage_, f);
        auto us = u[f].spec();
        auto as = ka_[f].spec();
        parallel_for(ns, threads_, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                ss[i] = e_half_[i] * (us[i] + (0.5 * dt) * as[i]);
        });
    }
    model.nonlinear(stage_, kb_);
    for (int f = 0; f < nf; ++f) {
        auto ss = span_of(stage_, f);
        auto us = u[f].spec();
        auto bs = kb_[f].spec();
        parallel_for(ns, threads_, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                ss[i] = e_half_[i] * us[i] + (0.5 * dt) * bs[i];
        });
    }
    model.nonlinear(stage_, kc_);
    for (int f = 0; f < nf; ++f) {
        auto ss = span_of(stage_, f);
        auto us = u[f].spec();
        auto cs = kc_[f].spec();
        parallel_for(ns, threads_, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                ss[i] = e_full_[i] * us[i] + dt * e_half_[i] * cs[i];
        });
    }
    model.nonlinear(stage_, kd_);
    for (int f = 0; f < nf; ++f) {
        auto us = span_of(u, f);
        auto as = ka_[f].spec();
        auto bs = kb_[f].spec();
        auto cs = kc_[f].spec();
        auto ds = kd_[f].spec();
        parallel_for(ns, threads_, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                const auto mid = bs[i] + cs[i];
                us[i] = e_full_[i] * us[i] +
                        (dt / 6.0) * (e_full_[i] * as[i] + 2.0 * e_half_[i] * mid + ds[i]);
            }
        });
    }
    t += dt;
}

std::optional<BlowupInfo> detect_blowup(const std::vector<Field>& u,
                                        const std::vector<std::string>& names, double t,
                                        double threshold) {
    std::vector<double> scratch;
    for (std::size_t f = 0; f < u.size(); ++f) {
        const auto& v = phys_ref(u[f], scratch);
        double m = 0.0;
        for (double x : v) {
            if (!std::isfinite(x)) return BlowupInfo{t, names[f], x};
            m = std::max(m, std::abs(x));
        }
        if (m > threshold) return BlowupInfo{t, names[f], m};
    }
    return std::nullopt;
}

RunOutcome run_loop(const Model& model, std::vector<Field>& u, const RunControl& ctl,
                    const RunCallbacks& cb, int threads) {
    const Grid& grid = u[0].grid();
    IfStepper stepper(u[0].grid_ptr(), model.n_fields(), threads);
    const auto names = model.field_names();

    double t = ctl.t_start;
    const double t_end = ctl.integ.t_end;
    const double cad = ctl.cadence;
    const double cad_tol = cad > 0.0 ? 1e-9 * std::max(cad, 1.0) : 0.0;
    const double end_tol = 1e-12 * std::max(std::abs(t_end), 1.0);

    auto mark_after = [](double time, double interval) {
        // first integer multiple of interval strictly beyond `time`
        return std::floor(time / interval + 1e-9) + 1.0;
    };

    double rec_k = cad > 0.0 ? mark_after(t, cad) : 0.0;
    double cp_k = ctl.checkpoint_interval > 0.0 ? mark_after(t, ctl.checkpoint_interval) : 0.0;

    double last_record_t = t;
    if (cb.record) cb.record(u, t);

    RunOutcome out;
    while (t < t_end - end_tol) {
        double dt = ctl.integ.adaptive ? adapt_dt(model, u, grid, ctl.integ) : ctl.integ.dt;
        if (t + dt > t_end) dt = t_end - t;
        stepper.step(model, u, t, dt, ctl.integ.scheme);
        ++out.steps;

        if (auto bu = detect_blowup(u, names, t, ctl.blowup_threshold)) {
            out.status = RunStatus::blew_up;
            out.blowup = bu;
            out.t_final = t;
            return out;
        }

        if (cad > 0.0 && t >= rec_k * cad - cad_tol) {
            if (cb.record) cb.record(u, t);
            last_record_t = t;
            while (t >= rec_k * cad - cad_tol) rec_k += 1.0; // one record per step
            if (cp_k > 0.0 && t >= cp_k * ctl.checkpoint_interval - cad_tol) {
                if (cb.checkpoint) cb.checkpoint(u, t, dt);
                while (t >= cp_k * ctl.checkpoint_interval - cad_tol) cp_k += 1.0;
            }
        }
    }
    if (t > last_record_t && cb.record) cb.record(u, t);
    out.status = RunStatus::completed;
    out.t_final = t;
    return out;
}

namespace {
constexpr char kMagic[8] = {'H', 'M', 'H', 'D', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
} // namespace

void write_checkpoint(const std::string& path, std::uint32_t scenario_id, double dt,
                      const std::vector<Field>& u, double t) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open checkpoint for writing: " + path);
    const Grid& g = u[0].grid();
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, 1u);
    put<std::uint32_t>(os, scenario_id);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(u.size()));
    put<double>(os, g.l());
    put<double>(os, t);
    put<double>(os, dt);
    for (const auto& f : u) {
        auto s = f.spec();
        os.write(reinterpret_cast<const char*>(s.data()),
                 static_cast<std::streamsize>(s.size() * sizeof(std::complex<double>)));
    }
    if (!os) throw IoError("checkpoint write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open checkpoint: " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("not a checkpoint file: " + path);
    Checkpoint cp;
    cp.version = get<std::uint32_t>(is);
    if (cp.version != 1) throw IoError("unsupported checkpoint version");
    cp.scenario_id = get<std::uint32_t>(is);
    cp.n = get<std::uint32_t>(is);
    cp.n_fields = get<std::uint32_t>(is);
    cp.l = get<double>(is);
    cp.t = get<double>(is);
    cp.dt = get<double>(is);
    const std::size_t per = static_cast<std::size_t>(cp.n) * (cp.n / 2 + 1);
    cp.fields.resize(cp.n_fields);
    for (auto& v : cp.fields) {
        v.resize(per);
        is.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(per * sizeof(std::complex<double>)));
    }
    if (!is) throw IoError("checkpoint truncated: " + path);
    return cp;
}

} // namespace hallmhd
