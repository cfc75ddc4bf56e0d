#include "hallmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "hallmhd/errors.hpp"

namespace hallmhd {

std::string scenario_name(Scenario s) {
    switch (s) {
    case Scenario::hall: return "hall";
    case Scenario::mhd: return "mhd";
    case Scenario::perturb_case1: return "perturb_case1";
    case Scenario::perturb_case2: return "perturb_case2";
    case Scenario::heat_validation: return "heat_validation";
    }
    return "?";
}

Scenario scenario_from_name(const std::string& name) {
    if (name == "hall") return Scenario::hall;
    if (name == "mhd") return Scenario::mhd;
    if (name == "perturb_case1") return Scenario::perturb_case1;
    if (name == "perturb_case2") return Scenario::perturb_case2;
    if (name == "heat_validation") return Scenario::heat_validation;
    throw ConfigError("unknown scenario: " + name);
}

std::uint32_t scenario_id(Scenario s) { return static_cast<std::uint32_t>(s); }

double DiagnosticsRecord::get(const std::string& name) const {
    for (const auto& [k, v] : cols)
        if (k == name) return v;
    throw DataError("record has no column '" + name + "'");
}

bool DiagnosticsRecord::has(const std::string& name) const {
    for (const auto& [k, v] : cols)
        if (k == name) return true;
    return false;
}

std::vector<SeriesPoint> series(const std::vector<DiagnosticsRecord>& traj,
                                const std::string& col) {
    std::vector<SeriesPoint> out;
    out.reserve(traj.size());
    for (const auto& r : traj) out.push_back({r.t(), r.get(col)});
    return out;
}

void validate_serrin_pair(Lp p, double q) {
    const bool ok = (p == Lp::four && q == 4.0) || (p == Lp::inf && q == 2.0);
    if (!ok)
        throw ConfigError("serrin pair must satisfy 1/p + 1/q = 1/2 with p in {4, inf}; "
                          "supported pairs: (4,4), (inf,2)");
}

namespace {

std::string grad_z_col(Lp p) { return p == Lp::four ? "grad_z_l4" : "grad_z_linf"; }
std::string lap_psi_col(Lp p) { return p == Lp::four ? "lap_psi_l4" : "lap_psi_linf"; }

std::vector<SeriesPoint> cumtrapz(const std::vector<SeriesPoint>& y) {
    std::vector<SeriesPoint> out(y.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (i > 0) acc += 0.5 * (y[i].t - y[i - 1].t) * (y[i].y + y[i - 1].y);
        out[i] = {y[i].t, acc};
    }
    return out;
}

} // namespace

std::vector<SeriesPoint> blowup_functional(const std::vector<DiagnosticsRecord>& traj, Lp p,
                                           double q) {
    validate_serrin_pair(p, q);
    auto s = series(traj, grad_z_col(p));
    for (auto& pt : s) pt.y = std::pow(pt.y, q);
    return cumtrapz(s);
}

std::vector<SeriesPoint> serrin_integral(const std::vector<DiagnosticsRecord>& traj, Lp p,
                                         double q) {
    validate_serrin_pair(p, q);
    auto sz = series(traj, grad_z_col(p));
    auto sp = series(traj, lap_psi_col(p));
    for (std::size_t i = 0; i < sz.size(); ++i)
        sz[i].y = std::pow(sz[i].y, q) + std::pow(sp[i].y, q);
    return cumtrapz(sz);
}

DecayFit decay_fit(const std::vector<SeriesPoint>& s, double t0, double t1,
                   const std::string& quantity) {
    if (!(t1 > t0) || t0 < 1.0)
        throw DataError("decay_fit window must satisfy t1 > t0 >= 1");
    std::vector<double> xs, ys;
    for (const auto& p : s) {
        if (p.t < t0 || p.t > t1) continue;
        if (!(p.y > 0.0)) throw DataError("decay_fit requires positive samples ('" +
                                          quantity + "' at t=" + std::to_string(p.t) + ")");
        xs.push_back(std::log1p(p.t));
        ys.push_back(std::log(p.y));
    }
    if (xs.size() < 8) throw DataError("decay_fit needs at least 8 samples in the window");

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    DecayFit fit;
    fit.quantity = quantity;
    fit.t0 = t0;
    fit.t1 = t1;
    fit.n_samples = static_cast<int>(xs.size());
    fit.exponent = sxy / sxx;
    const double ss_res = syy - sxy * sxy / sxx;
    fit.r_squared = syy > 0.0 ? std::max(0.0, 1.0 - ss_res / syy) : 1.0;
    return fit;
}

SmallnessReport smallness_eps1(const Field& psi0, const Field& z0, double threshold) {
    const double v = sobolev_seminorm(psi0, 2) * sobolev_seminorm(psi0, 2) +
                     sobolev_seminorm(z0, 1) * sobolev_seminorm(z0, 1);
    return {"eps1", v, threshold, v < threshold, "|lap psi0|^2 + |grad Z0|^2"};
}

namespace {
double sq(double x) { return x * x; }
} // namespace

SmallnessReport smallness_eps2(const Field& rho0, const Field& z0, const HarmonicBackground& bg,
                               double k_const, double threshold) {
    if (!(k_const > 0.0))
        throw ConfigError("eps2 audit needs the user constant k: set [diagnostics] k_const");
    const double c1 = k_const * sq(bg.hessian_inf());
    const double f1 = sq(sobolev_seminorm(rho0, 1)) + sq(sobolev_seminorm(z0, 0));
    const double f2 = sq(sobolev_seminorm(rho0, 2)) + sq(sobolev_seminorm(z0, 1));
    const double f3 = sq(sobolev_seminorm(rho0, 3)) + sq(sobolev_seminorm(z0, 2));
    const double v = c1 * c1 * f1 + c1 * f2 + f3;
    return {"eps2", v, threshold, v < threshold,
            "C1^2 F1(0) + C1 F2(0) + F3(0), C1 = k |hess psi_bar|^2 = " + std::to_string(c1)};
}

SmallnessReport smallness_eps3(const Field& psi0, const Field& omega0,
                               const HarmonicBackground& bg, double k_const, double threshold) {
    if (!(k_const > 0.0))
        throw ConfigError("eps3 audit needs the user constant k: set [diagnostics] k_const");
    const double c2 = k_const * sq(bg.grad_inf_linear());
    const double k1 = sq(sobolev_seminorm(psi0, 1)) + sq(sobolev_seminorm(omega0, 0));
    const double k2 = sq(sobolev_seminorm(psi0, 2)) + sq(sobolev_seminorm(omega0, 1));
    const double k3 = sq(sobolev_seminorm(psi0, 3)) + sq(sobolev_seminorm(omega0, 2));
    const double v = c2 * c2 * c2 * sq(sobolev_seminorm(psi0, 0)) + c2 * c2 * k1 + c2 * k2 + k3;
    return {"eps3", v, threshold, v < threshold,
            "C2^3 |psi0|^2 + C2^2 K1(0) + C2 K2(0) + K3(0), C2 = k |grad z_bar|^2 = " +
                std::to_string(c2)};
}

SmallnessReport smallness_eps4(const MhdState& s, double threshold) {
    const Field phi = inv_laplacian(s.omega);
    auto h1_of_grad = [](const Field& f) {
        return sq(sobolev_seminorm(f, 1)) + sq(sobolev_seminorm(f, 2));
    };
    auto h1 = [](const Field& f) {
        return sq(sobolev_seminorm(f, 0)) + sq(sobolev_seminorm(f, 1));
    };
    const double v = h1_of_grad(s.psi) + h1(s.z) + h1_of_grad(phi) + h1(s.w);
    return {"eps4", v, threshold, v < threshold,
            "|grad psi0|_H1^2 + |Z0|_H1^2 + |grad phi0|_H1^2 + |W0|_H1^2"};
}

FieldMoments field_moments(const Field& f) {
    const Grid& g = f.grid();
    std::vector<double> scratch;
    const auto& v = phys_ref(f, scratch);
    const int n = g.n();
    const double half = 0.5 * g.l();
    double mx = 0.0, my = 0.0;
    for (int ix = 0; ix < n; ++ix) {
        const double xc = g.x(ix) - half;
        const double* row = v.data() + static_cast<std::size_t>(ix) * n;
        double rs = 0.0, rsy = 0.0;
        for (int iy = 0; iy < n; ++iy) {
            rs += row[iy];
            rsy += (g.y(iy) - half) * row[iy];
        }
        mx += xc * rs;
        my += rsy;
    }
    const double w = g.dx() * g.dx();
    return {integral(f), w * mx, w * my};
}

double asym_error_gamma(const Field& f, double t, double gamma, double cx, double cy,
                        double t_origin) {
    if (!(t > 0.0)) throw PreconditionError("asymptotic error undefined at t = 0");
    Field diff = f;
    if (gamma != 0.0) {
        KernelParams kp{t + t_origin, cx, cy, gamma};
        diff -= heat_kernel(f.grid_ptr(), kp);
    }
    return std::pow(t, 1.5) * lp_norm(diff, Lp::inf);
}

double asym_error_convolved(const Field& f, double t, const Field& f0, double rho) {
    if (!(t > 0.0)) throw PreconditionError("asymptotic error undefined at t = 0");
    Field diff = f - heat_evolve(f0, t);
    return std::pow(t, rho) * lp_norm(diff, Lp::inf);
}

double t_box(const Grid& grid) {
    const double r = grid.l() / 8.0;
    return r * r / 4.0;
}

DiagnosticsEngine::DiagnosticsEngine(Scenario scenario, std::vector<Field> initial_fields,
                                     double t0, DiagnosticsOptions opts, double center_x,
                                     double center_y)
    : scenario_(scenario), init_(std::move(initial_fields)), opts_(opts), cx_(center_x),
      cy_(center_y) {
    validate_serrin_pair(opts_.serrin_p, opts_.serrin_q);
    gamma0_ = integral(init_[0]);
    eta0_ = integral(init_[1]);
    (void)t0;
}

namespace {

struct PairNorms {
    double l1, l2, s1, s2, s3, s4; // psi-side
    double z_l2, z_s1, z_s2, z_s3;
    double lap_psi_l4, lap_psi_linf, grad_z_l4, grad_z_linf;
    double psi_linf, z_linf;
};

PairNorms pair_norms(const Field& psi, const Field& z) {
    PairNorms n{};
    n.l1 = lp_norm(psi, Lp::one);
    n.l2 = sobolev_seminorm(psi, 0);
    n.s1 = sobolev_seminorm(psi, 1);
    n.s2 = sobolev_seminorm(psi, 2);
    n.s3 = sobolev_seminorm(psi, 3);
    n.s4 = sobolev_seminorm(psi, 4);
    n.z_l2 = sobolev_seminorm(z, 0);
    n.z_s1 = sobolev_seminorm(z, 1);
    n.z_s2 = sobolev_seminorm(z, 2);
    n.z_s3 = sobolev_seminorm(z, 3);
    const Field lap_psi = laplacian(psi);
    n.lap_psi_l4 = lp_norm(lap_psi, Lp::four);
    n.lap_psi_linf = lp_norm(lap_psi, Lp::inf);
    const Field zx = deriv(z, Axis::x, 1), zy = deriv(z, Axis::y, 1);
    // |grad Z|_p from the gradient magnitude
    {
        const Grid& g = z.grid();
        std::vector<double> gx(g.phys_size()), gy(g.phys_size());
        g.inverse(zx.spec().data(), gx.data());
        g.inverse(zy.spec().data(), gy.data());
        double s4 = 0.0, m = 0.0;
        for (std::size_t i = 0; i < gx.size(); ++i) {
            const double a2 = gx[i] * gx[i] + gy[i] * gy[i];
            s4 += a2 * a2;
            m = std::max(m, a2);
        }
        const double w = g.dx() * g.dx();
        n.grad_z_l4 = std::pow(w * s4, 0.25);
        n.grad_z_linf = std::sqrt(m);
    }
    n.psi_linf = lp_norm(psi, Lp::inf);
    n.z_linf = lp_norm(z, Lp::inf);
    return n;
}

double sq2(double x) { return x * x; }

void add_interp_ratios(DiagnosticsRecord& r, const char* tag, double linf, double l2, double s1,
                       double s2) {
    const double d1 = l2 * s2;
    r.set(std::string("gn_ratio_") + tag, d1 > 0.0 ? s1 * s1 / d1 : 0.0);
    r.set(std::string("inf_ratio_") + tag, d1 > 0.0 ? linf / std::sqrt(d1) : 0.0);
}

} // namespace

DiagnosticsRecord DiagnosticsEngine::record(const std::vector<Field>& u, double t) {
    DiagnosticsRecord r;
    r.set("t", t);

    const Field& psi = u[0];
    const Field& z = u[1];
    const PairNorms n = pair_norms(psi, z);

    r.set("psi_l1", n.l1);
    r.set("psi_l2", n.l2);
    r.set("grad_psi_l2", n.s1);
    r.set("lap_psi_l2", n.s2);
    r.set("grad_lap_psi_l2", n.s3);
    r.set("lap_psi_l4", n.lap_psi_l4);
    r.set("lap_psi_linf", n.lap_psi_linf);
    r.set("z_l2", n.z_l2);
    r.set("grad_z_l2", n.z_s1);
    r.set("lap_z_l2", n.z_s2);
    r.set("grad_z_l4", n.grad_z_l4);
    r.set("grad_z_linf", n.grad_z_linf);

    const double M = sq2(n.s1) + sq2(n.s2) + sq2(n.s3) + sq2(n.z_l2) + sq2(n.z_s1) + sq2(n.z_s2);
    const double N = sq2(n.s2) + sq2(n.s3) + sq2(n.s4) + sq2(n.z_s1) + sq2(n.z_s2) + sq2(n.z_s3);
    const double S = sq2(n.s2) + sq2(n.z_s1);
    r.set("M", M);
    r.set("N", N);
    r.set("S", S);

    double E = sq2(n.s1) + sq2(n.z_l2); // pair energy
    double D = sq2(n.s2) + sq2(n.z_s1); // pair dissipation

    if (scenario_ == Scenario::perturb_case1) {
        r.set("F1", sq2(n.s1) + sq2(n.z_l2));
        r.set("F2", sq2(n.s2) + sq2(n.z_s1));
        r.set("F3", sq2(n.s3) + sq2(n.z_s2));
        r.set("F4", sq2(n.s4) + sq2(n.z_s3));
    } else if (scenario_ == Scenario::perturb_case2) {
        r.set("K1", sq2(n.s1) + sq2(n.z_l2));
        r.set("K2", sq2(n.s2) + sq2(n.z_s1));
        r.set("K3", sq2(n.s3) + sq2(n.z_s2));
        r.set("K4", sq2(n.s4) + sq2(n.z_s3));
    } else if (scenario_ == Scenario::mhd) {
        const Field& w = u[2];
        const Field& omega = u[3];
        const Field phi = inv_laplacian(omega);
        const double w_l2 = sobolev_seminorm(w, 0), w_s1 = sobolev_seminorm(w, 1),
                     w_s2 = sobolev_seminorm(w, 2), w_s3 = sobolev_seminorm(w, 3);
        const double p_s1 = sobolev_seminorm(phi, 1), p_s2 = sobolev_seminorm(phi, 2),
                     p_s3 = sobolev_seminorm(phi, 3), p_s4 = sobolev_seminorm(phi, 4);
        r.set("w_l2", w_l2);
        r.set("grad_w_l2", w_s1);
        r.set("lap_w_l2", w_s2);
        r.set("grad_phi_l2", p_s1);
        r.set("lap_phi_l2", p_s2);
        r.set("grad_lap_phi_l2", p_s3);
        const double P1 = sq2(n.s1) + sq2(n.z_l2) + sq2(p_s1) + sq2(w_l2);
        const double P2 = sq2(n.s2) + sq2(n.z_s1) + sq2(p_s2) + sq2(w_s1);
        const double P3 = sq2(n.s3) + sq2(n.z_s2) + sq2(p_s3) + sq2(w_s2);
        const double P4 = sq2(n.s4) + sq2(n.z_s3) + sq2(p_s4) + sq2(w_s3);
        r.set("P1", P1);
        r.set("P2", P2);
        r.set("P3", P3);
        r.set("P4", P4);
        r.set("P", P1 + P2 + P3);
        r.set("Q", P2 + P3 + P4);
        E = P1;
        D = P2;
    }

    r.set("bundle_e", E);
    r.set("bundle_d", D);
    double resid = 0.0;
    if (prev_) {
        const double dt = t - prev_->t();
        if (dt > 0.0)
            resid = 0.5 * (E - prev_->get("bundle_e")) / dt + 0.5 * (D + prev_->get("bundle_d"));
    }
    r.set("energy_residual", resid);

    // functional increments (trapezoid over the record pair)
    const double y_b = std::pow(opts_.serrin_p == Lp::four ? n.grad_z_l4 : n.grad_z_linf,
                                opts_.serrin_q);
    const double y_s = y_b + std::pow(opts_.serrin_p == Lp::four ? n.lap_psi_l4 : n.lap_psi_linf,
                                      opts_.serrin_q);
    r.set("blowup_integrand", y_b);
    r.set("serrin_integrand", y_s);
    double db = 0.0, ds = 0.0;
    if (prev_) {
        const double dt = t - prev_->t();
        db = 0.5 * dt * (y_b + prev_->get("blowup_integrand"));
        ds = 0.5 * dt * (y_s + prev_->get("serrin_integrand"));
    }
    r.set("blowup_increment", db);
    r.set("serrin_increment", ds);

    const FieldMoments mp = field_moments(psi);
    const FieldMoments mz = field_moments(z);
    r.set("gamma_hat", mp.mass);
    r.set("eta_hat", mz.mass);
    r.set("psi_mom_x", mp.mx);
    r.set("psi_mom_y", mp.my);
    r.set("z_mom_x", mz.mx);
    r.set("z_mom_y", mz.my);

    add_interp_ratios(r, "psi", n.psi_linf, n.l2, n.s1, n.s2);
    add_interp_ratios(r, "z", n.z_linf, n.z_l2, n.z_s1, n.z_s2);

    if (opts_.asymptotics && t > 0.0) {
        r.set("asym_gamma_psi", asym_error_gamma(psi, t, gamma0_, cx_, cy_, opts_.kernel_t_origin));
        r.set("asym_gamma_z", asym_error_gamma(z, t, eta0_, cx_, cy_, opts_.kernel_t_origin));
        r.set("asym_conv_psi", asym_error_convolved(psi, t, init_[0], 1.5));
        r.set("asym_conv_z", asym_error_convolved(z, t, init_[1], 2.0));
    } else if (opts_.asymptotics) {
        r.set("asym_gamma_psi", 0.0);
        r.set("asym_gamma_z", 0.0);
        r.set("asym_conv_psi", 0.0);
        r.set("asym_conv_z", 0.0);
    }

    if (opts_.heat_reference) {
        Field dp = psi - heat_evolve(init_[0], t);
        Field dz = z - heat_evolve(init_[1], t);
        r.set("heat_err_psi", lp_norm(dp, Lp::inf));
        r.set("heat_err_z", lp_norm(dz, Lp::inf));
    }

    if (opts_.sponge && opts_.sponge->enabled) {
        const double frac = sponge_mass_fraction(psi, z, *opts_.sponge);
        r.set("sponge_frac", frac);
        if (frac >= 1e-6) sponge_warning_ = true;
    }

    prev_ = r;
    return r;
}

double energy_residual(const DiagnosticsRecord& a, const DiagnosticsRecord& b) {
    const double dt = b.t() - a.t();
    if (!(dt > 0.0)) throw DataError("energy_residual needs records at increasing times");
    return 0.5 * (b.get("bundle_e") - a.get("bundle_e")) / dt +
           0.5 * (b.get("bundle_d") + a.get("bundle_d"));
}

} // namespace hallmhd
