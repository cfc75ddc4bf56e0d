#include "hallmhd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValue {
    std::string value;
    int line;
    bool used = false;
};

using SectionMap = std::map<std::string, std::map<std::string, KeyValue>>;

SectionMap tokenize(const std::string& text, const std::string& origin) {
    SectionMap sections;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            sections[section];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (sections[section].count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        sections[section][key] = {value, lineno, false};
    }
    return sections;
}

class Reader {
public:
    Reader(SectionMap sections, std::string origin)
        : sections_(std::move(sections)), origin_(std::move(origin)) {}

    bool has_section(const std::string& s) const { return sections_.count(s) > 0; }

    std::optional<std::string> raw(const std::string& sec, const std::string& key) {
        auto si = sections_.find(sec);
        if (si == sections_.end()) return std::nullopt;
        auto ki = si->second.find(key);
        if (ki == si->second.end()) return std::nullopt;
        ki->second.used = true;
        return ki->second.value;
    }

    double number(const std::string& sec, const std::string& key, double fallback) {
        auto v = raw(sec, key);
        if (!v) return fallback;
        return parse_number(sec, key, *v);
    }

    std::optional<double> number_opt(const std::string& sec, const std::string& key) {
        auto v = raw(sec, key);
        if (!v) return std::nullopt;
        return parse_number(sec, key, *v);
    }

    int integer(const std::string& sec, const std::string& key, int fallback) {
        const double d = number(sec, key, fallback);
        if (d != std::floor(d))
            throw ConfigError(field(sec, key) + " must be an integer");
        return static_cast<int>(d);
    }

    bool boolean(const std::string& sec, const std::string& key, bool fallback) {
        auto v = raw(sec, key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ConfigError(field(sec, key) + " must be true or false, got '" + *v + "'");
    }

    std::string text(const std::string& sec, const std::string& key, const std::string& fallback) {
        auto v = raw(sec, key);
        return v ? *v : fallback;
    }

    std::string field(const std::string& sec, const std::string& key) const {
        return "config field [" + sec + "] " + key;
    }

    void reject_unknown(const std::vector<std::string>& known_sections) const {
        for (const auto& [sec, keys] : sections_) {
            bool ok = false;
            for (const auto& k : known_sections) ok = ok || k == sec;
            if (!ok) throw ConfigError(origin_ + ": unknown section [" + sec + "]");
            for (const auto& [key, kv] : keys)
                if (!kv.used)
                    throw ConfigError(origin_ + ":" + std::to_string(kv.line) + ": unknown key '" +
                                      key + "' in [" + sec + "]");
        }
    }

private:
    double parse_number(const std::string& sec, const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError(field(sec, key) + ": cannot parse number '" + v + "'");
        }
    }

    SectionMap sections_;
    std::string origin_;
};

std::vector<InitialData::SineMode> parse_modes(const std::string& v, const std::string& field) {
    std::vector<InitialData::SineMode> modes;
    std::istringstream groups(v);
    std::string group;
    while (std::getline(groups, group, ';')) {
        group = trim(group);
        if (group.empty()) continue;
        InitialData::SineMode m;
        double mx, my;
        if (std::sscanf(group.c_str(), "%lf , %lf , %lf , %lf", &mx, &my, &m.amp_psi, &m.amp_z) != 4)
            throw ConfigError(field + ": each mode needs 'mx,my,amp_psi,amp_z', got '" + group + "'");
        m.mx = static_cast<int>(mx);
        m.my = static_cast<int>(my);
        modes.push_back(m);
    }
    return modes;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    Reader r(tokenize(text, origin), origin);
    RunConfig c;

    c.scenario = scenario_from_name(r.text("run", "scenario", "hall"));
    c.threads = r.integer("run", "threads", 1);
    if (c.threads < 1) throw ConfigError(r.field("run", "threads") + " must be >= 1");

    c.n = r.integer("grid", "n", c.n);
    c.l = r.number("grid", "l", c.l);
    if (c.n < 8 || (c.n & (c.n - 1)) != 0)
        throw ConfigError(r.field("grid", "n") + " must be a power of two >= 8");
    if (!(c.l > 0.0)) throw ConfigError(r.field("grid", "l") + " must be positive");

    {
        const std::string p = r.text("initial", "preset", "gaussian_pair");
        if (p == "gaussian_pair") c.initial.preset = InitialData::Preset::gaussian_pair;
        else if (p == "dipole_pair") c.initial.preset = InitialData::Preset::dipole_pair;
        else if (p == "kernel_exact") c.initial.preset = InitialData::Preset::kernel_exact;
        else if (p == "sine_modes") c.initial.preset = InitialData::Preset::sine_modes;
        else if (p == "random_bandlimited") c.initial.preset = InitialData::Preset::random_bandlimited;
        else throw ConfigError(r.field("initial", "preset") + ": unknown preset '" + p + "'");
        c.initial.gamma = r.number("initial", "gamma", c.initial.gamma);
        c.initial.eta = r.number("initial", "eta", c.initial.eta);
        c.initial.width = r.number("initial", "width", c.initial.width);
        c.initial.t0 = r.number("initial", "t0", c.initial.t0);
        c.initial.dipole_amp = r.number("initial", "dipole_amp", c.initial.dipole_amp);
        c.initial.dipole_width = r.number_opt("initial", "dipole_width");
        c.initial.center_x = r.number_opt("initial", "center_x");
        c.initial.center_y = r.number_opt("initial", "center_y");
        if (auto mv = r.raw("initial", "modes"))
            c.initial.modes = parse_modes(*mv, r.field("initial", "modes"));
        const double seed = r.number("initial", "seed", static_cast<double>(c.initial.seed));
        c.initial.seed = static_cast<std::uint64_t>(seed);
        c.initial.band = r.integer("initial", "band", c.initial.band);
        c.initial.amplitude = r.number("initial", "amplitude", c.initial.amplitude);
        c.initial.w_mass = r.number("initial", "w_mass", c.initial.w_mass);
        c.initial.w_width = r.number("initial", "w_width", c.initial.w_width);
        c.initial.omega_amp = r.number("initial", "omega_amp", c.initial.omega_amp);
        c.initial.omega_width = r.number("initial", "omega_width", c.initial.omega_width);
    }

    if (r.has_section("background")) {
        HarmonicBackground bg;
        const std::string kind = r.text("background", "kind", "linear");
        if (kind == "linear") bg.kind = HarmonicBackground::Kind::linear;
        else if (kind == "quadratic_saddle") bg.kind = HarmonicBackground::Kind::quadratic_saddle;
        else if (kind == "quadratic_xy") bg.kind = HarmonicBackground::Kind::quadratic_xy;
        else throw ConfigError(r.field("background", "kind") + ": unknown kind '" + kind + "'");
        bg.a = r.number("background", "a", 0.0);
        bg.b = r.number("background", "b", 0.0);
        bg.c = r.number("background", "c", 0.0);
        bg.target = c.scenario == Scenario::perturb_case2 ? HarmonicBackground::Target::z_bar
                                                          : HarmonicBackground::Target::psi_bar;
        c.background = bg;
        c.sponge.strength = r.number("background", "sponge_strength", c.sponge.strength);
        c.sponge.start_frac = r.number("background", "sponge_start", c.sponge.start_frac);
    }

    {
        const std::string s = r.text("integrator", "scheme", "if_rk4");
        if (s == "if_rk4") c.integ.scheme = Scheme::if_rk4;
        else if (s == "if_euler") c.integ.scheme = Scheme::if_euler;
        else throw ConfigError(r.field("integrator", "scheme") + ": unknown scheme '" + s + "'");
        c.integ.dt = r.number("integrator", "dt", c.integ.dt);
        c.integ.cfl = r.number("integrator", "cfl", c.integ.cfl);
        c.integ.adaptive = r.boolean("integrator", "adaptive", c.integ.adaptive);
        c.integ.t_end = r.number("integrator", "t_end", c.integ.t_end);
        c.integ.dt_min = r.number("integrator", "dt_min", c.integ.dt_min);
        c.integ.dt_max = r.number("integrator", "dt_max", c.integ.dt_max);
        if (!(c.integ.dt > 0.0)) throw ConfigError(r.field("integrator", "dt") + " must be positive");
        if (!(c.integ.cfl > 0.0)) throw ConfigError(r.field("integrator", "cfl") + " must be positive");
        if (c.integ.t_end < 0.0) throw ConfigError(r.field("integrator", "t_end") + " must be >= 0");
    }

    {
        c.cadence = r.number("diagnostics", "cadence", c.cadence);
        const std::string sp = r.text("diagnostics", "serrin_p", "4");
        if (sp == "4") c.serrin_p = Lp::four;
        else if (sp == "inf") c.serrin_p = Lp::inf;
        else throw ConfigError(r.field("diagnostics", "serrin_p") + " must be 4 or inf");
        c.serrin_q = r.number("diagnostics", "serrin_q", c.serrin_q);
        c.fit_t0 = r.number("diagnostics", "fit_t0", c.fit_t0);
        c.fit_t1 = r.number_opt("diagnostics", "fit_t1");
        c.asymptotics = r.boolean("diagnostics", "asymptotics", c.asymptotics);
        c.kernel_t_origin = r.number("diagnostics", "kernel_t_origin", c.kernel_t_origin);
        c.k_const = r.number_opt("diagnostics", "k_const");
        c.eps_threshold = r.number("diagnostics", "eps_threshold", c.eps_threshold);
    }

    {
        c.out_dir = r.text("output", "dir", c.out_dir);
        c.checkpoint_interval = r.number("output", "checkpoint_interval", c.checkpoint_interval);
    }

    r.reject_unknown({"run", "grid", "initial", "background", "integrator", "diagnostics", "output"});
    validate_config(c);
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void validate_config(const RunConfig& c) {
    const bool perturb =
        c.scenario == Scenario::perturb_case1 || c.scenario == Scenario::perturb_case2;
    if (perturb && !c.background)
        throw ConfigError("scenario " + scenario_name(c.scenario) + " requires a [background] section");
    if (!perturb && c.background)
        throw ConfigError("scenario " + scenario_name(c.scenario) + " does not take a [background] section");
    if (c.background) c.background->validate();
    if (perturb && !c.k_const)
        throw ConfigError("perturbation scenarios need [diagnostics] k_const for the smallness audit");
    validate_serrin_pair(c.serrin_p, c.serrin_q);
    if (!(c.cadence > 0.0)) throw ConfigError("config field [diagnostics] cadence must be positive");
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    o << "# hallmhd run configuration (format v1)\n";
    o << "[run]\n";
    o << "scenario = " << scenario_name(c.scenario) << "\n";
    o << "threads = " << c.threads << "\n";
    o << "\n[grid]\n";
    o << "n = " << c.n << "\n";
    o << "l = " << fmt(c.l) << "\n";
    o << "\n[initial]\n";
    const char* pname = "gaussian_pair";
    switch (c.initial.preset) {
    case InitialData::Preset::gaussian_pair: pname = "gaussian_pair"; break;
    case InitialData::Preset::dipole_pair: pname = "dipole_pair"; break;
    case InitialData::Preset::kernel_exact: pname = "kernel_exact"; break;
    case InitialData::Preset::sine_modes: pname = "sine_modes"; break;
    case InitialData::Preset::random_bandlimited: pname = "random_bandlimited"; break;
    }
    o << "preset = " << pname << "\n";
    o << "gamma = " << fmt(c.initial.gamma) << "\n";
    o << "eta = " << fmt(c.initial.eta) << "\n";
    o << "width = " << fmt(c.initial.width) << "\n";
    o << "t0 = " << fmt(c.initial.t0) << "\n";
    o << "dipole_amp = " << fmt(c.initial.dipole_amp) << "\n";
    if (c.initial.dipole_width) o << "dipole_width = " << fmt(*c.initial.dipole_width) << "\n";
    if (c.initial.center_x) o << "center_x = " << fmt(*c.initial.center_x) << "\n";
    if (c.initial.center_y) o << "center_y = " << fmt(*c.initial.center_y) << "\n";
    if (!c.initial.modes.empty()) {
        o << "modes = ";
        for (std::size_t i = 0; i < c.initial.modes.size(); ++i) {
            const auto& m = c.initial.modes[i];
            if (i) o << " ; ";
            o << m.mx << "," << m.my << "," << fmt(m.amp_psi) << "," << fmt(m.amp_z);
        }
        o << "\n";
    }
    o << "seed = " << c.initial.seed << "\n";
    o << "band = " << c.initial.band << "\n";
    o << "amplitude = " << fmt(c.initial.amplitude) << "\n";
    o << "w_mass = " << fmt(c.initial.w_mass) << "\n";
    o << "w_width = " << fmt(c.initial.w_width) << "\n";
    o << "omega_amp = " << fmt(c.initial.omega_amp) << "\n";
    o << "omega_width = " << fmt(c.initial.omega_width) << "\n";
    if (c.background) {
        o << "\n[background]\n";
        const char* kname = "linear";
        if (c.background->kind == HarmonicBackground::Kind::quadratic_saddle) kname = "quadratic_saddle";
        if (c.background->kind == HarmonicBackground::Kind::quadratic_xy) kname = "quadratic_xy";
        o << "kind = " << kname << "\n";
        o << "a = " << fmt(c.background->a) << "\n";
        o << "b = " << fmt(c.background->b) << "\n";
        o << "c = " << fmt(c.background->c) << "\n";
        o << "sponge_strength = " << fmt(c.sponge.strength) << "\n";
        o << "sponge_start = " << fmt(c.sponge.start_frac) << "\n";
    }
    o << "\n[integrator]\n";
    o << "scheme = " << (c.integ.scheme == Scheme::if_rk4 ? "if_rk4" : "if_euler") << "\n";
    o << "dt = " << fmt(c.integ.dt) << "\n";
    o << "cfl = " << fmt(c.integ.cfl) << "\n";
    o << "adaptive = " << (c.integ.adaptive ? "true" : "false") << "\n";
    o << "t_end = " << fmt(c.integ.t_end) << "\n";
    o << "dt_min = " << fmt(c.integ.dt_min) << "\n";
    o << "dt_max = " << fmt(c.integ.dt_max) << "\n";
    o << "\n[diagnostics]\n";
    o << "cadence = " << fmt(c.cadence) << "\n";
    o << "serrin_p = " << (c.serrin_p == Lp::four ? "4" : "inf") << "\n";
    o << "serrin_q = " << fmt(c.serrin_q) << "\n";
    o << "fit_t0 = " << fmt(c.fit_t0) << "\n";
    if (c.fit_t1) o << "fit_t1 = " << fmt(*c.fit_t1) << "\n";
    o << "asymptotics = " << (c.asymptotics ? "true" : "false") << "\n";
    o << "kernel_t_origin = " << fmt(c.kernel_t_origin) << "\n";
    if (c.k_const) o << "k_const = " << fmt(*c.k_const) << "\n";
    o << "eps_threshold = " << fmt(c.eps_threshold) << "\n";
    o << "\n[output]\n";
    o << "dir = " << c.out_dir << "\n";
    o << "checkpoint_interval = " << fmt(c.checkpoint_interval) << "\n";
    return o.str();
}

} // namespace hallmhd
