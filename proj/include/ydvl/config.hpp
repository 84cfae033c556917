#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ydvl/dynamics.hpp"
#include "ydvl/recipes.hpp"

namespace ydvl {

// Run configuration. Parsed from flat `key = value` text: one pair per line,
// `#` starts a comment, strings are unquoted, reals in decimal or scientific
// notation. Defaults are the documented ones; recipe parameter keys override
// the chosen preset.
struct RunConfig {
    int grid_n = 0;              // required
    double t_final = 0.0;        // required
    std::string recipe;          // required preset name

    double cfl = 0.5;
    double dt_max = 0.1;
    double p0 = 4.0;
    double rho_star = 0.5;
    double rho_upper = 4.0;
    double pressure_tol = 1e-10;
    int pressure_max_iterations = 500;
    double filter_strength = 0.0;
    int n_cut = 0;               // 0: no mollification of the datum
    int snapshot_every = 10;     // 0 disables snapshots
    int diagnostics_every = 10;
    std::string output_dir = "out";
    std::uint64_t seed = 0;

    // Recipe parameter overrides (preset values apply when unset).
    std::optional<std::string> rho_kind, omega_kind;
    std::optional<double> rho_mean, rho_amp, layer_width, omega_amp, spectrum_exponent;

    // Experiment parameters.
    std::vector<int> mollify_scales{8, 16, 32};
    std::vector<double> twin_delta{1e-3, 1e-4, 1e-5};
    int twin_mode_kx = 1;
    int twin_mode_ky = 0;
    double twin_rho_delta = 0.0;

    DatumRecipe datum_recipe() const {
        DatumRecipe r = preset_recipe(recipe);
        if (rho_kind) r.rho_kind = *rho_kind;
        if (omega_kind) r.omega_kind = *omega_kind;
        if (rho_mean) r.rho_mean = *rho_mean;
        if (rho_amp) r.rho_amp = *rho_amp;
        if (layer_width) r.layer_width = *layer_width;
        if (omega_amp) r.omega_amp = *omega_amp;
        if (spectrum_exponent) r.spectrum_exponent = *spectrum_exponent;
        r.seed = seed;
        return r;
    }

    StepControl step_control() const {
        StepControl c;
        c.cfl = cfl;
        c.dt_max = dt_max;
        c.filter_strength = filter_strength;
        c.pressure_tol = pressure_tol;
        c.pressure_max_iterations = pressure_max_iterations;
        return c;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_real(const std::string& v, int line) {
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParseError("config: malformed real '" + v + "'", line);
    return out;
}

inline long parse_int(const std::string& v, int line) {
    long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw ParseError("config: malformed integer '" + v + "'", line);
    return out;
}

template <class T, class F>
inline std::vector<T> parse_list(const std::string& v, int line, F item) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(item(tok, line));
    }
    if (out.empty()) throw ParseError("config: empty list value", line);
    return out;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    bool have_n = false, have_t = false, have_recipe = false;

    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config: expected 'key = value'", line_no);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ParseError("config: empty key or value", line_no);

        if (key == "grid_n") {
            c.grid_n = static_cast<int>(detail::parse_int(val, line_no));
            have_n = true;
        } else if (key == "T_final") {
            c.t_final = detail::parse_real(val, line_no);
            have_t = true;
        } else if (key == "recipe") {
            c.recipe = val;
            have_recipe = true;
        } else if (key == "cfl") {
            c.cfl = detail::parse_real(val, line_no);
        } else if (key == "dt_max") {
            c.dt_max = detail::parse_real(val, line_no);
        } else if (key == "p0") {
            c.p0 = detail::parse_real(val, line_no);
        } else if (key == "rho_star") {
            c.rho_star = detail::parse_real(val, line_no);
        } else if (key == "rho_upper") {
            c.rho_upper = detail::parse_real(val, line_no);
        } else if (key == "pressure_tol") {
            c.pressure_tol = detail::parse_real(val, line_no);
        } else if (key == "pressure_max_iterations") {
            c.pressure_max_iterations = static_cast<int>(detail::parse_int(val, line_no));
        } else if (key == "filter_strength") {
            c.filter_strength = detail::parse_real(val, line_no);
        } else if (key == "n_cut") {
            c.n_cut = static_cast<int>(detail::parse_int(val, line_no));
        } else if (key == "snapshot_every") {
            c.snapshot_every = static_cast<int>(detail::parse_int(val, line_no));
        } else if (key == "diagnostics_every") {
            c.diagnostics_every = static_cast<int>(detail::parse_int(val, line_no));
        } else if (key == "output_dir") {
            c.output_dir = val;
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(detail::parse_int(val, line_no));
        } else if (key == "rho_kind") {
            c.rho_kind = val;
        } else if (key == "omega_kind") {
            c.omega_kind = val;
        } else if (key == "rho_mean") {
            c.rho_mean = detail::parse_real(val, line_no);
        } else if (key == "rho_amp") {
            c.rho_amp = detail::parse_real(val, line_no);
        } else if (key == "layer_width") {
            c.layer_width = detail::parse_real(val, line_no);
        } else if (key == "omega_amp") {
            c.omega_amp = detail::parse_real(val, line_no);
        } else if (key == "spectrum_exponent") {
            c.spectrum_exponent = detail::parse_real(val, line_no);
        } else if (key == "mollify_scales") {
            c.mollify_scales = detail::parse_list<int>(val, line_no, [](const std::string& s, int l) {
                return static_cast<int>(detail::parse_int(s, l));
            });
        } else if (key == "twin_delta") {
            c.twin_delta = detail::parse_list<double>(val, line_no, detail::parse_real);
        } else if (key == "twin_mode_kx") {
            c.twin_mode_kx = static_cast<int>(detail::parse_int(val, line_no));
        } else if (key == "twin_mode_ky") {
            c.twin_mode_ky = static_cast<int>(detail::parse_int(val, line_no));
        } else if (key == "twin_rho_delta") {
            c.twin_rho_delta = detail::parse_real(val, line_no);
        } else {
            throw ParseError("config: unknown key '" + key + "'", line_no);
        }
    }

    if (!have_n) throw ValidationError("config: grid_n is required");
    if (!have_t) throw ValidationError("config: T_final is required");
    if (!have_recipe) throw ValidationError("config: recipe is required");
    if (c.grid_n < 8 || (c.grid_n & (c.grid_n - 1)) != 0)
        throw ValidationError("config: grid_n must be a power of two >= 8");
    if (!(c.t_final > 0.0)) throw ValidationError("config: T_final must be positive");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0))
        throw ValidationError("config: cfl must lie in (0, 1]");
    if (!(c.p0 > 2.0 && c.p0 <= 4.0))
        throw ValidationError("config: p0 must lie in (2, 4]");
    if (!(c.rho_star > 0.0 && c.rho_star <= c.rho_upper))
        throw ValidationError("config: need 0 < rho_star <= rho_upper");
    if (!(c.pressure_tol > 0.0))
        throw ValidationError("config: pressure_tol must be positive");
    if (!(c.dt_max > 0.0)) throw ValidationError("config: dt_max must be positive");
    if (c.n_cut < 0) throw ValidationError("config: n_cut must be >= 0");
    if (c.snapshot_every < 0 || c.diagnostics_every < 0)
        throw ValidationError("config: cadences must be >= 0");
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace ydvl
