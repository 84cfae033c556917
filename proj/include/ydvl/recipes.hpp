#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "ydvl/spectral.hpp"

namespace ydvl {

// Analytic initial-datum families. Every omega recipe is mean-free by
// construction; the density recipes stay inside declared bounds that the
// caller validates against the configured [rho_star, rho_upper].
struct DatumRecipe {
    std::string rho_kind = "uniform";    // uniform | sine_product | sine_x | tanh_layer
    double rho_mean = 1.0;
    double rho_amp = 0.0;
    double layer_width = 0.2;            // tanh_layer only

    std::string omega_kind = "taylor_green";  // taylor_green | shear | multimode | power_spectrum
    double omega_amp = 1.0;
    double spectrum_exponent = 3.0;      // power_spectrum decay |k|^-s
    std::uint64_t seed = 0;              // power_spectrum phases
};

namespace detail {

// Deterministic uniform doubles in [0, 1) from raw 64-bit draws; the standard
// distributions are not specified bit-for-bit across library implementations.
struct PhaseRng {
    std::uint64_t state;
    explicit PhaseRng(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ULL) {}
    double next() {
        // splitmix64
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

// Mean-free vorticity with modulus amp * |k|^-s and seeded phases on the
// dealiased band. The kx = 0 column carries both signs of ky, so its upper
// half is filled by conjugate symmetry.
inline ScalarField power_spectrum_field(const Grid& g, double amp, double s,
                                        std::uint64_t seed) {
    const int n = g.n(), nk = g.nk(), kcut = g.dealias_cutoff();
    std::vector<cplx> spec(g.spectral_size(), cplx(0.0, 0.0));
    PhaseRng rng(seed);
    const double norm = static_cast<double>(g.size());
    for (int kx = 0; kx <= kcut; ++kx) {
        for (int ky = -kcut; ky <= kcut; ++ky) {
            if (kx == 0 && ky <= 0) continue;  // conjugates fill the rest
            const double k = std::sqrt(static_cast<double>(kx) * kx +
                                       static_cast<double>(ky) * ky);
            const double mag = amp * std::pow(k, -s);
            const double phase = two_pi * rng.next();
            const cplx c = 0.5 * norm * mag * std::exp(cplx(0.0, phase));
            const int iy = ky >= 0 ? ky : ky + n;
            spec[static_cast<long>(iy) * nk + kx] = c;
            if (kx == 0) {
                const int iyc = (n - iy) % n;
                spec[static_cast<long>(iyc) * nk] = std::conj(c);
            }
        }
    }
    return ScalarField::from_spectral(g, std::move(spec));
}

}  // namespace detail

inline ScalarField build_rho0(const DatumRecipe& r, const Grid& g) {
    if (r.rho_kind == "uniform")
        return ScalarField::constant(g, r.rho_mean);
    if (r.rho_kind == "sine_product")
        return ScalarField::sampled(g, [&](double x, double y) {
            return r.rho_mean + r.rho_amp * std::sin(x) * std::sin(y);
        });
    if (r.rho_kind == "sine_x")
        return ScalarField::sampled(g, [&](double x, double) {
            return r.rho_mean + r.rho_amp * std::sin(x);
        });
    if (r.rho_kind == "tanh_layer")
        return ScalarField::sampled(g, [&](double, double y) {
            return r.rho_mean + r.rho_amp * std::tanh(std::cos(y) / r.layer_width);
        });
    throw ValidationError("recipes: unknown rho recipe '" + r.rho_kind + "'");
}

inline ScalarField build_omega0(const DatumRecipe& r, const Grid& g) {
    const double a = r.omega_amp;
    if (r.omega_kind == "taylor_green")
        return ScalarField::sampled(g, [a](double x, double y) {
            return -2.0 * a * std::cos(x) * std::cos(y);
        });
    if (r.omega_kind == "shear")
        return ScalarField::sampled(g, [a](double x, double) {
            return a * std::cos(x);
        });
    if (r.omega_kind == "multimode")
        return ScalarField::sampled(g, [a](double x, double y) {
            return a * (std::cos(x) * std::cos(y) +
                        0.3 * std::sin(2.0 * x) * std::sin(y) +
                        0.2 * std::cos(x + 2.0 * y));
        });
    if (r.omega_kind == "power_spectrum")
        return detail::power_spectrum_field(g, a, r.spectrum_exponent, r.seed);
    throw ValidationError("recipes: unknown omega recipe '" + r.omega_kind + "'");
}

// Validates the datum against the no-vacuum bounds and mean-free vorticity.
inline void validate_datum(const ScalarField& rho0, const ScalarField& omega0,
                           double rho_star, double rho_upper) {
    double mn = rho0.values()[0], mx = rho0.values()[0];
    for (double v : rho0.values()) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    if (mn < rho_star || mx > rho_upper)
        throw ValidationError(
            "recipes.validate_datum: rho0 leaves the configured [rho_star, rho_upper] range");
    if (std::fabs(omega0.mean()) > 1e-12 * std::max(1.0, linf(omega0)))
        throw ValidationError("recipes.validate_datum: omega0 is not mean-free");
}

// Named presets used by the shipped configurations.
inline DatumRecipe preset_recipe(const std::string& name) {
    DatumRecipe r;
    if (name == "taylor_green_homogeneous") {
        r.rho_kind = "uniform";
        r.rho_mean = 1.0;
        r.omega_kind = "taylor_green";
        r.omega_amp = 1.0;
    } else if (name == "shear_homogeneous") {
        r.rho_kind = "uniform";
        r.rho_mean = 1.0;
        r.omega_kind = "shear";
        r.omega_amp = 1.0;
    } else if (name == "multimode_homogeneous") {
        r.rho_kind = "uniform";
        r.rho_mean = 1.0;
        r.omega_kind = "multimode";
        r.omega_amp = 1.0;
    } else if (name == "variable_density_smooth") {
        r.rho_kind = "sine_product";
        r.rho_mean = 2.0;
        r.rho_amp = 1.0;  // density contrast 3:1
        r.omega_kind = "taylor_green";
        r.omega_amp = 1.0;
    } else if (name == "shear_variable") {
        r.rho_kind = "sine_x";
        r.rho_mean = 2.0;
        r.rho_amp = 0.5;
        r.omega_kind = "shear";
        r.omega_amp = 1.0;
    } else if (name == "tanh_layer_tg") {
        r.rho_kind = "tanh_layer";
        r.rho_mean = 2.0;
        r.rho_amp = 0.5;
        r.layer_width = 0.2;
        r.omega_kind = "taylor_green";
        r.omega_amp = 1.0;
    } else if (name == "rough_layer") {
        r.rho_kind = "tanh_layer";
        r.rho_mean = 2.0;
        r.rho_amp = 0.5;
        r.layer_width = 0.1;
        r.omega_kind = "power_spectrum";
        r.omega_amp = 2.0;
        r.spectrum_exponent = 2.0;
    } else {
        throw ValidationError("recipes: unknown preset '" + name + "'");
    }
    return r;
}

}  // namespace ydvl
