#pragma once

#include <cmath>
#include <vector>

#include "ydvl/field.hpp"

namespace ydvl {

// Spectral-space operators. Conventions:
//   perp-gradient  grad^T f = (-d2 f, d1 f)
//   curl           curl v   = d1 v2 - d2 v1
//   Biot-Savart    u = -grad^T (-Lap)^-1 omega
// Differentiation multiplies by i*k with the Nyquist derivative zeroed (its
// first derivative has no real-valued representative on the grid).

namespace detail {

template <class F>  // F(kx, ky) -> cplx multiplier
inline std::vector<cplx> mapped_spectrum(const ScalarField& f, F mult) {
    const Grid& g = f.grid();
    const auto& in = f.spectrum();
    std::vector<cplx> out(in.size());
    const int n = g.n(), nk = g.nk();
    for (int iy = 0; iy < n; ++iy) {
        const int ky = g.wavenumber(iy);
        const long row = static_cast<long>(iy) * nk;
        for (int ik = 0; ik < nk; ++ik)
            out[row + ik] = mult(ik, ky) * in[row + ik];
    }
    return out;
}

template <class F>
inline ScalarField map_spectrum(const ScalarField& f, F mult) {
    return ScalarField::from_spectral(f.grid(), mapped_spectrum(f, mult));
}

inline double deriv_k(int k, int n) {
    return (k == n / 2 || k == -n / 2) ? 0.0 : static_cast<double>(k);
}

}  // namespace detail

inline ScalarField derivative(const ScalarField& f, int axis) {
    if (axis != 1 && axis != 2)
        throw ValidationError("spectral.derivative: axis must be 1 or 2");
    const int n = f.grid().n();
    return detail::map_spectrum(f, [axis, n](int kx, int ky) {
        const double k = axis == 1 ? detail::deriv_k(kx, n) : detail::deriv_k(ky, n);
        return cplx(0.0, k);
    });
}

inline VectorField gradient(const ScalarField& f) {
    return VectorField(derivative(f, 1), derivative(f, 2));
}

inline VectorField perp_gradient(const ScalarField& f) {
    return VectorField(scaled(derivative(f, 2), -1.0), derivative(f, 1));
}

inline ScalarField divergence(const VectorField& v) {
    const Grid& g = v.grid();
    const auto& sx = v.x().spectrum();
    const auto& sy = v.y().spectrum();
    std::vector<cplx> out(sx.size());
    const int n = g.n(), nk = g.nk();
    for (int iy = 0; iy < n; ++iy) {
        const double ky = detail::deriv_k(g.wavenumber(iy), n);
        const long row = static_cast<long>(iy) * nk;
        for (int ik = 0; ik < nk; ++ik) {
            const double kx = detail::deriv_k(ik, n);
            out[row + ik] = cplx(0.0, kx) * sx[row + ik] + cplx(0.0, ky) * sy[row + ik];
        }
    }
    return ScalarField::from_spectral(g, std::move(out));
}

inline ScalarField curl2d(const VectorField& v) {
    const Grid& g = v.grid();
    const auto& sx = v.x().spectrum();
    const auto& sy = v.y().spectrum();
    std::vector<cplx> out(sx.size());
    const int n = g.n(), nk = g.nk();
    for (int iy = 0; iy < n; ++iy) {
        const double ky = detail::deriv_k(g.wavenumber(iy), n);
        const long row = static_cast<long>(iy) * nk;
        for (int ik = 0; ik < nk; ++ik) {
            const double kx = detail::deriv_k(ik, n);
            out[row + ik] = cplx(0.0, kx) * sy[row + ik] - cplx(0.0, ky) * sx[row + ik];
        }
    }
    return ScalarField::from_spectral(g, std::move(out));
}

inline ScalarField laplacian(const ScalarField& f) {
    return detail::map_spectrum(f, [](int kx, int ky) {
        return cplx(-static_cast<double>(kx) * kx - static_cast<double>(ky) * ky, 0.0);
    });
}

inline double linf(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::fabs(v));
    return m;
}

// psi with -Lap psi = f - mean(f) and mean(psi) = 0. On the torus the
// Laplacian kernel is the constants, so a non-mean-free right-hand side has
// no solution; that is surfaced, not absorbed.
inline ScalarField inverse_laplacian(const ScalarField& f) {
    const double m = f.mean();
    if (std::fabs(m) > 1e-10 * std::max(linf(f), 1e-300) && linf(f) > 0.0)
        throw MeanNotZero("spectral.inverse_laplacian: right-hand side has nonzero mean");
    return detail::map_spectrum(f, [](int kx, int ky) {
        const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
        return k2 == 0.0 ? cplx(0.0, 0.0) : cplx(1.0 / k2, 0.0);
    });
}

// u = -grad^T (-Lap)^-1 omega: mean-free, divergence-free, curl u = omega.
// The k = 0 mode (mean flow) is never produced here; the dynamics carries it
// separately.
inline VectorField biot_savart(const ScalarField& omega) {
    const double m = omega.mean();
    if (std::fabs(m) > 1e-10 * std::max(linf(omega), 1e-300) && linf(omega) > 0.0)
        throw MeanNotZero("spectral.biot_savart: vorticity has nonzero mean");
    const Grid& g = omega.grid();
    const int n = g.n(), nk = g.nk();
    const auto& s = omega.spectrum();
    std::vector<cplx> ux(s.size()), uy(s.size());
    for (int iy = 0; iy < n; ++iy) {
        const int kyi = g.wavenumber(iy);
        const double ky = detail::deriv_k(kyi, n);
        const long row = static_cast<long>(iy) * nk;
        for (int ik = 0; ik < nk; ++ik) {
            const double kx = detail::deriv_k(ik, n);
            const double k2 = static_cast<double>(ik) * ik + static_cast<double>(kyi) * kyi;
            if (k2 == 0.0) {
                ux[row + ik] = uy[row + ik] = cplx(0.0, 0.0);
                continue;
            }
            const cplx psi = s[row + ik] / k2;
            //  u = (d2 psi, -d1 psi)
            ux[row + ik] = cplx(0.0, ky) * psi;
            uy[row + ik] = cplx(0.0, -kx) * psi;
        }
    }
    return VectorField(ScalarField::from_spectral(g, std::move(ux)),
                       ScalarField::from_spectral(g, std::move(uy)));
}

// Divergence-free (Leray) projection; the k = 0 mode passes through.
inline VectorField leray_project(const VectorField& v) {
    const Grid& g = v.grid();
    const int n = g.n(), nk = g.nk();
    const auto& sx = v.x().spectrum();
    const auto& sy = v.y().spectrum();
    std::vector<cplx> ox(sx.size()), oy(sy.size());
    for (int iy = 0; iy < n; ++iy) {
        const int kyi = g.wavenumber(iy);
        const long row = static_cast<long>(iy) * nk;
        for (int ik = 0; ik < nk; ++ik) {
            const double kx = ik, ky = kyi;
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) {
                ox[row + ik] = sx[row + ik];
                oy[row + ik] = sy[row + ik];
                continue;
            }
            const cplx kdotv = kx * sx[row + ik] + ky * sy[row + ik];
            ox[row + ik] = sx[row + ik] - kx * kdotv / k2;
            oy[row + ik] = sy[row + ik] - ky * kdotv / k2;
        }
    }
    return VectorField(ScalarField::from_spectral(g, std::move(ox)),
                       ScalarField::from_spectral(g, std::move(oy)));
}

// Sharp cutoff at max(|kx|,|ky|) <= kcut. kcut < 0 means no truncation.
inline ScalarField truncate_modes(const ScalarField& f, int kcut) {
    if (kcut < 0) return f;
    return detail::map_spectrum(f, [kcut](int kx, int ky) {
        return (kx > kcut || std::abs(ky) > kcut) ? cplx(0.0, 0.0) : cplx(1.0, 0.0);
    });
}

inline ScalarField dealias(const ScalarField& f) {
    return truncate_modes(f, f.grid().dealias_cutoff());
}

inline VectorField dealias(const VectorField& v) {
    return VectorField(dealias(v.x()), dealias(v.y()));
}

// Smooth exponential filter of order 36 on the retained (dealiased) band:
// multiply by exp(-strength * (max(|kx|,|ky|)/kcut)^36). strength <= 0 is the
// identity.
inline ScalarField spectral_filter(const ScalarField& f, double strength) {
    if (strength <= 0.0) return f;
    const double kcut = f.grid().dealias_cutoff();
    return detail::map_spectrum(f, [strength, kcut](int kx, int ky) {
        const double t = std::max(static_cast<double>(kx), std::fabs(static_cast<double>(ky))) / kcut;
        return cplx(std::exp(-strength * std::pow(t, 36)), 0.0);
    });
}

inline VectorField spectral_filter(const VectorField& v, double strength) {
    return VectorField(spectral_filter(v.x(), strength),
                       spectral_filter(v.y(), strength));
}

// Dealiased advective derivative u . grad f of a scalar or vector field.
inline ScalarField advect(const VectorField& u, const ScalarField& f) {
    return dealias(add(mul(u.x(), derivative(f, 1)), mul(u.y(), derivative(f, 2))));
}

inline VectorField advect(const VectorField& u, const VectorField& f) {
    return VectorField(advect(u, f.x()), advect(u, f.y()));
}

}  // namespace ydvl
