#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "ydvl/parallel.hpp"
#include "ydvl/spectral.hpp"

namespace ydvl {

inline constexpr double inf_p = std::numeric_limits<double>::infinity();

// Lebesgue norms by uniform-grid quadrature over [0, 2pi)^2; p = inf is the
// grid maximum. Vector fields are measured through the pointwise Euclidean
// magnitude. Quadrature accumulates in sample order, so values are
// independent of the thread cap.
inline double lp_norm(const ScalarField& f, double p) {
    if (p < 1.0) throw OutOfRange("norms.lp_norm: p must be >= 1");
    const auto& v = f.values();
    if (p == inf_p) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    const double w = f.grid().spacing() * f.grid().spacing();
    double s = 0.0;
    if (p == 2.0) {
        for (double x : v) s += x * x;
    } else if (p == 1.0) {
        for (double x : v) s += std::fabs(x);
    } else {
        for (double x : v) s += std::pow(std::fabs(x), p);
    }
    return std::pow(w * s, 1.0 / p);
}

inline double lp_norm(const VectorField& f, double p) {
    if (p < 1.0) throw OutOfRange("norms.lp_norm: p must be >= 1");
    const auto& vx = f.x().values();
    const auto& vy = f.y().values();
    if (p == inf_p) {
        double m = 0.0;
        for (size_t i = 0; i < vx.size(); ++i)
            m = std::max(m, vx[i] * vx[i] + vy[i] * vy[i]);
        return std::sqrt(m);
    }
    const double w = f.grid().spacing() * f.grid().spacing();
    double s = 0.0;
    if (p == 2.0) {
        for (size_t i = 0; i < vx.size(); ++i) s += vx[i] * vx[i] + vy[i] * vy[i];
    } else {
        for (size_t i = 0; i < vx.size(); ++i)
            s += std::pow(std::sqrt(vx[i] * vx[i] + vy[i] * vy[i]), p);
    }
    return std::pow(w * s, 1.0 / p);
}

inline double l2(const ScalarField& f) { return lp_norm(f, 2.0); }
inline double l2(const VectorField& f) { return lp_norm(f, 2.0); }
inline double linf(const VectorField& f) { return lp_norm(f, inf_p); }

// Exponent bookkeeping for the a priori estimates: theta = 2/p0,
// 1/q0 = 1/2 + 1/p0, 1/p0 + 1/p1 = 1/2, with p0 restricted to (2, 4].
struct ExponentSet {
    double p0;
    double theta;
    double q0;
    double p1;
};

inline ExponentSet make_exponents(double p0) {
    if (!(p0 > 2.0 && p0 <= 4.0))
        throw OutOfRange("norms.make_exponents: p0 must lie in (2, 4]");
    ExponentSet e;
    e.p0 = p0;
    e.theta = 2.0 / p0;
    e.q0 = 1.0 / (0.5 + 1.0 / p0);
    e.p1 = 1.0 / (0.5 - 1.0 / p0);
    return e;
}

// Sampled modulus-of-continuity estimate. The reported seminorm is a lower
// bound for the continuum supremum: probes cover every grid point, offsets
// |y| in {2^-j : j = 1..J, 2^-J >= 2 spacing} along the two axes and the two
// diagonals, with periodic bilinear interpolation at off-grid points.
struct ModulusReport {
    double seminorm = 0.0;
    double arg_offset = 0.0;  // |y| attaining the maximum
    long samples = 0;
};

namespace detail {

// Periodic bilinear interpolation of a sample array at real coordinates.
inline double interp_bilinear(const std::vector<double>& v, int n, double x,
                              double y) {
    const double h = two_pi / n;
    double fx = x / h, fy = y / h;
    fx -= std::floor(fx / n) * n;
    fy -= std::floor(fy / n) * n;
    const int ix = static_cast<int>(fx) % n, iy = static_cast<int>(fy) % n;
    const double ax = fx - std::floor(fx), ay = fy - std::floor(fy);
    const int ix1 = (ix + 1) % n, iy1 = (iy + 1) % n;
    const double v00 = v[static_cast<long>(iy) * n + ix];
    const double v10 = v[static_cast<long>(iy) * n + ix1];
    const double v01 = v[static_cast<long>(iy1) * n + ix];
    const double v11 = v[static_cast<long>(iy1) * n + ix1];
    return (1 - ay) * ((1 - ax) * v00 + ax * v10) + ay * ((1 - ax) * v01 + ax * v11);
}

// Offset directions: axes and diagonals, unit length.
inline const std::array<std::array<double, 2>, 4>& probe_directions() {
    static const std::array<std::array<double, 2>, 4> dirs = {{
        {1.0, 0.0},
        {0.0, 1.0},
        {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0},
        {std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0},
    }};
    return dirs;
}

inline std::vector<double> probe_offsets(const Grid& g) {
    std::vector<double> r;
    for (int j = 1;; ++j) {
        const double y = std::ldexp(1.0, -j);
        if (y < 2.0 * g.spacing()) break;
        r.push_back(y);
    }
    return r;
}

// kind = 0: first difference scaled by |y| log(1 + 1/|y|)  (log-Lipschitz)
// kind = 1: symmetric second difference scaled by |y|      (Zygmund)
template <class Eval>  // Eval(z_index, dx, dy) -> |difference|
inline ModulusReport modulus_scan(const Grid& g, int kind, Eval eval) {
    const auto offsets = probe_offsets(g);
    const auto& dirs = probe_directions();
    const int n = g.n();

    struct Best {
        double value = 0.0;
        double offset = 0.0;
    };
    std::vector<Best> per_row(n);
    parallel_chunks(n, [&](int, long row_begin, long row_end) {
        for (long iy = row_begin; iy < row_end; ++iy) {
            Best best;
            for (double r : offsets) {
                const double denom =
                    kind == 0 ? r * std::log(1.0 + 1.0 / r) : r;
                for (const auto& d : dirs) {
                    const double dx = r * d[0], dy = r * d[1];
                    for (int ix = 0; ix < n; ++ix) {
                        const double diff =
                            eval(static_cast<long>(iy) * n + ix, dx, dy);
                        const double ratio = diff / denom;
                        if (ratio > best.value) {
                            best.value = ratio;
                            best.offset = r;
                        }
                    }
                }
            }
            per_row[iy] = best;
        }
    });

    ModulusReport rep;
    for (const Best& b : per_row)
        if (b.value > rep.seminorm) {
            rep.seminorm = b.value;
            rep.arg_offset = b.offset;
        }
    rep.samples = static_cast<long>(n) * n * static_cast<long>(dirs.size()) *
                  static_cast<long>(offsets.size());
    return rep;
}

}  // namespace detail

inline ModulusReport ll_modulus(const ScalarField& f) {
    const Grid& g = f.grid();
    const auto& v = f.values();
    const int n = g.n();
    const double h = g.spacing();
    return detail::modulus_scan(g, 0, [&](long idx, double dx, double dy) {
        const int ix = static_cast<int>(idx % n), iy = static_cast<int>(idx / n);
        const double x = ix * h, y = iy * h;
        return std::fabs(detail::interp_bilinear(v, n, x + dx, y + dy) - v[idx]);
    });
}

inline ModulusReport zygmund_modulus(const ScalarField& f) {
    const Grid& g = f.grid();
    const auto& v = f.values();
    const int n = g.n();
    const double h = g.spacing();
    return detail::modulus_scan(g, 1, [&](long idx, double dx, double dy) {
        const int ix = static_cast<int>(idx % n), iy = static_cast<int>(idx / n);
        const double x = ix * h, y = iy * h;
        return std::fabs(detail::interp_bilinear(v, n, x + dx, y + dy) +
                         detail::interp_bilinear(v, n, x - dx, y - dy) -
                         2.0 * v[idx]);
    });
}

inline ModulusReport ll_modulus(const VectorField& f) {
    const Grid& g = f.grid();
    const auto& vx = f.x().values();
    const auto& vy = f.y().values();
    const int n = g.n();
    const double h = g.spacing();
    return detail::modulus_scan(g, 0, [&](long idx, double dx, double dy) {
        const int ix = static_cast<int>(idx % n), iy = static_cast<int>(idx / n);
        const double x = ix * h, y = iy * h;
        const double ex = detail::interp_bilinear(vx, n, x + dx, y + dy) - vx[idx];
        const double ey = detail::interp_bilinear(vy, n, x + dx, y + dy) - vy[idx];
        return std::sqrt(ex * ex + ey * ey);
    });
}

inline ModulusReport zygmund_modulus(const VectorField& f) {
    const Grid& g = f.grid();
    const auto& vx = f.x().values();
    const auto& vy = f.y().values();
    const int n = g.n();
    const double h = g.spacing();
    return detail::modulus_scan(g, 1, [&](long idx, double dx, double dy) {
        const int ix = static_cast<int>(idx % n), iy = static_cast<int>(idx / n);
        const double x = ix * h, y = iy * h;
        const double ex = detail::interp_bilinear(vx, n, x + dx, y + dy) +
                          detail::interp_bilinear(vx, n, x - dx, y - dy) - 2.0 * vx[idx];
        const double ey = detail::interp_bilinear(vy, n, x + dx, y + dy) +
                          detail::interp_bilinear(vy, n, x - dx, y - dy) - 2.0 * vy[idx];
        return std::sqrt(ex * ex + ey * ey);
    });
}

// Directional derivative along X: X^1 d1 f + X^2 d2 f, derivatives spectral,
// products pointwise. When div X = 0 this coincides with div(X (x) f).
inline ScalarField directional_derivative(const VectorField& X, const ScalarField& f) {
    if (X.grid() != f.grid())
        throw GridMismatch("norms.directional_derivative: grid mismatch");
    return add(mul(X.x(), derivative(f, 1)), mul(X.y(), derivative(f, 2)));
}

inline VectorField directional_derivative(const VectorField& X, const VectorField& f) {
    return VectorField(directional_derivative(X, f.x()),
                       directional_derivative(X, f.y()));
}

}  // namespace ydvl
