#pragma once

#include <cmath>
#include <numbers>

#include "ydvl/errors.hpp"

namespace ydvl {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Uniform periodic grid on [0, 2pi)^2 with n points per dimension.
// Samples are stored row-major with x fastest: index = iy * n + ix.
// Since n is a power of two, spacing() * n == 2pi exactly in doubles.
class Grid {
public:
    explicit Grid(int n) : n_(n) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw ValidationError("grid: n must be a power of two >= 8");
    }

    int n() const { return n_; }
    long size() const { return static_cast<long>(n_) * n_; }
    double spacing() const { return two_pi / n_; }
    double x(int i) const { return i * spacing(); }

    // Signed integer wavenumber for a full-length transform index.
    int wavenumber(int idx) const { return idx <= n_ / 2 ? idx : idx - n_; }

    // Half-spectrum (r2c) layout: nk() columns kx = 0..n/2, n rows of ky.
    int nk() const { return n_ / 2 + 1; }
    long spectral_size() const { return static_cast<long>(n_) * nk(); }

    // Two-thirds dealiasing cutoff; modes with max(|kx|,|ky|) above it are
    // zeroed. floor(n/3) < n/3 holds for every power of two, which keeps
    // quadratic products alias-free on the retained band.
    int dealias_cutoff() const { return n_ / 3; }

    bool operator==(const Grid& o) const { return n_ == o.n_; }
    bool operator!=(const Grid& o) const { return n_ != o.n_; }

private:
    int n_;
};

}  // namespace ydvl
