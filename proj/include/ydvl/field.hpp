#pragma once

#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "ydvl/errors.hpp"
#include "ydvl/fft.hpp"
#include "ydvl/grid.hpp"

namespace ydvl {

// Real scalar samples on a periodic grid, immutable once constructed.
// The spectral representation is computed on demand and cached; fields are
// safe to share read-only across threads (the cache fill is serialized).
class ScalarField {
public:
    ScalarField(const Grid& g, std::vector<double> values)
        : p_(std::make_shared<Payload>(g, std::move(values))) {
        check_shape_and_finite();
    }

    static ScalarField constant(const Grid& g, double v) {
        return ScalarField(g, std::vector<double>(g.size(), v));
    }

    static ScalarField zeros(const Grid& g) { return constant(g, 0.0); }

    template <class F>  // F(x, y) -> double
    static ScalarField sampled(const Grid& g, F f) {
        std::vector<double> v(g.size());
        for (int iy = 0; iy < g.n(); ++iy)
            for (int ix = 0; ix < g.n(); ++ix)
                v[static_cast<long>(iy) * g.n() + ix] = f(g.x(ix), g.x(iy));
        return ScalarField(g, std::move(v));
    }

    // Builds a field from half-spectrum coefficients (FFTW r2c layout,
    // unnormalized). The coefficients are kept as the spectral cache.
    static ScalarField from_spectral(const Grid& g, std::vector<cplx> coeffs) {
        if (static_cast<long>(coeffs.size()) != g.spectral_size())
            throw ValidationError("field: spectral coefficient count mismatch");
        SpectralTransform t(g);
        std::vector<cplx> scratch = coeffs;  // c2r destroys its input
        std::vector<double> vals(g.size());
        t.inverse(scratch.data(), vals.data());
        ScalarField f(g, std::move(vals));
        f.p_->spec = std::move(coeffs);
        f.p_->has_spec.store(true, std::memory_order_release);
        return f;
    }

    const Grid& grid() const { return p_->grid; }
    const std::vector<double>& values() const { return p_->values; }
    double value(int ix, int iy) const {
        return p_->values[static_cast<long>(iy) * grid().n() + ix];
    }

    const std::vector<cplx>& spectrum() const {
        Payload& p = *p_;
        if (!p.has_spec.load(std::memory_order_acquire)) {
            std::lock_guard<std::mutex> lock(p.spec_mutex);
            if (!p.has_spec.load(std::memory_order_relaxed)) {
                p.spec.resize(p.grid.spectral_size());
                SpectralTransform(p.grid).forward(p.values.data(), p.spec.data());
                p.has_spec.store(true, std::memory_order_release);
            }
        }
        return p.spec;
    }

    // Sample mean (k = 0 Fourier coefficient over n^2).
    double mean() const {
        double s = 0.0;
        for (double v : p_->values) s += v;
        return s / static_cast<double>(grid().size());
    }

    bool shares_payload(const ScalarField& other) const { return p_ == other.p_; }

private:
    struct Payload {
        Payload(const Grid& g, std::vector<double> v)
            : grid(g), values(std::move(v)) {}
        Grid grid;
        std::vector<double> values;
        mutable std::mutex spec_mutex;
        mutable std::vector<cplx> spec;
        mutable std::atomic<bool> has_spec{false};
    };

    void check_shape_and_finite() const {
        if (static_cast<long>(p_->values.size()) != p_->grid.size())
            throw ValidationError("field: sample count does not match grid");
        for (double v : p_->values)
            if (!std::isfinite(v))
                throw ValidationError("field: non-finite sample value");
    }

    std::shared_ptr<Payload> p_;
};

class VectorField {
public:
    VectorField(ScalarField x, ScalarField y)
        : x_(std::move(x)), y_(std::move(y)) {
        if (x_.grid() != y_.grid())
            throw GridMismatch("vector field: components on different grids");
    }

    static VectorField zeros(const Grid& g) {
        return VectorField(ScalarField::zeros(g), ScalarField::zeros(g));
    }

    const Grid& grid() const { return x_.grid(); }
    const ScalarField& x() const { return x_; }
    const ScalarField& y() const { return y_; }

private:
    ScalarField x_, y_;
};

// Pointwise arithmetic. Each helper returns a fresh field.

namespace detail {
template <class F>
inline ScalarField zip(const ScalarField& a, const ScalarField& b, F f) {
    if (a.grid() != b.grid()) throw GridMismatch("field arithmetic: grid mismatch");
    std::vector<double> out(a.grid().size());
    const auto& va = a.values();
    const auto& vb = b.values();
    for (size_t i = 0; i < out.size(); ++i) out[i] = f(va[i], vb[i]);
    return ScalarField(a.grid(), std::move(out));
}
}  // namespace detail

inline ScalarField add(const ScalarField& a, const ScalarField& b) {
    return detail::zip(a, b, [](double x, double y) { return x + y; });
}
inline ScalarField sub(const ScalarField& a, const ScalarField& b) {
    return detail::zip(a, b, [](double x, double y) { return x - y; });
}
inline ScalarField mul(const ScalarField& a, const ScalarField& b) {
    return detail::zip(a, b, [](double x, double y) { return x * y; });
}
inline ScalarField scaled(const ScalarField& a, double c) {
    std::vector<double> out(a.values());
    for (double& v : out) v *= c;
    return ScalarField(a.grid(), std::move(out));
}
inline ScalarField shifted(const ScalarField& a, double c) {
    std::vector<double> out(a.values());
    for (double& v : out) v += c;
    return ScalarField(a.grid(), std::move(out));
}
inline ScalarField reciprocal(const ScalarField& a) {
    std::vector<double> out(a.values());
    for (double& v : out) {
        if (v == 0.0) throw ValidationError("field: division by zero sample");
        v = 1.0 / v;
    }
    return ScalarField(a.grid(), std::move(out));
}

inline VectorField add(const VectorField& a, const VectorField& b) {
    return VectorField(add(a.x(), b.x()), add(a.y(), b.y()));
}
inline VectorField sub(const VectorField& a, const VectorField& b) {
    return VectorField(sub(a.x(), b.x()), sub(a.y(), b.y()));
}
inline VectorField scaled(const VectorField& a, double c) {
    return VectorField(scaled(a.x(), c), scaled(a.y(), c));
}
inline ScalarField dot(const VectorField& a, const VectorField& b) {
    return add(mul(a.x(), b.x()), mul(a.y(), b.y()));
}
inline VectorField mul(const ScalarField& s, const VectorField& v) {
    return VectorField(mul(s, v.x()), mul(s, v.y()));
}

// a + c*b, the workhorse of Runge-Kutta stage assembly.
inline ScalarField axpy(const ScalarField& a, double c, const ScalarField& b) {
    return detail::zip(a, b, [c](double x, double y) { return x + c * y; });
}
inline VectorField axpy(const VectorField& a, double c, const VectorField& b) {
    return VectorField(axpy(a.x(), c, b.x()), axpy(a.y(), c, b.y()));
}

}  // namespace ydvl
