#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "ydvl/grid.hpp"

namespace ydvl {

using cplx = std::complex<double>;

// Real-to-complex 2D transforms on an n x n grid, backed by FFTW.
//
// Plans are created once per grid size with FFTW_ESTIMATE | FFTW_UNALIGNED:
// plan selection is then a pure function of n, so transform results are
// bitwise reproducible across runs and independent of buffer addresses.
// Plan creation is serialized (the FFTW planner is not thread-safe);
// execution through the new-array interface is.
class SpectralTransform {
public:
    explicit SpectralTransform(const Grid& g) : n_(g.n()) {
        const Plans& p = plans_for(n_);
        fwd_ = p.fwd;
        inv_ = p.inv;
    }

    // Unnormalized forward transform; input is preserved.
    void forward(const double* in, cplx* out) const {
        fftw_execute_dft_r2c(fwd_, const_cast<double*>(in),
                             reinterpret_cast<fftw_complex*>(out));
    }

    // Inverse transform, normalized by 1/n^2. The complex input is
    // overwritten (FFTW c2r destroys its input).
    void inverse(cplx* in_destroyed, double* out) const {
        fftw_execute_dft_c2r(inv_, reinterpret_cast<fftw_complex*>(in_destroyed),
                             out);
        const double scale = 1.0 / (static_cast<double>(n_) * n_);
        const long m = static_cast<long>(n_) * n_;
        for (long i = 0; i < m; ++i) out[i] *= scale;
    }

private:
    struct Plans {
        fftw_plan fwd = nullptr;
        fftw_plan inv = nullptr;
    };

    static const Plans& plans_for(int n) {
        static std::mutex mu;
        static std::map<int, Plans> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto it = registry.find(n);
        if (it != registry.end()) return it->second;

        std::vector<double> real(static_cast<long>(n) * n);
        std::vector<cplx> spec(static_cast<long>(n) * (n / 2 + 1));
        Plans p;
        p.fwd = fftw_plan_dft_r2c_2d(n, n, real.data(),
                                     reinterpret_cast<fftw_complex*>(spec.data()),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.inv = fftw_plan_dft_c2r_2d(n, n,
                                     reinterpret_cast<fftw_complex*>(spec.data()),
                                     real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p.fwd || !p.inv) throw Error("fft: FFTW plan creation failed");
        return registry.emplace(n, p).first->second;
    }

    int n_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

}  // namespace ydvl
