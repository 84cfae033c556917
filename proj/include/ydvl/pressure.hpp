#pragma once

#include <cmath>
#include <vector>

#include "ydvl/norms.hpp"
#include "ydvl/spectral.hpp"

namespace ydvl {

struct EllipticSolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
    ScalarField pi;
    std::vector<double> residual_history;  // relative residual per iteration
};

namespace detail {

inline double dotv(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

// Solves -div(a grad pi) = rhs with a = 1/rho on the mean-free subspace, by
// conjugate gradients preconditioned with the constant-coefficient inverse
// Laplacian scaled by the harmonic mean of a. The operator G^T diag(a) G is
// symmetric positive definite there (G the spectral gradient), and CG
// iterates stay mean-free because both the operator and the preconditioner
// map mean-free fields to mean-free fields exactly.
inline EllipticSolveReport solve_pressure_rhs(const ScalarField& rho,
                                              const ScalarField& rhs,
                                              double tol,
                                              int max_iterations = 500) {
    const Grid& g = rho.grid();
    if (g != rhs.grid())
        throw GridMismatch("pressure.solve_pressure: rho/rhs grid mismatch");
    double rho_min = rho.values()[0];
    for (double v : rho.values()) rho_min = std::min(rho_min, v);
    if (rho_min <= 0.0)
        throw VacuumViolated("pressure.solve_pressure: density reaches zero on the grid");

    const ScalarField a = reciprocal(rho);
    // Harmonic mean of the coefficient field a = 1/rho. PCG iterates do not
    // depend on a positive constant scaling of the preconditioner; the scale
    // only normalizes reported preconditioned quantities.
    const double a_harmonic = 1.0 / rho.mean();

    const double b_norm = std::sqrt(detail::dotv(rhs.values(), rhs.values()));
    EllipticSolveReport rep{0, 0.0, ScalarField::zeros(g), {}};
    if (b_norm == 0.0) return rep;

    if (std::fabs(rhs.mean()) > 1e-11 * std::max(linf(rhs), 1e-300))
        throw MeanNotZero("pressure.solve_pressure: right-hand side is not mean-free");

    auto apply_op = [&](const ScalarField& p) {
        return scaled(divergence(mul(a, gradient(p))), -1.0);
    };
    // The preconditioner applies the inverse Laplacian directly in spectral
    // space: late CG residuals carry roundoff-level sample means that the
    // checked public operator would reject, and dropping the k = 0 mode here
    // keeps every iterate exactly on the mean-free subspace.
    auto apply_precond = [&](const ScalarField& r) {
        const double scale = 1.0 / a_harmonic;
        return detail::map_spectrum(r, [scale](int kx, int ky) {
            const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
            return k2 == 0.0 ? cplx(0.0, 0.0) : cplx(scale / k2, 0.0);
        });
    };

    ScalarField x = ScalarField::zeros(g);
    ScalarField r = rhs;
    ScalarField z = apply_precond(r);
    ScalarField p = z;
    double rz = detail::dotv(r.values(), z.values());

    for (int k = 1; k <= max_iterations; ++k) {
        const ScalarField Ap = apply_op(p);
        const double pAp = detail::dotv(p.values(), Ap.values());
        if (pAp <= 0.0)
            throw NoConvergence("pressure.solve_pressure: operator lost definiteness",
                                k, rep.relative_residual);
        const double alpha = rz / pAp;
        x = axpy(x, alpha, p);
        r = axpy(r, -alpha, Ap);
        const double rel = std::sqrt(detail::dotv(r.values(), r.values())) / b_norm;
        rep.residual_history.push_back(rel);
        rep.iterations = k;
        rep.relative_residual = rel;
        if (rel <= tol) {
            rep.pi = x;
            return rep;
        }
        z = apply_precond(r);
        const double rz_new = detail::dotv(r.values(), z.values());
        p = axpy(z, rz_new / rz, p);
        rz = rz_new;
    }
    throw NoConvergence("pressure.solve_pressure: tolerance not reached within iteration budget",
                        rep.iterations, rep.relative_residual);
}

// The per-step pressure problem: -div((1/rho) grad pi) = div((u . grad) u),
// with the advective product dealiased before the divergence so the
// right-hand side stays mean-free.
inline EllipticSolveReport solve_pressure(const ScalarField& rho,
                                          const VectorField& u, double tol,
                                          int max_iterations = 500) {
    return solve_pressure_rhs(rho, divergence(advect(u, u)), tol, max_iterations);
}

// L2 residual of the independent pressure identity
//   -Lap pi = -(1/rho) grad rho . grad pi + rho (grad u : grad u),
// with grad u : grad u = sum_ij d_i u^j d_j u^i (div u = 0 assumed).
inline double laplacian_pressure_identity(const ScalarField& rho,
                                          const VectorField& u,
                                          const ScalarField& pi) {
    if (rho.grid() != u.grid() || rho.grid() != pi.grid())
        throw GridMismatch("pressure.laplacian_pressure_identity: grid mismatch");
    const ScalarField d1u1 = derivative(u.x(), 1);
    const ScalarField d2u1 = derivative(u.x(), 2);
    const ScalarField d1u2 = derivative(u.y(), 1);
    const ScalarField d2u2 = derivative(u.y(), 2);
    const VectorField grad_pi = gradient(pi);
    const VectorField grad_rho = gradient(rho);

    const long m = rho.grid().size();
    std::vector<double> resid(m);
    const auto& vr = rho.values();
    const auto& lp = laplacian(pi).values();
    const auto& gpx = grad_pi.x().values();
    const auto& gpy = grad_pi.y().values();
    const auto& grx = grad_rho.x().values();
    const auto& gry = grad_rho.y().values();
    const auto& a11 = d1u1.values();
    const auto& a21 = d2u1.values();
    const auto& a12 = d1u2.values();
    const auto& a22 = d2u2.values();
    for (long i = 0; i < m; ++i) {
        const double contraction = a11[i] * a11[i] + a22[i] * a22[i] + 2.0 * a12[i] * a21[i];
        resid[i] = -lp[i] + (grx[i] * gpx[i] + gry[i] * gpy[i]) / vr[i] -
                   vr[i] * contraction;
    }
    return l2(ScalarField(rho.grid(), std::move(resid)));
}

}  // namespace ydvl
