// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/restore.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "segres/rng.hpp"

namespace segres {

namespace {

void check_shapes(const ImageField& f, const Membership& u, const Codebook& c,
                  const ObservationMask& mask) {
    if (u.width() != f.width() || u.height() != f.height() ||
        mask.width() != f.width() || mask.height() != f.height())
        throw std::invalid_argument("update_g: field dimensions disagree");
    if (c.phases() != u.phases() || c.channels() != f.channels())
        throw std::invalid_argument("update_g: codebook shape disagrees");
}

// r_j = sum_i c_{i,j} u_i, the segmentation-fidelity minimizer per pixel.
std::vector<double> phase_composite(const Membership& u, const Codebook& c, int channel) {
    const int n = u.pixels();
    std::vector<double> r(n, 0.0);
    for (int i = 0; i < u.phases(); ++i) {
        const double ci = c.at(i, channel);
        auto ui = u.plane(i);
        for (int p = 0; p < n; ++p) r[p] += ci * ui[p];
    }
    return r;
}

std::vector<double> masked_rhs(const LinearOperator& A, const ObservationMask& mask,
                               std::span<const double> f, const std::vector<double>& r,
                               int w, int h, double mu, double lambda) {
    const int n = w * h;
    std::vector<double> fw(f.begin(), f.end());
    for (int p = 0; p < n; ++p)
        if (!mask.data()[p]) fw[p] = 0.0;
    std::vector<double> rhs = A.apply_adjoint(fw, w, h);
    for (int p = 0; p < n; ++p) rhs[p] *= mu;

    // Move the pinned unobserved values through the operator to the rhs.
    std::vector<double> pinned(n, 0.0);
    bool any_pinned = false;
    for (int p = 0; p < n; ++p)
        if (!mask.data()[p]) { pinned[p] = r[p]; any_pinned = true; }
    if (any_pinned && !A.is_identity()) {
        std::vector<double> t = A.apply(pinned, w, h);
        for (int p = 0; p < n; ++p)
            if (!mask.data()[p]) t[p] = 0.0;
        std::vector<double> back = A.apply_adjoint(t, w, h);
        for (int p = 0; p < n; ++p) rhs[p] -= mu * back[p];
    }
    for (int p = 0; p < n; ++p)
        rhs[p] = mask.data()[p] ? rhs[p] + lambda * r[p] : 0.0;
    return rhs;
}

}  // namespace

ImageField update_g(const ImageField& f, const Membership& u, const Codebook& c,
                    const ObservationMask& mask, const ModelParams& p, GSolver solver) {
    if (p.fidelity != Fidelity::Gaussian)
        throw std::runtime_error("update_g: only the Gaussian fidelity has a solver");
    check_shapes(f, u, c, mask);

    const int w = f.width(), h = f.height(), n = w * h;
    const LinearOperator A =
        p.blur ? LinearOperator::convolution(*p.blur) : LinearOperator::identity();
    const bool full = mask.all_observed();
    if (solver == GSolver::Auto) solver = full ? GSolver::Spectral : GSolver::Cg;
    if (solver == GSolver::Spectral && !full)
        throw std::invalid_argument("update_g: spectral path requires a full mask");

    ImageField g(w, h, f.channels());
    for (int j = 0; j < f.channels(); ++j) {
        const std::vector<double> r = phase_composite(u, c, j);

        if (solver == GSolver::Spectral) {
            std::vector<double> rhs = A.apply_adjoint(f.plane(j), w, h);
            for (int q = 0; q < n; ++q) rhs[q] = p.mu * rhs[q] + p.lambda * r[q];
            auto x = solve_spectral(p.mu, p.lambda, p.blur ? SpectralOp::Convolution
                                                           : SpectralOp::Identity,
                                    p.blur ? &*p.blur : nullptr, rhs, w, h);
            std::copy(x.begin(), x.end(), g.plane(j).begin());
            continue;
        }

        // Normal equations restricted to observed pixels; unobserved
        // coordinates are pinned to r and stay out of the Krylov space.
        MatVec matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
            std::vector<double> t = A.apply(x, w, h);
            for (int q = 0; q < n; ++q)
                if (!mask.data()[q]) t[q] = 0.0;
            y = A.apply_adjoint(t, w, h);
            for (int q = 0; q < n; ++q)
                y[q] = mask.data()[q] ? p.mu * y[q] + p.lambda * x[q] : 0.0;
        };
        const std::vector<double> rhs = masked_rhs(A, mask, f.plane(j), r, w, h, p.mu, p.lambda);
        CgResult cg = solve_cg(matvec, rhs, p.cg_tol, p.cg_max_iter);
        if (!cg.converged)
            throw std::runtime_error(
                "update_g: CG did not converge (relative residual " +
                std::to_string(cg.relative_residual) + " after " +
                std::to_string(cg.iterations) + " iterations)");
        auto gj = g.plane(j);
        for (int q = 0; q < n; ++q) gj[q] = mask.data()[q] ? cg.x[q] : r[q];
    }
    return g;
}

double g_data_energy(const ImageField& f, const ImageField& g, const Membership& u,
                     const Codebook& c, const ObservationMask& mask, const ModelParams& p) {
    const int w = f.width(), h = f.height(), n = w * h;
    const LinearOperator A =
        p.blur ? LinearOperator::convolution(*p.blur) : LinearOperator::identity();
    double restoration = 0.0, segmentation = 0.0;
    for (int j = 0; j < f.channels(); ++j) {
        std::vector<double> ag = A.apply(g.plane(j), w, h);
        auto fj = f.plane(j);
        auto gj = g.plane(j);
        for (int q = 0; q < n; ++q) {
            if (!mask.data()[q]) continue;
            const double d = fj[q] - ag[q];
            restoration += d * d;
            for (int i = 0; i < u.phases(); ++i) {
                const double e = gj[q] - c.at(i, j);
                segmentation += e * e * u.data()[i * n + q];
            }
        }
    }
    return p.mu * restoration + p.lambda * segmentation;
}

MinimizerCheck verify_unique_minimizer(const ImageField& g, const ImageField& f,
                                       const Membership& u, const Codebook& c,
                                       const ObservationMask& mask, const ModelParams& p,
                                       int trials, double step, uint64_t seed) {
    if (p.fidelity != Fidelity::Gaussian)
        throw std::runtime_error("verify_unique_minimizer: Gaussian fidelity only");
    check_shapes(f, u, c, mask);

    const double base = g_data_energy(f, g, u, c, mask, p);
    const int n = f.pixels();
    Rng rng(derive_seed(seed, 0x67756e69));
    MinimizerCheck result;
    ImageField perturbed = g;
    for (int t = 0; t < trials; ++t) {
        // Random direction supported on observed pixels, scaled to `step`.
        std::vector<double> dir(size_t(n) * f.channels(), 0.0);
        double norm2 = 0.0;
        for (int j = 0; j < f.channels(); ++j)
            for (int q = 0; q < n; ++q)
                if (mask.data()[q]) {
                    const double v = rng.gaussian();
                    dir[size_t(j) * n + q] = v;
                    norm2 += v * v;
                }
        if (norm2 == 0.0) continue;
        const double scale = step / std::sqrt(norm2);
        for (size_t k = 0; k < dir.size(); ++k)
            perturbed.data()[k] = g.data()[k] + scale * dir[k];
        const double e = g_data_energy(f, perturbed, u, c, mask, p);
        if (!(e > base)) {
            result.ok = false;
            result.failing_trial = t;
            result.energy_delta = e - base;
            return result;
        }
    }
    return result;
}

}  // namespace segres
