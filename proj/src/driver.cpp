// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "segres/cluster.hpp"
#include "segres/operators.hpp"
#include "segres/restore.hpp"
#include "segres/rng.hpp"
#include "segres/segment.hpp"

namespace segres {

EnergyBreakdown energy(const ImageField& f, const ImageField& g, const Membership& u,
                       const Codebook& c, const ObservationMask& mask, const ModelParams& p) {
    if (g.width() != f.width() || g.height() != f.height() ||
        g.channels() != f.channels() || u.width() != f.width() ||
        u.height() != f.height() || mask.width() != f.width() ||
        mask.height() != f.height())
        throw std::invalid_argument("energy: field dimensions disagree");
    if (c.phases() != u.phases() || c.channels() != f.channels())
        throw std::invalid_argument("energy: codebook shape disagrees");

    const int w = f.width(), h = f.height(), n = w * h;
    const LinearOperator A =
        p.blur ? LinearOperator::convolution(*p.blur) : LinearOperator::identity();

    double fidelity = 0.0, segmentation = 0.0;
    for (int j = 0; j < f.channels(); ++j) {
        std::vector<double> ag = A.apply(g.plane(j), w, h);
        auto fj = f.plane(j);
        auto gj = g.plane(j);
        for (int q = 0; q < n; ++q) {
            if (!mask.data()[q]) continue;
            switch (p.fidelity) {
                case Fidelity::Gaussian: {
                    const double d = fj[q] - ag[q];
                    fidelity += d * d;
                    break;
                }
                case Fidelity::Poisson:
                    if (!(ag[q] > 0.0))
                        throw std::domain_error(
                            "energy: Poisson fidelity needs Ag > 0 at observed pixels");
                    fidelity += ag[q] - fj[q] * std::log(ag[q]);
                    break;
                case Fidelity::Impulsive:
                    fidelity += std::abs(fj[q] - ag[q]);
                    break;
            }
            for (int i = 0; i < u.phases(); ++i) {
                const double e = gj[q] - c.at(i, j);
                segmentation += e * e * u.data()[size_t(i) * n + q];
            }
        }
    }

    double tv = 0.0;
    for (int i = 0; i < u.phases(); ++i) {
        GradientField gu = grad(u.plane(i), w, h);
        for (int q = 0; q < n; ++q)
            tv += std::sqrt(gu.dx[q] * gu.dx[q] + gu.dy[q] * gu.dy[q]);
    }

    EnergyBreakdown out;
    out.restoration = p.mu * fidelity;
    out.segmentation = p.lambda * segmentation;
    out.tv = tv;
    out.total = out.restoration + out.segmentation + out.tv;
    return out;
}

void RunTrace::write_csv(std::ostream& os) const {
    os << "iter,E_total,E_restoration,E_segmentation,E_tv,dc_norm,ms_elapsed\n";
    char line[256];
    for (const TraceRow& r : rows) {
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.3f\n",
                      r.iteration, r.e.total, r.e.restoration, r.e.segmentation, r.e.tv,
                      r.dc_norm, r.ms_elapsed);
        os << line;
    }
}

RunResult run(const ImageField& f, const ObservationMask& mask, const ModelParams& p) {
    if (auto v = validate(p))
        throw std::invalid_argument("run: " + v->what);
    if (p.fidelity != Fidelity::Gaussian)
        throw std::runtime_error("run: only the Gaussian fidelity has a solver");
    if (mask.width() != f.width() || mask.height() != f.height())
        throw std::invalid_argument("run: mask dimensions disagree");

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_ms = [&t0] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    };

    auto [c, u] = fcm_init(f, mask, p.phases, 100, p.seed);

    RunResult result;
    result.g = p.baseline_mode ? f : ImageField(f.width(), f.height(), f.channels());
    AdmmState admm;
    double prev_total = 0.0;
    bool have_prev = false;

    for (int k = 1; k <= p.max_outer; ++k) {
        // g-step. Guarded: with an exact solve this never increases the
        // energy (Theorem-2 style descent); the guard only matters for the
        // pinned missing-pixel convention under a blur operator.
        if (!p.baseline_mode) {
            ImageField g_new = update_g(f, u, c, mask, p);
            if (k > 1) {
                const double before = g_data_energy(f, result.g, u, c, mask, p);
                const double after = g_data_energy(f, g_new, u, c, mask, p);
                if (after <= before + 1e-12 * std::abs(before))
                    result.g = std::move(g_new);
                else
                    ++result.trace.guard_rejections;
            } else {
                result.g = std::move(g_new);
            }
        }

        // c-step: exact minimizer.
        Codebook c_new = update_c(result.g, u, mask, c);
        double dc = 0.0;
        for (size_t i = 0; i < c_new.values().size(); ++i) {
            const double d = c_new.values()[i] - c.values()[i];
            dc += d * d;
        }
        dc = std::sqrt(dc);
        c = std::move(c_new);

        // u-step: inexact ADMM, kept only if it does not raise the energy.
        const UnaryCost s = build_unary(result.g, c, mask);
        Membership u_new = update_u(s, u, p, admm);
        const EnergyBreakdown e_candidate = energy(f, result.g, u_new, c, mask, p);
        const EnergyBreakdown e_previous = energy(f, result.g, u, c, mask, p);
        EnergyBreakdown row_energy;
        if (e_candidate.total <= e_previous.total + 1e-12 * std::abs(e_previous.total)) {
            u = std::move(u_new);
            row_energy = e_candidate;
        } else {
            ++result.trace.guard_rejections;
            row_energy = e_previous;
        }

        result.trace.rows.push_back({k, row_energy, dc, elapsed_ms()});
        if (have_prev && row_energy.total > prev_total + 1e-9 * std::abs(prev_total))
            throw std::runtime_error("run: energy increased across an outer iteration");
        prev_total = row_energy.total;
        have_prev = true;

        if (dc <= p.epsilon) {
            result.trace.termination = Termination::Converged;
            break;
        }
    }

    result.codebook = c;
    result.membership = u;
    result.labels = binarize(u);
    return result;
}

namespace {

double relative_drop(double base, double perturbed) {
    const double scale = std::max(std::abs(base), 1.0);
    return (base - perturbed) / scale;
}

}  // namespace

PartialMinimizerReport check_partial_minimizer(const ImageField& f, const ObservationMask& mask,
                                               const ModelParams& p, const RunResult& result,
                                               int trials, double step, uint64_t seed) {
    constexpr double kTol = 1e-7;
    const EnergyBreakdown base = energy(f, result.g, result.membership, result.codebook, mask, p);
    const int n = f.pixels(), K = result.membership.phases();
    PartialMinimizerReport report;
    Rng rng(derive_seed(seed, 0x70617274));

    // g block: free Gaussian directions.
    if (!p.baseline_mode) {
        ImageField g = result.g;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> dir(g.data().size());
            double norm2 = 0.0;
            for (auto& v : dir) {
                v = rng.gaussian();
                norm2 += v * v;
            }
            const double scale = step / std::sqrt(norm2);
            for (size_t i = 0; i < dir.size(); ++i)
                g.data()[i] = result.g.data()[i] + scale * dir[i];
            const double e = energy(f, g, result.membership, result.codebook, mask, p).total;
            if (relative_drop(base.total, e) > kTol)
                return {false, "g", t, relative_drop(base.total, e)};
        }
    }

    // c block: free Gaussian directions on the K x N entries.
    {
        Codebook c = result.codebook;
        for (int t = 0; t < trials; ++t) {
            std::vector<double> dir(c.values().size());
            double norm2 = 0.0;
            for (auto& v : dir) {
                v = rng.gaussian();
                norm2 += v * v;
            }
            const double scale = step / std::sqrt(norm2);
            for (size_t i = 0; i < dir.size(); ++i)
                c.values()[i] = result.codebook.values()[i] + scale * dir[i];
            const double e = energy(f, result.g, result.membership, c, mask, p).total;
            if (relative_drop(base.total, e) > kTol)
                return {false, "c", t, relative_drop(base.total, e)};
        }
    }

    // u block: mix toward a random simplex point per pixel, which stays
    // feasible for any step scale in (0, 1].
    {
        Membership u = result.membership;
        std::vector<double> target(K);
        for (int t = 0; t < trials; ++t) {
            std::vector<double> dir(u.data().size());
            double norm2 = 0.0;
            for (int q = 0; q < n; ++q) {
                double sum = 0.0;
                for (int i = 0; i < K; ++i) {
                    target[i] = -std::log(std::max(rng.uniform(), 1e-300));
                    sum += target[i];
                }
                for (int i = 0; i < K; ++i) {
                    const double v = target[i] / sum - result.membership.data()[size_t(i) * n + q];
                    dir[size_t(i) * n + q] = v;
                    norm2 += v * v;
                }
            }
            if (norm2 == 0.0) continue;
            const double scale = std::min(step / std::sqrt(norm2), 1.0);
            for (size_t i = 0; i < dir.size(); ++i)
                u.data()[i] = result.membership.data()[i] + scale * dir[i];
            const double e = energy(f, result.g, u, result.codebook, mask, p).total;
            if (relative_drop(base.total, e) > kTol)
                return {false, "u", t, relative_drop(base.total, e)};
        }
    }
    return report;
}

}  // namespace segres
