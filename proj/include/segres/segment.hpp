// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_SEGMENT_HPP
#define SEGRES_SEGMENT_HPP

#include <cmath>
#include <span>
#include <vector>

#include "segres/core.hpp"
#include "segres/operators.hpp"

namespace segres {

/// Per-pixel unary costs s_i(x) = w(x) * sum_j (g_j(x) - c_{i,j})^2,
/// stored phase-planar like Membership.
struct UnaryCost {
    int width = 0, height = 0, phases = 0;
    std::vector<double> s;

    int pixels() const { return width * height; }
    std::span<const double> plane(int i) const {
        return {s.data() + size_t(i) * pixels(), size_t(pixels())};
    }
};

UnaryCost build_unary(const ImageField& g, const Codebook& c, const ObservationMask& mask);

/// Euclidean projection onto {u >= 0, sum u = 1} (sorted-threshold form).
void project_simplex(std::span<double> y);

/// Isotropic soft threshold of a 2-vector: x * max(|x| - t, 0) / |x|.
inline void shrink(double& x0, double& x1, double t) {
    const double mag = std::sqrt(x0 * x0 + x1 * x1);
    if (mag <= t) {
        x0 = 0.0;
        x1 = 0.0;
    } else {
        const double scale = 1.0 - t / mag;
        x0 *= scale;
        x1 *= scale;
    }
}

/// Split variables and duals of the u-subproblem ADMM, kept across outer
/// iterations for warm starts.
struct AdmmState {
    int width = 0, height = 0, phases = 0;
    std::vector<double> v;               // relaxed primal copy, phase-planar
    std::vector<GradientField> d;        // TV split variable per phase
    std::vector<GradientField> dual_d;   // scaled dual for grad v = d
    std::vector<double> dual_u;          // scaled dual for v = u, phase-planar
    int iteration = 0;

    bool matches(int w, int h, int k) const {
        return width == w && height == h && phases == k;
    }
    void reset(int w, int h, int k, const Membership& u);
};

struct InnerReport {
    int iterations = 0;
    bool converged = false;
    double u_change = 0.0;        // ||u_new - u_old||_inf of the last sweep
    double split_residual = 0.0;  // ||v - u||_inf at exit
    double grad_residual = 0.0;   // ||grad v - d||_inf at exit
    double objective_initial = 0.0;  // lambda <v,s> + ||d||_1 at entry
    double objective_final = 0.0;    // same objective at exit
};

/// Runs the five-update ADMM sweep for the u-subproblem until the primal
/// changes drop below p.inner_tol or p.max_inner sweeps are spent.  The
/// returned memberships sit exactly on the simplex.  `state` supplies warm
/// starts and is updated in place; it is reset when shapes do not match.
Membership update_u(const UnaryCost& s, const Membership& u_init, const ModelParams& p,
                    AdmmState& state, InnerReport* report = nullptr);

/// Stateless convenience overload (fresh ADMM state).
Membership update_u(const UnaryCost& s, const Membership& u_init, const ModelParams& p,
                    InnerReport* report = nullptr);

}  // namespace segres

#endif  // SEGRES_SEGMENT_HPP
