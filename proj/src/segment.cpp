// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/segment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace segres {

UnaryCost build_unary(const ImageField& g, const Codebook& c, const ObservationMask& mask) {
    if (mask.width() != g.width() || mask.height() != g.height())
        throw std::invalid_argument("build_unary: mask dimensions disagree");
    if (c.channels() != g.channels())
        throw std::invalid_argument("build_unary: codebook channels disagree");

    const int n = g.pixels(), K = c.phases(), N = g.channels();
    UnaryCost cost;
    cost.width = g.width();
    cost.height = g.height();
    cost.phases = K;
    cost.s.assign(size_t(K) * n, 0.0);
    for (int i = 0; i < K; ++i) {
        double* si = cost.s.data() + size_t(i) * n;
        for (int j = 0; j < N; ++j) {
            const double cij = c.at(i, j);
            const double* gj = g.data().data() + size_t(j) * n;
            for (int q = 0; q < n; ++q) {
                const double e = gj[q] - cij;
                si[q] += e * e;
            }
        }
        for (int q = 0; q < n; ++q)
            if (!mask.data()[q]) si[q] = 0.0;
    }
    return cost;
}

void project_simplex(std::span<double> y) {
    const int k = int(y.size());
    if (k == 0) return;
    // Sorted-threshold projection: find the largest support whose common
    // shift keeps all supported entries positive.
    static thread_local std::vector<double> sorted;
    sorted.assign(y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    double cumulative = 0.0, tau = 0.0;
    for (int i = 0; i < k; ++i) {
        cumulative += sorted[i];
        const double candidate = (cumulative - 1.0) / (i + 1);
        if (sorted[i] - candidate > 0.0)
            tau = candidate;
        else
            break;
    }
    for (auto& v : y) v = std::max(v - tau, 0.0);
}

void AdmmState::reset(int w, int h, int k, const Membership& u) {
    width = w;
    height = h;
    phases = k;
    iteration = 0;
    v = u.data();
    d.resize(k);
    dual_d.resize(k);
    for (int i = 0; i < k; ++i) {
        d[i] = grad(u.plane(i), w, h);
        dual_d[i].width = w;
        dual_d[i].height = h;
        dual_d[i].dx.assign(size_t(w) * h, 0.0);
        dual_d[i].dy.assign(size_t(w) * h, 0.0);
    }
    dual_u.assign(size_t(k) * w * h, 0.0);
}

namespace {

double split_objective(const std::vector<double>& v, const std::vector<GradientField>& d,
                       const UnaryCost& s, double lambda, int n, int K) {
    double obj = 0.0;
    for (int i = 0; i < K; ++i) {
        const double* vi = v.data() + size_t(i) * n;
        const double* si = s.s.data() + size_t(i) * n;
        for (int q = 0; q < n; ++q) obj += lambda * vi[q] * si[q];
        for (int q = 0; q < n; ++q)
            obj += std::sqrt(d[i].dx[q] * d[i].dx[q] + d[i].dy[q] * d[i].dy[q]);
    }
    return obj;
}

}  // namespace

Membership update_u(const UnaryCost& s, const Membership& u_init, const ModelParams& p,
                    AdmmState& state, InnerReport* report) {
    if (s.width != u_init.width() || s.height != u_init.height() ||
        s.phases != u_init.phases())
        throw std::invalid_argument("update_u: unary cost shape disagrees");
    if (!(p.sigma > 0.0)) throw std::invalid_argument("update_u: sigma must be > 0");
    if (p.max_inner < 1) throw std::invalid_argument("update_u: max_inner must be >= 1");

    const int w = s.width, h = s.height, K = s.phases, n = w * h;
    if (!state.matches(w, h, K)) state.reset(w, h, K, u_init);

    Membership u = u_init;
    const double unary_scale = p.lambda / (2.0 * p.sigma);
    const double shrink_t = 1.0 / (2.0 * p.sigma);

    InnerReport rep;
    rep.objective_initial = split_objective(state.v, state.d, s, p.lambda, n, K);

    std::vector<double> rhs(n);
    std::vector<GradientField> grad_v(K);
    double u_change = 0.0, v_minus_u = 0.0;

    int sweep = 0;
    for (; sweep < p.max_inner; ++sweep) {
        // v-update: (I - Laplacian) v_i = u_i - b_u,i + div(b_d,i - d_i) - (lambda/2sigma) s_i
        for (int i = 0; i < K; ++i) {
            GradientField diff;
            diff.width = w;
            diff.height = h;
            diff.dx.resize(n);
            diff.dy.resize(n);
            for (int q = 0; q < n; ++q) {
                diff.dx[q] = state.dual_d[i].dx[q] - state.d[i].dx[q];
                diff.dy[q] = state.dual_d[i].dy[q] - state.d[i].dy[q];
            }
            std::vector<double> divergence_term = divergence(diff);
            const double* ui = u.data().data() + size_t(i) * n;
            const double* bu = state.dual_u.data() + size_t(i) * n;
            const double* si = s.s.data() + size_t(i) * n;
            for (int q = 0; q < n; ++q)
                rhs[q] = ui[q] - bu[q] + divergence_term[q] - unary_scale * si[q];
            auto vi = solve_spectral(1.0, 1.0, SpectralOp::Laplacian, nullptr, rhs, w, h);
            std::copy(vi.begin(), vi.end(), state.v.begin() + size_t(i) * n);
        }
        for (double vv : state.v)
            if (!std::isfinite(vv))
                throw std::runtime_error("update_u: non-finite iterate at inner sweep " +
                                         std::to_string(sweep));

        // d-update: isotropic shrinkage of b_d + grad v.
        for (int i = 0; i < K; ++i) {
            grad_v[i] = grad({state.v.data() + size_t(i) * n, size_t(n)}, w, h);
            for (int q = 0; q < n; ++q) {
                double zx = state.dual_d[i].dx[q] + grad_v[i].dx[q];
                double zy = state.dual_d[i].dy[q] + grad_v[i].dy[q];
                shrink(zx, zy, shrink_t);
                state.d[i].dx[q] = zx;
                state.d[i].dy[q] = zy;
            }
        }

        // u-update: per-pixel simplex projection of b_u + v.
        u_change = 0.0;
        std::vector<double> pixel(K);
        for (int q = 0; q < n; ++q) {
            for (int i = 0; i < K; ++i)
                pixel[i] = state.dual_u[size_t(i) * n + q] + state.v[size_t(i) * n + q];
            project_simplex(pixel);
            for (int i = 0; i < K; ++i) {
                double& uq = u.data()[size_t(i) * n + q];
                u_change = std::max(u_change, std::abs(pixel[i] - uq));
                uq = pixel[i];
            }
        }

        // dual ascent
        v_minus_u = 0.0;
        for (int i = 0; i < K; ++i) {
            for (int q = 0; q < n; ++q) {
                state.dual_d[i].dx[q] += grad_v[i].dx[q] - state.d[i].dx[q];
                state.dual_d[i].dy[q] += grad_v[i].dy[q] - state.d[i].dy[q];
                const double r = state.v[size_t(i) * n + q] - u.data()[size_t(i) * n + q];
                state.dual_u[size_t(i) * n + q] += r;
                v_minus_u = std::max(v_minus_u, std::abs(r));
            }
        }

        ++state.iteration;
        if (!std::isfinite(u_change) || !std::isfinite(v_minus_u))
            throw std::runtime_error("update_u: non-finite iterate at inner sweep " +
                                     std::to_string(sweep));
        if (std::max(u_change, v_minus_u) < p.inner_tol) {
            ++sweep;
            rep.converged = true;
            break;
        }
    }

    rep.iterations = sweep;
    rep.u_change = u_change;
    rep.split_residual = v_minus_u;
    double grad_res = 0.0;
    for (int i = 0; i < K; ++i)
        for (int q = 0; q < n; ++q) {
            grad_res = std::max(grad_res, std::abs(grad_v[i].dx[q] - state.d[i].dx[q]));
            grad_res = std::max(grad_res, std::abs(grad_v[i].dy[q] - state.d[i].dy[q]));
        }
    rep.grad_residual = grad_res;
    rep.objective_final = split_objective(state.v, state.d, s, p.lambda, n, K);
    if (report) *report = rep;
    return u;
}

Membership update_u(const UnaryCost& s, const Membership& u_init, const ModelParams& p,
                    InnerReport* report) {
    AdmmState state;
    return update_u(s, u_init, p, state, report);
}

}  // namespace segres
