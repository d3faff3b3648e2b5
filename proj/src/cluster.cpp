// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace segres {

Codebook update_c(const ImageField& g, const Membership& u, const ObservationMask& mask,
                  const Codebook& previous) {
    if (u.width() != g.width() || u.height() != g.height() ||
        mask.width() != g.width() || mask.height() != g.height())
        throw std::invalid_argument("update_c: field dimensions disagree");
    if (previous.phases() != u.phases() || previous.channels() != g.channels())
        throw std::invalid_argument("update_c: previous codebook shape disagrees");

    const int n = g.pixels(), K = u.phases(), N = g.channels();
    Codebook c = previous;
    for (int i = 0; i < K; ++i) {
        double mass = 0.0;
        std::vector<double> num(N, 0.0);
        auto ui = u.plane(i);
        for (int q = 0; q < n; ++q) {
            if (!mask.data()[q]) continue;
            const double w = ui[q];
            mass += w;
            for (int j = 0; j < N; ++j) num[j] += w * g.data()[size_t(j) * n + q];
        }
        if (mass < 1e-12) continue;  // empty phase keeps its previous center
        for (int j = 0; j < N; ++j) c.at(i, j) = num[j] / mass;
    }
    return c;
}

namespace {

struct PixelRef {
    double key;  // mean intensity over channels
    int index;
};

double sq_distance(const ImageField& f, int q, int n, const std::vector<double>& center) {
    double d = 0.0;
    for (size_t j = 0; j < center.size(); ++j) {
        const double e = f.data()[j * n + q] - center[j];
        d += e * e;
    }
    return d;
}

}  // namespace

std::pair<Codebook, Membership> fcm_init(const ImageField& f, const ObservationMask& mask,
                                         int phases, int iters,
                                         [[maybe_unused]] uint64_t seed) {
    if (phases < 2) throw std::invalid_argument("fcm_init: K must be >= 2");
    if (mask.width() != f.width() || mask.height() != f.height())
        throw std::invalid_argument("fcm_init: mask dimensions disagree");

    const int n = f.pixels(), N = f.channels(), K = phases;

    std::vector<PixelRef> observed;
    observed.reserve(n);
    for (int q = 0; q < n; ++q) {
        if (!mask.data()[q]) continue;
        double mean = 0.0;
        for (int j = 0; j < N; ++j) mean += f.data()[size_t(j) * n + q];
        observed.push_back({mean / N, q});
    }
    if (observed.empty()) throw std::runtime_error("fcm_init: no observed pixels");

    // Deterministic farthest-point seeding: start from the darkest pixel,
    // then repeatedly take the pixel farthest from the chosen centers.
    // Spreads seeds across intensity modes regardless of phase area, and
    // detects degenerate inputs (< K distinct values) as a zero gap.
    auto pixel_vec = [&](int q) {
        std::vector<double> v(N);
        for (int j = 0; j < N; ++j) v[j] = f.data()[size_t(j) * n + q];
        return v;
    };
    int first = observed[0].index;
    double first_key = observed[0].key;
    for (const PixelRef& p : observed)
        if (p.key < first_key) { first_key = p.key; first = p.index; }
    std::vector<std::vector<double>> centers{pixel_vec(first)};
    std::vector<double> gap(observed.size(), 0.0);
    for (size_t k = 0; k < observed.size(); ++k)
        gap[k] = sq_distance(f, observed[k].index, n, centers.back());
    while (int(centers.size()) < K) {
        size_t best = 0;
        for (size_t k = 1; k < observed.size(); ++k)
            if (gap[k] > gap[best]) best = k;
        if (!(gap[best] > 0.0))
            throw std::runtime_error("fcm_init: fewer than K distinct observed pixel values");
        centers.push_back(pixel_vec(observed[best].index));
        for (size_t k = 0; k < observed.size(); ++k)
            gap[k] = std::min(gap[k], sq_distance(f, observed[k].index, n, centers.back()));
    }

    // Standard FCM sweeps with m = 2: u_i ~ 1/d_i^2, centers as u^2-means.
    std::vector<double> memberships(size_t(K) * observed.size());
    for (int it = 0; it < iters; ++it) {
        for (size_t k = 0; k < observed.size(); ++k) {
            const int q = observed[k].index;
            double inv_sum = 0.0;
            int exact = -1;
            for (int i = 0; i < K; ++i) {
                const double d = sq_distance(f, q, n, centers[i]);
                if (d == 0.0) { exact = i; break; }
                inv_sum += 1.0 / d;
            }
            for (int i = 0; i < K; ++i) {
                double& ui = memberships[size_t(i) * observed.size() + k];
                if (exact >= 0)
                    ui = (i == exact) ? 1.0 : 0.0;
                else
                    ui = (1.0 / sq_distance(f, q, n, centers[i])) / inv_sum;
            }
        }
        for (int i = 0; i < K; ++i) {
            double mass = 0.0;
            std::vector<double> num(N, 0.0);
            for (size_t k = 0; k < observed.size(); ++k) {
                const double w = memberships[size_t(i) * observed.size() + k];
                const double w2 = w * w;
                mass += w2;
                const int q = observed[k].index;
                for (int j = 0; j < N; ++j) num[j] += w2 * f.data()[size_t(j) * n + q];
            }
            if (mass > 0.0)
                for (int j = 0; j < N; ++j) centers[i][j] = num[j] / mass;
        }
    }

    // Sort phases by first-channel value so indices are reproducible.
    std::vector<int> order(K);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return centers[a][0] < centers[b][0]; });

    Codebook codebook(K, N);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < N; ++j) codebook.at(i, j) = centers[order[i]][j];

    Membership u(f.width(), f.height(), K, 1.0 / K);
    for (int i = 0; i < K; ++i) {
        auto plane = u.plane(i);
        for (size_t k = 0; k < observed.size(); ++k)
            plane[observed[k].index] = memberships[size_t(order[i]) * observed.size() + k];
    }
    return {std::move(codebook), std::move(u)};
}

}  // namespace segres
