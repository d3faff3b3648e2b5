// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "segres/corrupt.hpp"
#include "segres/restore.hpp"
#include "segres/rng.hpp"

using namespace segres;

namespace {

Membership random_membership(int w, int h, int K, uint64_t seed) {
    Rng rng(seed);
    Membership u(w, h, K);
    for (int q = 0; q < w * h; ++q) {
        double sum = 0.0;
        for (int i = 0; i < K; ++i) {
            u.data()[size_t(i) * w * h + q] = rng.uniform() + 1e-9;
            sum += u.data()[size_t(i) * w * h + q];
        }
        for (int i = 0; i < K; ++i) u.data()[size_t(i) * w * h + q] /= sum;
    }
    return u;
}

ImageField random_image(int w, int h, int ch, uint64_t seed) {
    Rng rng(seed);
    ImageField f(w, h, ch);
    for (auto& v : f.data()) v = rng.uniform();
    return f;
}

Kernel gaussian3x3() {
    DegradeSpec spec;
    spec.blur = BlurKind::Gaussian;
    spec.blur_size = 3;
    spec.blur_param = 1.0;
    return make_blur_kernel(spec);
}

// Dense oracle for the masked g-step: pin unobserved coordinates to
// r = sum_i c_i u_i, eliminate them, and solve the observed block densely.
std::vector<double> dense_masked_g(const std::vector<double>& f_plane,
                                   const std::vector<double>& r,
                                   const std::vector<uint8_t>& mask, int w, int h,
                                   const Kernel* kernel, double mu, double lambda) {
    const int n = w * h;
    std::vector<double> taps{1.0};
    int kw = 1, kh = 1;
    if (kernel) {
        taps = kernel->taps();
        kw = kernel->width();
        kh = kernel->height();
    }
    std::vector<double> rot(taps.rbegin(), taps.rend());

    std::vector<int> observed;
    for (int q = 0; q < n; ++q)
        if (mask[q]) observed.push_back(q);
    const int m = int(observed.size());

    auto reduced_op = [&](const std::vector<double>& xo) {
        std::vector<double> full(n, 0.0);
        for (int i = 0; i < m; ++i) full[observed[i]] = xo[i];
        auto av = oracle::naive_convolve(full, w, h, taps, kw, kh);
        for (int q = 0; q < n; ++q)
            if (!mask[q]) av[q] = 0.0;
        auto back = oracle::naive_convolve(av, w, h, rot, kw, kh);
        std::vector<double> out(m);
        for (int i = 0; i < m; ++i) out[i] = mu * back[observed[i]] + lambda * xo[i];
        return out;
    };

    // rhs = mu A^T(w f) + lambda r - mu A^T w A (pinned part), on observed
    std::vector<double> fw(f_plane);
    std::vector<double> pinned(n, 0.0);
    for (int q = 0; q < n; ++q) {
        if (!mask[q]) {
            fw[q] = 0.0;
            pinned[q] = r[q];
        }
    }
    auto atf = oracle::naive_convolve(fw, w, h, rot, kw, kh);
    auto apin = oracle::naive_convolve(pinned, w, h, taps, kw, kh);
    for (int q = 0; q < n; ++q)
        if (!mask[q]) apin[q] = 0.0;
    auto back_pin = oracle::naive_convolve(apin, w, h, rot, kw, kh);

    std::vector<double> rhs(m);
    for (int i = 0; i < m; ++i) {
        const int q = observed[i];
        rhs[i] = mu * atf[q] + lambda * r[q] - mu * back_pin[q];
    }
    const auto dense = oracle::dense_matrix(reduced_op, m);
    const auto xo = oracle::dense_solve(dense, rhs);

    std::vector<double> g(n);
    for (int q = 0; q < n; ++q) g[q] = r[q];
    for (int i = 0; i < m; ++i) g[observed[i]] = xo[i];
    return g;
}

}  // namespace

TEST_CASE("scalar g-step: single active phase, identity operator") {
    // With one phase carrying all membership, g = (mu f + lambda c) / (mu + lambda).
    const int w = 4, h = 4;
    ImageField f(w, h, 1, 0.4);
    Membership u(w, h, 2, 0.0);
    for (int q = 0; q < w * h; ++q) u.data()[q] = 1.0;  // phase 0 everywhere
    Codebook c(2, 1, 0.2);
    ObservationMask mask(w, h, 1);
    ModelParams p;
    p.mu = 1.0;
    p.lambda = 1.0;
    const ImageField g = update_g(f, u, c, mask, p);
    for (double v : g.data()) CHECK(v == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("noiseless binary image with exact indicators is a fixed point") {
    const int w = 6, h = 4;
    ImageField f(w, h, 1);
    Membership u(w, h, 2, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int phase = (x < w / 2) ? 0 : 1;
            f.at(0, x, y) = phase;
            u.at(phase, x, y) = 1.0;
        }
    Codebook c(2, 1);
    c.at(0, 0) = 0.0;
    c.at(1, 0) = 1.0;
    ObservationMask mask(w, h, 1);
    ModelParams p;
    p.mu = 2.0;
    p.lambda = 3.0;
    const ImageField g = update_g(f, u, c, mask, p);
    for (int q = 0; q < w * h; ++q)
        CHECK(g.data()[q] == doctest::Approx(f.data()[q]).epsilon(1e-12));
}

TEST_CASE("masked deblur g-step matches the dense pinned direct solve") {
    const int w = 8, h = 8, n = w * h;
    const Kernel kernel = gaussian3x3();
    ModelParams p;
    p.mu = 2.0;
    p.lambda = 0.8;
    p.blur = kernel;
    for (uint64_t seed = 0; seed < 3; ++seed) {
        const ImageField f = random_image(w, h, 1, 500 + seed);
        const Membership u = random_membership(w, h, 3, 600 + seed);
        Codebook c(3, 1);
        Rng rng(700 + seed);
        for (auto& v : c.values()) v = rng.uniform();
        ObservationMask mask(w, h, 1);
        for (int q = 0; q < n; ++q) mask.data()[q] = rng.uniform() < 0.25 ? 0 : 1;

        std::vector<double> r(n, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int q = 0; q < n; ++q) r[q] += c.at(i, 0) * u.data()[size_t(i) * n + q];

        const auto expect = dense_masked_g({f.plane(0).begin(), f.plane(0).end()}, r,
                                           mask.data(), w, h, &kernel, p.mu, p.lambda);
        const ImageField g = update_g(f, u, c, mask, p);
        for (int q = 0; q < n; ++q)
            CHECK(g.data()[q] == doctest::Approx(expect[q]).epsilon(1e-8));
    }
}

TEST_CASE("spectral and CG paths agree on fully observed deblur systems") {
    const int w = 8, h = 8;
    ModelParams p;
    p.mu = 1.5;
    p.lambda = 2.0;
    p.blur = gaussian3x3();
    const ImageField f = random_image(w, h, 1, 800);
    const Membership u = random_membership(w, h, 2, 801);
    Codebook c(2, 1);
    c.at(0, 0) = 0.2;
    c.at(1, 0) = 0.9;
    ObservationMask mask(w, h, 1);
    const ImageField gs = update_g(f, u, c, mask, p, GSolver::Spectral);
    const ImageField gc = update_g(f, u, c, mask, p, GSolver::Cg);
    for (int q = 0; q < w * h; ++q)
        CHECK(std::abs(gs.data()[q] - gc.data()[q]) < 1e-6);
}

TEST_CASE("the g-step never raises the data energy") {
    const int w = 8, h = 8;
    ModelParams p;
    p.mu = 1.0;
    p.lambda = 4.0;
    p.blur = gaussian3x3();
    for (uint64_t seed = 0; seed < 4; ++seed) {
        const ImageField f = random_image(w, h, 1, 900 + seed);
        const Membership u = random_membership(w, h, 2, 910 + seed);
        Codebook c(2, 1);
        c.at(0, 0) = 0.25;
        c.at(1, 0) = 0.75;
        ObservationMask mask(w, h, 1);
        const ImageField g_old = random_image(w, h, 1, 920 + seed);
        const ImageField g_new = update_g(f, u, c, mask, p);
        const double before = g_data_energy(f, g_old, u, c, mask, p);
        const double after = g_data_energy(f, g_new, u, c, mask, p);
        CHECK(after <= before + 1e-9 * std::abs(before));
    }
}

TEST_CASE("with dominant fidelity and identity operator, g approaches f") {
    const int w = 6, h = 6;
    const ImageField f = random_image(w, h, 1, 1000);
    const Membership u = random_membership(w, h, 2, 1001);
    Codebook c(2, 1);
    c.at(0, 0) = 0.1;
    c.at(1, 0) = 0.9;
    ObservationMask mask(w, h, 1);
    ModelParams p;
    p.mu = 1e9;
    p.lambda = 1.0;
    const ImageField g = update_g(f, u, c, mask, p);
    double inf_norm = 0.0;
    for (int q = 0; q < w * h; ++q)
        inf_norm = std::max(inf_norm, std::abs(g.data()[q] - f.data()[q]));
    CHECK(inf_norm < 1e-8);
}

TEST_CASE("non-Gaussian fidelities have no g solver") {
    const ImageField f = random_image(4, 4, 1, 1100);
    const Membership u = Membership::uniform(4, 4, 2);
    const Codebook c(2, 1, 0.5);
    const ObservationMask mask(4, 4, 1);
    ModelParams p;
    p.fidelity = Fidelity::Poisson;
    CHECK_THROWS(update_g(f, u, c, mask, p));
    p.fidelity = Fidelity::Impulsive;
    CHECK_THROWS(update_g(f, u, c, mask, p));
}

TEST_CASE("a solved g passes the uniqueness probe") {
    const int w = 6, h = 6;
    const ImageField f = random_image(w, h, 1, 1200);
    const Membership u = random_membership(w, h, 2, 1201);
    Codebook c(2, 1);
    c.at(0, 0) = 0.3;
    c.at(1, 0) = 0.6;
    ObservationMask mask(w, h, 1);
    ModelParams p;
    p.mu = 1.0;
    p.lambda = 2.0;
    const ImageField g = update_g(f, u, c, mask, p);
    const MinimizerCheck check = verify_unique_minimizer(g, f, u, c, mask, p, 100);
    CHECK(check.ok);
}

TEST_CASE("a perturbed g fails the uniqueness probe") {
    const int w = 6, h = 6;
    const ImageField f = random_image(w, h, 1, 1300);
    const Membership u = random_membership(w, h, 2, 1301);
    Codebook c(2, 1);
    c.at(0, 0) = 0.3;
    c.at(1, 0) = 0.6;
    ObservationMask mask(w, h, 1);
    ModelParams p;
    p.mu = 1.0;
    p.lambda = 2.0;
    ImageField g = update_g(f, u, c, mask, p);
    for (auto& v : g.data()) v += 0.01;  // walk away from the minimizer
    const MinimizerCheck check = verify_unique_minimizer(g, f, u, c, mask, p, 100);
    CHECK_FALSE(check.ok);
    CHECK(check.energy_delta <= 0.0);
}

TEST_CASE("identity-operator g-step matches the pointwise closed form") {
    const int w = 4, h = 4, n = w * h;
    const ImageField f = random_image(w, h, 1, 1400);
    const Membership u = random_membership(w, h, 3, 1401);
    Codebook c(3, 1);
    c.at(0, 0) = 0.1;
    c.at(1, 0) = 0.5;
    c.at(2, 0) = 0.9;
    ObservationMask mask(w, h, 1);
    ModelParams p;
    p.mu = 2.0;
    p.lambda = 3.0;
    const ImageField g = update_g(f, u, c, mask, p);
    for (int q = 0; q < n; ++q) {
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r += c.at(i, 0) * u.data()[size_t(i) * n + q];
        const double expect = (p.mu * f.data()[q] + p.lambda * r) / (p.mu + p.lambda);
        CHECK(g.data()[q] == doctest::Approx(expect).epsilon(1e-10));
    }
    CHECK(verify_unique_minimizer(g, f, u, c, mask, p, 50).ok);
}

TEST_CASE("masked identity g-step pins unobserved pixels to the phase composite") {
    const int w = 5, h = 5, n = w * h;
    const ImageField f = random_image(w, h, 1, 1500);
    const Membership u = random_membership(w, h, 2, 1501);
    Codebook c(2, 1);
    c.at(0, 0) = 0.2;
    c.at(1, 0) = 0.8;
    ObservationMask mask(w, h, 1);
    mask.at(1, 1) = 0;
    mask.at(3, 2) = 0;
    ModelParams p;
    const ImageField g = update_g(f, u, c, mask, p);
    for (const auto [x, y] : {std::pair{1, 1}, std::pair{3, 2}}) {
        const int q = y * w + x;
        const double r = c.at(0, 0) * u.data()[q] + c.at(1, 0) * u.data()[size_t(n) + q];
        CHECK(g.at(0, x, y) == doctest::Approx(r).epsilon(1e-12));
    }
}
