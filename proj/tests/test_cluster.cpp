// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "segres/cluster.hpp"
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

}  // namespace

TEST_CASE("update_c averages a constant region exactly") {
    const int w = 8, h = 4;
    ImageField g(w, h, 1);
    Membership u(w, h, 2, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int left = x < w / 2;
            g.at(0, x, y) = left ? 0.2 : 0.8;
            u.at(left ? 0 : 1, x, y) = 1.0;
        }
    const ObservationMask mask(w, h, 1);
    const Codebook c = update_c(g, u, mask, Codebook(2, 1, 0.0));
    CHECK(c.at(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(c.at(1, 0) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("update_c of a constant image returns that constant for all phases") {
    const int w = 5, h = 5;
    const double gamma = 0.37;
    ImageField g(w, h, 1, gamma);
    const Membership u = random_membership(w, h, 3, 10);
    ObservationMask mask(w, h, 1);
    mask.at(2, 2) = 0;
    const Codebook c = update_c(g, u, mask, Codebook(3, 1, 0.0));
    for (int i = 0; i < 3; ++i) CHECK(c.at(i, 0) == doctest::Approx(gamma).epsilon(1e-13));
}

TEST_CASE("update_c matches the explicit double-sum oracle") {
    const int w = 6, h = 6, n = w * h;
    Rng rng(20);
    ImageField g(w, h, 2);
    for (auto& v : g.data()) v = rng.uniform();
    const Membership u = random_membership(w, h, 3, 21);
    ObservationMask mask(w, h, 1);
    for (auto& m : mask.data()) m = rng.uniform() < 0.3 ? 0 : 1;

    const Codebook c = update_c(g, u, mask, Codebook(3, 2, 0.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) {
            double num = 0.0, den = 0.0;
            for (int q = 0; q < n; ++q) {
                if (!mask.data()[q]) continue;
                num += g.data()[size_t(j) * n + q] * u.data()[size_t(i) * n + q];
                den += u.data()[size_t(i) * n + q];
            }
            CHECK(c.at(i, j) == doctest::Approx(num / den).epsilon(1e-12));
        }
}

TEST_CASE("an empty phase keeps its previous center") {
    const int w = 4, h = 4;
    ImageField g(w, h, 1, 0.5);
    Membership u(w, h, 2, 0.0);
    for (int q = 0; q < w * h; ++q) u.data()[q] = 1.0;  // phase 1 never used
    const ObservationMask mask(w, h, 1);
    Codebook prev(2, 1);
    prev.at(0, 0) = 0.1;
    prev.at(1, 0) = 0.77;
    const Codebook c = update_c(g, u, mask, prev);
    CHECK(c.at(0, 0) == doctest::Approx(0.5));
    CHECK(c.at(1, 0) == 0.77);
}

TEST_CASE("update_c is shift-equivariant per channel") {
    const int w = 5, h = 4;
    Rng rng(30);
    ImageField g(w, h, 1);
    for (auto& v : g.data()) v = rng.uniform();
    const Membership u = random_membership(w, h, 2, 31);
    const ObservationMask mask(w, h, 1);
    const double delta = 0.21;
    ImageField shifted = g;
    for (auto& v : shifted.data()) v += delta;
    const Codebook a = update_c(g, u, mask, Codebook(2, 1, 0.0));
    const Codebook b = update_c(shifted, u, mask, Codebook(2, 1, 0.0));
    for (int i = 0; i < 2; ++i)
        CHECK(b.at(i, 0) == doctest::Approx(a.at(i, 0) + delta).epsilon(1e-12));
}

TEST_CASE("non-empty phase centers stay within the observed value range") {
    const int w = 6, h = 6;
    Rng rng(40);
    ImageField g(w, h, 1);
    for (auto& v : g.data()) v = 0.2 + 0.6 * rng.uniform();
    const Membership u = random_membership(w, h, 4, 41);
    ObservationMask mask(w, h, 1);
    for (auto& m : mask.data()) m = rng.uniform() < 0.25 ? 0 : 1;
    double lo = 1e9, hi = -1e9;
    for (int q = 0; q < w * h; ++q)
        if (mask.data()[q]) {
            lo = std::min(lo, g.data()[q]);
            hi = std::max(hi, g.data()[q]);
        }
    const Codebook c = update_c(g, u, mask, Codebook(4, 1, 0.0));
    for (int i = 0; i < 4; ++i) {
        CHECK(c.at(i, 0) >= lo - 1e-12);
        CHECK(c.at(i, 0) <= hi + 1e-12);
    }
}

TEST_CASE("FCM separates a two-value image") {
    ImageField f(8, 8, 1);
    for (int q = 0; q < 64; ++q) f.data()[q] = (q % 2 == 0) ? 0.1 : 0.9;
    const ObservationMask mask(8, 8, 1);
    const auto [c, u] = fcm_init(f, mask, 2, 100, 0);
    CHECK(c.at(0, 0) == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(c.at(1, 0) == doctest::Approx(0.9).epsilon(1e-6));
    CHECK_FALSE(validate(u).has_value());
}

TEST_CASE("FCM with K equal to the number of distinct values recovers them") {
    ImageField f(4, 3, 1);
    const double values[3] = {0.15, 0.5, 0.95};
    for (int q = 0; q < 12; ++q) f.data()[q] = values[q % 3];
    const ObservationMask mask(4, 3, 1);
    const auto [c, u] = fcm_init(f, mask, 3, 100, 0);
    for (int i = 0; i < 3; ++i) CHECK(c.at(i, 0) == doctest::Approx(values[i]).epsilon(1e-9));
}

TEST_CASE("FCM on a noisy three-level image matches a from-scratch oracle") {
    const int w = 16, h = 16, n = w * h;
    const double levels[3] = {0.15, 0.5, 0.85};
    Rng rng(50);
    ImageField f(w, h, 1);
    for (int q = 0; q < n; ++q)
        f.data()[q] = levels[q % 3] + 0.02 * (rng.uniform() - 0.5);
    const ObservationMask mask(w, h, 1);
    const auto [c, u] = fcm_init(f, mask, 3, 100, 0);

    // Independent implementation, run far past convergence from neutral
    // seeds, as the reference.
    const std::vector<double> pixels(f.data());
    const auto ref = oracle::fcm_scalar(pixels, {0.0, 0.5, 1.0}, 1000);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(c.at(i, 0) - levels[i]) < 0.02);
        CHECK(std::abs(c.at(i, 0) - ref.centers[i]) < 0.02);
    }
}

TEST_CASE("FCM requires K distinct observed values") {
    ImageField f(4, 4, 1, 0.5);
    f.at(0, 0, 0) = 0.7;
    const ObservationMask mask(4, 4, 1);
    CHECK_THROWS(fcm_init(f, mask, 3, 100, 0));
}

TEST_CASE("FCM ignores masked pixels entirely") {
    const int w = 6, h = 6;
    Rng rng(60);
    ImageField clean(w, h, 1);
    for (int q = 0; q < w * h; ++q) clean.data()[q] = (q % 2) ? 0.8 : 0.2;
    ObservationMask mask(w, h, 1);
    for (int q = 0; q < w * h; q += 5) mask.data()[q] = 0;

    ImageField tampered = clean;
    for (int q = 0; q < w * h; ++q)
        if (!mask.data()[q]) tampered.data()[q] = rng.uniform();

    const auto [c1, u1] = fcm_init(clean, mask, 2, 100, 0);
    const auto [c2, u2] = fcm_init(tampered, mask, 2, 100, 0);
    CHECK(c1.values() == c2.values());
    for (int q = 0; q < w * h; ++q)
        if (!mask.data()[q])
            for (int i = 0; i < 2; ++i)
                CHECK(u2.data()[size_t(i) * w * h + q] == doctest::Approx(0.5));
}

TEST_CASE("FCM is bit-reproducible run to run") {
    Rng rng(70);
    ImageField f(10, 10, 1);
    for (auto& v : f.data()) v = rng.uniform();
    const ObservationMask mask(10, 10, 1);
    const auto [c1, u1] = fcm_init(f, mask, 3, 100, 99);
    const auto [c2, u2] = fcm_init(f, mask, 3, 100, 99);
    CHECK(c1.values() == c2.values());
    CHECK(u1.data() == u2.data());
}

TEST_CASE("FCM centers come out sorted by first channel") {
    Rng rng(80);
    ImageField f(12, 12, 1);
    for (auto& v : f.data()) v = rng.uniform();
    const ObservationMask mask(12, 12, 1);
    const auto [c, u] = fcm_init(f, mask, 4, 100, 0);
    for (int i = 1; i < 4; ++i) CHECK(c.at(i - 1, 0) <= c.at(i, 0));
}
