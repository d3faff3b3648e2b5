// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "segres/core.hpp"
#include "segres/rng.hpp"

using namespace segres;

TEST_CASE("validate accepts memberships built on the simplex") {
    Membership u(4, 3, 3);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 4; ++x) {
            u.at(0, x, y) = 0.2;
            u.at(1, x, y) = 0.3;
            u.at(2, x, y) = 0.5;
        }
    CHECK_FALSE(validate(u).has_value());
}

TEST_CASE("validate reports the pixel whose row leaves the simplex") {
    Membership u = Membership::uniform(4, 3, 2);
    u.at(0, 2, 1) = 1.0;  // row now sums to 1.5
    const auto v = validate(u);
    REQUIRE(v.has_value());
    CHECK(v->x == 2);
    CHECK(v->y == 1);
    CHECK(v->what.find("sum") != std::string::npos);
}

TEST_CASE("validate flags an unnormalized kernel") {
    Kernel k(3, 1, {0.3, 0.38, 0.3});  // sums to 0.98
    const auto v = validate(k);
    REQUIRE(v.has_value());
    CHECK(v->what.find("normalized") != std::string::npos);
}

TEST_CASE("validate flags non-finite image values") {
    ImageField f(3, 2, 1, 0.5);
    f.at(0, 1, 1) = std::nan("");
    const auto v = validate(f);
    REQUIRE(v.has_value());
    CHECK(v->x == 1);
    CHECK(v->y == 1);
}

TEST_CASE("validate flags masks with values outside {0,1}") {
    ObservationMask m(2, 2, 1);
    m.at(1, 0) = 2;
    const auto v = validate(m);
    REQUIRE(v.has_value());
    CHECK(v->x == 1);
    CHECK(v->y == 0);
}

TEST_CASE("binarize picks the unique maximum") {
    Membership u(1, 1, 3);
    u.at(0, 0, 0) = 1.0;
    CHECK(binarize(u).at(0, 0) == 0);
}

TEST_CASE("binarize breaks ties toward the lowest phase index") {
    Membership u(1, 1, 2, 0.5);
    CHECK(binarize(u).at(0, 0) == 0);
}

TEST_CASE("binarize matches a per-pixel argmax oracle on random simplex draws") {
    Rng rng(42);
    Membership u(2, 2, 4);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
            double sum = 0.0;
            for (int i = 0; i < 4; ++i) {
                u.at(i, x, y) = -std::log(rng.uniform() + 1e-12);
                sum += u.at(i, x, y);
            }
            for (int i = 0; i < 4; ++i) u.at(i, x, y) /= sum;
        }
    const LabelMap labels = binarize(u);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) {
            int best = 0;
            for (int i = 1; i < 4; ++i)
                if (u.at(i, x, y) > u.at(best, x, y)) best = i;
            CHECK(labels.at(x, y) == best);
        }
}

TEST_CASE("binarize is invariant under monotone rescaling of memberships") {
    Rng rng(7);
    Membership u(5, 4, 3);
    for (int q = 0; q < u.pixels(); ++q) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) {
            u.data()[size_t(i) * u.pixels() + q] = rng.uniform() + 1e-6;
            sum += u.data()[size_t(i) * u.pixels() + q];
        }
        for (int i = 0; i < 3; ++i) u.data()[size_t(i) * u.pixels() + q] /= sum;
    }
    Membership scaled = u;
    for (auto& v : scaled.data()) v = std::exp(2.0 * v) - 0.5;  // strictly increasing
    CHECK(binarize(u).data() == binarize(scaled).data());
}

TEST_CASE("model parameter validation catches bad weights") {
    ModelParams p;
    p.mu = 0.0;
    CHECK(validate(p).has_value());
    p.mu = 1.0;
    p.phases = 1;
    CHECK(validate(p).has_value());
    p.phases = 2;
    CHECK_FALSE(validate(p).has_value());
}
