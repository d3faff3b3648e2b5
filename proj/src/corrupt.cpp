// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/corrupt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "segres/operators.hpp"
#include "segres/rng.hpp"

namespace segres {

ImageField add_gaussian_noise(const ImageField& img, double variance, uint64_t seed) {
    if (variance < 0.0) throw std::invalid_argument("add_gaussian_noise: variance < 0");
    ImageField out = img;
    if (variance == 0.0) return out;
    const double sigma = std::sqrt(variance);
    Rng rng(seed);
    for (auto& v : out.data())
        v = std::clamp(v + sigma * rng.gaussian(), 0.0, 1.0);
    return out;
}

Kernel make_blur_kernel(const DegradeSpec& spec) {
    switch (spec.blur) {
        case BlurKind::None:
            return Kernel::identity();
        case BlurKind::Gaussian: {
            const int size = spec.blur_size;
            if (size < 1 || size % 2 == 0)
                throw std::invalid_argument("make_blur_kernel: Gaussian size must be odd");
            const double std_dev = spec.blur_param;
            if (!(std_dev > 0.0))
                throw std::invalid_argument("make_blur_kernel: Gaussian std must be > 0");
            std::vector<double> taps(size_t(size) * size);
            const int c = size / 2;
            double sum = 0.0;
            for (int y = 0; y < size; ++y)
                for (int x = 0; x < size; ++x) {
                    const double dx = x - c, dy = y - c;
                    const double v = std::exp(-(dx * dx + dy * dy) / (2.0 * std_dev * std_dev));
                    taps[size_t(y) * size + x] = v;
                    sum += v;
                }
            for (auto& v : taps) v /= sum;
            return Kernel(size, size, std::move(taps));
        }
        case BlurKind::Motion: {
            const int length = spec.blur_size;
            if (length < 1) throw std::invalid_argument("make_blur_kernel: length must be >= 1");
            const double angle = spec.blur_param * std::numbers::pi / 180.0;
            const double ux = std::cos(angle), uy = std::sin(angle);
            std::vector<std::pair<int, int>> cells(length);
            int hx = 0, hy = 0;
            for (int t = 0; t < length; ++t) {
                const double o = t - (length - 1) / 2.0;
                const int dx = int(std::lround(o * ux));
                const int dy = int(std::lround(o * uy));
                cells[t] = {dx, dy};
                hx = std::max(hx, std::abs(dx));
                hy = std::max(hy, std::abs(dy));
            }
            const int kw = 2 * hx + 1, kh = 2 * hy + 1;
            std::vector<double> taps(size_t(kw) * kh, 0.0);
            for (auto [dx, dy] : cells) taps[size_t(dy + hy) * kw + (dx + hx)] += 1.0;
            for (auto& v : taps) v /= length;
            return Kernel(kw, kh, std::move(taps));
        }
    }
    throw std::logic_error("make_blur_kernel: unknown blur kind");
}

std::pair<ImageField, ObservationMask> drop_pixels(const ImageField& img, double fraction,
                                                   uint64_t seed) {
    if (fraction < 0.0 || fraction >= 1.0)
        throw std::invalid_argument("drop_pixels: fraction must be in [0,1)");
    const int n = img.pixels();
    ImageField out = img;
    ObservationMask mask(img.width(), img.height(), 1);
    const int m = int(std::floor(fraction * n));
    if (m == 0) return {std::move(out), std::move(mask)};

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(seed);
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.below(uint64_t(i) + 1)]);

    for (int k = 0; k < m; ++k) {
        const int q = perm[k];
        mask.data()[q] = 0;
        for (int j = 0; j < img.channels(); ++j) out.data()[size_t(j) * n + q] = 0.0;
    }
    return {std::move(out), std::move(mask)};
}

DegradedImage degrade(const ImageField& img, const DegradeSpec& spec) {
    ImageField work = img;
    if (spec.blur != BlurKind::None) {
        const Kernel kernel = make_blur_kernel(spec);
        const LinearOperator A = LinearOperator::convolution(kernel);
        ImageField blurred(img.width(), img.height(), img.channels());
        for (int j = 0; j < img.channels(); ++j) {
            auto plane = A.apply(work.plane(j), img.width(), img.height());
            std::copy(plane.begin(), plane.end(), blurred.plane(j).begin());
        }
        work = std::move(blurred);
    }
    if (spec.noise_variance > 0.0)
        work = add_gaussian_noise(work, spec.noise_variance, derive_seed(spec.seed, 1));
    auto [dropped, mask] = drop_pixels(work, spec.drop_fraction, derive_seed(spec.seed, 2));
    return {std::move(dropped), std::move(mask)};
}

namespace {

struct SceneCanvas {
    ImageField image;
    LabelMap truth;

    SceneCanvas(int size, int channels, int phases)
        : image(size, size, channels), truth(size, size, phases) {}

    void paint(int x, int y, int label, const double* color, int channels) {
        truth.at(x, y) = uint8_t(label);
        const int n = image.pixels();
        for (int j = 0; j < channels; ++j)
            image.data()[size_t(j) * n + y * image.width() + x] = color[j];
    }
};

struct Disk {
    double cx, cy, r;
    bool contains(double x, double y) const {
        return (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
    }
};

struct Box {
    double x0, y0, x1, y1;
    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
};

// Even-odd rule point-in-polygon.
bool in_polygon(const std::vector<std::pair<double, double>>& poly, double x, double y) {
    bool inside = false;
    const size_t m = poly.size();
    for (size_t i = 0, j = m - 1; i < m; j = i++) {
        const auto [xi, yi] = poly[i];
        const auto [xj, yj] = poly[j];
        if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi)
            inside = !inside;
    }
    return inside;
}

std::vector<std::pair<double, double>> star_polygon(double cx, double cy, double outer,
                                                    double inner, double phase_deg) {
    std::vector<std::pair<double, double>> poly;
    poly.reserve(10);
    for (int k = 0; k < 10; ++k) {
        const double r = (k % 2 == 0) ? outer : inner;
        const double a = (phase_deg - 90.0 + 36.0 * k) * std::numbers::pi / 180.0;
        poly.emplace_back(cx + r * std::cos(a), cy + r * std::sin(a));
    }
    return poly;
}

Scene make_shapes2(int size, uint64_t seed) {
    Rng rng(derive_seed(seed, 0x7332));
    const double s = size;
    auto jitter = [&] { return (rng.uniform() - 0.5) * 0.04 * s; };
    const Disk disk{0.30 * s + jitter(), 0.32 * s + jitter(), 0.155 * s};
    const Box box{0.55 * s + jitter(), 0.14 * s, 0.86 * s, 0.40 * s + jitter()};
    const Disk ring_outer{0.62 * s + jitter(), 0.70 * s + jitter(), 0.175 * s};
    const Disk ring_inner{ring_outer.cx, ring_outer.cy, 0.095 * s};
    const Box bar{0.12 * s, 0.58 * s + jitter(), 0.34 * s, 0.66 * s};

    SceneCanvas canvas(size, 1, 2);
    const double levels[2] = {0.0, 1.0};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double px = x + 0.5, py = y + 0.5;
            const bool fg = disk.contains(px, py) || box.contains(px, py) ||
                            (ring_outer.contains(px, py) && !ring_inner.contains(px, py)) ||
                            bar.contains(px, py);
            canvas.paint(x, y, fg ? 1 : 0, &levels[fg ? 1 : 0], 1);
        }

    Codebook cb(2, 1);
    cb.at(0, 0) = levels[0];
    cb.at(1, 0) = levels[1];
    return {std::move(canvas.image), std::move(canvas.truth), std::move(cb)};
}

Scene make_barcode(int size, uint64_t seed) {
    Rng rng(derive_seed(seed, 0x6263));
    const int cell = std::max(6, size / 16);
    const int cells = (size + cell - 1) / cell;
    std::vector<uint8_t> grid(size_t(cells) * cells);
    int ones = 0;
    for (auto& g : grid) {
        g = rng.uniform() < 0.5 ? 0 : 1;
        ones += g;
    }
    if (ones == 0) grid[0] = 1;
    if (ones == int(grid.size())) grid[0] = 0;

    SceneCanvas canvas(size, 1, 2);
    const double levels[2] = {0.0, 1.0};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const int g = grid[size_t(y / cell) * cells + (x / cell)];
            canvas.paint(x, y, g, &levels[g], 1);
        }

    Codebook cb(2, 1);
    cb.at(0, 0) = levels[0];
    cb.at(1, 0) = levels[1];
    return {std::move(canvas.image), std::move(canvas.truth), std::move(cb)};
}

Scene make_shapes4(int size, uint64_t seed) {
    Rng rng(derive_seed(seed, 0x7334));
    const double s = size;
    auto jitter = [&] { return (rng.uniform() - 0.5) * 0.03 * s; };

    // Nested disk / square / disk plus detached blobs; every region is wide
    // enough to keep its own intensity mode under a 15-pixel blur.
    const Disk big{0.33 * s + jitter(), 0.35 * s + jitter(), 0.28 * s};
    const Box inner_sq{big.cx - 0.14 * s, big.cy - 0.14 * s, big.cx + 0.14 * s,
                       big.cy + 0.14 * s};
    const Disk core{big.cx, big.cy, 0.07 * s};
    const double bar_w = 0.09 * s;
    const Box bars[2] = {
        {0.70 * s, 0.10 * s + jitter(), 0.70 * s + bar_w, 0.46 * s},
        {0.86 * s, 0.10 * s, 0.86 * s + bar_w, 0.46 * s},
    };
    const Disk dot{0.81 * s + jitter(), 0.62 * s, 0.09 * s};
    const Disk ring_outer{0.36 * s + jitter(), 0.80 * s, 0.17 * s};
    const Disk ring_inner{ring_outer.cx, ring_outer.cy, 0.08 * s};

    SceneCanvas canvas(size, 1, 4);
    const double levels[4] = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double px = x + 0.5, py = y + 0.5;
            int label = 0;
            if (big.contains(px, py)) label = 1;
            if (inner_sq.contains(px, py)) label = 2;
            if (core.contains(px, py)) label = 3;
            for (const Box& b : bars)
                if (b.contains(px, py)) label = 2;
            if (dot.contains(px, py)) label = 3;
            if (ring_outer.contains(px, py) && !ring_inner.contains(px, py)) label = 1;
            canvas.paint(x, y, label, &levels[label], 1);
        }

    Codebook cb(4, 1);
    for (int i = 0; i < 4; ++i) cb.at(i, 0) = levels[i];
    return {std::move(canvas.image), std::move(canvas.truth), std::move(cb)};
}

Scene make_stars5(int size, uint64_t seed) {
    Rng rng(derive_seed(seed, 0x7335));
    const double s = size;
    auto jitter = [&] { return (rng.uniform() - 0.5) * 0.03 * s; };

    const double centers[4][2] = {{0.27, 0.27}, {0.73, 0.27}, {0.27, 0.73}, {0.73, 0.73}};
    std::vector<std::vector<std::pair<double, double>>> stars;
    for (int k = 0; k < 4; ++k) {
        const double cx = centers[k][0] * s + jitter();
        const double cy = centers[k][1] * s + jitter();
        const double outer = 0.17 * s, inner = 0.068 * s;
        stars.push_back(star_polygon(cx, cy, outer, inner, 13.0 * k));
    }

    SceneCanvas canvas(size, 1, 5);
    const double levels[5] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double px = x + 0.5, py = y + 0.5;
            int label = 0;
            for (int k = 0; k < 4; ++k)
                if (in_polygon(stars[k], px, py)) label = k + 1;
            canvas.paint(x, y, label, &levels[label], 1);
        }

    Codebook cb(5, 1);
    for (int i = 0; i < 5; ++i) cb.at(i, 0) = levels[i];
    return {std::move(canvas.image), std::move(canvas.truth), std::move(cb)};
}

constexpr double kRgbPalette[8][3] = {
    {0.85, 0.10, 0.10}, {0.10, 0.75, 0.15}, {0.12, 0.20, 0.90}, {0.95, 0.90, 0.10},
    {0.80, 0.15, 0.85}, {0.10, 0.85, 0.90}, {0.95, 0.55, 0.10}, {0.45, 0.30, 0.10},
};

Scene make_rgb_mosaic(int size, uint64_t seed, int phases) {
    if (phases < 2 || phases > 8)
        throw std::invalid_argument("make_scene: RgbK supports 2..8 phases");
    Rng rng(derive_seed(seed, 0x7267));
    const int sites = 3 * phases;
    std::vector<std::pair<int, int>> centers;
    centers.reserve(sites);
    while (int(centers.size()) < sites) {
        std::pair<int, int> c{int(rng.below(uint64_t(size))), int(rng.below(uint64_t(size)))};
        if (std::find(centers.begin(), centers.end(), c) == centers.end())
            centers.push_back(c);
    }

    SceneCanvas canvas(size, 3, phases);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            long best = -1;
            int best_site = 0;
            for (int k = 0; k < sites; ++k) {
                const long dx = x - centers[k].first, dy = y - centers[k].second;
                const long d = dx * dx + dy * dy;
                if (best < 0 || d < best) {
                    best = d;
                    best_site = k;
                }
            }
            const int label = best_site % phases;
            canvas.paint(x, y, label, kRgbPalette[label], 3);
        }

    Codebook cb(phases, 3);
    for (int i = 0; i < phases; ++i)
        for (int j = 0; j < 3; ++j) cb.at(i, j) = kRgbPalette[i][j];
    return {std::move(canvas.image), std::move(canvas.truth), std::move(cb)};
}

}  // namespace

Scene make_scene(SceneKind kind, int size, uint64_t seed, int phases) {
    if (size < 32) throw std::invalid_argument("make_scene: size must be >= 32");
    switch (kind) {
        case SceneKind::Shapes2: return make_shapes2(size, seed);
        case SceneKind::Barcode: return make_barcode(size, seed);
        case SceneKind::Shapes4: return make_shapes4(size, seed);
        case SceneKind::Stars5: return make_stars5(size, seed);
        case SceneKind::RgbK: return make_rgb_mosaic(size, seed, phases);
    }
    throw std::logic_error("make_scene: unknown scene kind");
}

SceneKind parse_scene_kind(const std::string& name) {
    if (name == "shapes2") return SceneKind::Shapes2;
    if (name == "barcode") return SceneKind::Barcode;
    if (name == "shapes4") return SceneKind::Shapes4;
    if (name == "stars5") return SceneKind::Stars5;
    if (name == "rgb") return SceneKind::RgbK;
    throw std::invalid_argument("unknown scene kind: " + name);
}

std::string scene_kind_name(SceneKind kind) {
    switch (kind) {
        case SceneKind::Shapes2: return "shapes2";
        case SceneKind::Barcode: return "barcode";
        case SceneKind::Shapes4: return "shapes4";
        case SceneKind::Stars5: return "stars5";
        case SceneKind::RgbK: return "rgb";
    }
    return "?";
}

}  // namespace segres
