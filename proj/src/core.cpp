// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/core.hpp"

#include <cmath>
#include <stdexcept>

namespace segres {

namespace {

bool positive_dims(int w, int h) { return w > 0 && h > 0; }

ValidationResult finite_planes(const std::vector<double>& data, int width, int pixels,
                               const char* label) {
    for (size_t k = 0; k < data.size(); ++k) {
        if (!std::isfinite(data[k])) {
            int p = int(k) % pixels;
            return Violation{std::string(label) + " contains a non-finite value",
                             p % width, p / width};
        }
    }
    return std::nullopt;
}

}  // namespace

ImageField::ImageField(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels),
      data_(size_t(width) * height * channels, fill) {
    if (!positive_dims(width, height) || channels < 1)
        throw std::invalid_argument("ImageField: dimensions must be positive");
}

ObservationMask::ObservationMask(int width, int height, uint8_t fill)
    : width_(width), height_(height), data_(size_t(width) * height, fill) {
    if (!positive_dims(width, height))
        throw std::invalid_argument("ObservationMask: dimensions must be positive");
}

bool ObservationMask::all_observed() const {
    for (uint8_t v : data_)
        if (v == 0) return false;
    return true;
}

int ObservationMask::observed_count() const {
    int n = 0;
    for (uint8_t v : data_) n += (v != 0);
    return n;
}

Membership::Membership(int width, int height, int phases, double fill)
    : width_(width), height_(height), phases_(phases),
      data_(size_t(width) * height * phases, fill) {
    if (!positive_dims(width, height) || phases < 2)
        throw std::invalid_argument("Membership: needs positive dimensions and K >= 2");
}

Membership Membership::uniform(int width, int height, int phases) {
    return Membership(width, height, phases, 1.0 / phases);
}

LabelMap::LabelMap(int width, int height, int phases, uint8_t fill)
    : width_(width), height_(height), phases_(phases),
      data_(size_t(width) * height, fill) {
    if (!positive_dims(width, height) || phases < 1)
        throw std::invalid_argument("LabelMap: needs positive dimensions and K >= 1");
}

Codebook::Codebook(int phases, int channels, double fill)
    : phases_(phases), channels_(channels), values_(size_t(phases) * channels, fill) {
    if (phases < 1 || channels < 1)
        throw std::invalid_argument("Codebook: needs K >= 1 and N >= 1");
}

Kernel::Kernel(int width, int height, std::vector<double> taps)
    : width_(width), height_(height), taps_(std::move(taps)) {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0)
        throw std::invalid_argument("Kernel: dimensions must be positive and odd");
    if (taps_.size() != size_t(width) * height)
        throw std::invalid_argument("Kernel: tap count does not match dimensions");
}

Kernel Kernel::identity() { return Kernel(1, 1, {1.0}); }

ValidationResult validate(const ImageField& f) {
    if (f.data().size() != size_t(f.width()) * f.height() * f.channels())
        return Violation{"ImageField: data length mismatch"};
    return finite_planes(f.data(), f.width(), f.pixels(), "ImageField");
}

ValidationResult validate(const ObservationMask& m) {
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.at(x, y) != 0 && m.at(x, y) != 1)
                return Violation{"ObservationMask: value not in {0,1}", x, y};
    return std::nullopt;
}

ValidationResult validate(const Membership& u) {
    constexpr double kNegTol = 1e-12;
    constexpr double kSumTol = 1e-9;
    for (int y = 0; y < u.height(); ++y) {
        for (int x = 0; x < u.width(); ++x) {
            double sum = 0.0;
            for (int i = 0; i < u.phases(); ++i) {
                double v = u.at(i, x, y);
                if (!std::isfinite(v))
                    return Violation{"Membership: non-finite value", x, y};
                if (v < -kNegTol)
                    return Violation{"Membership: negative entry", x, y};
                sum += v;
            }
            if (std::abs(sum - 1.0) > kSumTol)
                return Violation{"Membership: row does not sum to 1", x, y};
        }
    }
    return std::nullopt;
}

ValidationResult validate(const LabelMap& l) {
    for (int y = 0; y < l.height(); ++y)
        for (int x = 0; x < l.width(); ++x)
            if (l.at(x, y) >= l.phases())
                return Violation{"LabelMap: label out of range", x, y};
    return std::nullopt;
}

ValidationResult validate(const Codebook& c) {
    for (double v : c.values())
        if (!std::isfinite(v)) return Violation{"Codebook: non-finite entry"};
    return std::nullopt;
}

ValidationResult validate(const Kernel& k) {
    double sum = 0.0;
    for (int ky = 0; ky < k.height(); ++ky)
        for (int kx = 0; kx < k.width(); ++kx) {
            double t = k.at(kx, ky);
            if (!std::isfinite(t)) return Violation{"Kernel: non-finite tap", kx, ky};
            if (t < 0.0) return Violation{"Kernel: negative tap", kx, ky};
            sum += t;
        }
    if (std::abs(sum - 1.0) > 1e-12) return Violation{"Kernel: not normalized"};
    return std::nullopt;
}

ValidationResult validate(const ModelParams& p) {
    if (!(p.mu > 0.0)) return Violation{"ModelParams: mu must be > 0"};
    if (!(p.lambda > 0.0)) return Violation{"ModelParams: lambda must be > 0"};
    if (!(p.sigma > 0.0)) return Violation{"ModelParams: sigma must be > 0"};
    if (!(p.epsilon > 0.0)) return Violation{"ModelParams: epsilon must be > 0"};
    if (p.phases < 2) return Violation{"ModelParams: K must be >= 2"};
    if (p.max_outer < 1 || p.max_inner < 1)
        return Violation{"ModelParams: iteration caps must be >= 1"};
    if (p.blur) {
        if (auto v = validate(*p.blur)) return v;
    }
    return std::nullopt;
}

LabelMap binarize(const Membership& u) {
    LabelMap out(u.width(), u.height(), u.phases());
    const int n = u.pixels();
    for (int p = 0; p < n; ++p) {
        int best = 0;
        double best_val = u.data()[p];
        for (int i = 1; i < u.phases(); ++i) {
            double v = u.data()[i * n + p];
            if (v > best_val) {  // strict: ties keep the lowest index
                best_val = v;
                best = i;
            }
        }
        out.data()[p] = uint8_t(best);
    }
    return out;
}

}  // namespace segres
