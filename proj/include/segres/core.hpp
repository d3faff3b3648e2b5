// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_CORE_HPP
#define SEGRES_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace segres {

/// Real-valued multi-channel pixel grid, nominal range [0,1].
/// Storage is channel-planar: channel j occupies one contiguous
/// width*height plane, so per-channel operators work on one plane.
class ImageField {
public:
    ImageField() = default;
    ImageField(int width, int height, int channels, double fill = 0.0);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    int pixels() const { return width_ * height_; }

    double& at(int c, int x, int y) { return data_[(c * height_ + y) * width_ + x]; }
    double at(int c, int x, int y) const { return data_[(c * height_ + y) * width_ + x]; }

    std::span<double> plane(int c) { return {data_.data() + c * pixels(), size_t(pixels())}; }
    std::span<const double> plane(int c) const { return {data_.data() + c * pixels(), size_t(pixels())}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    int width_ = 0, height_ = 0, channels_ = 0;
    std::vector<double> data_;
};

/// Binary per-pixel field marking known (1) vs missing (0) pixels.
class ObservationMask {
public:
    ObservationMask() = default;
    ObservationMask(int width, int height, uint8_t fill = 1);

    int width() const { return width_; }
    int height() const { return height_; }
    int pixels() const { return width_ * height_; }

    uint8_t& at(int x, int y) { return data_[y * width_ + x]; }
    uint8_t at(int x, int y) const { return data_[y * width_ + x]; }

    std::vector<uint8_t>& data() { return data_; }
    const std::vector<uint8_t>& data() const { return data_; }

    bool all_observed() const;
    int observed_count() const;

private:
    int width_ = 0, height_ = 0;
    std::vector<uint8_t> data_;
};

/// K relaxed per-pixel indicator fields on the unit simplex,
/// stored phase-planar (one width*height plane per phase).
class Membership {
public:
    Membership() = default;
    Membership(int width, int height, int phases, double fill = 0.0);

    static Membership uniform(int width, int height, int phases);

    int width() const { return width_; }
    int height() const { return height_; }
    int phases() const { return phases_; }
    int pixels() const { return width_ * height_; }

    double& at(int i, int x, int y) { return data_[(i * height_ + y) * width_ + x]; }
    double at(int i, int x, int y) const { return data_[(i * height_ + y) * width_ + x]; }

    std::span<double> plane(int i) { return {data_.data() + i * pixels(), size_t(pixels())}; }
    std::span<const double> plane(int i) const { return {data_.data() + i * pixels(), size_t(pixels())}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    int width_ = 0, height_ = 0, phases_ = 0;
    std::vector<double> data_;
};

/// Per-pixel integer phase labels in [0, K).
class LabelMap {
public:
    LabelMap() = default;
    LabelMap(int width, int height, int phases, uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    int phases() const { return phases_; }
    int pixels() const { return width_ * height_; }

    uint8_t& at(int x, int y) { return data_[y * width_ + x]; }
    uint8_t at(int x, int y) const { return data_[y * width_ + x]; }

    std::vector<uint8_t>& data() { return data_; }
    const std::vector<uint8_t>& data() const { return data_; }

private:
    int width_ = 0, height_ = 0, phases_ = 0;
    std::vector<uint8_t> data_;
};

/// K x N matrix of phase constants c_{i,j} (phase i, channel j).
class Codebook {
public:
    Codebook() = default;
    Codebook(int phases, int channels, double fill = 0.0);

    int phases() const { return phases_; }
    int channels() const { return channels_; }

    double& at(int i, int j) { return values_[i * channels_ + j]; }
    double at(int i, int j) const { return values_[i * channels_ + j]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

private:
    int phases_ = 0, channels_ = 0;
    std::vector<double> values_;
};

/// Normalized blur kernel with odd dimensions, anchored at its center.
class Kernel {
public:
    Kernel() = default;
    Kernel(int width, int height, std::vector<double> taps);

    static Kernel identity();

    int width() const { return width_; }
    int height() const { return height_; }
    int anchor_x() const { return width_ / 2; }
    int anchor_y() const { return height_ / 2; }

    double at(int kx, int ky) const { return taps_[ky * width_ + kx]; }
    const std::vector<double>& taps() const { return taps_; }

private:
    int width_ = 0, height_ = 0;
    std::vector<double> taps_;
};

enum class Fidelity { Gaussian, Poisson, Impulsive };

enum class Termination { Converged, MaxOuter };

/// Full parameter set of the coupled model and its solver.
struct ModelParams {
    double mu = 1.0;          // restoration-fidelity weight
    double lambda = 1.0;      // segmentation-fidelity weight
    double sigma = 2.0;       // ADMM step
    double epsilon = 1e-4;    // outer stop tolerance on ||c_new - c_old||_2
    int phases = 2;           // K
    Fidelity fidelity = Fidelity::Gaussian;
    std::optional<Kernel> blur;  // operator A: convolution if set, identity otherwise
    int max_outer = 200;
    int max_inner = 100;
    double inner_tol = 1e-3;
    double cg_tol = 1e-8;
    int cg_max_iter = 500;
    bool baseline_mode = false;  // pin g = f and skip the restoration step
    uint64_t seed = 0;
};

/// First violated invariant, with pixel coordinates when meaningful.
struct Violation {
    std::string what;
    int x = -1, y = -1;
};

using ValidationResult = std::optional<Violation>;  // nullopt == ok

ValidationResult validate(const ImageField& f);
ValidationResult validate(const ObservationMask& m);
ValidationResult validate(const Membership& u);
ValidationResult validate(const LabelMap& l);
ValidationResult validate(const Codebook& c);
ValidationResult validate(const Kernel& k);
ValidationResult validate(const ModelParams& p);

/// Per-pixel argmax of the memberships; ties go to the lowest phase index.
LabelMap binarize(const Membership& u);

}  // namespace segres

#endif  // SEGRES_CORE_HPP
