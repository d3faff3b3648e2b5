// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_CORRUPT_HPP
#define SEGRES_CORRUPT_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "segres/core.hpp"

namespace segres {

enum class BlurKind { None, Gaussian, Motion };

/// Reproducible degradation recipe: blur first, then noise, then pixel drop.
struct DegradeSpec {
    double noise_variance = 0.0;
    BlurKind blur = BlurKind::None;
    int blur_size = 15;        // Gaussian: odd kernel side; Motion: length in pixels
    double blur_param = 15.0;  // Gaussian: standard deviation; Motion: angle in degrees
    double drop_fraction = 0.0;
    uint64_t seed = 0;
};

/// Adds i.i.d. zero-mean Gaussian noise of the given variance per pixel per
/// channel and clamps the result to [0,1].
ImageField add_gaussian_noise(const ImageField& img, double variance, uint64_t seed);

/// Sampled 2-D Gaussian (odd size, normalized) or a rasterized motion line
/// segment; 90 degrees is a vertical line.
Kernel make_blur_kernel(const DegradeSpec& spec);

/// Zeroes exactly floor(fraction * pixels) sites in all channels, chosen by
/// a seeded uniform permutation, and marks them unobserved.
std::pair<ImageField, ObservationMask> drop_pixels(const ImageField& img, double fraction,
                                                   uint64_t seed);

/// Applies spec in the fixed order blur -> noise -> drop.  Sub-seeds are
/// derived from spec.seed per stage.
struct DegradedImage {
    ImageField image;
    ObservationMask mask;
};
DegradedImage degrade(const ImageField& img, const DegradeSpec& spec);

enum class SceneKind { Shapes2, Barcode, Shapes4, Stars5, RgbK };

struct Scene {
    ImageField image;
    LabelMap truth;
    Codebook levels;
};

/// Deterministic synthetic test scenes with ground-truth labels.
/// `phases` is honored by RgbK only; the other kinds fix their own K.
Scene make_scene(SceneKind kind, int size, uint64_t seed, int phases = 3);

SceneKind parse_scene_kind(const std::string& name);
std::string scene_kind_name(SceneKind kind);

}  // namespace segres

#endif  // SEGRES_CORRUPT_HPP
