// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_IMAGE_IO_HPP
#define SEGRES_IMAGE_IO_HPP

#include <string>

#include "segres/core.hpp"

namespace segres {

/// Reads binary PGM (P5), PPM (P6) or 8-bit PNG (gray / RGB; palette and
/// alpha are expanded/stripped).  8-bit values map to [0,1] as v/255.
ImageField read_image(const std::string& path);

/// Writes PGM (1 channel), PPM (3 channels) or PNG by extension; values are
/// clamped to [0,1] and quantized as round(v * 255).
void write_image(const std::string& path, const ImageField& img);

/// Masks are stored as single-channel images: 0 = missing, 255 = observed.
ObservationMask read_mask(const std::string& path);
void write_mask(const std::string& path, const ObservationMask& mask);

/// Label maps are stored as single-channel images holding raw label values.
LabelMap read_label_map(const std::string& path);
void write_label_map(const std::string& path, const LabelMap& labels);

}  // namespace segres

#endif  // SEGRES_IMAGE_IO_HPP
