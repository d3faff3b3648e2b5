// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_METRICS_HPP
#define SEGRES_METRICS_HPP

#include "segres/core.hpp"

namespace segres {

/// Relabels pred by the phase permutation maximizing agreement with truth,
/// found exhaustively over K! candidates (K <= 8).
LabelMap align_labels(const LabelMap& pred, const LabelMap& truth, int phases);

/// Percentage of pixels whose label matches ground truth after optimal
/// phase alignment.
double segmentation_accuracy(const LabelMap& pred, const LabelMap& truth);

}  // namespace segres

#endif  // SEGRES_METRICS_HPP
