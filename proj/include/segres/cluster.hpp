// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_CLUSTER_HPP
#define SEGRES_CLUSTER_HPP

#include <utility>

#include "segres/core.hpp"

namespace segres {

/// Per-phase masked weighted means
///   c_{i,j} = sum_x g_j(x) w(x) u_i(x) / sum_x w(x) u_i(x).
/// A phase whose weight mass drops below 1e-12 keeps its previous center.
Codebook update_c(const ImageField& g, const Membership& u, const ObservationMask& mask,
                  const Codebook& previous);

/// Fuzzy C-means (fuzzifier m = 2) on observed pixels only.  Centers are
/// seeded at evenly spaced quantile ranks of the observed pixels ordered by
/// mean intensity, nudged apart when ranks collide, so the initializer is
/// fully deterministic.  Returned centers are sorted ascending by first
/// channel; masked pixels get uniform memberships.
std::pair<Codebook, Membership> fcm_init(const ImageField& f, const ObservationMask& mask,
                                         int phases, int iters, uint64_t seed);

}  // namespace segres

#endif  // SEGRES_CLUSTER_HPP
