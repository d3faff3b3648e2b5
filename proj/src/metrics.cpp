// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include "segres/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace segres {

namespace {

void check_dims(const LabelMap& pred, const LabelMap& truth) {
    if (pred.width() != truth.width() || pred.height() != truth.height())
        throw std::invalid_argument("label maps have different dimensions");
}

// Confusion counts and the agreement-maximizing permutation of pred labels.
std::vector<int> best_permutation(const LabelMap& pred, const LabelMap& truth, int phases) {
    std::vector<long> confusion(size_t(phases) * phases, 0);
    for (int q = 0; q < pred.pixels(); ++q) {
        const int a = pred.data()[q], b = truth.data()[q];
        if (a >= phases || b >= phases)
            throw std::invalid_argument("label exceeds the stated phase count");
        ++confusion[size_t(a) * phases + b];
    }
    std::vector<int> perm(phases), best(phases);
    std::iota(perm.begin(), perm.end(), 0);
    best = perm;
    long best_score = -1;
    do {
        long score = 0;
        for (int a = 0; a < phases; ++a) score += confusion[size_t(a) * phases + perm[a]];
        if (score > best_score) {
            best_score = score;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

LabelMap align_labels(const LabelMap& pred, const LabelMap& truth, int phases) {
    check_dims(pred, truth);
    if (phases < 1 || phases > 8)
        throw std::invalid_argument("align_labels: phases must be in [1,8]");
    const std::vector<int> perm = best_permutation(pred, truth, phases);
    LabelMap out(pred.width(), pred.height(), phases);
    for (int q = 0; q < pred.pixels(); ++q)
        out.data()[q] = uint8_t(perm[pred.data()[q]]);
    return out;
}

double segmentation_accuracy(const LabelMap& pred, const LabelMap& truth) {
    check_dims(pred, truth);
    int phases = std::max(pred.phases(), truth.phases());
    for (int q = 0; q < pred.pixels(); ++q)
        phases = std::max({phases, pred.data()[q] + 1, truth.data()[q] + 1});
    if (phases > 8) throw std::invalid_argument("segmentation_accuracy: more than 8 phases");

    const std::vector<int> perm = best_permutation(pred, truth, phases);
    long matches = 0;
    for (int q = 0; q < pred.pixels(); ++q)
        matches += (perm[pred.data()[q]] == truth.data()[q]);
    return 100.0 * double(matches) / double(pred.pixels());
}

}  // namespace segres
