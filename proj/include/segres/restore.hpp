// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_RESTORE_HPP
#define SEGRES_RESTORE_HPP

#include <optional>

#include "segres/core.hpp"
#include "segres/operators.hpp"

namespace segres {

enum class GSolver { Auto, Spectral, Cg };

/// Minimizes the restoration-coupled energy over g with u and c fixed
/// (Gaussian fidelity only).  Fully observed masks use an exact spectral
/// solve of (mu A^T A + lambda I) g = mu A^T f + lambda sum_i c_i u_i per
/// channel.  With missing pixels, g is pinned to sum_i c_i u_i on the
/// unobserved set and the normal equations restricted to observed pixels
/// are solved by conjugate gradients.
ImageField update_g(const ImageField& f, const Membership& u, const Codebook& c,
                    const ObservationMask& mask, const ModelParams& p,
                    GSolver solver = GSolver::Auto);

/// The two data-fidelity terms of the energy as a function of g
/// (the TV term does not involve g).
double g_data_energy(const ImageField& f, const ImageField& g, const Membership& u,
                     const Codebook& c, const ObservationMask& mask, const ModelParams& p);

struct MinimizerCheck {
    bool ok = true;
    int failing_trial = -1;
    double energy_delta = 0.0;  // E(g+h) - E(g) of the failing trial
};

/// Empirical uniqueness probe: random perturbation directions supported on
/// observed pixels, scaled to `step`, must all strictly increase the data
/// energy around a solved g.
MinimizerCheck verify_unique_minimizer(const ImageField& g, const ImageField& f,
                                       const Membership& u, const Codebook& c,
                                       const ObservationMask& mask, const ModelParams& p,
                                       int trials, double step = 1e-3, uint64_t seed = 0);

}  // namespace segres

#endif  // SEGRES_RESTORE_HPP
