// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_DRIVER_HPP
#define SEGRES_DRIVER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "segres/core.hpp"

namespace segres {

struct EnergyBreakdown {
    double restoration = 0.0;   // mu * Phi(f, Ag), masked
    double segmentation = 0.0;  // lambda * sum_i int (g - c_i)^2 w u_i
    double tv = 0.0;            // sum_i int |grad u_i|, isotropic
    double total = 0.0;
};

/// Discrete energy of the coupled model at (g, u, c) with observation mask.
/// Poisson and impulsive fidelities are evaluated but have no solver.
EnergyBreakdown energy(const ImageField& f, const ImageField& g, const Membership& u,
                       const Codebook& c, const ObservationMask& mask, const ModelParams& p);

struct TraceRow {
    int iteration = 0;
    EnergyBreakdown e;
    double dc_norm = 0.0;  // ||c_k - c_{k-1}||_2 over all K*N entries
    double ms_elapsed = 0.0;
};

struct RunTrace {
    std::vector<TraceRow> rows;
    Termination termination = Termination::MaxOuter;
    int guard_rejections = 0;  // sweeps where a non-descending block update was discarded

    void write_csv(std::ostream& os) const;
};

struct RunResult {
    LabelMap labels;
    ImageField g;
    Codebook codebook;
    Membership membership;
    RunTrace trace;
};

/// The outer alternating-minimization loop: FCM initialization, then
/// g / c / u sweeps until ||c_new - c_old||_2 <= epsilon or max_outer.
/// baseline_mode pins g = f and skips the restoration step.
RunResult run(const ImageField& f, const ObservationMask& mask, const ModelParams& p);

struct PartialMinimizerReport {
    bool ok = true;
    std::string failing_block;  // "g", "c" or "u" when not ok
    int failing_trial = -1;
    double energy_drop = 0.0;   // relative decrease observed in the failing trial
};

/// Empirical partial-minimizer probe around a converged run: random feasible
/// perturbations of each block alone, of magnitude `step`, must not lower
/// the energy by more than 1e-7 relative.
PartialMinimizerReport check_partial_minimizer(const ImageField& f, const ObservationMask& mask,
                                               const ModelParams& p, const RunResult& result,
                                               int trials, double step, uint64_t seed = 0);

}  // namespace segres

#endif  // SEGRES_DRIVER_HPP
