// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#ifndef SEGRES_COMMANDS_HPP
#define SEGRES_COMMANDS_HPP

#include <cstdint>
#include <string>

#include "segres/corrupt.hpp"

namespace segres {

/// Blur spec grammar shared by the CLI: "none", "gaussian:SIZE:STD"
/// or "motion:LENGTH:ANGLE_DEG".
struct BlurSpec {
    BlurKind kind = BlurKind::None;
    int size = 15;
    double param = 15.0;
};

BlurSpec parse_blur_spec(const std::string& text);
std::string blur_spec_string(const BlurSpec& spec);

struct CorruptOptions {
    std::string input;
    std::string output;
    std::string mask_out;  // default: <output stem>.mask.<ext>
    std::string spec_out;  // default: <output stem>.spec.ini
    double noise = 0.0;
    BlurSpec blur;
    double drop = 0.0;
    uint64_t seed = 0;
};

struct SegmentOptions {
    std::string input;
    std::string mask;  // empty = all pixels observed
    std::string output_dir;
    int phases = 2;
    double mu = 1.0;
    double lambda = 10.0;
    double sigma = 2.0;
    double epsilon = 1e-4;
    int max_outer = 200;
    bool baseline = false;
    uint64_t seed = 0;
    BlurSpec blur;  // the operator A assumed by the model
};

struct EvaluateOptions {
    std::string pred;
    std::string truth;
    std::string report;  // default: evaluate.json next to pred
};

struct ExperimentOptions {
    std::string config_path;
    std::string output_override;
    int jobs = 0;  // 0 = SEGRES_THREADS or hardware concurrency
};

struct GenerateOptions {
    std::string kind = "shapes2";
    int size = 128;
    uint64_t seed = 0;
    int phases = 3;  // rgb only
    std::string output;
    std::string truth_out;  // default: <output stem>.truth.<ext>
};

void cmd_corrupt(const CorruptOptions& opt);
void cmd_segment(const SegmentOptions& opt);
void cmd_evaluate(const EvaluateOptions& opt);
void cmd_experiment(const ExperimentOptions& opt);
void cmd_generate(const GenerateOptions& opt);

}  // namespace segres

#endif  // SEGRES_COMMANDS_HPP
