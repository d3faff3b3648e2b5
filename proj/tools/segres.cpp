// Copyright (c) 2026 The segres authors.
// Licensed under the Apache License, Version 2.0.

#include <CLI11.hpp>
#include <iostream>

#include "segres/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"segres: coupled restoration + multiphase segmentation toolkit"};
    app.require_subcommand(1);

    segres::CorruptOptions corrupt;
    std::string corrupt_blur = "none";
    auto* corrupt_cmd = app.add_subcommand("corrupt", "degrade an image (blur, noise, drop)");
    corrupt_cmd->add_option("-i,--input", corrupt.input, "input image (pgm/ppm/png)")
        ->required();
    corrupt_cmd->add_option("-o,--output", corrupt.output, "degraded image path")->required();
    corrupt_cmd->add_option("--mask-out", corrupt.mask_out, "mask image path");
    corrupt_cmd->add_option("--spec-out", corrupt.spec_out, "sidecar path");
    corrupt_cmd->add_option("--noise", corrupt.noise, "Gaussian noise variance");
    corrupt_cmd->add_option("--blur", corrupt_blur, "gaussian:SIZE:STD | motion:LEN:ANGLE");
    corrupt_cmd->add_option("--drop", corrupt.drop, "fraction of pixels to remove, [0,1)");
    corrupt_cmd->add_option("--seed", corrupt.seed, "RNG seed");

    segres::SegmentOptions segment;
    std::string segment_blur = "none";
    auto* segment_cmd = app.add_subcommand("segment", "restore and segment an image");
    segment_cmd->add_option("-i,--input", segment.input, "observed image")->required();
    segment_cmd->add_option("--mask", segment.mask, "observation mask (0=missing)");
    segment_cmd->add_option("-o,--output", segment.output_dir, "output directory")->required();
    segment_cmd->add_option("-K,--phases", segment.phases, "number of phases")->required();
    segment_cmd->add_option("--mu", segment.mu, "restoration fidelity weight");
    segment_cmd->add_option("--lambda", segment.lambda, "segmentation fidelity weight");
    segment_cmd->add_option("--sigma", segment.sigma, "ADMM step (default 2)");
    segment_cmd->add_option("--epsilon", segment.epsilon, "outer stop tolerance (default 1e-4)");
    segment_cmd->add_option("--max-outer", segment.max_outer, "outer iteration cap");
    segment_cmd->add_flag("--baseline", segment.baseline, "segment f directly (no restoration)");
    segment_cmd->add_option("--seed", segment.seed, "RNG seed");
    segment_cmd->add_option("--blur", segment_blur, "operator A: gaussian:SIZE:STD | motion:LEN:ANGLE");

    segres::EvaluateOptions evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "segmentation accuracy of a label map");
    evaluate_cmd->add_option("pred", evaluate.pred, "predicted label map")->required();
    evaluate_cmd->add_option("truth", evaluate.truth, "ground-truth label map")->required();
    evaluate_cmd->add_option("--report", evaluate.report, "JSON report path");

    segres::ExperimentOptions experiment;
    auto* experiment_cmd = app.add_subcommand("experiment", "run a scene x degradation matrix");
    experiment_cmd->add_option("config", experiment.config_path, "experiment config")->required();
    experiment_cmd->add_option("-o,--output", experiment.output_override, "CSV output override");
    experiment_cmd->add_option("-j,--jobs", experiment.jobs,
                               "parallel cells (default: SEGRES_THREADS)");

    segres::GenerateOptions generate;
    auto* generate_cmd = app.add_subcommand("generate", "write a synthetic test scene");
    generate_cmd->add_option("-k,--kind", generate.kind,
                             "shapes2 | barcode | shapes4 | stars5 | rgb");
    generate_cmd->add_option("-s,--size", generate.size, "image side length");
    generate_cmd->add_option("--seed", generate.seed, "RNG seed");
    generate_cmd->add_option("-K,--phases", generate.phases, "phase count (rgb only)");
    generate_cmd->add_option("-o,--output", generate.output, "scene image path")->required();
    generate_cmd->add_option("--truth-out", generate.truth_out, "ground-truth label map path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (corrupt_cmd->parsed()) {
            corrupt.blur = segres::parse_blur_spec(corrupt_blur);
            segres::cmd_corrupt(corrupt);
        } else if (segment_cmd->parsed()) {
            segment.blur = segres::parse_blur_spec(segment_blur);
            segres::cmd_segment(segment);
        } else if (evaluate_cmd->parsed()) {
            segres::cmd_evaluate(evaluate);
        } else if (experiment_cmd->parsed()) {
            segres::cmd_experiment(experiment);
        } else if (generate_cmd->parsed()) {
            segres::cmd_generate(generate);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
