#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "eap/metrics.hpp"
#include "eap/proposer.hpp"
#include "eap/simulator.hpp"
#include "eap/timeline.hpp"

namespace eap::cli {

struct ProposeOptions {
    std::filesystem::path scores;
    std::filesystem::path output;
    /// When absent every video uses `defaults`; when present every video must
    /// be listed.
    std::optional<std::filesystem::path> meta;
    VideoMeta defaults{"default"};
    ProposerConfig proposer;
};

struct ProposeStats {
    std::size_t clips = 0;
    std::size_t videos = 0;
    std::size_t proposals = 0;
};

/// Streams the score file through one proposer per video, writing each
/// proposal as soon as it is emitted. Stream errors are reported as
/// ParseError naming the offending line; a partial output file is removed.
ProposeStats run_propose(const ProposeOptions& options);

struct EvalOptions {
    std::filesystem::path proposals;
    /// Directory of THUMOS class files or a ground-truth CSV.
    std::filesystem::path ground_truth;
    std::filesystem::path output_dir;
    EvalConfig config;
};

/// Writes ar_an.csv, pr.csv and summary.txt into output_dir and echoes the
/// summary to `summary_out`.
EvalReport run_eval(const EvalOptions& options, std::ostream& summary_out);

struct SimulateOptions {
    std::filesystem::path output_dir;
    sim::SimConfig sim;
    VideoMeta base{"base"};
};

/// Writes scores.csv, ground_truth.csv and meta.csv into output_dir.
void run_simulate(const SimulateOptions& options, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace eap::cli
