#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eap/timeline.hpp"

namespace eap::sim {

struct SimConfig {
    std::uint64_t seed = 0;
    std::int64_t num_videos = 20;
    std::int64_t video_len_clips = 500;
    /// Expected fraction of action clips; background dominates by default.
    double action_prevalence = 0.25;
    /// Distance between action and background score means is min(1, separability).
    double separability = 1.0;
    /// Half-width of the bounded noise added to each score; 0 is noiseless.
    double noise_width = 0.5;
    /// Mean action run length in clips.
    double mean_action_clips = 8.0;
    /// Put ground-truth boundaries exactly on clip boundaries.
    bool snap_to_grid = true;

    void validate() const;
};

struct SimulatedVideo {
    std::uint64_t index = 0;
    VideoMeta meta;
    std::vector<GroundTruthSegment> ground_truth;
};

std::string video_id_for(std::uint64_t index);

/// Alternating background/action runs with geometric lengths. `base` supplies
/// fps, clip_len and stride; each video gets its own id. Deterministic in
/// (seed, video index).
std::vector<SimulatedVideo> generate_ground_truth(const SimConfig& config, const VideoMeta& base);

/// A clip is action iff at least half of its duration is covered by ground truth.
std::vector<bool> label_clips(const VideoMeta& meta, std::span<const GroundTruthSegment> gts,
                              std::int64_t num_clips);

/// Scores for one video. Action clips center on 0.5 + s and background on
/// 0.5 - s with s = min(0.5, separability / 2); noise is a bounded bell on
/// [-noise_width, noise_width] and scores are clamped to [0, 1].
std::vector<ClipScore> generate_scores(const SimulatedVideo& video, const SimConfig& config);

}  // namespace eap::sim
