#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "eap/timeline.hpp"

namespace eap {

struct ProposerConfig {
    /// Clips scoring at or above this are action.
    double threshold = 0.5;
    /// Consecutive background clips absorbed inside a run before it closes.
    std::int64_t gap_tolerance = 0;
    /// Runs with fewer action clips are discarded.
    std::int64_t min_clips = 1;

    void validate() const;
};

enum class Phase { Idle, InRun, InGap };

/// Fixed-size accumulator state; no clip history is retained.
struct ProposerState {
    Phase phase = Phase::Idle;
    std::int64_t run_first_clip = 0;
    std::int64_t run_last_action_clip = 0;
    double score_sum = 0.0;
    std::int64_t member_count = 0;
    std::int64_t pending_gap = 0;
    /// Last processed clip index; -1 before the first clip.
    std::int64_t last_clip_index = -1;
};

/// Feeds one clip into the state machine. A proposal is returned in the same
/// call that closes its run. Throws StreamError on out-of-order indices or a
/// clip from a different video.
std::pair<ProposerState, std::optional<Proposal>> process_clip(const ProposerState& state,
                                                                const ProposerConfig& config,
                                                                const VideoMeta& meta,
                                                                const ClipScore& clip);

/// Closes any open run and returns to Idle. Stream position is kept, so a
/// second flush yields nothing.
std::pair<ProposerState, std::optional<Proposal>> flush(const ProposerState& state,
                                                         const ProposerConfig& config,
                                                         const VideoMeta& meta);

/// Stateful wrapper driving one video's stream.
class OnlineProposer {
public:
    OnlineProposer(ProposerConfig config, VideoMeta meta);

    std::optional<Proposal> push(const ClipScore& clip);
    std::optional<Proposal> finish();

    const ProposerState& state() const { return state_; }
    const VideoMeta& meta() const { return meta_; }

private:
    ProposerConfig config_;
    VideoMeta meta_;
    ProposerState state_;
};

std::vector<Proposal> propose_stream(std::span<const ClipScore> clips, const ProposerConfig& config,
                                     const VideoMeta& meta);

}  // namespace eap
