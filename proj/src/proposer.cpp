#include "eap/proposer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eap/errors.hpp"

namespace eap {

void ProposerConfig::validate() const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("proposer: threshold must lie in (0, 1)");
    }
    if (gap_tolerance < 0) {
        throw std::invalid_argument("proposer: gap_tolerance must be >= 0");
    }
    if (min_clips < 1) {
        throw std::invalid_argument("proposer: min_clips must be >= 1");
    }
}

namespace {

std::optional<Proposal> close_run(const ProposerState& state, const ProposerConfig& config,
                                  const VideoMeta& meta, std::int64_t emitted_at) {
    if (state.member_count < config.min_clips) {
        return std::nullopt;
    }
    return Proposal{meta.video_id,
                    clip_to_segment(meta, state.run_first_clip, state.run_last_action_clip),
                    state.score_sum / static_cast<double>(state.member_count),
                    ClipSpan{state.run_first_clip, state.run_last_action_clip}, emitted_at};
}

ProposerState reset(const ProposerState& state) {
    ProposerState idle;
    idle.last_clip_index = state.last_clip_index;
    return idle;
}

}  // namespace

std::pair<ProposerState, std::optional<Proposal>> process_clip(const ProposerState& state,
                                                                const ProposerConfig& config,
                                                                const VideoMeta& meta,
                                                                const ClipScore& clip) {
    if (clip.video_id != meta.video_id) {
        throw StreamError(StreamError::Kind::Identity, "clip from video '" + clip.video_id +
                                                           "' fed to the stream of '" +
                                                           meta.video_id + "'");
    }
    const std::int64_t expected = state.last_clip_index + 1;
    if (clip.clip_index != expected) {
        throw StreamError(StreamError::Kind::Order,
                          "video '" + meta.video_id + "': expected clip_index " +
                              std::to_string(expected) + ", got " + std::to_string(clip.clip_index));
    }
    if (!(clip.score >= 0.0 && clip.score <= 1.0)) {
        throw std::invalid_argument("video '" + meta.video_id + "' clip " +
                                    std::to_string(clip.clip_index) + ": score outside [0, 1]");
    }

    ProposerState next = state;
    next.last_clip_index = clip.clip_index;
    const bool is_action = clip.score >= config.threshold;

    if (is_action) {
        if (next.phase == Phase::Idle) {
            next.run_first_clip = clip.clip_index;
            next.score_sum = 0.0;
            next.member_count = 0;
        }
        next.phase = Phase::InRun;
        next.run_last_action_clip = clip.clip_index;
        next.score_sum += clip.score;
        next.member_count += 1;
        next.pending_gap = 0;
        return {next, std::nullopt};
    }

    if (next.phase == Phase::Idle) {
        return {next, std::nullopt};
    }
    next.pending_gap += 1;
    if (next.pending_gap > config.gap_tolerance) {
        auto proposal = close_run(next, config, meta, clip.clip_index);
        return {reset(next), std::move(proposal)};
    }
    next.phase = Phase::InGap;
    return {next, std::nullopt};
}

std::pair<ProposerState, std::optional<Proposal>> flush(const ProposerState& state,
                                                         const ProposerConfig& config,
                                                         const VideoMeta& meta) {
    if (state.phase == Phase::Idle) {
        return {state, std::nullopt};
    }
    return {reset(state), close_run(state, config, meta, state.last_clip_index)};
}

OnlineProposer::OnlineProposer(ProposerConfig config, VideoMeta meta)
    : config_(config), meta_(std::move(meta)) {
    config_.validate();
    meta_.validate();
}

std::optional<Proposal> OnlineProposer::push(const ClipScore& clip) {
    auto [next, proposal] = process_clip(state_, config_, meta_, clip);
    state_ = next;
    return std::move(proposal);
}

std::optional<Proposal> OnlineProposer::finish() {
    auto [next, proposal] = flush(state_, config_, meta_);
    state_ = next;
    return std::move(proposal);
}

std::vector<Proposal> propose_stream(std::span<const ClipScore> clips, const ProposerConfig& config,
                                     const VideoMeta& meta) {
    OnlineProposer proposer(config, meta);
    std::vector<Proposal> out;
    for (const ClipScore& clip : clips) {
        if (auto p = proposer.push(clip)) {
            out.push_back(std::move(*p));
        }
    }
    if (auto p = proposer.finish()) {
        out.push_back(std::move(*p));
    }
    return out;
}

}  // namespace eap
