#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace eap {

/// Per-video timing: how clip indices map onto seconds.
struct VideoMeta {
    std::string video_id;
    double fps = 30.0;
    std::int64_t clip_len = 16;
    std::int64_t stride = 16;

    /// Throws std::invalid_argument when any field is out of range.
    void validate() const;
};

/// One classifier output for one clip of one video.
struct ClipScore {
    std::string video_id;
    std::int64_t clip_index = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    double score = 0.0;

    bool operator==(const ClipScore&) const = default;
};

/// Half-open interval [t_start, t_end) in seconds. Zero-length and reversed
/// segments cannot be constructed.
class TemporalSegment {
public:
    TemporalSegment(double t_start, double t_end);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double duration() const { return t_end_ - t_start_; }

    bool operator==(const TemporalSegment&) const = default;

private:
    double t_start_;
    double t_end_;
};

struct ClipSpan {
    std::int64_t first = 0;
    std::int64_t last = 0;

    bool operator==(const ClipSpan&) const = default;
};

struct Proposal {
    std::string video_id;
    TemporalSegment segment;
    double score = 0.0;
    ClipSpan clip_span;
    std::int64_t emitted_at_clip = 0;

    bool operator==(const Proposal&) const = default;
};

struct GroundTruthSegment {
    std::string video_id;
    TemporalSegment segment;
    std::optional<std::string> label;

    bool operator==(const GroundTruthSegment&) const = default;
};

/// Duration of the overlap of two segments; 0 when they are disjoint or touch.
double intersection(const TemporalSegment& a, const TemporalSegment& b);

/// Temporal intersection-over-union, in [0, 1].
double tiou(const TemporalSegment& a, const TemporalSegment& b);

/// Segment covered by clips first_clip..last_clip (inclusive):
/// [first * stride / fps, (last * stride + clip_len) / fps].
TemporalSegment clip_to_segment(const VideoMeta& meta, std::int64_t first_clip,
                                std::int64_t last_clip);

/// Clip score record for `clip_index` with times derived from `meta`.
ClipScore make_clip_score(const VideoMeta& meta, std::int64_t clip_index, double score);

}  // namespace eap
