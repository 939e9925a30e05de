#include "eap/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eap {

void VideoMeta::validate() const {
    if (video_id.empty()) {
        throw std::invalid_argument("video meta: empty video_id");
    }
    if (!(fps > 0.0) || !std::isfinite(fps)) {
        throw std::invalid_argument("video meta '" + video_id + "': fps must be positive");
    }
    if (clip_len < 1) {
        throw std::invalid_argument("video meta '" + video_id + "': clip_len must be >= 1");
    }
    if (stride < 1) {
        throw std::invalid_argument("video meta '" + video_id + "': stride must be >= 1");
    }
}

TemporalSegment::TemporalSegment(double t_start, double t_end) : t_start_(t_start), t_end_(t_end) {
    if (!std::isfinite(t_start) || !std::isfinite(t_end)) {
        throw std::invalid_argument("temporal segment: non-finite bound");
    }
    if (!(t_end > t_start)) {
        throw std::invalid_argument("temporal segment: t_end must be greater than t_start");
    }
}

double intersection(const TemporalSegment& a, const TemporalSegment& b) {
    const double lo = std::max(a.t_start(), b.t_start());
    const double hi = std::min(a.t_end(), b.t_end());
    return hi > lo ? hi - lo : 0.0;
}

double tiou(const TemporalSegment& a, const TemporalSegment& b) {
    const double inter = intersection(a, b);
    if (inter <= 0.0) {
        return 0.0;
    }
    const double uni = a.duration() + b.duration() - inter;
    return std::min(1.0, inter / uni);
}

TemporalSegment clip_to_segment(const VideoMeta& meta, std::int64_t first_clip,
                                std::int64_t last_clip) {
    if (first_clip < 0) {
        throw std::invalid_argument("clip_to_segment: negative clip index");
    }
    if (first_clip > last_clip) {
        throw std::invalid_argument("clip_to_segment: first_clip > last_clip");
    }
    const double t_start = static_cast<double>(first_clip * meta.stride) / meta.fps;
    const double t_end = static_cast<double>(last_clip * meta.stride + meta.clip_len) / meta.fps;
    return TemporalSegment(t_start, t_end);
}

ClipScore make_clip_score(const VideoMeta& meta, std::int64_t clip_index, double score) {
    const TemporalSegment seg = clip_to_segment(meta, clip_index, clip_index);
    return ClipScore{meta.video_id, clip_index, seg.t_start(), seg.t_end(), score};
}

}  // namespace eap
