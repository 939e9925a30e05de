#include "eap/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace eap::sim {

void SimConfig::validate() const {
    if (num_videos < 1) {
        throw std::invalid_argument("simulate: num_videos must be >= 1");
    }
    if (video_len_clips < 1) {
        throw std::invalid_argument("simulate: video_len_clips must be >= 1");
    }
    if (!(action_prevalence > 0.0 && action_prevalence < 1.0)) {
        throw std::invalid_argument("simulate: action_prevalence must lie in (0, 1)");
    }
    if (!std::isfinite(separability) || separability < 0.0) {
        throw std::invalid_argument("simulate: separability must be finite and >= 0");
    }
    if (!std::isfinite(noise_width) || noise_width < 0.0) {
        throw std::invalid_argument("simulate: noise_width must be finite and >= 0");
    }
    if (!std::isfinite(mean_action_clips) || mean_action_clips < 1.0) {
        throw std::invalid_argument("simulate: mean_action_clips must be >= 1");
    }
}

namespace {

enum class Stream : std::uint64_t { GroundTruth = 1, Scores = 2 };

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded from (seed, video, stream) so every video owns an
// independent substream and parallel generation equals serial generation.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t video, Stream stream) {
        std::uint64_t sm = seed;
        sm ^= splitmix64(sm) + video * 0xD1B54A32D192ED03ULL;
        sm ^= static_cast<std::uint64_t>(stream) * 0xABC98388FB8FAC03ULL;
        for (auto& word : s_) {
            word = splitmix64(sm);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Geometric on {1, 2, ...} with the given mean (>= 1).
    std::int64_t geometric(double mean) {
        if (mean <= 1.0) {
            return 1;
        }
        const double u = 1.0 - uniform();  // (0, 1]
        return 1 + static_cast<std::int64_t>(std::floor(std::log(u) / std::log1p(-1.0 / mean)));
    }

    /// Irwin-Hall(3) rescaled to [-1, 1]: bounded, symmetric, unimodal.
    double bell() { return (uniform() + uniform() + uniform()) * (2.0 / 3.0) - 1.0; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

double video_duration(const VideoMeta& meta, std::int64_t num_clips) {
    return clip_to_segment(meta, 0, num_clips - 1).t_end();
}

}  // namespace

std::string video_id_for(std::uint64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "sim_video_%06llu", static_cast<unsigned long long>(index));
    return buf;
}

std::vector<SimulatedVideo> generate_ground_truth(const SimConfig& config, const VideoMeta& base) {
    config.validate();
    const double p = config.action_prevalence;
    // Background runs must average at least one clip.
    const double mean_action = std::max(config.mean_action_clips, p / (1.0 - p));
    const double mean_background = mean_action * (1.0 - p) / p;

    std::vector<SimulatedVideo> videos;
    videos.reserve(static_cast<std::size_t>(config.num_videos));
    for (std::int64_t v = 0; v < config.num_videos; ++v) {
        SimulatedVideo video;
        video.index = static_cast<std::uint64_t>(v);
        video.meta = base;
        video.meta.video_id = video_id_for(video.index);
        video.meta.validate();

        Rng rng(config.seed, video.index, Stream::GroundTruth);
        const std::int64_t len = config.video_len_clips;
        const double duration = video_duration(video.meta, len);
        const double jitter_scale = static_cast<double>(video.meta.stride) / video.meta.fps;
        // Geometric runs are memoryless, so drawing the initial phase with
        // probability p keeps the process stationary from clip 0.
        bool action = rng.uniform() < p;
        std::int64_t pos = 0;
        while (pos < len) {
            const std::int64_t run = rng.geometric(action ? mean_action : mean_background);
            const std::int64_t last = std::min(len - 1, pos + run - 1);
            if (action) {
                TemporalSegment seg = clip_to_segment(video.meta, pos, last);
                if (!config.snap_to_grid) {
                    // Jitter under half a stride keeps neighbouring runs apart.
                    const double start =
                        std::max(0.0, seg.t_start() + 0.9 * (rng.uniform() - 0.5) * jitter_scale);
                    const double end =
                        std::min(duration, seg.t_end() + 0.9 * (rng.uniform() - 0.5) * jitter_scale);
                    if (end > start) {
                        seg = TemporalSegment(start, end);
                    }
                }
                video.ground_truth.push_back(GroundTruthSegment{video.meta.video_id, seg, "action"});
            }
            pos = last + 1;
            action = !action;
        }
        videos.push_back(std::move(video));
    }
    return videos;
}

std::vector<bool> label_clips(const VideoMeta& meta, std::span<const GroundTruthSegment> gts,
                              std::int64_t num_clips) {
    std::vector<std::pair<double, double>> merged;
    for (const auto& g : gts) {
        merged.emplace_back(g.segment.t_start(), g.segment.t_end());
    }
    std::sort(merged.begin(), merged.end());
    std::vector<std::pair<double, double>> unions;
    for (const auto& iv : merged) {
        if (!unions.empty() && iv.first <= unions.back().second) {
            unions.back().second = std::max(unions.back().second, iv.second);
        } else {
            unions.push_back(iv);
        }
    }

    std::vector<bool> labels(static_cast<std::size_t>(std::max<std::int64_t>(num_clips, 0)), false);
    std::size_t first_candidate = 0;
    for (std::int64_t i = 0; i < num_clips; ++i) {
        const TemporalSegment clip = clip_to_segment(meta, i, i);
        while (first_candidate < unions.size() && unions[first_candidate].second <= clip.t_start()) {
            ++first_candidate;
        }
        double covered = 0.0;
        for (std::size_t u = first_candidate; u < unions.size() && unions[u].first < clip.t_end(); ++u) {
            covered += std::min(unions[u].second, clip.t_end()) - std::max(unions[u].first, clip.t_start());
        }
        labels[static_cast<std::size_t>(i)] = 2.0 * covered >= clip.duration();
    }
    return labels;
}

std::vector<ClipScore> generate_scores(const SimulatedVideo& video, const SimConfig& config) {
    config.validate();
    const std::int64_t len = config.video_len_clips;
    const auto labels = label_clips(video.meta, video.ground_truth, len);
    const double half_gap = std::min(0.5, config.separability / 2.0);

    Rng rng(config.seed, video.index, Stream::Scores);
    std::vector<ClipScore> clips;
    clips.reserve(static_cast<std::size_t>(len));
    for (std::int64_t i = 0; i < len; ++i) {
        const double center = labels[static_cast<std::size_t>(i)] ? 0.5 + half_gap : 0.5 - half_gap;
        const double noise = config.noise_width * rng.bell();
        clips.push_back(make_clip_score(video.meta, i, std::clamp(center + noise, 0.0, 1.0)));
    }
    return clips;
}

}  // namespace eap::sim
