#include "eap/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "eap/errors.hpp"

namespace eap {

void EvalConfig::validate() const {
    if (!(tiou_threshold > 0.0 && tiou_threshold <= 1.0)) {
        throw std::invalid_argument("eval: tiou_threshold must lie in (0, 1]");
    }
    if (max_proposals_per_video < 1) {
        throw std::invalid_argument("eval: max_proposals_per_video must be >= 1");
    }
}

ProposalsByVideo group_by_video(std::span<const Proposal> proposals) {
    ProposalsByVideo out;
    for (const Proposal& p : proposals) {
        out[p.video_id].push_back(p);
    }
    return out;
}

GroundTruthByVideo group_by_video(std::span<const GroundTruthSegment> gts) {
    GroundTruthByVideo out;
    for (const GroundTruthSegment& g : gts) {
        out[g.video_id].push_back(g);
    }
    return out;
}

bool ranks_before(const Proposal& a, const Proposal& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    if (a.segment.t_start() != b.segment.t_start()) {
        return a.segment.t_start() < b.segment.t_start();
    }
    return a.segment.t_end() < b.segment.t_end();
}

std::vector<Proposal> rank_and_cap(std::span<const Proposal> proposals, std::int64_t cap) {
    std::vector<Proposal> ranked(proposals.begin(), proposals.end());
    std::stable_sort(ranked.begin(), ranked.end(), ranks_before);
    if (cap >= 0 && ranked.size() > static_cast<std::size_t>(cap)) {
        ranked.erase(ranked.begin() + cap, ranked.end());
    }
    return ranked;
}

GreedyMatcher::GreedyMatcher(std::span<const GroundTruthSegment> gts, double tiou_threshold)
    : gts_(gts), threshold_(tiou_threshold), matched_(gts.size(), false) {}

std::int64_t GreedyMatcher::offer(const TemporalSegment& segment) {
    std::int64_t best = -1;
    double best_tiou = -1.0;
    for (std::size_t i = 0; i < gts_.size(); ++i) {
        if (matched_[i]) {
            continue;
        }
        const double overlap = tiou(segment, gts_[i].segment);
        if (overlap >= threshold_ && overlap > best_tiou) {
            best = static_cast<std::int64_t>(i);
            best_tiou = overlap;
        }
    }
    if (best >= 0) {
        matched_[static_cast<std::size_t>(best)] = true;
        ++matched_count_;
    }
    return best;
}

MatchResult match_greedy(std::span<const Proposal> ranked, std::span<const GroundTruthSegment> gts,
                         double tiou_threshold) {
    GreedyMatcher matcher(gts, tiou_threshold);
    MatchResult result;
    result.proposal_is_tp.reserve(ranked.size());
    result.matched_gt.reserve(ranked.size());
    for (const Proposal& p : ranked) {
        const std::int64_t gt = matcher.offer(p.segment);
        result.proposal_is_tp.push_back(gt >= 0);
        result.matched_gt.push_back(gt);
    }
    result.gt_matched = matcher.gt_matched();
    return result;
}

namespace {

const std::vector<Proposal> kNoProposals;

const std::vector<Proposal>& proposals_for(const ProposalsByVideo& proposals,
                                           const std::string& video_id) {
    const auto it = proposals.find(video_id);
    return it == proposals.end() ? kNoProposals : it->second;
}

std::size_t total_ground_truth(const GroundTruthByVideo& gts) {
    std::size_t total = 0;
    for (const auto& [video, segments] : gts) {
        total += segments.size();
    }
    if (total == 0) {
        throw UndefinedRecallError();
    }
    return total;
}

// Per corpus video: how many proposals survive the cap, and how many ground
// truths the first k of them match, for k = 0 .. kept.
struct VideoSweep {
    std::size_t kept = 0;
    std::vector<std::size_t> matched_prefix;
};

// Greedy matching is sequential in rank order, so matching the top n is a
// prefix of matching the top max_proposals_per_video.
std::vector<VideoSweep> sweep_videos(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                                     const EvalConfig& config) {
    std::vector<VideoSweep> sweeps;
    sweeps.reserve(gts.size());
    for (const auto& [video, segments] : gts) {
        const auto ranked = rank_and_cap(proposals_for(proposals, video),
                                         config.max_proposals_per_video);
        const MatchResult match = match_greedy(ranked, segments, config.tiou_threshold);
        VideoSweep sweep;
        sweep.kept = ranked.size();
        sweep.matched_prefix.assign(ranked.size() + 1, 0);
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            sweep.matched_prefix[i + 1] = sweep.matched_prefix[i] + (match.proposal_is_tp[i] ? 1 : 0);
        }
        sweeps.push_back(std::move(sweep));
    }
    return sweeps;
}

ArAnPoint point_at(const std::vector<VideoSweep>& sweeps, std::size_t total_gt, std::int64_t n) {
    std::size_t kept = 0;
    std::size_t matched = 0;
    for (const VideoSweep& sweep : sweeps) {
        const std::size_t k = std::min(sweep.kept, static_cast<std::size_t>(n));
        kept += k;
        matched += sweep.matched_prefix[k];
    }
    return ArAnPoint{static_cast<double>(kept) / static_cast<double>(sweeps.size()),
                     static_cast<double>(matched) / static_cast<double>(total_gt)};
}

double normalized_auc(const std::vector<ArAnPoint>& points) {
    if (points.empty()) {
        return 0.0;
    }
    const double extent = points.back().average_number - points.front().average_number;
    if (extent <= 0.0) {
        return points.back().recall;
    }
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double width = points[i].average_number - points[i - 1].average_number;
        area += 0.5 * width * (points[i].recall + points[i - 1].recall);
    }
    return area / extent;
}

}  // namespace

ArAnPoint recall_at_n(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                      std::int64_t n, const EvalConfig& config) {
    config.validate();
    if (n < 1 || n > config.max_proposals_per_video) {
        throw std::invalid_argument("recall_at_n: n must lie in [1, max_proposals_per_video]");
    }
    const std::size_t total_gt = total_ground_truth(gts);
    return point_at(sweep_videos(proposals, gts, config), total_gt, n);
}

ArAnCurve ar_an_curve(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                      const EvalConfig& config) {
    config.validate();
    const std::size_t total_gt = total_ground_truth(gts);
    const auto sweeps = sweep_videos(proposals, gts, config);
    ArAnCurve curve;
    curve.points.reserve(static_cast<std::size_t>(config.max_proposals_per_video));
    for (std::int64_t n = 1; n <= config.max_proposals_per_video; ++n) {
        curve.points.push_back(point_at(sweeps, total_gt, n));
    }
    curve.auc = normalized_auc(curve.points);
    return curve;
}

std::vector<PrPoint> pr_curve(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                              const EvalConfig& config) {
    config.validate();
    const std::size_t total_gt = total_ground_truth(gts);

    struct Entry {
        const Proposal* proposal;
        std::size_t video;
        std::size_t rank;
    };
    std::vector<std::vector<Proposal>> ranked;
    std::vector<GreedyMatcher> matchers;
    ranked.reserve(gts.size());
    matchers.reserve(gts.size());
    for (const auto& [video, segments] : gts) {
        ranked.push_back(rank_and_cap(proposals_for(proposals, video), config.max_proposals_per_video));
        matchers.emplace_back(segments, config.tiou_threshold);
    }

    std::vector<Entry> pool;
    for (std::size_t v = 0; v < ranked.size(); ++v) {
        for (std::size_t r = 0; r < ranked[v].size(); ++r) {
            pool.push_back(Entry{&ranked[v][r], v, r});
        }
    }
    // Video order equals video_id order because the ground-truth map is sorted.
    std::sort(pool.begin(), pool.end(), [](const Entry& a, const Entry& b) {
        if (ranks_before(*a.proposal, *b.proposal)) {
            return true;
        }
        if (ranks_before(*b.proposal, *a.proposal)) {
            return false;
        }
        return std::tie(a.video, a.rank) < std::tie(b.video, b.rank);
    });

    std::vector<PrPoint> points;
    points.reserve(pool.size());
    std::size_t tp = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (matchers[pool[i].video].offer(pool[i].proposal->segment) >= 0) {
            ++tp;
        }
        points.push_back(PrPoint{static_cast<double>(tp) / static_cast<double>(total_gt),
                                 static_cast<double>(tp) / static_cast<double>(i + 1)});
    }
    return points;
}

EvalReport evaluate(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                    const EvalConfig& config) {
    EvalReport report;
    const ArAnCurve curve = ar_an_curve(proposals, gts, config);
    report.ar_an_points = curve.points;
    report.auc_ar_an = curve.auc;
    report.recall_at_max = curve.points.empty() ? 0.0 : curve.points.back().recall;
    report.pr_points = pr_curve(proposals, gts, config);
    report.tiou_threshold = config.tiou_threshold;
    report.max_proposals_per_video = config.max_proposals_per_video;
    report.num_videos = gts.size();
    report.num_ground_truth = total_ground_truth(gts);
    report.num_proposals_considered = report.pr_points.size();
    for (const auto& [video, list] : proposals) {
        if (gts.find(video) == gts.end()) {
            report.num_proposals_outside_corpus += list.size();
        } else if (list.size() > static_cast<std::size_t>(config.max_proposals_per_video)) {
            report.num_proposals_beyond_cap +=
                list.size() - static_cast<std::size_t>(config.max_proposals_per_video);
        }
    }
    return report;
}

}  // namespace eap
