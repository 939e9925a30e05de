#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "eap/timeline.hpp"

namespace eap {

struct EvalConfig {
    double tiou_threshold = 0.5;
    std::int64_t max_proposals_per_video = 30;

    void validate() const;
};

using ProposalsByVideo = std::map<std::string, std::vector<Proposal>>;
using GroundTruthByVideo = std::map<std::string, std::vector<GroundTruthSegment>>;

ProposalsByVideo group_by_video(std::span<const Proposal> proposals);
GroundTruthByVideo group_by_video(std::span<const GroundTruthSegment> gts);

/// Ranking order: higher score first, then earlier t_start, then earlier t_end.
/// Proposals equal on all three keys keep their input order.
bool ranks_before(const Proposal& a, const Proposal& b);

/// Stable-sorts by ranks_before and keeps at most `cap` entries.
std::vector<Proposal> rank_and_cap(std::span<const Proposal> proposals, std::int64_t cap);

/// Incremental one-to-one matcher over one video's ground truth. Each offered
/// segment takes the unmatched ground truth with the highest tIoU (lowest
/// index on ties) when that tIoU reaches the threshold.
class GreedyMatcher {
public:
    GreedyMatcher(std::span<const GroundTruthSegment> gts, double tiou_threshold);

    /// Index of the ground truth taken, or -1 for a false positive.
    std::int64_t offer(const TemporalSegment& segment);

    const std::vector<bool>& gt_matched() const { return matched_; }
    std::size_t matched_count() const { return matched_count_; }

private:
    std::span<const GroundTruthSegment> gts_;
    double threshold_;
    std::vector<bool> matched_;
    std::size_t matched_count_ = 0;
};

struct MatchResult {
    std::vector<bool> proposal_is_tp;
    /// Ground-truth index per proposal, -1 when unmatched.
    std::vector<std::int64_t> matched_gt;
    std::vector<bool> gt_matched;
};

/// `ranked` must already be in ranking order.
MatchResult match_greedy(std::span<const Proposal> ranked, std::span<const GroundTruthSegment> gts,
                         double tiou_threshold);

struct ArAnPoint {
    double average_number = 0.0;
    double recall = 0.0;

    bool operator==(const ArAnPoint&) const = default;
};

struct PrPoint {
    double recall = 0.0;
    double precision = 0.0;

    bool operator==(const PrPoint&) const = default;
};

// The evaluated corpus is the set of videos with ground truth. Proposals for
// any other video are ignored. Recall pools matched ground truth over the
// whole corpus; average_number averages kept proposals over corpus videos.

/// Recall when keeping the top min(n, available) proposals of every video.
/// Throws UndefinedRecallError on an empty ground-truth corpus.
ArAnPoint recall_at_n(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                      std::int64_t n, const EvalConfig& config);

struct ArAnCurve {
    /// One point per n = 1 .. max_proposals_per_video.
    std::vector<ArAnPoint> points;
    /// Trapezoidal area under recall(AN) divided by the AN extent of the
    /// curve; equals the recall at max when the extent is zero.
    double auc = 0.0;
};

ArAnCurve ar_an_curve(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                      const EvalConfig& config);

/// Pools each video's capped proposals, orders them by ranks_before with
/// video_id as the final key, and emits one point per rank.
std::vector<PrPoint> pr_curve(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                              const EvalConfig& config);

struct EvalReport {
    std::vector<ArAnPoint> ar_an_points;
    std::vector<PrPoint> pr_points;
    double recall_at_max = 0.0;
    double auc_ar_an = 0.0;

    double tiou_threshold = 0.5;
    std::int64_t max_proposals_per_video = 30;
    std::size_t num_videos = 0;
    std::size_t num_ground_truth = 0;
    std::size_t num_proposals_considered = 0;
    std::size_t num_proposals_beyond_cap = 0;
    /// Proposals for videos that have no ground truth.
    std::size_t num_proposals_outside_corpus = 0;
};

EvalReport evaluate(const ProposalsByVideo& proposals, const GroundTruthByVideo& gts,
                    const EvalConfig& config);

}  // namespace eap
