#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eap/metrics.hpp"
#include "eap/timeline.hpp"

namespace eap::io {

// All formats are comma-separated with a mandatory header, '.' decimals and
// optional RFC-4180 double quoting. Every parse failure raises eap::ParseError
// carrying the source name and 1-based line number.

inline constexpr std::string_view kScoresHeader = "video_id,clip_index,t_start,t_end,score";
inline constexpr std::string_view kMetaHeader = "video_id,fps,clip_len,stride";
inline constexpr std::string_view kGroundTruthHeader = "video_id,t_start,t_end,label";
inline constexpr std::string_view kProposalsHeader =
    "video_id,t_start,t_end,score,first_clip,last_clip,emitted_at_clip";
inline constexpr std::string_view kArAnHeader = "avg_num_proposals,recall";
inline constexpr std::string_view kPrHeader = "recall,precision";

/// Fixed-point rendering with `decimals` digits, independent of locale.
std::string format_fixed(double value, int decimals = 6);

/// Splits one CSV record. Quoted fields may contain commas and doubled quotes.
/// Returns nullopt on an unterminated quote or stray characters after a quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

/// Row-at-a-time reader for score streams. Keeps only the last clip index of
/// each video seen so far.
class ScoreReader {
public:
    ScoreReader(std::istream& in, std::string source);

    /// Next record, or nullopt at end of input.
    std::optional<ClipScore> next();

    /// Line number of the record last returned.
    std::size_t line() const { return line_; }
    const std::string& source() const { return source_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_ = 0;
    std::string buffer_;
    std::unordered_map<std::string, std::int64_t> last_index_;
};

using ScoreCorpus = std::map<std::string, std::vector<ClipScore>>;

ScoreCorpus parse_scores(std::istream& in, const std::string& source = {});

class ScoreWriter {
public:
    explicit ScoreWriter(std::ostream& out);
    void write(const ClipScore& clip);

private:
    std::ostream& out_;
};

void write_scores_csv(std::ostream& out, std::span<const ClipScore> clips);

std::map<std::string, VideoMeta> parse_meta_csv(std::istream& in, const std::string& source = {});
void write_meta_csv(std::ostream& out, std::span<const VideoMeta> metas);

std::vector<GroundTruthSegment> parse_ground_truth_csv(std::istream& in,
                                                       const std::string& source = {});
void write_ground_truth_csv(std::ostream& out, std::span<const GroundTruthSegment> gts);

/// One THUMOS class file: `video_name start end` per line, blank lines skipped.
std::vector<GroundTruthSegment> parse_thumos_file(std::istream& in, const std::string& label,
                                                  const std::string& source = {});

/// Every `*.txt` file in `dir`, in file-name order; label is the file stem.
std::vector<GroundTruthSegment> parse_thumos_annotations(const std::filesystem::path& dir);

/// Directory → THUMOS class files, otherwise generic ground-truth CSV.
std::vector<GroundTruthSegment> load_ground_truth(const std::filesystem::path& path);

std::vector<Proposal> parse_proposals_csv(std::istream& in, const std::string& source = {});

/// Writes the header on construction and one row per call to write().
class ProposalWriter {
public:
    explicit ProposalWriter(std::ostream& out);
    void write(const Proposal& proposal);
    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    std::size_t rows_ = 0;
};

void write_proposals_csv(std::ostream& out, std::span<const Proposal> proposals);

void write_ar_an_csv(std::ostream& out, const EvalReport& report);
void write_pr_csv(std::ostream& out, const EvalReport& report);
void write_summary(std::ostream& out, const EvalReport& report);

}  // namespace eap::io
