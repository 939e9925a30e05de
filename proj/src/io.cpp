#include "eap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <system_error>

#include "eap/errors.hpp"

namespace eap::io {

std::string format_fixed(double value, int decimals) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed, decimals);
    if (ec != std::errc()) {
        throw std::runtime_error("format_fixed: value does not fit");
    }
    std::string out(buf, end);
    // -0.000000 is not a useful rendering of a tiny negative value.
    if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(0, 1);
    }
    return out;
}

std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string field;
    std::size_t i = 0;
    while (true) {
        field.clear();
        if (i < line.size() && line[i] == '"') {
            ++i;
            bool closed = false;
            while (i < line.size()) {
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                field.push_back(line[i++]);
            }
            if (!closed || (i < line.size() && line[i] != ',')) {
                return std::nullopt;
            }
        } else {
            const std::size_t comma = line.find(',', i);
            const std::size_t stop = comma == std::string_view::npos ? line.size() : comma;
            field.assign(line.substr(i, stop - i));
            i = stop;
        }
        fields.push_back(field);
        if (i >= line.size()) {
            return fields;
        }
        ++i;  // comma
        if (i == line.size()) {
            fields.emplace_back();
            return fields;
        }
    }
}

namespace {

std::string quote_if_needed(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void strip_line_end(std::string& line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

// Reads a header line and compares it byte-for-byte (after a UTF-8 BOM and a
// trailing CR are dropped).
void expect_header(std::istream& in, std::string_view expected, const std::string& source,
                   std::size_t& line_no) {
    std::string header;
    if (!std::getline(in, header)) {
        throw ParseError(source, 1, "missing header, expected '" + std::string(expected) + "'");
    }
    line_no = 1;
    strip_line_end(header);
    if (header.rfind("\xEF\xBB\xBF", 0) == 0) {
        header.erase(0, 3);
    }
    if (header != expected) {
        throw ParseError(source, 1,
                         "malformed header '" + header + "', expected '" + std::string(expected) + "'");
    }
}

std::vector<std::string> fields_of(const std::string& line, std::size_t expected_count,
                                   const std::string& source, std::size_t line_no) {
    auto fields = split_csv_line(line);
    if (!fields) {
        throw ParseError(source, line_no, "malformed quoting");
    }
    if (fields->size() != expected_count) {
        throw ParseError(source, line_no,
                         "expected " + std::to_string(expected_count) + " fields, found " +
                             std::to_string(fields->size()));
    }
    return std::move(*fields);
}

double parse_real(std::string_view text, std::string_view name, const std::string& source,
                  std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError(source, line_no,
                         std::string(name) + ": '" + std::string(text) + "' is not a finite number");
    }
    return value;
}

std::int64_t parse_integer(std::string_view text, std::string_view name, const std::string& source,
                           std::size_t line_no) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw ParseError(source, line_no,
                         std::string(name) + ": '" + std::string(text) + "' is not an integer");
    }
    return value;
}

double parse_unit_score(std::string_view text, const std::string& source, std::size_t line_no) {
    const double score = parse_real(text, "score", source, line_no);
    if (score < 0.0 || score > 1.0) {
        throw ParseError(source, line_no, "score " + std::string(text) + " outside [0, 1]");
    }
    return score;
}

void require_non_empty_id(const std::string& id, const std::string& source, std::size_t line_no) {
    if (id.empty()) {
        throw ParseError(source, line_no, "empty video_id");
    }
}

TemporalSegment parse_segment(std::string_view start, std::string_view end, const std::string& source,
                              std::size_t line_no) {
    const double t_start = parse_real(start, "t_start", source, line_no);
    const double t_end = parse_real(end, "t_end", source, line_no);
    if (!(t_end > t_start)) {
        throw ParseError(source, line_no,
                         "segment [" + std::string(start) + ", " + std::string(end) +
                             "] must have start < end");
    }
    return TemporalSegment(t_start, t_end);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

}  // namespace

ScoreReader::ScoreReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {
    expect_header(in_, kScoresHeader, source_, line_);
}

std::optional<ClipScore> ScoreReader::next() {
    while (std::getline(in_, buffer_)) {
        ++line_;
        strip_line_end(buffer_);
        if (buffer_.empty()) {
            continue;
        }
        auto fields = fields_of(buffer_, 5, source_, line_);
        ClipScore clip;
        clip.video_id = std::move(fields[0]);
        require_non_empty_id(clip.video_id, source_, line_);
        clip.clip_index = parse_integer(fields[1], "clip_index", source_, line_);
        if (clip.clip_index < 0) {
            throw ParseError(source_, line_, "clip_index must be non-negative");
        }
        clip.t_start = parse_real(fields[2], "t_start", source_, line_);
        clip.t_end = parse_real(fields[3], "t_end", source_, line_);
        if (clip.t_start < 0.0 || !(clip.t_end > clip.t_start)) {
            throw ParseError(source_, line_, "clip times must satisfy 0 <= t_start < t_end");
        }
        clip.score = parse_unit_score(fields[4], source_, line_);

        auto [it, inserted] = last_index_.try_emplace(clip.video_id, clip.clip_index);
        if (!inserted) {
            if (clip.clip_index <= it->second) {
                throw ParseError(source_, line_,
                                 "clip_index " + std::to_string(clip.clip_index) + " of video '" +
                                     clip.video_id + "' does not increase (previous " +
                                     std::to_string(it->second) + ")");
            }
            it->second = clip.clip_index;
        }
        return clip;
    }
    return std::nullopt;
}

ScoreCorpus parse_scores(std::istream& in, const std::string& source) {
    ScoreReader reader(in, source);
    ScoreCorpus corpus;
    while (auto clip = reader.next()) {
        corpus[clip->video_id].push_back(std::move(*clip));
    }
    return corpus;
}

ScoreWriter::ScoreWriter(std::ostream& out) : out_(out) {
    out_ << kScoresHeader << '\n';
}

void ScoreWriter::write(const ClipScore& c) {
    out_ << quote_if_needed(c.video_id) << ',' << c.clip_index << ',' << format_fixed(c.t_start) << ','
         << format_fixed(c.t_end) << ',' << format_fixed(c.score) << '\n';
}

void write_scores_csv(std::ostream& out, std::span<const ClipScore> clips) {
    ScoreWriter writer(out);
    for (const ClipScore& c : clips) {
        writer.write(c);
    }
}

std::map<std::string, VideoMeta> parse_meta_csv(std::istream& in, const std::string& source) {
    std::size_t line_no = 0;
    expect_header(in, kMetaHeader, source, line_no);
    std::map<std::string, VideoMeta> metas;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        strip_line_end(line);
        if (line.empty()) {
            continue;
        }
        auto fields = fields_of(line, 4, source, line_no);
        VideoMeta meta;
        meta.video_id = std::move(fields[0]);
        require_non_empty_id(meta.video_id, source, line_no);
        meta.fps = parse_real(fields[1], "fps", source, line_no);
        meta.clip_len = parse_integer(fields[2], "clip_len", source, line_no);
        meta.stride = parse_integer(fields[3], "stride", source, line_no);
        try {
            meta.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
        const std::string id = meta.video_id;
        if (!metas.emplace(id, std::move(meta)).second) {
            throw ParseError(source, line_no, "duplicate video_id '" + id + "'");
        }
    }
    return metas;
}

void write_meta_csv(std::ostream& out, std::span<const VideoMeta> metas) {
    out << kMetaHeader << '\n';
    for (const VideoMeta& m : metas) {
        char fps[32];
        const auto res = std::to_chars(fps, fps + sizeof(fps), m.fps);
        out << quote_if_needed(m.video_id) << ',' << std::string_view(fps, res.ptr - fps) << ',' << m.clip_len << ','
            << m.stride << '\n';
    }
}

std::vector<GroundTruthSegment> parse_ground_truth_csv(std::istream& in, const std::string& source) {
    std::size_t line_no = 0;
    expect_header(in, kGroundTruthHeader, source, line_no);
    std::vector<GroundTruthSegment> gts;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        strip_line_end(line);
        if (line.empty()) {
            continue;
        }
        auto fields = fields_of(line, 4, source, line_no);
        require_non_empty_id(fields[0], source, line_no);
        std::optional<std::string> label;
        if (!fields[3].empty()) {
            label = std::move(fields[3]);
        }
        gts.push_back(GroundTruthSegment{std::move(fields[0]),
                                         parse_segment(fields[1], fields[2], source, line_no),
                                         std::move(label)});
    }
    return gts;
}

void write_ground_truth_csv(std::ostream& out, std::span<const GroundTruthSegment> gts) {
    out << kGroundTruthHeader << '\n';
    for (const GroundTruthSegment& g : gts) {
        out << quote_if_needed(g.video_id) << ',' << format_fixed(g.segment.t_start()) << ','
            << format_fixed(g.segment.t_end()) << ',' << quote_if_needed(g.label.value_or(""))
            << '\n';
    }
}

std::vector<GroundTruthSegment> parse_thumos_file(std::istream& in, const std::string& label,
                                                  const std::string& source) {
    std::vector<GroundTruthSegment> gts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        std::vector<std::string_view> tokens;
        std::size_t pos = 0;
        while (true) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos) {
                break;
            }
            const std::size_t stop = std::min(line.find_first_of(" \t\r", pos), line.size());
            tokens.emplace_back(line.data() + pos, stop - pos);
            pos = stop;
        }
        if (tokens.size() != 3) {
            throw ParseError(source, line_no,
                             "expected 'video_name start end', found " + std::to_string(tokens.size()) +
                                 " fields");
        }
        gts.push_back(GroundTruthSegment{std::string(tokens[0]),
                                         parse_segment(tokens[1], tokens[2], source, line_no), label});
    }
    return gts;
}

std::vector<GroundTruthSegment> parse_thumos_annotations(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw std::runtime_error(dir.string() + " is not a directory");
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<GroundTruthSegment> gts;
    for (const auto& file : files) {
        auto in = open_input(file);
        auto part = parse_thumos_file(in, file.stem().string(), file.string());
        gts.insert(gts.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    return gts;
}

std::vector<GroundTruthSegment> load_ground_truth(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) {
        return parse_thumos_annotations(path);
    }
    auto in = open_input(path);
    return parse_ground_truth_csv(in, path.string());
}

std::vector<Proposal> parse_proposals_csv(std::istream& in, const std::string& source) {
    std::size_t line_no = 0;
    expect_header(in, kProposalsHeader, source, line_no);
    std::vector<Proposal> proposals;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        strip_line_end(line);
        if (line.empty()) {
            continue;
        }
        auto fields = fields_of(line, 7, source, line_no);
        require_non_empty_id(fields[0], source, line_no);
        const TemporalSegment segment = parse_segment(fields[1], fields[2], source, line_no);
        const double score = parse_unit_score(fields[3], source, line_no);
        const ClipSpan span{parse_integer(fields[4], "first_clip", source, line_no),
                            parse_integer(fields[5], "last_clip", source, line_no)};
        const std::int64_t emitted = parse_integer(fields[6], "emitted_at_clip", source, line_no);
        if (span.first < 0 || span.first > span.last) {
            throw ParseError(source, line_no, "clip span must satisfy 0 <= first_clip <= last_clip");
        }
        if (emitted < span.last) {
            throw ParseError(source, line_no, "emitted_at_clip precedes last_clip");
        }
        proposals.push_back(Proposal{std::move(fields[0]), segment, score, span, emitted});
    }
    return proposals;
}

ProposalWriter::ProposalWriter(std::ostream& out) : out_(out) {
    out_ << kProposalsHeader << '\n';
}

void ProposalWriter::write(const Proposal& p) {
    out_ << quote_if_needed(p.video_id) << ',' << format_fixed(p.segment.t_start()) << ','
         << format_fixed(p.segment.t_end()) << ',' << format_fixed(p.score) << ',' << p.clip_span.first
         << ',' << p.clip_span.last << ',' << p.emitted_at_clip << '\n';
    ++rows_;
}

void write_proposals_csv(std::ostream& out, std::span<const Proposal> proposals) {
    ProposalWriter writer(out);
    for (const Proposal& p : proposals) {
        writer.write(p);
    }
}

void write_ar_an_csv(std::ostream& out, const EvalReport& report) {
    out << kArAnHeader << '\n';
    for (const ArAnPoint& p : report.ar_an_points) {
        out << format_fixed(p.average_number) << ',' << format_fixed(p.recall) << '\n';
    }
}

void write_pr_csv(std::ostream& out, const EvalReport& report) {
    out << kPrHeader << '\n';
    for (const PrPoint& p : report.pr_points) {
        out << format_fixed(p.recall) << ',' << format_fixed(p.precision) << '\n';
    }
}

void write_summary(std::ostream& out, const EvalReport& report) {
    const double final_precision = report.pr_points.empty() ? 0.0 : report.pr_points.back().precision;
    out << "# class-agnostic proposal evaluation\n"
        << "# recall pools matched ground truth over all videos (not averaged per video)\n"
        << "# ranking: score desc, t_start asc, t_end asc, video_id asc; greedy one-to-one matching\n"
        << "tiou_threshold = " << format_fixed(report.tiou_threshold) << '\n'
        << "max_proposals_per_video = " << report.max_proposals_per_video << '\n'
        << "videos = " << report.num_videos << '\n'
        << "ground_truth_segments = " << report.num_ground_truth << '\n'
        << "proposals_considered = " << report.num_proposals_considered << '\n'
        << "proposals_beyond_cap = " << report.num_proposals_beyond_cap << '\n'
        << "proposals_outside_corpus = " << report.num_proposals_outside_corpus << '\n'
        << "recall_at_max = " << format_fixed(report.recall_at_max) << '\n'
        << "precision_at_max = " << format_fixed(final_precision) << '\n'
        << "auc_ar_an = " << format_fixed(report.auc_ar_an) << '\n';
}

}  // namespace eap::io
