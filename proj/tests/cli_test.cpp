#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "commands.hpp"
#include "eap/errors.hpp"
#include "eap/io.hpp"
#include "oracles.hpp"

namespace eap::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        static int counter = 0;
        dir_ = fs::temp_directory_path() /
               ("eap_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    static void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

    static int cli(std::vector<std::string> args) {
        args.insert(args.begin(), "eap");
        std::vector<char*> argv;
        for (auto& a : args) {
            argv.push_back(a.data());
        }
        return run_cli(static_cast<int>(argv.size()), argv.data());
    }

    fs::path dir_;
};

TEST_F(CliTest, EmptyScoresGiveEmptyProposals) {
    write(path("scores.csv"), std::string(io::kScoresHeader) + "\n");
    EXPECT_EQ(cli({"propose", path("scores.csv").string(), path("out.csv").string()}), 0);
    EXPECT_EQ(slurp(path("out.csv")), std::string(io::kProposalsHeader) + "\n");
}

TEST_F(CliTest, ClipIndexGapNamesTheLine) {
    write(path("scores.csv"), std::string(io::kScoresHeader) +
                                  "\nv,0,0,1,0.9\nv,1,1,2,0.9\nv,3,3,4,0.9\n");
    ProposeOptions opts;
    opts.scores = path("scores.csv");
    opts.output = path("out.csv");
    try {
        run_propose(opts);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
        EXPECT_NE(std::string(e.what()).find("expected clip_index 2"), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(path("out.csv")));
    EXPECT_NE(cli({"propose", path("scores.csv").string(), path("out.csv").string()}), 0);
}

TEST_F(CliTest, ProposalsAreWrittenInEmissionOrder) {
    // Video b closes its run before video a does.
    write(path("scores.csv"), std::string(io::kScoresHeader) +
                                  "\na,0,0,1,0.9\nb,0,0,1,0.8\nb,1,1,2,0.1\na,1,1,2,0.7\n");
    write(path("meta.csv"), "video_id,fps,clip_len,stride\na,1,1,1\nb,2,1,1\n");
    ProposeOptions opts;
    opts.scores = path("scores.csv");
    opts.output = path("out.csv");
    opts.meta = path("meta.csv");
    const ProposeStats stats = run_propose(opts);
    EXPECT_EQ(stats.clips, 4u);
    EXPECT_EQ(stats.videos, 2u);
    EXPECT_EQ(stats.proposals, 2u);
    EXPECT_EQ(slurp(path("out.csv")), std::string(io::kProposalsHeader) +
                                          "\nb,0.000000,0.500000,0.800000,0,0,1"
                                          "\na,0.000000,2.000000,0.800000,0,1,1\n");
}

TEST_F(CliTest, VideoMissingFromMetaIsRejected) {
    write(path("scores.csv"), std::string(io::kScoresHeader) + "\na,0,0,1,0.9\nzzz,0,0,1,0.9\n");
    write(path("meta.csv"), "video_id,fps,clip_len,stride\na,1,1,1\n");
    EXPECT_NE(cli({"propose", path("scores.csv").string(), path("out.csv").string(), "--meta",
                   path("meta.csv").string()}),
              0);
}

TEST_F(CliTest, InvalidFlagsRejectedBeforeWriting) {
    write(path("scores.csv"), std::string(io::kScoresHeader) + "\n");
    EXPECT_NE(cli({"propose", path("scores.csv").string(), path("out.csv").string(), "--threshold", "1.5"}), 0);
    EXPECT_FALSE(fs::exists(path("out.csv")));
    EXPECT_NE(cli({"simulate", path("sim").string(), "--prevalence", "1.5"}), 0);
    EXPECT_FALSE(fs::exists(path("sim")));
    EXPECT_NE(cli({"simulate", path("sim").string(), "--stride", "0"}), 0);
    EXPECT_FALSE(fs::exists(path("sim")));
    EXPECT_NE(cli({"bogus"}), 0);
}

TEST_F(CliTest, SimulateIsDeterministic) {
    ASSERT_EQ(cli({"simulate", path("a").string(), "--seed", "7"}), 0);
    ASSERT_EQ(cli({"simulate", path("b").string(), "--seed", "7"}), 0);
    ASSERT_EQ(cli({"simulate", path("c").string(), "--seed", "8"}), 0);
    for (const char* f : {"scores.csv", "ground_truth.csv", "meta.csv"}) {
        EXPECT_EQ(slurp(path("a") / f), slurp(path("b") / f)) << f;
    }
    EXPECT_NE(slurp(path("a") / "scores.csv"), slurp(path("c") / "scores.csv"));
}

TEST_F(CliTest, NoiselessPipelineRecoversEveryGroundTruthSegment) {
    ASSERT_EQ(cli({"simulate", path("sim").string(), "--seed", "3", "--separability", "1",
                   "--noise-width", "0", "--num-videos", "10"}),
              0);
    ASSERT_EQ(cli({"propose", (path("sim") / "scores.csv").string(), path("p.csv").string(), "--meta",
                   (path("sim") / "meta.csv").string()}),
              0);
    std::ifstream p(path("p.csv"));
    std::ifstream g(path("sim") / "ground_truth.csv");
    EXPECT_EQ(io::parse_proposals_csv(p).size(), io::parse_ground_truth_csv(g).size());

    EvalOptions opts{path("p.csv"), path("sim") / "ground_truth.csv", path("eval"), {}};
    std::ostringstream summary;
    const EvalReport report = run_eval(opts, summary);
    EXPECT_EQ(report.recall_at_max, 1.0);
    EXPECT_EQ(report.pr_points.back().precision, 1.0);
    EXPECT_NE(summary.str().find("recall_at_max = 1.000000"), std::string::npos);
    EXPECT_EQ(slurp(path("eval") / "summary.txt"), summary.str());
}

TEST_F(CliTest, MismatchedVideoIdsGiveZeroRecall) {
    write(path("p.csv"), std::string(io::kProposalsHeader) + "\nx,0,5,0.9,0,0,1\n");
    write(path("gt.csv"), std::string(io::kGroundTruthHeader) + "\ny,0,5,a\n");
    EXPECT_EQ(cli({"eval", path("p.csv").string(), path("gt.csv").string(), path("out").string()}), 0);
    EXPECT_NE(slurp(path("out") / "summary.txt").find("recall_at_max = 0.000000"), std::string::npos);
}

TEST_F(CliTest, EmptyGroundTruthFailsEval) {
    write(path("p.csv"), std::string(io::kProposalsHeader) + "\nx,0,5,0.9,0,0,1\n");
    write(path("gt.csv"), std::string(io::kGroundTruthHeader) + "\n");
    EXPECT_NE(cli({"eval", path("p.csv").string(), path("gt.csv").string(), path("out").string()}), 0);
}

TEST_F(CliTest, EvalAcceptsThumosDirectory) {
    fs::create_directories(path("thumos"));
    write(path("thumos") / "Diving.txt", "video_test_0000004 12.1 18.0\n");
    write(path("p.csv"), std::string(io::kProposalsHeader) + "\nvideo_test_0000004,12.0,18.0,0.9,0,0,1\n");
    EXPECT_EQ(cli({"eval", path("p.csv").string(), path("thumos").string(), path("out").string()}), 0);
    EXPECT_NE(slurp(path("out") / "summary.txt").find("recall_at_max = 1.000000"), std::string::npos);
}

TEST_F(CliTest, CurveFilesMatchOracleGoldens) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const auto corpus = oracle::random_corpus(rng);
        std::vector<Proposal> props;
        std::vector<GroundTruthSegment> gts;
        for (const auto& [v, list] : corpus.proposals) props.insert(props.end(), list.begin(), list.end());
        for (const auto& [v, list] : corpus.gts) gts.insert(gts.end(), list.begin(), list.end());
        {
            std::ofstream p(path("p.csv"));
            io::write_proposals_csv(p, props);
            std::ofstream g(path("gt.csv"));
            io::write_ground_truth_csv(g, gts);
        }
        ASSERT_EQ(cli({"eval", path("p.csv").string(), path("gt.csv").string(), path("out").string(),
                       "--max-proposals", "12"}),
                  0);

        // Goldens from the brute-force oracle over the same parsed files.
        std::ifstream p(path("p.csv"));
        std::ifstream g(path("gt.csv"));
        const auto parsed_props = group_by_video(io::parse_proposals_csv(p));
        const auto parsed_gts = group_by_video(io::parse_ground_truth_csv(g));
        const EvalConfig config{0.5, 12};
        std::string ar = std::string(io::kArAnHeader) + "\n";
        for (const auto& pt : oracle::ar_an(parsed_props, parsed_gts, config)) {
            ar += io::format_fixed(pt.average_number) + "," + io::format_fixed(pt.recall) + "\n";
        }
        std::string pr = std::string(io::kPrHeader) + "\n";
        for (const auto& pt : oracle::pr(parsed_props, parsed_gts, config)) {
            pr += io::format_fixed(pt.recall) + "," + io::format_fixed(pt.precision) + "\n";
        }
        EXPECT_EQ(slurp(path("out") / "ar_an.csv"), ar);
        EXPECT_EQ(slurp(path("out") / "pr.csv"), pr);
    }
}

TEST_F(CliTest, PipelineSucceedsAcrossFlagMatrix) {
    int run = 0;
    for (const char* stride : {"16", "8"}) {
        for (const char* snap : {"", "--no-snap"}) {
            for (const char* gap : {"0", "1", "3"}) {
                for (const char* threshold : {"0.3", "0.5", "0.7"}) {
                    const fs::path sim = path("sim" + std::to_string(run));
                    std::vector<std::string> sim_args{"simulate", sim.string(), "--seed",
                                                      std::to_string(run), "--num-videos", "4",
                                                      "--video-len", "200", "--stride", stride};
                    if (*snap) sim_args.emplace_back(snap);
                    ASSERT_EQ(cli(sim_args), 0);
                    const fs::path props = path("p" + std::to_string(run) + ".csv");
                    ASSERT_EQ(cli({"propose", (sim / "scores.csv").string(), props.string(), "--meta",
                                   (sim / "meta.csv").string(), "--gap-tolerance", gap, "--threshold",
                                   threshold, "--min-clips", "2"}),
                              0);
                    ASSERT_EQ(cli({"eval", props.string(), (sim / "ground_truth.csv").string(),
                                   path("e" + std::to_string(run)).string(), "--tiou", "0.7"}),
                              0);
                    ++run;
                }
            }
        }
    }
}

}  // namespace
}  // namespace eap::cli
