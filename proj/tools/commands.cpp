#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "eap/errors.hpp"
#include "eap/io.hpp"

namespace eap::cli {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

void close_output(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) {
        throw std::runtime_error("failed writing " + path.string());
    }
}

void ensure_directory(const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    if (!std::filesystem::is_directory(dir)) {
        throw std::runtime_error(dir.string() + " is not a directory");
    }
}

}  // namespace

ProposeStats run_propose(const ProposeOptions& options) {
    options.proposer.validate();
    options.defaults.validate();

    std::map<std::string, VideoMeta> metas;
    if (options.meta) {
        auto in = open_input(*options.meta);
        metas = io::parse_meta_csv(in, options.meta->string());
    }

    auto in = open_input(options.scores);
    const std::string source = options.scores.string();
    io::ScoreReader reader(in, source);

    ProposeStats stats;
    std::ofstream out = open_output(options.output);
    try {
        io::ProposalWriter writer(out);
        std::unordered_map<std::string, OnlineProposer> proposers;
        std::vector<std::string> first_seen;

        while (auto clip = reader.next()) {
            ++stats.clips;
            auto it = proposers.find(clip->video_id);
            if (it == proposers.end()) {
                VideoMeta meta = options.defaults;
                meta.video_id = clip->video_id;
                if (options.meta) {
                    const auto m = metas.find(clip->video_id);
                    if (m == metas.end()) {
                        throw ParseError(source, reader.line(),
                                         "video '" + clip->video_id + "' has no entry in " +
                                             options.meta->string());
                    }
                    meta = m->second;
                }
                it = proposers.emplace(clip->video_id, OnlineProposer(options.proposer, meta)).first;
                first_seen.push_back(clip->video_id);
            }
            try {
                if (auto p = it->second.push(*clip)) {
                    writer.write(*p);
                }
            } catch (const StreamError& e) {
                throw ParseError(source, reader.line(), e.what());
            }
        }
        for (const std::string& video : first_seen) {
            if (auto p = proposers.at(video).finish()) {
                writer.write(*p);
            }
        }
        stats.videos = first_seen.size();
        stats.proposals = writer.rows();
        close_output(out, options.output);
    } catch (...) {
        out.close();
        std::error_code ignored;
        std::filesystem::remove(options.output, ignored);
        throw;
    }
    return stats;
}

EvalReport run_eval(const EvalOptions& options, std::ostream& summary_out) {
    options.config.validate();

    std::vector<Proposal> proposals;
    {
        auto in = open_input(options.proposals);
        proposals = io::parse_proposals_csv(in, options.proposals.string());
    }
    const auto gts = io::load_ground_truth(options.ground_truth);

    const EvalReport report =
        evaluate(group_by_video(proposals), group_by_video(gts), options.config);

    ensure_directory(options.output_dir);
    const auto write = [&](const std::string& name, auto&& writer) {
        const auto path = options.output_dir / name;
        auto out = open_output(path);
        writer(out, report);
        close_output(out, path);
    };
    write("ar_an.csv", io::write_ar_an_csv);
    write("pr.csv", io::write_pr_csv);
    write("summary.txt", io::write_summary);
    io::write_summary(summary_out, report);
    return report;
}

void run_simulate(const SimulateOptions& options, std::ostream& log) {
    options.sim.validate();
    options.base.validate();

    const auto videos = sim::generate_ground_truth(options.sim, options.base);
    ensure_directory(options.output_dir);

    {
        const auto path = options.output_dir / "ground_truth.csv";
        auto out = open_output(path);
        std::vector<GroundTruthSegment> all;
        for (const auto& v : videos) {
            all.insert(all.end(), v.ground_truth.begin(), v.ground_truth.end());
        }
        io::write_ground_truth_csv(out, all);
        close_output(out, path);
    }
    {
        const auto path = options.output_dir / "meta.csv";
        auto out = open_output(path);
        std::vector<VideoMeta> metas;
        for (const auto& v : videos) {
            metas.push_back(v.meta);
        }
        io::write_meta_csv(out, metas);
        close_output(out, path);
    }
    {
        const auto path = options.output_dir / "scores.csv";
        auto out = open_output(path);
        io::ScoreWriter writer(out);
        for (const auto& v : videos) {
            for (const ClipScore& clip : sim::generate_scores(v, options.sim)) {
                writer.write(clip);
            }
        }
        close_output(out, path);
    }
    log << "seed = " << options.sim.seed << '\n';
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Online temporal action proposals from clip score streams"};
    app.require_subcommand(1);

    ProposerConfig proposer;
    EvalConfig eval;
    sim::SimConfig simcfg;
    VideoMeta meta{"default"};

    const auto add_proposer_flags = [&](CLI::App* cmd) {
        cmd->add_option("--threshold", proposer.threshold, "Per-clip action threshold in (0,1)")
            ->capture_default_str();
        cmd->add_option("--gap-tolerance", proposer.gap_tolerance,
                        "Background clips absorbed inside a run")
            ->capture_default_str();
        cmd->add_option("--min-clips", proposer.min_clips, "Minimum action clips per proposal")
            ->capture_default_str();
    };
    const auto add_grid_flags = [&](CLI::App* cmd) {
        cmd->add_option("--fps", meta.fps, "Frames per second")->capture_default_str();
        cmd->add_option("--clip-len", meta.clip_len, "Clip length in frames")->capture_default_str();
        cmd->add_option("--stride", meta.stride, "Clip stride in frames")->capture_default_str();
    };

    ProposeOptions propose_opts;
    std::string propose_meta;
    auto* propose = app.add_subcommand("propose", "Turn a score stream into proposals");
    propose->add_option("scores", propose_opts.scores, "Score CSV")->required();
    propose->add_option("output", propose_opts.output, "Proposal CSV to write")->required();
    propose->add_option("--meta", propose_meta, "Per-video metadata CSV");
    add_proposer_flags(propose);
    add_grid_flags(propose);

    EvalOptions eval_opts;
    auto* evaluate_cmd = app.add_subcommand("eval", "Evaluate proposals (AR-AN and PR)");
    evaluate_cmd->add_option("proposals", eval_opts.proposals, "Proposal CSV")->required();
    evaluate_cmd
        ->add_option("ground_truth", eval_opts.ground_truth,
                     "Ground-truth CSV or directory of THUMOS class files")
        ->required();
    evaluate_cmd->add_option("output_dir", eval_opts.output_dir, "Directory for curve files")
        ->required();
    evaluate_cmd->add_option("--tiou", eval.tiou_threshold, "tIoU threshold in (0,1]")
        ->capture_default_str();
    evaluate_cmd
        ->add_option("--max-proposals", eval.max_proposals_per_video, "Proposals kept per video")
        ->capture_default_str();

    SimulateOptions sim_opts;
    bool no_snap = false;
    auto* simulate = app.add_subcommand("simulate", "Generate a seeded synthetic corpus");
    simulate->add_option("output_dir", sim_opts.output_dir, "Directory for generated files")
        ->required();
    simulate->add_option("--seed", simcfg.seed, "Master seed")->capture_default_str();
    simulate->add_option("--num-videos", simcfg.num_videos, "Number of videos")->capture_default_str();
    simulate->add_option("--video-len", simcfg.video_len_clips, "Clips per video")
        ->capture_default_str();
    simulate->add_option("--prevalence", simcfg.action_prevalence, "Expected action fraction")
        ->capture_default_str();
    simulate->add_option("--separability", simcfg.separability,
                         "Distance between action and background score means")
        ->capture_default_str();
    simulate->add_option("--noise-width", simcfg.noise_width, "Half-width of score noise")
        ->capture_default_str();
    simulate->add_option("--mean-action-clips", simcfg.mean_action_clips, "Mean action run length")
        ->capture_default_str();
    simulate->add_flag("--no-snap", no_snap, "Jitter ground-truth boundaries off the clip grid");
    add_grid_flags(simulate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (propose->parsed()) {
            propose_opts.proposer = proposer;
            propose_opts.defaults = meta;
            if (!propose_meta.empty()) {
                propose_opts.meta = propose_meta;
            }
            const ProposeStats stats = run_propose(propose_opts);
            std::cerr << "videos = " << stats.videos << ", clips = " << stats.clips
                      << ", proposals = " << stats.proposals << '\n';
        } else if (evaluate_cmd->parsed()) {
            eval_opts.config = eval;
            run_eval(eval_opts, std::cout);
        } else if (simulate->parsed()) {
            simcfg.snap_to_grid = !no_snap;
            sim_opts.sim = simcfg;
            sim_opts.base = meta;
            run_simulate(sim_opts, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace eap::cli
