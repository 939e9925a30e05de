#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <stdexcept>

#include "eap/timeline.hpp"

namespace eap {
namespace {

TEST(TiouTest, IdenticalSegments) {
    EXPECT_EQ(tiou(TemporalSegment(3.0, 9.0), TemporalSegment(3.0, 9.0)), 1.0);
}

TEST(TiouTest, DisjointSegments) {
    EXPECT_EQ(tiou(TemporalSegment(0.0, 1.0), TemporalSegment(5.0, 6.0)), 0.0);
}

TEST(TiouTest, PartialOverlap) {
    // intersection [5, 10] = 5, union [0, 15] = 15
    EXPECT_NEAR(tiou(TemporalSegment(0.0, 10.0), TemporalSegment(5.0, 15.0)), 5.0 / 15.0, 1e-15);
}

TEST(TiouTest, TouchingSegmentsDoNotOverlap) {
    EXPECT_EQ(tiou(TemporalSegment(0.0, 2.0), TemporalSegment(2.0, 4.0)), 0.0);
}

TEST(TiouTest, NestedSegment) {
    EXPECT_DOUBLE_EQ(tiou(TemporalSegment(0.0, 10.0), TemporalSegment(2.0, 4.0)), 0.2);
}

TEST(TemporalSegmentTest, RejectsDegenerateAndReversed) {
    EXPECT_THROW(TemporalSegment(1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(TemporalSegment(2.0, 1.0), std::invalid_argument);
    EXPECT_THROW(TemporalSegment(0.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(TiouProperty, SymmetricBoundedAndSelfOne) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> start(-50.0, 50.0);
    std::uniform_real_distribution<double> len(1e-3, 30.0);
    for (int i = 0; i < 20000; ++i) {
        const double a0 = start(rng);
        const double b0 = start(rng);
        const TemporalSegment a(a0, a0 + len(rng));
        const TemporalSegment b(b0, b0 + len(rng));
        const double ab = tiou(a, b);
        EXPECT_EQ(ab, tiou(b, a));
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, 1.0);
        EXPECT_EQ(tiou(a, a), 1.0);
        EXPECT_EQ(ab == 0.0, intersection(a, b) == 0.0);
    }
}

TEST(TiouProperty, StrictlyDecreasesFromCoincidence) {
    const TemporalSegment a(0.0, 5.0);
    double previous = 1.0;
    for (int step = 1; step < 5 * 16; ++step) {
        const double shift = step / 16.0;
        const double current = tiou(a, TemporalSegment(shift, 5.0 + shift));
        EXPECT_LT(current, previous);
        previous = current;
    }
    EXPECT_EQ(tiou(a, TemporalSegment(5.0, 10.0)), 0.0);
}

TEST(ClipToSegmentTest, FirstC3dClip) {
    const VideoMeta meta{"v", 30.0, 16, 16};
    const TemporalSegment s = clip_to_segment(meta, 0, 0);
    EXPECT_EQ(s.t_start(), 0.0);
    EXPECT_NEAR(s.t_end(), 16.0 / 30.0, 1e-15);
}

TEST(ClipToSegmentTest, ClipRange) {
    const VideoMeta meta{"v", 30.0, 16, 16};
    const TemporalSegment s = clip_to_segment(meta, 2, 4);
    EXPECT_NEAR(s.t_start(), 32.0 / 30.0, 1e-15);
    EXPECT_NEAR(s.t_end(), 80.0 / 30.0, 1e-15);
}

TEST(ClipToSegmentTest, UnitGrid) {
    const VideoMeta meta{"v", 1.0, 1, 1};
    EXPECT_EQ(clip_to_segment(meta, 0, 9), TemporalSegment(0.0, 10.0));
}

TEST(ClipToSegmentTest, RejectsReversedRange) {
    const VideoMeta meta{"v", 1.0, 1, 1};
    EXPECT_THROW(clip_to_segment(meta, 3, 2), std::invalid_argument);
    EXPECT_THROW(clip_to_segment(meta, -1, 2), std::invalid_argument);
}

TEST(ClipToSegmentTest, MonotoneInLastClip) {
    const VideoMeta meta{"v", 29.97, 16, 8};
    double previous_end = 0.0;
    for (std::int64_t last = 3; last < 500; ++last) {
        const double end = clip_to_segment(meta, 3, last).t_end();
        EXPECT_GE(end, previous_end);
        previous_end = end;
    }
}

TEST(VideoMetaTest, Validation) {
    EXPECT_NO_THROW((VideoMeta{"v", 30.0, 16, 16}.validate()));
    EXPECT_THROW((VideoMeta{"", 30.0, 16, 16}.validate()), std::invalid_argument);
    EXPECT_THROW((VideoMeta{"v", 0.0, 16, 16}.validate()), std::invalid_argument);
    EXPECT_THROW((VideoMeta{"v", 30.0, 0, 16}.validate()), std::invalid_argument);
    EXPECT_THROW((VideoMeta{"v", 30.0, 16, 0}.validate()), std::invalid_argument);
}

}  // namespace
}  // namespace eap
