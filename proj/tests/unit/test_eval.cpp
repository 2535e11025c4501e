#include <gtest/gtest.h>

#include <sstream>

#include "oracles/oracles.hpp"
#include "pitchtrack/core/random.hpp"
#include "pitchtrack/eval/average_precision.hpp"
#include "pitchtrack/eval/identity.hpp"
#include "pitchtrack/eval/matching.hpp"
#include "pitchtrack/eval/metrics.hpp"
#include "pitchtrack/eval/report.hpp"

using namespace pitchtrack;

namespace {

Detection pred(FrameIndex f, BoundingBox b, double score, ClassLabel c = ClassLabel::player) {
    return {f, c, score, b};
}

GroundTruthObject gt(FrameIndex f, BoundingBox b, int id = 1, ClassLabel c = ClassLabel::player) {
    return {f, c, b, id};
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
        out.push_back(w);
    }
    return out;
}

} // namespace

// ----------------------------------------------------------------- matching

TEST(Matching, ExactPredictionIsTruePositive) {
    const std::vector<Detection> p = {pred(0, {0, 0, 10, 10}, 0.9)};
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 10, 10})};
    const auto m = match_predictions(p, g, 0.5);
    EXPECT_EQ(m.true_positives(), 1u);
    EXPECT_EQ(m.false_negatives, 0u);
}

TEST(Matching, NoGroundTruthMeansFalsePositive) {
    const std::vector<Detection> p = {pred(0, {0, 0, 10, 10}, 0.9)};
    const auto m = match_predictions(p, {}, 0.5);
    EXPECT_EQ(m.false_positives(), 1u);
}

TEST(Matching, HigherScoreTakesTheSharedTarget) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 10, 10})};
    // Input order must not matter; the better-overlapping but lower-scored box loses.
    const std::vector<Detection> p = {pred(0, {0, 0, 10, 10}, 0.6), pred(0, {1, 0, 11, 10}, 0.8)};
    const auto m = match_predictions(p, g, 0.5);
    EXPECT_FALSE(m.tp[0]);
    EXPECT_TRUE(m.tp[1]);
    EXPECT_EQ(m.order, (std::vector<std::size_t>{1, 0}));
}

TEST(Matching, EqualIouGoesToLowerGroundTruthIndex) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 10, 10}, 1), gt(0, {10, 0, 20, 10}, 2)};
    const std::vector<Detection> p = {pred(0, {5, 0, 15, 10}, 0.9), pred(0, {10, 0, 20, 10}, 0.8)};
    // First prediction overlaps both at 1/3; it takes index 0, leaving index 1 for the second.
    const auto m = match_predictions(p, g, 0.3);
    EXPECT_TRUE(m.tp[0]);
    EXPECT_TRUE(m.tp[1]);
}

// --------------------------------------------------------------------- AP

TEST(AveragePrecision, PerfectAndMiss) {
    EXPECT_EQ(average_precision({true}, 1), 1.0);
    EXPECT_EQ(average_precision({false}, 1), 0.0);
}

TEST(AveragePrecision, HandComputedEnvelope) {
    // PR points (0.5, 1), (0.5, 0.5), (1, 2/3): the envelope is 1 up to recall 0.5, then 2/3.
    const double expected = (51 + 50 * 2.0 / 3.0) / 101;
    EXPECT_NEAR(*average_precision({true, false, true}, 2), expected, 1e-15);
    EXPECT_NEAR(*oracle::envelope_average_precision({true, false, true}, 2), expected, 1e-15);
}

TEST(AveragePrecision, UndefinedAndZeroCases) {
    EXPECT_FALSE(average_precision({}, 0).has_value());
    EXPECT_EQ(average_precision({false, false}, 0), 0.0);
    EXPECT_EQ(average_precision({}, 3), 0.0);
}

TEST(AveragePrecision, RandomListsMatchOracle) {
    Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        const std::size_t total = rng.index(9);
        std::vector<bool> flags;
        std::size_t hits = 0;
        const std::size_t n = rng.index(13);
        for (std::size_t k = 0; k < n; ++k) {
            const bool tp = hits < total && rng.bernoulli(0.5);
            hits += tp ? 1 : 0;
            flags.push_back(tp);
        }
        const auto a = average_precision(flags, total);
        const auto b = oracle::envelope_average_precision(flags, static_cast<std::int64_t>(total));
        ASSERT_EQ(a.has_value(), b.has_value());
        if (a) {
            EXPECT_NEAR(*a, *b, 1e-12);
        }
    }
}

// -------------------------------------------------------------------- mAP

TEST(Map, ThresholdsAreFivePercentSteps) {
    const auto t = coco_iou_thresholds();
    ASSERT_EQ(t.size(), 10u);
    for (int i = 0; i < 10; ++i) {
        EXPECT_EQ(t[static_cast<std::size_t>(i)], (50.0 + 5 * i) / 100.0);
    }
}

TEST(Map, PerfectPredictionsSaturate) {
    std::vector<Detection> p;
    std::vector<GroundTruthObject> g;
    for (int f = 0; f < 5; ++f) {
        g.push_back(gt(f, {10.0 * f, 0, 10.0 * f + 30, 60}, 1));
        p.push_back(pred(f, {10.0 * f, 0, 10.0 * f + 30, 60}, 0.9));
    }
    const auto s = map_over_thresholds(p, g);
    for (const auto& ap : s.ap[class_index(ClassLabel::player)]) {
        EXPECT_EQ(ap, 1.0);
    }
    EXPECT_EQ(s.mean[class_index(ClassLabel::player)], 1.0);
    EXPECT_FALSE(s.mean[class_index(ClassLabel::ball)].has_value());
}

TEST(Map, OverlapBetweenFiftyAndFiftyFive) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 100, 100})};
    const std::vector<Detection> p = {pred(0, {0, 0, 100, 52}, 0.9)};
    ASSERT_DOUBLE_EQ(iou(p[0].box, g[0].box), 0.52);
    const auto s = map_over_thresholds(p, g);
    const auto& aps = s.ap[class_index(ClassLabel::player)];
    EXPECT_EQ(aps[0], 1.0);
    for (std::size_t i = 1; i < aps.size(); ++i) {
        EXPECT_EQ(aps[i], 0.0);
    }
    EXPECT_NEAR(*s.mean[class_index(ClassLabel::player)], 0.1, 1e-15);
}

TEST(Map, ClassesAreScoredSeparately) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 10, 10}, 1, ClassLabel::ball)};
    const std::vector<Detection> p = {pred(0, {0, 0, 10, 10}, 0.9, ClassLabel::player)};
    const auto s = map_over_thresholds(p, g);
    EXPECT_EQ(s.mean[class_index(ClassLabel::ball)], 0.0);
    EXPECT_EQ(s.mean[class_index(ClassLabel::player)], 0.0);
}

// ------------------------------------------------------- precision/recall

TEST(PrecisionRecall, AllCorrect) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 10, 10})};
    const std::vector<Detection> p = {pred(0, {0, 0, 10, 10}, 0.9)};
    const auto pr = precision_recall_point(p, g, 0.5, 0.25);
    EXPECT_EQ(pr.precision, 1.0);
    EXPECT_EQ(pr.recall, 1.0);
}

TEST(PrecisionRecall, NoPredictions) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 10, 10})};
    const auto pr = precision_recall_point({}, g, 0.5, 0.25);
    EXPECT_EQ(pr.precision, 1.0);
    EXPECT_EQ(pr.recall, 0.0);
}

TEST(PrecisionRecall, TwoHitsOneFalseAlarmOneMiss) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 10, 10}, 1), gt(0, {50, 0, 60, 10}, 2),
                                              gt(1, {0, 0, 10, 10}, 1)};
    const std::vector<Detection> p = {pred(0, {0, 0, 10, 10}, 0.9), pred(1, {0, 0, 10, 10}, 0.8),
                                      pred(1, {200, 0, 210, 10}, 0.7), pred(1, {300, 0, 310, 10}, 0.1)};
    const auto pr = precision_recall_point(p, g, 0.5, 0.25);
    EXPECT_EQ(pr.tp, 2u);
    EXPECT_EQ(pr.fp, 1u);
    EXPECT_EQ(pr.fn, 1u);
    EXPECT_DOUBLE_EQ(pr.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(pr.recall, 2.0 / 3.0);
}

// ------------------------------------------------------------------ report

TEST(Report, HeaderWords) {
    EXPECT_EQ(split_ws(report_header()),
              (std::vector<std::string>{"Class", "Images", "Instances", "Precision", "Recall", "mAP50", "mAP50-95"}));
}

TEST(Report, ReferencePlayerRowFormatting) {
    ReportRow r;
    r.name = "Player";
    r.images = 49;
    r.instances = 973;
    r.precision = 0.957;
    r.recall = 0.978;
    r.map50 = 0.993;
    r.map5095 = 0.767;
    EXPECT_EQ(split_ws(format_report_row(r)),
              (std::vector<std::string>{"Player", "49", "973", "0.957", "0.978", "0.993", "0.767"}));
}

TEST(Report, AllRowIsMeanOfDefinedClassesAsInReferenceTable) {
    // Reference class rows (Ball, Goalkeeper, Player, Referee) and the
    // published "All" row; the latter equals the per-class mean to the
    // printed precision.
    const double p[4] = {0.914, 0.801, 0.957, 0.864}, r[4] = {0.511, 0.897, 0.978, 0.925};
    const double m5095[4] = {0.296, 0.659, 0.767, 0.610};
    double mp = 0, mr = 0, mm = 0;
    for (int i = 0; i < 4; ++i) {
        mp += p[i] / 4, mr += r[i] / 4, mm += m5095[i] / 4;
    }
    EXPECT_NEAR(mp, 0.884, 1e-3);
    EXPECT_NEAR(mr, 0.828, 1e-3);
    EXPECT_NEAR(mm, 0.583, 1e-3);
}

TEST(Report, BuildsRowsAndAveragesDefinedClasses) {
    std::vector<GroundTruthObject> g;
    std::vector<Detection> p;
    for (int f = 0; f < 4; ++f) {
        g.push_back(gt(f, {0, 0, 30, 70}, 1));
        p.push_back(pred(f, {0, 0, 30, 70}, 0.9));
        g.push_back(gt(f, {500, 0, 516, 16}, 2, ClassLabel::ball));
    }
    p.push_back(pred(0, {500, 0, 516, 16}, 0.8, ClassLabel::ball));
    const auto rep = build_report(p, g);
    ASSERT_EQ(rep.rows.size(), 5u);
    EXPECT_EQ(rep.rows[0].name, "All");
    const auto& ball = rep.rows[1];
    const auto& player = rep.rows[3];
    EXPECT_EQ(ball.name, "Ball");
    EXPECT_EQ(ball.images, 4u);
    EXPECT_EQ(ball.instances, 4u);
    EXPECT_DOUBLE_EQ(*ball.recall, 0.25);
    EXPECT_EQ(*player.precision, 1.0);
    EXPECT_FALSE(rep.rows[2].precision.has_value());
    EXPECT_DOUBLE_EQ(*rep.rows[0].recall, (0.25 + 1.0) / 2);
    EXPECT_DOUBLE_EQ(*rep.rows[0].map50, (*ball.map50 + *player.map50) / 2);
    EXPECT_EQ(rep.rows[0].instances, 8u);
    const auto table = render_report_table(rep);
    EXPECT_NE(table.find("Goalkeeper"), std::string::npos);
    std::ostringstream rec;
    write_report_records(rec, rep);
    EXPECT_NE(rec.str().find("{\"class\":\"all\""), std::string::npos);
}

// ------------------------------------------------------------------ identity

TEST(Identity, IdenticalTracksNoSwitches) {
    std::vector<GroundTruthObject> g;
    std::vector<TrackRow> t;
    for (int f = 0; f < 10; ++f) {
        g.push_back(gt(f, {f * 5.0, 0, f * 5.0 + 30, 70}, 3));
        t.push_back({f, 8, ClassLabel::player, std::nullopt, 0.9, {f * 5.0, 0, f * 5.0 + 30, 70}});
    }
    EXPECT_EQ(count_id_switches(g, t), 0u);
    const auto r = identity_retention(g, t);
    EXPECT_EQ(r.objects, 1u);
    EXPECT_EQ(r.retained, 1u);
}

TEST(Identity, HandOverBetweenIdsIsOneSwitch) {
    std::vector<GroundTruthObject> g;
    std::vector<TrackRow> t;
    for (int f = 0; f < 10; ++f) {
        g.push_back(gt(f, {0, 0, 30, 70}, 3));
        t.push_back({f, f < 5 ? 1 : 2, ClassLabel::player, std::nullopt, 0.9, {0, 0, 30, 70}});
    }
    EXPECT_EQ(count_id_switches(g, t), 1u);
    EXPECT_EQ(identity_retention(g, t).retained, 0u);
}

TEST(Identity, LowOverlapIsNotAMatch) {
    const std::vector<GroundTruthObject> g = {gt(0, {0, 0, 30, 70}, 3), gt(1, {0, 0, 30, 70}, 3)};
    const std::vector<TrackRow> t = {{0, 1, ClassLabel::player, std::nullopt, 0.9, {0, 0, 30, 70}},
                                     {1, 2, ClassLabel::player, std::nullopt, 0.9, {25, 0, 55, 70}}};
    EXPECT_EQ(count_id_switches(g, t), 0u);
}
