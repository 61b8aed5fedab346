#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "fcgtrack/association.hpp"
#include "fcgtrack/mot_io.hpp"
#include "fcgtrack/synthgen.hpp"

using fcgtrack::BBox;
using fcgtrack::Detection;
using fcgtrack::Embedding;
using fcgtrack::TrackerConfig;
using fcgtrack::Tracklet;

namespace {

Embedding axis(std::size_t k, std::size_t dim = 8) {
    std::vector<float> v(dim, 0.0f);
    v[k] = 1.0f;
    return Embedding(std::move(v));
}

Embedding mix(std::size_t a, std::size_t b, double cos_ab, std::size_t dim = 8) {
    // Unit vector with dot(., axis(a)) = cos_ab, lying in the (a, b) plane.
    std::vector<float> v(dim, 0.0f);
    v[a] = static_cast<float>(cos_ab);
    v[b] = static_cast<float>(std::sqrt(1.0 - cos_ab * cos_ab));
    return Embedding(std::move(v)).normalized();
}

int g_source = 0;

Detection det(int frame, BBox box, Embedding e, double conf = 0.9) {
    return {frame, box, conf, std::move(e), g_source++};
}

std::vector<Detection> chain(int first, int last, double x0, double vx, const Embedding& e) {
    std::vector<Detection> out;
    for (int f = first; f <= last; ++f) out.push_back(det(f, BBox::from_center(x0 + vx * (f - first), 100, 30, 60), e));
    return out;
}

// Straightforward O(n^3) average-linkage clustering over the base matrix,
// used as the reference for the cached implementation.
std::vector<std::set<int>> naive_upgma(const std::vector<Tracklet>& tracklets, const TrackerConfig& config) {
    const std::size_t n = tracklets.size();
    const auto base = fcgtrack::tracklet_distance_matrix(tracklets, config);
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
    auto key = [&](const std::vector<std::size_t>& c) {
        int k = std::numeric_limits<int>::max();
        for (std::size_t m : c) k = std::min(k, tracklets[m].id());
        return k;
    };
    for (;;) {
        double best = std::numeric_limits<double>::infinity();
        std::pair<int, int> best_key{0, 0};
        std::size_t bi = 0, bj = 0;
        bool found = false;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double sum = 0.0;
                bool feasible = true;
                for (std::size_t a : clusters[i]) {
                    for (std::size_t b : clusters[j]) {
                        const double d = base[a * n + b];
                        if (!std::isfinite(d)) feasible = false;
                        sum += d;
                    }
                }
                if (!feasible) continue;
                const double avg = sum / static_cast<double>(clusters[i].size() * clusters[j].size());
                const auto k = std::minmax(key(clusters[i]), key(clusters[j]));
                const std::pair<int, int> kp{k.first, k.second};
                if (!found || avg < best || (avg == best && kp < best_key)) {
                    found = true;
                    best = avg;
                    best_key = kp;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!found || !(best < config.merge_cutoff)) break;
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<long>(bj));
    }
    std::vector<std::set<int>> out;
    for (const auto& c : clusters) {
        std::set<int> s;
        for (std::size_t m : c) {
            for (const auto& d : tracklets[m].detections()) s.insert(d.source_index);
        }
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::set<int>> partition_of(const std::vector<Tracklet>& ts) {
    std::vector<std::set<int>> out;
    for (const auto& t : ts) {
        std::set<int> s;
        for (const auto& d : t.detections()) s.insert(d.source_index);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Detection> synthetic_detections(const fcgtrack::Scenario& s, double sigma) {
    const auto data = fcgtrack::generate(s);
    return fcgtrack::join_detections(data.detections, data.embeddings, sigma);
}

}  // namespace

TEST(Tracklet, SortsAndRejectsDuplicateFrames) {
    TrackerConfig cfg;
    std::vector<Detection> ds{det(3, {0, 0, 1, 1}, axis(0)), det(1, {0, 0, 1, 1}, axis(0))};
    const Tracklet t(7, ds, cfg);
    EXPECT_EQ(t.start_frame(), 1);
    EXPECT_EQ(t.end_frame(), 3);
    ds.push_back(det(3, {0, 0, 1, 1}, axis(0)));
    EXPECT_THROW(Tracklet(1, ds, cfg), std::invalid_argument);
}

TEST(LiftedFrames, SingleTargetSingleChain) {
    const auto ds = chain(1, 6, 100, 2, axis(0));
    const auto ts = fcgtrack::form_lifted_frames(ds, TrackerConfig{});
    ASSERT_EQ(ts.size(), 1u);
    EXPECT_EQ(ts[0].size(), 6u);
}

TEST(LiftedFrames, OrthogonalTargetsStayPure) {
    auto ds = chain(1, 6, 100, 2, axis(0));
    const auto other = chain(1, 6, 104, 2, axis(1));  // boxes overlap heavily
    ds.insert(ds.end(), other.begin(), other.end());
    std::reverse(ds.begin(), ds.end());
    const auto ts = fcgtrack::form_lifted_frames(ds, TrackerConfig{});
    ASSERT_EQ(ts.size(), 2u);
    for (const auto& t : ts) {
        EXPECT_EQ(t.size(), 6u);
        for (const auto& d : t.detections()) EXPECT_EQ(d.embedding, t.detections().front().embedding);
    }
}

TEST(LiftedFrames, GapIsNeverBridged) {
    auto ds = chain(1, 6, 100, 2, axis(0));
    auto other = chain(1, 6, 400, 2, axis(1));
    other.erase(other.begin() + 2);  // frame 3 missing
    ds.insert(ds.end(), other.begin(), other.end());
    const auto ts = fcgtrack::form_lifted_frames(ds, TrackerConfig{});
    int pieces = 0;
    for (const auto& t : ts) {
        if (t.detections().front().embedding == axis(1)) {
            ++pieces;
            for (std::size_t k = 1; k < t.size(); ++k) {
                EXPECT_EQ(t.detections()[k].frame, t.detections()[k - 1].frame + 1);
            }
        }
    }
    EXPECT_GE(pieces, 2);
}

TEST(LiftedFrames, GateSplitsDissimilarLinks) {
    std::vector<Detection> ds{det(1, {0, 0, 10, 10}, axis(0)), det(2, {0, 0, 10, 10}, mix(0, 1, 0.5))};
    TrackerConfig cfg;
    cfg.stage1_gate = 0.4;  // cosine distance 0.5 exceeds the gate
    EXPECT_EQ(fcgtrack::form_lifted_frames(ds, cfg).size(), 2u);
    cfg.stage1_gate = 0.6;
    EXPECT_EQ(fcgtrack::form_lifted_frames(ds, cfg).size(), 1u);
}

TEST(TrackletDistance, OverlapIsInfeasible) {
    TrackerConfig cfg;
    const Tracklet a(1, chain(1, 5, 0, 1, axis(0)), cfg);
    const Tracklet b(2, chain(5, 9, 0, 1, axis(0)), cfg);
    EXPECT_FALSE(fcgtrack::tracklet_distance(a, b, cfg).has_value());
    EXPECT_FALSE(fcgtrack::tracklet_distance(b, a, cfg).has_value());
}

TEST(TrackletDistance, PerfectContinuationIsZero) {
    TrackerConfig cfg;
    const auto all = chain(1, 15, 100, 3, axis(0));
    const Tracklet a(1, {all.begin(), all.begin() + 6}, cfg);
    const Tracklet b(2, {all.begin() + 8, all.end()}, cfg);  // gap p = 3
    const auto d = fcgtrack::tracklet_distance(a, b, cfg);
    ASSERT_TRUE(d.has_value());
    EXPECT_NEAR(*d, 0.0, 1e-7);
}

TEST(TrackletDistance, StationaryOrthogonalIsOff) {
    TrackerConfig cfg;  // off = 0.525
    const Tracklet a(1, chain(1, 4, 200, 0, axis(0)), cfg);
    const Tracklet b(2, chain(8, 12, 200, 0, axis(1)), cfg);
    EXPECT_NEAR(*fcgtrack::tracklet_distance(a, b, cfg), 0.525, 1e-12);
}

TEST(TrackletDistance, SymmetricAndComposedFromModules) {
    TrackerConfig cfg;
    cfg.velocity_window = 3;
    const Tracklet a(1, chain(1, 6, 100, 4, mix(0, 1, 0.8)), cfg);
    const Tracklet b(2, chain(10, 14, 150, 1, axis(0)), cfg);
    const double dab = *fcgtrack::tracklet_distance(a, b, cfg);
    EXPECT_EQ(dab, *fcgtrack::tracklet_distance(b, a, cfg));

    const BBox pred = a.motion().predict(4);
    EXPECT_NEAR(pred.center_x(), 120 + 4 * 4, 1e-9);
    const double sp = fcgtrack::modulated_giou(pred, b.detections().front().box, fcgtrack::LengthMode::kDiagonal);
    const double lambda = std::min(1.0, sp / 2 + cfg.off);
    EXPECT_NEAR(dab, lambda * 0.2, 1e-6);
}

TEST(TrackletDistance, MatrixMatchesPairwise) {
    TrackerConfig cfg;
    std::vector<Tracklet> ts;
    ts.emplace_back(1, chain(1, 3, 0, 1, axis(0)), cfg);
    ts.emplace_back(2, chain(2, 6, 50, 1, axis(1)), cfg);
    ts.emplace_back(3, chain(8, 9, 5, 1, axis(0)), cfg);
    const auto m = fcgtrack::tracklet_distance_matrix(ts, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_TRUE(std::isinf(m[i * 3 + i]));
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j) continue;
            const auto d = fcgtrack::tracklet_distance(ts[i], ts[j], cfg);
            if (d) EXPECT_EQ(m[i * 3 + j], *d);
            else EXPECT_TRUE(std::isinf(m[i * 3 + j]));
        }
    }
}

TEST(Upgma, AllInfeasibleIsNoOp) {
    TrackerConfig cfg;
    std::vector<Tracklet> ts;
    for (int k = 0; k < 4; ++k) ts.emplace_back(k + 1, chain(1, 5, 100.0 * k, 0, axis(0)), cfg);
    const auto r = fcgtrack::upgma_cluster(ts, cfg);
    EXPECT_TRUE(r.merges.empty());
    EXPECT_EQ(partition_of(r.trajectories), partition_of(ts));
}

TEST(Upgma, OcclusionSplitIsRejoined) {
    TrackerConfig cfg;
    auto all = chain(1, 20, 100, 2, axis(0));
    std::vector<Detection> first(all.begin(), all.begin() + 8), second(all.begin() + 11, all.end());
    std::vector<Tracklet> ts;
    ts.emplace_back(1, first, cfg);
    ts.emplace_back(2, second, cfg);
    const auto out = fcgtrack::upgma_merge(ts, cfg);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].start_frame(), 1);
    EXPECT_EQ(out[0].end_frame(), 20);
    EXPECT_EQ(out[0].size(), 17u);
}

TEST(Upgma, InfeasibleMemberPoisonsClusterPair) {
    TrackerConfig cfg;
    std::vector<Tracklet> ts;
    ts.emplace_back(1, chain(1, 4, 200, 0, axis(0)), cfg);           // A
    ts.emplace_back(2, chain(6, 9, 200, 0, axis(0)), cfg);           // B, d(A,B) = 0
    ts.emplace_back(3, chain(7, 10, 200, 0, mix(0, 1, 0.6)), cfg);  // C overlaps B
    const double dac = *fcgtrack::tracklet_distance(ts[0], ts[2], cfg);
    EXPECT_NEAR(dac, 0.525 * 0.4, 1e-6);
    ASSERT_LT(dac, cfg.merge_cutoff);
    const auto r = fcgtrack::upgma_cluster(ts, cfg);
    ASSERT_EQ(r.merges.size(), 1u);
    EXPECT_EQ(r.merges[0].first_id, 1);
    EXPECT_EQ(r.merges[0].second_id, 2);
    ASSERT_EQ(r.trajectories.size(), 2u);
    EXPECT_EQ(r.trajectories[0].size(), 8u);
    EXPECT_EQ(r.trajectories[1].id(), 3);
}

TEST(Upgma, TiesBreakTowardLowestIdPair) {
    TrackerConfig cfg;
    std::vector<Tracklet> ts;
    // Three identical continuations of one tracklet are mutually infeasible,
    // so exactly one of them can join tracklet 1.
    ts.emplace_back(1, chain(1, 3, 200, 0, axis(0)), cfg);
    ts.emplace_back(4, chain(6, 8, 200, 0, axis(0)), cfg);
    ts.emplace_back(2, chain(6, 8, 200, 0, axis(0)), cfg);
    ts.emplace_back(3, chain(6, 8, 200, 0, axis(0)), cfg);
    const auto r = fcgtrack::upgma_cluster(ts, cfg);
    ASSERT_EQ(r.merges.size(), 1u);
    EXPECT_EQ(r.merges[0].first_id, 1);
    EXPECT_EQ(r.merges[0].second_id, 2);
}

TEST(Upgma, MatchesNaiveAverageLinkage) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        fcgtrack::Scenario s;
        s.n_targets = 6;
        s.n_frames = 60;
        s.det_noise_px = 3;
        s.embed_noise = 0.6;
        s.appearance_similarity = 0.8;
        s.random_occlusions = 4;
        s.seed = seed;
        TrackerConfig cfg;
        cfg.merge_cutoff = 0.35;
        const auto dets = synthetic_detections(s, cfg.det_threshold);
        std::vector<Tracklet> lifted;
        int next = 1;
        for (const auto w : fcgtrack::split_windows(dets, cfg.window_len)) {
            for (auto& t : fcgtrack::form_lifted_frames(w, cfg, next)) lifted.push_back(std::move(t));
            next = static_cast<int>(lifted.size()) + 1;
        }
        const auto r = fcgtrack::upgma_cluster(lifted, cfg);
        EXPECT_EQ(partition_of(r.trajectories), naive_upgma(lifted, cfg)) << "seed " << seed;
        for (const auto& m : r.merges) EXPECT_LT(m.distance, cfg.merge_cutoff);
    }
}

TEST(Upgma, DynamicMergeReplaysFrameOrderedHistory) {
    TrackerConfig cfg;
    auto a = chain(1, 4, 200, 0, axis(0));
    auto b = chain(7, 9, 200, 0, mix(0, 1, 0.9));
    b[1].confidence = 0.8;
    const Tracklet ta(1, a, cfg), tb(2, b, cfg);
    const Tracklet ab = fcgtrack::merge_tracklets(ta, tb, cfg);
    const Tracklet ba = fcgtrack::merge_tracklets(tb, ta, cfg);
    EXPECT_EQ(ab.representative(), ba.representative());
    std::vector<Detection> all = a;
    all.insert(all.end(), b.begin(), b.end());
    EXPECT_EQ(ab.representative(), Tracklet(9, all, cfg).representative());
}

TEST(SplitWindows, BlocksFromFirstFrame) {
    std::vector<Detection> ds;
    for (int f : {3, 3, 4, 8, 9, 10, 20}) ds.push_back(det(f, {0, 0, 1, 1}, axis(0)));
    const auto w = fcgtrack::split_windows(ds, 6);
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[0].size(), 4u);  // frames 3..8
    EXPECT_EQ(w[1].size(), 2u);  // frames 9..14
    EXPECT_EQ(w[2].size(), 1u);
}

TEST(TrackSequence, EmptyInput) { EXPECT_TRUE(fcgtrack::track_sequence({}, TrackerConfig{}).empty()); }

TEST(TrackSequence, PartitionConsistencyAndIds) {
    fcgtrack::Scenario s;
    s.n_targets = 10;
    s.n_frames = 80;
    s.det_noise_px = 2;
    s.embed_noise = 0.5;
    s.appearance_similarity = 0.6;
    s.random_occlusions = 6;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        s.seed = seed;
        const auto dets = synthetic_detections(s, 0.7);
        const auto out = fcgtrack::track_sequence(dets, TrackerConfig{});
        std::multiset<int> seen;
        int expected_id = 1;
        for (const auto& t : out) {
            EXPECT_EQ(t.id(), expected_id++);
            std::set<int> frames;
            for (const auto& d : t.detections()) {
                seen.insert(d.source_index);
                EXPECT_TRUE(frames.insert(d.frame).second);
            }
        }
        std::multiset<int> input;
        for (const auto& d : dets) input.insert(d.source_index);
        EXPECT_EQ(seen, input);
    }
}

TEST(TrackSequence, RejectsInvalidConfig) {
    TrackerConfig cfg;
    cfg.velocity_window = 1;
    EXPECT_THROW(fcgtrack::track_sequence({}, cfg), std::invalid_argument);
}
