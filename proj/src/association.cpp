#include "fcgtrack/association.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "fcgtrack/assignment.hpp"

namespace fcgtrack {

namespace {

constexpr double kInfeasible = std::numeric_limits<double>::infinity();

void sort_by_frame(std::vector<Detection>& detections) {
    std::stable_sort(detections.begin(), detections.end(),
                     [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
}

}  // namespace

Tracklet::Tracklet(int id, std::vector<Detection> detections, const TrackerConfig& config)
    : id_(id),
      detections_(std::move(detections)),
      appearance_(config.appearance, config.ema()),
      motion_(config.velocity_window) {
    if (detections_.empty()) throw std::invalid_argument("a tracklet needs at least one detection");
    sort_by_frame(detections_);
    for (std::size_t i = 1; i < detections_.size(); ++i) {
        if (detections_[i].frame == detections_[i - 1].frame) {
            throw std::invalid_argument("tracklet " + std::to_string(id) + " has two detections in frame " +
                                        std::to_string(detections_[i].frame));
        }
    }
    for (const Detection& d : detections_) {
        appearance_.observe(d.frame, d.embedding, d.confidence);
        motion_.observe(d.frame, d.box);
    }
}

Tracklet merge_tracklets(const Tracklet& a, const Tracklet& b, const TrackerConfig& config) {
    std::vector<Detection> all = a.detections();
    all.insert(all.end(), b.detections().begin(), b.detections().end());
    return Tracklet(std::min(a.id(), b.id()), std::move(all), config);
}

std::vector<Tracklet> form_lifted_frames(std::span<const Detection> detections,
                                         const TrackerConfig& config, int first_id) {
    std::vector<std::size_t> order(detections.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detections[a].frame < detections[b].frame;
    });

    std::vector<std::vector<std::size_t>> chains;
    std::vector<std::size_t> open;  // chains whose last detection is in the previous frame
    int previous_frame = 0;
    bool have_previous = false;

    for (std::size_t begin = 0; begin < order.size();) {
        const int frame = detections[order[begin]].frame;
        std::size_t end = begin;
        while (end < order.size() && detections[order[end]].frame == frame) ++end;
        const std::span<const std::size_t> current(order.data() + begin, end - begin);

        std::vector<int> link(current.size(), -1);
        if (have_previous && frame == previous_frame + 1 && !open.empty()) {
            CostMatrix costs(open.size(), current.size());
            for (std::size_t r = 0; r < open.size(); ++r) {
                const Detection& tail = detections[chains[open[r]].back()];
                for (std::size_t c = 0; c < current.size(); ++c) {
                    costs(r, c) = cosine_distance(tail.embedding, detections[current[c]].embedding);
                }
            }
            const std::vector<int> match = solve_gated_assignment(costs, config.stage1_gate);
            for (std::size_t r = 0; r < match.size(); ++r) {
                if (match[r] >= 0) link[static_cast<std::size_t>(match[r])] = static_cast<int>(open[r]);
            }
        }

        std::vector<std::size_t> next_open;
        next_open.reserve(current.size());
        for (std::size_t c = 0; c < current.size(); ++c) {
            if (link[c] >= 0) {
                chains[static_cast<std::size_t>(link[c])].push_back(current[c]);
                next_open.push_back(static_cast<std::size_t>(link[c]));
            } else {
                chains.push_back({current[c]});
                next_open.push_back(chains.size() - 1);
            }
        }
        std::sort(next_open.begin(), next_open.end());
        open = std::move(next_open);
        previous_frame = frame;
        have_previous = true;
        begin = end;
    }

    std::vector<Tracklet> out;
    out.reserve(chains.size());
    int id = first_id;
    for (const auto& chain : chains) {
        std::vector<Detection> members;
        members.reserve(chain.size());
        for (std::size_t idx : chain) members.push_back(detections[idx]);
        out.emplace_back(id++, std::move(members), config);
    }
    return out;
}

TrackletSummary summarize(const Tracklet& t) {
    const auto samples = t.motion().samples();
    return TrackletSummary{t.start_frame(), t.end_frame(), t.detections().front().box,
                           std::vector<MotionSample>(samples.begin(), samples.end()),
                           t.representative()};
}

std::optional<double> tracklet_distance(const TrackletSummary& a, const TrackletSummary& b,
                                        const TrackerConfig& config) {
    if (a.start_frame <= b.end_frame && b.start_frame <= a.end_frame) return std::nullopt;
    const TrackletSummary& earlier = a.end_frame < b.start_frame ? a : b;
    const TrackletSummary& later = a.end_frame < b.start_frame ? b : a;
    const int gap = later.start_frame - earlier.end_frame;
    const BBox predicted = predict(earlier.motion, config.velocity_window, gap, config.freeze_size);
    const double spatial = spatial_distance(predicted, later.first_box, config.spatial);
    const double lambda = spatial_modulation(spatial, config.off);
    return lambda * cosine_distance(earlier.appearance, later.appearance);
}

std::optional<double> tracklet_distance(const Tracklet& a, const Tracklet& b,
                                        const TrackerConfig& config) {
    return tracklet_distance(summarize(a), summarize(b), config);
}

std::vector<double> tracklet_distance_matrix(std::span<const Tracklet> tracklets,
                                             const TrackerConfig& config) {
    const std::size_t n = tracklets.size();
    std::vector<TrackletSummary> summaries;
    summaries.reserve(n);
    for (const Tracklet& t : tracklets) summaries.push_back(summarize(t));

    std::vector<double> d(n * n, kInfeasible);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto dist = tracklet_distance(summaries[i], summaries[j], config);
            if (dist) d[i * n + j] = d[j * n + i] = *dist;
        }
    }
    return d;
}

namespace {

// Average-linkage state with a nearest-neighbour cache per active cluster.
class UpgmaState {
public:
    UpgmaState(std::vector<double> distances, std::vector<int> keys)
        : n_(keys.size()),
          sum_(std::move(distances)),
          size_(n_, 1),
          key_(std::move(keys)),
          active_(n_, 1),
          nn_(n_, kNone),
          nn_dist_(n_, kInfeasible) {
        for (std::size_t i = 0; i < n_; ++i) refresh(i);
    }

    struct Candidate {
        std::size_t i = kNone;
        std::size_t j = kNone;
        double distance = kInfeasible;
    };

    Candidate best() const {
        Candidate c;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!active_[i] || nn_[i] == kNone) continue;
            if (c.i == kNone || better(nn_dist_[i], i, nn_[i], c.distance, c.i, c.j)) {
                c = {i, nn_[i], nn_dist_[i]};
            }
        }
        return c;
    }

    // Folds cluster j into cluster i.
    void merge(std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < n_; ++k) {
            if (!active_[k] || k == i || k == j) continue;
            const double s = at(i, k) + at(j, k);  // infinity stays infinity
            at(i, k) = s;
            at(k, i) = s;
        }
        size_[i] += size_[j];
        key_[i] = std::min(key_[i], key_[j]);
        active_[j] = 0;
        nn_[j] = kNone;

        refresh(i);
        for (std::size_t k = 0; k < n_; ++k) {
            if (!active_[k] || k == i) continue;
            if (nn_[k] == i || nn_[k] == j) {
                refresh(k);
            } else {
                const double d = average(k, i);
                if (nn_[k] == kNone || better(d, k, i, nn_dist_[k], k, nn_[k])) {
                    if (d < kInfeasible) {
                        nn_[k] = i;
                        nn_dist_[k] = d;
                    }
                }
            }
        }
    }

    int key(std::size_t i) const { return key_[i]; }
    bool active(std::size_t i) const { return active_[i] != 0; }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    double& at(std::size_t i, std::size_t j) { return sum_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return sum_[i * n_ + j]; }

    double average(std::size_t i, std::size_t j) const {
        const double s = at(i, j);
        if (s == kInfeasible) return kInfeasible;
        return s / (static_cast<double>(size_[i]) * static_cast<double>(size_[j]));
    }

    std::pair<int, int> pair_key(std::size_t i, std::size_t j) const {
        return std::minmax(key_[i], key_[j]);
    }

    bool better(double d1, std::size_t i1, std::size_t j1, double d2, std::size_t i2,
                std::size_t j2) const {
        if (d1 != d2) return d1 < d2;
        return pair_key(i1, j1) < pair_key(i2, j2);
    }

    void refresh(std::size_t i) {
        nn_[i] = kNone;
        nn_dist_[i] = kInfeasible;
        for (std::size_t k = 0; k < n_; ++k) {
            if (k == i || !active_[k]) continue;
            const double d = average(i, k);
            if (d == kInfeasible) continue;
            if (nn_[i] == kNone || better(d, i, k, nn_dist_[i], i, nn_[i])) {
                nn_[i] = k;
                nn_dist_[i] = d;
            }
        }
    }

    std::size_t n_;
    std::vector<double> sum_;
    std::vector<std::size_t> size_;
    std::vector<int> key_;
    std::vector<char> active_;
    std::vector<std::size_t> nn_;
    std::vector<double> nn_dist_;
};

}  // namespace

ClusteringResult upgma_cluster(std::vector<Tracklet> tracklets, const TrackerConfig& config) {
    ClusteringResult result;
    const std::size_t n = tracklets.size();
    if (n == 0) return result;

    std::vector<int> keys;
    keys.reserve(n);
    for (const Tracklet& t : tracklets) keys.push_back(t.id());
    UpgmaState state(tracklet_distance_matrix(tracklets, config), keys);

    // members[i] lists the tracklets folded into cluster i.
    std::vector<std::vector<std::size_t>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {i};

    for (;;) {
        const auto c = state.best();
        if (c.i == std::numeric_limits<std::size_t>::max() || !(c.distance < config.merge_cutoff)) break;
        const int ki = state.key(c.i), kj = state.key(c.j);
        const int lo = std::min(ki, kj), hi = std::max(ki, kj);
        result.merges.push_back({lo, hi, c.distance});
        state.merge(c.i, c.j);
        members[c.i].insert(members[c.i].end(), members[c.j].begin(), members[c.j].end());
        members[c.j].clear();
    }

    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i) {
        if (state.active(i)) roots.push_back(i);
    }
    std::sort(roots.begin(), roots.end(),
              [&](std::size_t a, std::size_t b) { return state.key(a) < state.key(b); });

    result.trajectories.reserve(roots.size());
    for (std::size_t root : roots) {
        const auto& group = members[root];
        if (group.size() == 1) {
            result.trajectories.push_back(std::move(tracklets[group.front()]));
            continue;
        }
        std::vector<Detection> all;
        for (std::size_t m : group) {
            const auto& dets = tracklets[m].detections();
            all.insert(all.end(), dets.begin(), dets.end());
        }
        result.trajectories.emplace_back(state.key(root), std::move(all), config);
    }
    return result;
}

std::vector<Tracklet> upgma_merge(std::vector<Tracklet> tracklets, const TrackerConfig& config) {
    return upgma_cluster(std::move(tracklets), config).trajectories;
}

std::vector<std::span<const Detection>> split_windows(std::span<const Detection> sorted,
                                                      int window_len) {
    if (window_len < 1) throw std::invalid_argument("window length must be >= 1");
    std::vector<std::span<const Detection>> windows;
    if (sorted.empty()) return windows;
    const long long origin = sorted.front().frame;
    std::size_t begin = 0;
    while (begin < sorted.size()) {
        const long long block = (sorted[begin].frame - origin) / window_len;
        std::size_t end = begin;
        while (end < sorted.size() && (sorted[end].frame - origin) / window_len == block) ++end;
        windows.push_back(sorted.subspan(begin, end - begin));
        begin = end;
    }
    return windows;
}

std::vector<Tracklet> track_sequence(std::vector<Detection> detections, const TrackerConfig& config) {
    config.validate();
    if (detections.empty()) return {};
    sort_by_frame(detections);

    std::vector<Tracklet> lifted;
    int next_id = 1;
    for (const auto window : split_windows(detections, config.window_len)) {
        auto part = form_lifted_frames(window, config, next_id);
        next_id += static_cast<int>(part.size());
        for (Tracklet& t : part) lifted.push_back(std::move(t));
    }

    std::vector<Tracklet> trajectories = upgma_merge(std::move(lifted), config);
    std::sort(trajectories.begin(), trajectories.end(), [](const Tracklet& a, const Tracklet& b) {
        if (a.start_frame() != b.start_frame()) return a.start_frame() < b.start_frame();
        return a.detections().front().source_index < b.detections().front().source_index;
    });
    int id = 1;
    for (Tracklet& t : trajectories) t.set_id(id++);
    return trajectories;
}

}  // namespace fcgtrack
