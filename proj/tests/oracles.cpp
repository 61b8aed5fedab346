#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace oracle {

namespace {

long cell_index(double coord) { return std::lround(coord / kCell); }

bool covers(const fcgtrack::BBox& box, double x, double y) {
    return x > box.left && x < box.left + box.width && y > box.top && y < box.top + box.height;
}

}  // namespace

RasterAreas raster_areas(const fcgtrack::BBox& a, const fcgtrack::BBox& b) {
    const double x0 = std::min(a.left, b.left);
    const double y0 = std::min(a.top, b.top);
    const double x1 = std::max(a.left + a.width, b.left + b.width);
    const double y1 = std::max(a.top + a.height, b.top + b.height);
    const long i0 = cell_index(x0), i1 = cell_index(x1);
    const long j0 = cell_index(y0), j1 = cell_index(y1);

    long na = 0, nb = 0, ni = 0, nu = 0, nh = 0;
    for (long j = j0; j < j1; ++j) {
        const double y = (static_cast<double>(j) + 0.5) * kCell;
        for (long i = i0; i < i1; ++i) {
            const double x = (static_cast<double>(i) + 0.5) * kCell;
            const bool in_a = covers(a, x, y);
            const bool in_b = covers(b, x, y);
            na += in_a;
            nb += in_b;
            ni += in_a && in_b;
            nu += in_a || in_b;
            ++nh;
        }
    }
    const double cell_area = kCell * kCell;
    return {na * cell_area, nb * cell_area, ni * cell_area, nu * cell_area, nh * cell_area};
}

double raster_iou(const RasterAreas& r) { return r.uni > 0.0 ? r.inter / r.uni : 0.0; }

double raster_giou(const RasterAreas& r) {
    if (r.hull <= 0.0) return 0.0;
    return raster_iou(r) - (r.hull - r.uni) / r.hull;
}

double assignment_cost(const fcgtrack::CostMatrix& costs, std::span<const int> row_to_col) {
    double total = 0.0;
    for (std::size_t r = 0; r < row_to_col.size(); ++r) {
        if (row_to_col[r] >= 0) total += costs(r, static_cast<std::size_t>(row_to_col[r]));
    }
    return total;
}

double brute_force_assignment_cost(const fcgtrack::CostMatrix& costs) {
    // Permute the longer side and pair it with the shorter one.
    const bool transpose = costs.rows > costs.cols;
    const std::size_t small = transpose ? costs.cols : costs.rows;
    const std::size_t large = transpose ? costs.rows : costs.cols;
    std::vector<std::size_t> perm(large);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (std::size_t s = 0; s < small; ++s) {
            total += transpose ? costs(perm[s], s) : costs(s, perm[s]);
        }
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return small == 0 ? 0.0 : best;
}

long brute_force_idtp(std::span<const fcgtrack::MotRow> gt, std::span<const fcgtrack::MotRow> res,
                      double iou_threshold) {
    std::vector<int> gt_ids, res_ids;
    for (const auto& r : gt) gt_ids.push_back(r.id);
    for (const auto& r : res) res_ids.push_back(r.id);
    std::sort(gt_ids.begin(), gt_ids.end());
    gt_ids.erase(std::unique(gt_ids.begin(), gt_ids.end()), gt_ids.end());
    std::sort(res_ids.begin(), res_ids.end());
    res_ids.erase(std::unique(res_ids.begin(), res_ids.end()), res_ids.end());

    // Co-located frame count for every (gt id, prediction id) pair.
    std::map<std::pair<int, int>, long> overlap;
    for (const auto& g : gt) {
        for (const auto& p : res) {
            if (g.frame == p.frame && fcgtrack::iou(g.box, p.box) >= iou_threshold) ++overlap[{g.id, p.id}];
        }
    }

    long best = 0;
    std::vector<bool> used(res_ids.size(), false);
    std::function<void(std::size_t, long)> rec = [&](std::size_t gi, long acc) {
        if (gi == gt_ids.size()) {
            best = std::max(best, acc);
            return;
        }
        rec(gi + 1, acc);  // gt id left unmatched
        for (std::size_t k = 0; k < res_ids.size(); ++k) {
            if (used[k]) continue;
            used[k] = true;
            const auto it = overlap.find({gt_ids[gi], res_ids[k]});
            rec(gi + 1, acc + (it == overlap.end() ? 0 : it->second));
            used[k] = false;
        }
    };
    rec(0, 0);
    return best;
}

std::vector<IdentityInstance> small_identity_instances(int per_shape) {
    std::vector<IdentityInstance> out;
    for (int n_gt = 1; n_gt <= 3; ++n_gt) {
        for (int n_res = 0; n_res <= 3; ++n_res) {
            for (int frames = 1; frames <= 6; ++frames) {
                for (int v = 0; v < per_shape; ++v) {
                    std::mt19937_64 rng(static_cast<std::uint64_t>(((n_gt * 7 + n_res) * 11 + frames) * 101 + v));
                    IdentityInstance inst;
                    std::uniform_int_distribution<int> choice(0, 5);
                    for (int f = 1; f <= frames; ++f) {
                        std::vector<fcgtrack::BBox> gt_boxes;
                        for (int g = 1; g <= n_gt; ++g) {
                            if (choice(rng) == 0) continue;  // target absent
                            const fcgtrack::BBox b{100.0 * g, 10.0 * f, 20.0, 40.0};
                            inst.gt.push_back({f, g, b, 1.0, 1.0, 1.0, -1.0});
                            gt_boxes.push_back(b);
                        }
                        for (int p = 1; p <= n_res; ++p) {
                            const int c = choice(rng);
                            fcgtrack::BBox b{900.0 + 50.0 * p, 0.0, 20.0, 40.0};  // far from every target
                            if (c == 0) continue;
                            if (!gt_boxes.empty() && c >= 2) {
                                b = gt_boxes[rng() % gt_boxes.size()];
                                if (c == 4) b.left += 3.0;   // IoU 17/23, still a match
                                if (c == 5) b.left += 12.0;  // IoU 8/32, not a match
                            }
                            inst.res.push_back({f, p, b, 1.0, -1.0, -1.0, -1.0});
                        }
                    }
                    out.push_back(std::move(inst));
                }
            }
        }
    }
    return out;
}

}  // namespace oracle
