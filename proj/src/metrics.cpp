#include "fcgtrack/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "fcgtrack/assignment.hpp"

namespace fcgtrack {

namespace {

double ratio(long num, long den) { return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0; }

std::map<int, std::vector<const MotRow*>> by_frame(std::span<const MotRow> rows) {
    std::map<int, std::vector<const MotRow*>> frames;
    for (const MotRow& r : rows) frames[r.frame].push_back(&r);
    return frames;
}

}  // namespace

double EvalReport::mota() const {
    return 1.0 - static_cast<double>(fp + fn + idsw) / static_cast<double>(std::max(gt_count, 1L));
}
double EvalReport::recall() const { return ratio(matches, gt_count); }
double EvalReport::precision() const { return ratio(matches, pred_count); }
double EvalReport::idf1() const { return ratio(2 * idtp, 2 * idtp + idfp + idfn); }
double EvalReport::idp() const { return ratio(idtp, idtp + idfp); }
double EvalReport::idr() const { return ratio(idtp, idtp + idfn); }

EvalReport clear_mot(std::span<const MotRow> gt, std::span<const MotRow> results, double iou_threshold) {
    EvalReport report;
    report.gt_count = static_cast<long>(gt.size());
    report.pred_count = static_cast<long>(results.size());

    const auto gt_frames = by_frame(gt);
    const auto pred_frames = by_frame(results);
    std::map<int, int> last_match;  // gt id -> prediction id, persists across frames

    std::vector<int> frames;
    for (const auto& [f, rows] : gt_frames) frames.push_back(f);
    for (const auto& [f, rows] : pred_frames) frames.push_back(f);
    std::sort(frames.begin(), frames.end());
    frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

    static const std::vector<const MotRow*> kEmpty;
    for (int frame : frames) {
        const auto git = gt_frames.find(frame);
        const auto pit = pred_frames.find(frame);
        const auto& g = git == gt_frames.end() ? kEmpty : git->second;
        const auto& p = pit == pred_frames.end() ? kEmpty : pit->second;

        std::vector<char> g_done(g.size(), 0);
        std::vector<char> p_done(p.size(), 0);
        long matched = 0;

        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto lm = last_match.find(g[i]->id);
            if (lm == last_match.end()) continue;
            for (std::size_t j = 0; j < p.size(); ++j) {
                if (p_done[j] || p[j]->id != lm->second) continue;
                if (iou(g[i]->box, p[j]->box) >= iou_threshold) {
                    g_done[i] = p_done[j] = 1;
                    ++matched;
                }
                break;
            }
        }

        std::vector<std::size_t> gi;
        std::vector<std::size_t> pj;
        for (std::size_t i = 0; i < g.size(); ++i) if (!g_done[i]) gi.push_back(i);
        for (std::size_t j = 0; j < p.size(); ++j) if (!p_done[j]) pj.push_back(j);
        if (!gi.empty() && !pj.empty()) {
            CostMatrix costs(gi.size(), pj.size(), 2.0);
            for (std::size_t r = 0; r < gi.size(); ++r) {
                for (std::size_t c = 0; c < pj.size(); ++c) {
                    const double v = iou(g[gi[r]]->box, p[pj[c]]->box);
                    if (v >= iou_threshold) costs(r, c) = 1.0 - v;
                }
            }
            const auto assignment = solve_gated_assignment(costs, 1.0);
            for (std::size_t r = 0; r < gi.size(); ++r) {
                if (assignment[r] < 0) continue;
                const MotRow& gt_row = *g[gi[r]];
                const MotRow& pred_row = *p[pj[static_cast<std::size_t>(assignment[r])]];
                const auto lm = last_match.find(gt_row.id);
                if (lm != last_match.end() && lm->second != pred_row.id) ++report.idsw;
                last_match[gt_row.id] = pred_row.id;
                ++matched;
            }
        }
        report.matches += matched;
    }
    report.fp = report.pred_count - report.matches;
    report.fn = report.gt_count - report.matches;
    return report;
}

EvalReport identity_metrics(std::span<const MotRow> gt, std::span<const MotRow> results, double iou_threshold) {
    EvalReport report;
    report.gt_count = static_cast<long>(gt.size());
    report.pred_count = static_cast<long>(results.size());

    std::map<int, std::size_t> gt_index;
    std::map<int, std::size_t> pred_index;
    for (const MotRow& r : gt) gt_index.emplace(r.id, 0);
    for (const MotRow& r : results) pred_index.emplace(r.id, 0);
    std::size_t k = 0;
    for (auto& [id, idx] : gt_index) idx = k++;
    k = 0;
    for (auto& [id, idx] : pred_index) idx = k++;

    long idtp = 0;
    if (!gt_index.empty() && !pred_index.empty()) {
        CostMatrix overlap(gt_index.size(), pred_index.size(), 0.0);
        const auto gt_frames = by_frame(gt);
        const auto pred_frames = by_frame(results);
        for (const auto& [frame, g] : gt_frames) {
            const auto pit = pred_frames.find(frame);
            if (pit == pred_frames.end()) continue;
            for (const MotRow* a : g) {
                for (const MotRow* b : pit->second) {
                    if (iou(a->box, b->box) >= iou_threshold) {
                        overlap(gt_index.at(a->id), pred_index.at(b->id)) -= 1.0;
                    }
                }
            }
        }
        const auto assignment = solve_assignment(overlap);
        for (std::size_t r = 0; r < assignment.size(); ++r) {
            if (assignment[r] >= 0) idtp -= static_cast<long>(overlap(r, static_cast<std::size_t>(assignment[r])));
        }
    }
    report.idtp = idtp;
    report.idfn = report.gt_count - idtp;
    report.idfp = report.pred_count - idtp;
    return report;
}

EvalReport evaluate(const std::string& name, std::span<const MotRow> gt, std::span<const MotRow> results,
                    double iou_threshold) {
    EvalReport report = clear_mot(gt, results, iou_threshold);
    const EvalReport ids = identity_metrics(gt, results, iou_threshold);
    report.name = name;
    report.idtp = ids.idtp;
    report.idfp = ids.idfp;
    report.idfn = ids.idfn;
    return report;
}

EvalReport aggregate(std::span<const EvalReport> reports) {
    EvalReport total;
    total.name = "AGGREGATE";
    for (const EvalReport& r : reports) {
        total.gt_count += r.gt_count;
        total.pred_count += r.pred_count;
        total.matches += r.matches;
        total.fp += r.fp;
        total.fn += r.fn;
        total.idsw += r.idsw;
        total.idtp += r.idtp;
        total.idfp += r.idfp;
        total.idfn += r.idfn;
    }
    return total;
}

std::string format_report_table(std::span<const EvalReport> reports) {
    std::size_t width = 8;
    for (const auto& r : reports) width = std::max(width, r.name.size());
    std::string out;
    char line[512];
    std::snprintf(line, sizeof(line), "%-*s %8s %8s %8s %8s %8s %8s %7s %7s %6s %7s\n", static_cast<int>(width),
                  "sequence", "MOTA", "IDF1", "IDP", "IDR", "Recall", "Prcn", "FP", "FN", "IDSW", "GT");
    out += line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof(line), "%-*s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f %7ld %7ld %6ld %7ld\n",
                      static_cast<int>(width), r.name.c_str(), r.mota(), r.idf1(), r.idp(), r.idr(), r.recall(),
                      r.precision(), r.fp, r.fn, r.idsw, r.gt_count);
        out += line;
    }
    return out;
}

std::string format_report_csv(std::span<const EvalReport> reports) {
    std::string out =
        "sequence,MOTA,IDF1,IDP,IDR,Recall,Precision,FP,FN,IDSW,GT,Predictions,Matches,IDTP,IDFP,IDFN\n";
    char line[512];
    for (const auto& r : reports) {
        std::snprintf(line, sizeof(line), "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%ld,%ld,%ld,%ld,%ld,%ld,%ld,%ld,%ld\n",
                      r.name.c_str(), r.mota(), r.idf1(), r.idp(), r.idr(), r.recall(), r.precision(), r.fp, r.fn,
                      r.idsw, r.gt_count, r.pred_count, r.matches, r.idtp, r.idfp, r.idfn);
        out += line;
    }
    return out;
}

}  // namespace fcgtrack
