#pragma once

#include <span>
#include <string>
#include <vector>

#include "fcgtrack/mot_io.hpp"

namespace fcgtrack {

/// CLEAR-MOT and identity counts for one sequence (or an aggregate). Ratios
/// are derived from the counts so aggregates stay consistent.
struct EvalReport {
    std::string name;
    long gt_count = 0;
    long pred_count = 0;
    long matches = 0;
    long fp = 0;
    long fn = 0;
    long idsw = 0;
    long idtp = 0;
    long idfp = 0;
    long idfn = 0;

    /// 1 - (FP + FN + IDSW) / GT. With no ground truth the denominator is 1.
    double mota() const;
    double recall() const;
    double precision() const;
    double idf1() const;
    double idp() const;
    double idr() const;
};

/// Frame-by-frame CLEAR matching at IoU >= iou_threshold: last known matches
/// are kept while still above threshold, then the remaining pairs are
/// assigned to maximise total IoU. Fills the CLEAR fields only.
EvalReport clear_mot(std::span<const MotRow> gt, std::span<const MotRow> results,
                     double iou_threshold = 0.5);

/// Global one-to-one identity matching maximising the number of co-located
/// frames (IoU >= iou_threshold). Fills the ID fields and the box counts.
EvalReport identity_metrics(std::span<const MotRow> gt, std::span<const MotRow> results,
                            double iou_threshold = 0.5);

/// Both of the above.
EvalReport evaluate(const std::string& name, std::span<const MotRow> gt,
                    std::span<const MotRow> results, double iou_threshold = 0.5);

/// Sums counts; named "AGGREGATE".
EvalReport aggregate(std::span<const EvalReport> reports);

/// Aligned text table, one line per report.
std::string format_report_table(std::span<const EvalReport> reports);

/// CSV with a header row and one row per report.
std::string format_report_csv(std::span<const EvalReport> reports);

}  // namespace fcgtrack
