#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcgtrack/association.hpp"
#include "fcgtrack/error.hpp"

namespace fcgtrack {

/// One line of a MOT Challenge text file:
///   frame,id,left,top,width,height,conf,x,y,z
/// Ground-truth files reuse x and y for class and visibility.
struct MotRow {
    int frame = 1;
    int id = -1;
    BBox box;
    double conf = 1.0;
    double x = -1.0;
    double y = -1.0;
    double z = -1.0;

    friend bool operator==(const MotRow&, const MotRow&) = default;
};

/// Parses one comma-separated row with between min_columns and max_columns
/// fields. Throws ParseError tagged with `path` and `line`.
MotRow parse_mot_row(std::string_view text, std::size_t min_columns, std::size_t max_columns,
                     const std::string& path, std::size_t line);

/// Renders a row with all 10 columns, shortest round-trip decimals.
std::string format_mot_row(const MotRow& row);

/// Reads every non-blank line; rows keep file order.
std::vector<MotRow> read_mot_rows(const std::filesystem::path& path, std::size_t min_columns,
                                  std::size_t max_columns);
void write_mot_rows(const std::filesystem::path& path, std::span<const MotRow> rows);

// --- embedding sidecar ------------------------------------------------------
//
// Binary layout, little-endian:
//   "EMB1" | u32 D | u32 R | R x (u32 frame, u32 det_index, D x f32)
// A CSV fallback ("frame,det_index,v0,...,v{D-1}" per line) is accepted on
// input; files not starting with the magic are read as CSV.

struct EmbeddingKey {
    int frame = 0;
    int det_index = 0;
    auto operator<=>(const EmbeddingKey&) const = default;
};

class EmbeddingTable {
public:
    explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return rows_.size(); }

    /// Throws std::invalid_argument on a duplicate key or wrong dimension.
    void insert(EmbeddingKey key, std::vector<float> values);
    const std::vector<float>* find(EmbeddingKey key) const;

    const std::map<EmbeddingKey, std::vector<float>>& rows() const { return rows_; }

    friend bool operator==(const EmbeddingTable&, const EmbeddingTable&) = default;

private:
    std::size_t dim_;
    std::map<EmbeddingKey, std::vector<float>> rows_;
};

EmbeddingTable read_embeddings(const std::filesystem::path& path);
void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table);
/// Human-readable dump in the CSV fallback format.
void write_embeddings_csv(const std::filesystem::path& path, const EmbeddingTable& table);

// --- detections, results, ground truth ---------------------------------------

/// Reads a MOT detection file (7 to 10 columns) and joins every row whose
/// confidence is >= sigma with its embedding, keyed by (frame, 0-based rank
/// of the row within its frame in file order). Embeddings are normalised.
/// Output is frame-sorted, stable within a frame.
std::vector<Detection> read_detections(const std::filesystem::path& det_path,
                                       const EmbeddingTable& embeddings, double sigma);

/// The join behind read_detections, for rows already in memory (file order).
/// `source` names the input in diagnostics.
std::vector<Detection> join_detections(std::span<const MotRow> rows, const EmbeddingTable& embeddings,
                                       double sigma, const std::string& source = {});
std::vector<Detection> read_detections(const std::filesystem::path& det_path,
                                       const std::filesystem::path& emb_path, double sigma);

/// Result rows for trajectories, sorted by (frame, id). Ids must be positive
/// and unique.
std::vector<MotRow> trajectories_to_rows(std::span<const Tracklet> trajectories);
void write_results(std::span<const Tracklet> trajectories, const std::filesystem::path& path);

/// Tracker output (7 to 10 columns, id >= 1).
std::vector<MotRow> read_results(const std::filesystem::path& path);

/// Ground truth in the 9- or 10-column variants; rows must have id >= 1.
/// Output is frame-sorted, stable within a frame.
std::vector<MotRow> read_ground_truth(const std::filesystem::path& path);

}  // namespace fcgtrack
