#include "fcgtrack/mot_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fcgtrack {

namespace {

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    for (;;) {
        const std::size_t comma = line.find(',');
        fields.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return fields;
}

double to_double(std::string_view field, const char* name, const std::string& path, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw ParseError(path, line, std::string("bad ") + name + " value '" + std::string(field) + "'");
    }
    return v;
}

// Accepts "7" and "7.0"-style integers (some tools write frames as floats).
int to_int(std::string_view field, const char* name, const std::string& path, std::size_t line) {
    const double v = to_double(field, name, path, line);
    if (v != std::floor(v) || std::abs(v) > 2e9) {
        throw ParseError(path, line, std::string("bad ") + name + " value '" + std::string(field) + "'");
    }
    return static_cast<int>(v);
}

void append_number(std::string& out, double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.append(buf.data(), ptr);
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        const std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (trim(line).empty()) continue;
        fn(trim(line), line_no);
    }
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

constexpr std::string_view kMagic = "EMB1";

EmbeddingTable parse_binary_embeddings(const std::string& bytes, const std::string& path) {
    const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
    if (bytes.size() < 12) throw IoError(path + ": embedding header truncated");
    const std::uint32_t dim = get_u32(data + 4);
    const std::uint32_t rows = get_u32(data + 8);
    const std::size_t record = 8 + 4 * static_cast<std::size_t>(dim);
    const std::size_t expected = 12 + record * rows;
    if (bytes.size() != expected) {
        throw IoError(path + ": embedding file holds " + std::to_string(bytes.size()) + " bytes, header implies " +
                      std::to_string(expected) + " (D=" + std::to_string(dim) + ", R=" + std::to_string(rows) + ")");
    }
    EmbeddingTable table(dim);
    const unsigned char* p = data + 12;
    for (std::uint32_t r = 0; r < rows; ++r, p += record) {
        const EmbeddingKey key{static_cast<int>(get_u32(p)), static_cast<int>(get_u32(p + 4))};
        std::vector<float> values(dim);
        for (std::uint32_t k = 0; k < dim; ++k) values[k] = std::bit_cast<float>(get_u32(p + 8 + 4 * k));
        try {
            table.insert(key, std::move(values));
        } catch (const std::invalid_argument& e) {
            throw IoError(path + ": record " + std::to_string(r) + ": " + e.what());
        }
    }
    return table;
}

EmbeddingTable parse_csv_embeddings(const std::string& text, const std::string& path) {
    EmbeddingTable table;
    bool first = true;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        const auto fields = split_fields(line);
        if (fields.size() < 3) throw ParseError(path, line_no, "embedding row needs frame,det_index,values...");
        if (first) {
            table = EmbeddingTable(fields.size() - 2);
            first = false;
        }
        if (fields.size() - 2 != table.dim()) {
            throw ParseError(path, line_no, "embedding row has " + std::to_string(fields.size() - 2) +
                                                " values, expected " + std::to_string(table.dim()));
        }
        const EmbeddingKey key{to_int(fields[0], "frame", path, line_no),
                               to_int(fields[1], "det_index", path, line_no)};
        std::vector<float> values;
        values.reserve(table.dim());
        for (std::size_t k = 2; k < fields.size(); ++k) {
            values.push_back(static_cast<float>(to_double(fields[k], "embedding", path, line_no)));
        }
        try {
            table.insert(key, std::move(values));
        } catch (const std::invalid_argument& e) {
            throw ParseError(path, line_no, e.what());
        }
    });
    return table;
}

}  // namespace

MotRow parse_mot_row(std::string_view text, std::size_t min_columns, std::size_t max_columns,
                     const std::string& path, std::size_t line) {
    const auto f = split_fields(text);
    if (f.size() < min_columns || f.size() > max_columns) {
        throw ParseError(path, line, "expected " + std::to_string(min_columns) + "-" + std::to_string(max_columns) +
                                         " columns, found " + std::to_string(f.size()));
    }
    MotRow row;
    row.frame = to_int(f[0], "frame", path, line);
    row.id = to_int(f[1], "id", path, line);
    row.box = BBox{to_double(f[2], "left", path, line), to_double(f[3], "top", path, line),
                   to_double(f[4], "width", path, line), to_double(f[5], "height", path, line)};
    if (f.size() > 6) row.conf = to_double(f[6], "conf", path, line);
    if (f.size() > 7) row.x = to_double(f[7], "x", path, line);
    if (f.size() > 8) row.y = to_double(f[8], "y", path, line);
    if (f.size() > 9) row.z = to_double(f[9], "z", path, line);
    if (row.frame < 1) throw ParseError(path, line, "frame must be >= 1");
    if (row.box.width < 0.0 || row.box.height < 0.0) throw ParseError(path, line, "negative box size");
    return row;
}

std::string format_mot_row(const MotRow& row) {
    std::string out = std::to_string(row.frame);
    out += ',';
    out += std::to_string(row.id);
    for (double v : {row.box.left, row.box.top, row.box.width, row.box.height, row.conf, row.x, row.y, row.z}) {
        out += ',';
        append_number(out, v);
    }
    return out;
}

std::vector<MotRow> read_mot_rows(const std::filesystem::path& path, std::size_t min_columns,
                                  std::size_t max_columns) {
    const std::string text = read_all(path);
    const std::string name = path.string();
    std::vector<MotRow> rows;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        rows.push_back(parse_mot_row(line, min_columns, max_columns, name, line_no));
    });
    return rows;
}

void write_mot_rows(const std::filesystem::path& path, std::span<const MotRow> rows) {
    std::string text;
    for (const MotRow& r : rows) {
        text += format_mot_row(r);
        text += '\n';
    }
    auto out = open_for_write(path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    finish_write(out, path);
}

void EmbeddingTable::insert(EmbeddingKey key, std::vector<float> values) {
    if (values.size() != dim_) {
        throw std::invalid_argument("embedding has " + std::to_string(values.size()) + " values, expected " +
                                    std::to_string(dim_));
    }
    if (!rows_.emplace(key, std::move(values)).second) {
        throw std::invalid_argument("duplicate embedding for frame " + std::to_string(key.frame) + ", index " +
                                    std::to_string(key.det_index));
    }
}

const std::vector<float>* EmbeddingTable::find(EmbeddingKey key) const {
    const auto it = rows_.find(key);
    return it == rows_.end() ? nullptr : &it->second;
}

EmbeddingTable read_embeddings(const std::filesystem::path& path) {
    const std::string bytes = read_all(path);
    if (bytes.compare(0, kMagic.size(), kMagic) == 0) return parse_binary_embeddings(bytes, path.string());
    return parse_csv_embeddings(bytes, path.string());
}

void write_embeddings(const std::filesystem::path& path, const EmbeddingTable& table) {
    std::string bytes(kMagic);
    put_u32(bytes, static_cast<std::uint32_t>(table.dim()));
    put_u32(bytes, static_cast<std::uint32_t>(table.size()));
    for (const auto& [key, values] : table.rows()) {
        put_u32(bytes, static_cast<std::uint32_t>(key.frame));
        put_u32(bytes, static_cast<std::uint32_t>(key.det_index));
        for (float v : values) put_u32(bytes, std::bit_cast<std::uint32_t>(v));
    }
    auto out = open_for_write(path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    finish_write(out, path);
}

void write_embeddings_csv(const std::filesystem::path& path, const EmbeddingTable& table) {
    std::string text;
    for (const auto& [key, values] : table.rows()) {
        text += std::to_string(key.frame);
        text += ',';
        text += std::to_string(key.det_index);
        for (float v : values) {
            text += ',';
            std::array<char, 32> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
            text.append(buf.data(), ptr);
        }
        text += '\n';
    }
    auto out = open_for_write(path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    finish_write(out, path);
}

std::vector<Detection> join_detections(std::span<const MotRow> rows, const EmbeddingTable& embeddings, double sigma,
                                       const std::string& source) {
    std::unordered_map<int, int> rank_in_frame;
    std::vector<Detection> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const MotRow& row = rows[i];
        const int rank = rank_in_frame[row.frame]++;
        if (row.conf < sigma) continue;
        const auto* values = embeddings.find({row.frame, rank});
        if (values == nullptr) {
            throw IoError((source.empty() ? std::string("<detections>") : source) + ": no embedding for frame " +
                          std::to_string(row.frame) + ", index " + std::to_string(rank));
        }
        Embedding e(*values);
        if (!e.normalize()) {
            throw EmbeddingError("zero embedding for frame " + std::to_string(row.frame) + ", index " +
                                 std::to_string(rank));
        }
        out.push_back(Detection{row.frame, row.box, row.conf, std::move(e), static_cast<int>(i)});
    }
    std::stable_sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) { return a.frame < b.frame; });
    return out;
}

std::vector<Detection> read_detections(const std::filesystem::path& det_path, const EmbeddingTable& embeddings,
                                       double sigma) {
    const auto rows = read_mot_rows(det_path, 7, 10);
    return join_detections(rows, embeddings, sigma, det_path.string());
}

std::vector<Detection> read_detections(const std::filesystem::path& det_path, const std::filesystem::path& emb_path,
                                       double sigma) {
    return read_detections(det_path, read_embeddings(emb_path), sigma);
}

std::vector<MotRow> trajectories_to_rows(std::span<const Tracklet> trajectories) {
    std::vector<MotRow> rows;
    std::set<int> ids;
    for (const Tracklet& t : trajectories) {
        if (t.id() < 1) throw std::invalid_argument("trajectory ids must be positive");
        if (!ids.insert(t.id()).second) throw std::invalid_argument("duplicate trajectory id " + std::to_string(t.id()));
        for (const Detection& d : t.detections()) {
            rows.push_back(MotRow{d.frame, t.id(), d.box, d.confidence, -1.0, -1.0, -1.0});
        }
    }
    std::sort(rows.begin(), rows.end(), [](const MotRow& a, const MotRow& b) {
        return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
    });
    return rows;
}

void write_results(std::span<const Tracklet> trajectories, const std::filesystem::path& path) {
    const auto rows = trajectories_to_rows(trajectories);
    write_mot_rows(path, rows);
}

std::vector<MotRow> read_results(const std::filesystem::path& path) {
    const std::string text = read_all(path);
    const std::string name = path.string();
    std::vector<MotRow> rows;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        MotRow row = parse_mot_row(line, 7, 10, name, line_no);
        if (row.id < 1) throw ParseError(name, line_no, "result id must be >= 1");
        rows.push_back(row);
    });
    return rows;
}

std::vector<MotRow> read_ground_truth(const std::filesystem::path& path) {
    const std::string text = read_all(path);
    const std::string name = path.string();
    std::vector<MotRow> rows;
    for_each_line(text, [&](std::string_view line, std::size_t line_no) {
        MotRow row = parse_mot_row(line, 9, 10, name, line_no);
        if (row.id < 1) throw ParseError(name, line_no, "ground-truth id must be >= 1");
        rows.push_back(row);
    });
    std::stable_sort(rows.begin(), rows.end(), [](const MotRow& a, const MotRow& b) { return a.frame < b.frame; });
    return rows;
}

}  // namespace fcgtrack
