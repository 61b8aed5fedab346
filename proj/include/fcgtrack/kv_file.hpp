#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fcgtrack {

// Plain-text "key = value" files: one entry per line, '#' starts a comment,
// keys may repeat. Keys are normalised to lower case with '-' read as '_'.

struct KvEntry {
    std::string key;
    std::string value;
    std::size_t line = 0;
};

std::vector<KvEntry> parse_kv_text(std::string_view text, const std::string& source = {});
std::vector<KvEntry> read_kv_file(const std::filesystem::path& path);

double kv_to_double(const KvEntry& entry, const std::string& source = {});
int kv_to_int(const KvEntry& entry, const std::string& source = {});
bool kv_to_bool(const KvEntry& entry, const std::string& source = {});

std::string normalize_key(std::string_view key);

/// Shortest decimal that reads back to the same double.
std::string format_number(double v);

}  // namespace fcgtrack
