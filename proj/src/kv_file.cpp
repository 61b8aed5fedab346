#include "fcgtrack/kv_file.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fcgtrack/error.hpp"

namespace fcgtrack {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::string normalize_key(std::string_view key) {
    std::string out(trim(key));
    for (char& c : out) {
        c = c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<KvEntry> parse_kv_text(std::string_view text, const std::string& source) {
    std::vector<KvEntry> entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
        std::string key = normalize_key(line.substr(0, eq));
        if (key.empty()) throw ParseError(source, line_no, "empty key");
        entries.push_back({std::move(key), std::string(trim(line.substr(eq + 1))), line_no});
    }
    return entries;
}

std::vector<KvEntry> read_kv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_kv_text(buffer.str(), path.string());
}

double kv_to_double(const KvEntry& entry, const std::string& source) {
    double v = 0.0;
    const char* begin = entry.value.data();
    const char* end = begin + entry.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ParseError(source, entry.line, "'" + entry.key + "' expects a number, got '" + entry.value + "'");
    }
    return v;
}

int kv_to_int(const KvEntry& entry, const std::string& source) {
    int v = 0;
    const char* begin = entry.value.data();
    const char* end = begin + entry.value.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(source, entry.line, "'" + entry.key + "' expects an integer, got '" + entry.value + "'");
    }
    return v;
}

bool kv_to_bool(const KvEntry& entry, const std::string& source) {
    std::string v = normalize_key(entry.value);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ParseError(source, entry.line, "'" + entry.key + "' expects a boolean, got '" + entry.value + "'");
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace fcgtrack
