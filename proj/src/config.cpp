#include "fcgtrack/config.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include "fcgtrack/error.hpp"

namespace fcgtrack {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("invalid tracker config: ") + what);
}


double parse_double(std::string_view key, std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(key) + " expects a number, got '" + std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument(std::string(key) + " expects an integer, got '" + std::string(text) + "'");
    }
    return v;
}

}  // namespace

void TrackerConfig::validate() const {
    require(window_len >= 1, "window must be >= 1");
    require(det_threshold >= 0.0 && det_threshold <= 1.0, "sigma must lie in [0, 1]");
    require(ema_sigma >= 0.0 && ema_sigma < 1.0, "ema_sigma must lie in [0, 1)");
    require(beta_f >= 0.0 && beta_f <= 1.0, "beta_f must lie in [0, 1]");
    require(off >= 0.0, "off must be >= 0");
    require(velocity_window >= 2, "n must be >= 2");
    require(merge_cutoff > 0.0, "merge_cutoff must be > 0");
    require(stage1_gate >= 0.0 && stage1_gate <= 2.0, "stage1_gate must lie in [0, 2]");
}

TrackerConfig preset_config(std::string_view name) {
    TrackerConfig c;
    if (name == "mot17") return c;
    if (name == "mot20") {
        c.beta_f = 0.66;
        c.off = 0.9;
        return c;
    }
    if (name == "dancetrack") {
        c.beta_f = 0.8;
        c.off = 0.1;
        return c;
    }
    if (name == "baseline") {
        c.appearance = AppearanceMode::kMedian;
        c.spatial = SpatialMode::kIou;
        c.velocity_window = 2;
        return c;
    }
    throw std::invalid_argument("unknown preset '" + std::string(name) +
                                "' (expected mot17|mot20|dancetrack|baseline)");
}

std::vector<std::string> preset_names() { return {"mot17", "mot20", "dancetrack", "baseline"}; }

bool set_config_value(TrackerConfig& c, std::string_view raw_key, std::string_view value) {
    const std::string key = normalize_key(raw_key);
    if (key == "window") {
        c.window_len = parse_int(key, value);
    } else if (key == "sigma") {
        // The ingest threshold and the EMA floor move together unless
        // ema_sigma is given explicitly afterwards.
        c.det_threshold = parse_double(key, value);
        c.ema_sigma = c.det_threshold;
    } else if (key == "det_threshold") {
        c.det_threshold = parse_double(key, value);
    } else if (key == "ema_sigma") {
        c.ema_sigma = parse_double(key, value);
    } else if (key == "beta_f") {
        c.beta_f = parse_double(key, value);
    } else if (key == "off") {
        c.off = parse_double(key, value);
    } else if (key == "n") {
        c.velocity_window = parse_int(key, value);
    } else if (key == "appearance") {
        c.appearance = parse_appearance_mode(value);
    } else if (key == "spatial") {
        c.spatial = parse_spatial_mode(value);
    } else if (key == "merge_cutoff") {
        c.merge_cutoff = parse_double(key, value);
    } else if (key == "stage1_gate") {
        c.stage1_gate = parse_double(key, value);
    } else if (key == "freeze_size") {
        const std::string v = normalize_key(value);
        if (v == "1" || v == "true" || v == "yes" || v == "on") {
            c.freeze_size = true;
        } else if (v == "0" || v == "false" || v == "no" || v == "off") {
            c.freeze_size = false;
        } else {
            throw std::invalid_argument("freeze_size expects a boolean, got '" + std::string(value) + "'");
        }
    } else {
        return false;
    }
    return true;
}

void apply_kv(TrackerConfig& config, const std::vector<KvEntry>& entries, const std::string& source) {
    for (const KvEntry& e : entries) {
        try {
            if (!set_config_value(config, e.key, e.value)) {
                throw ParseError(source, e.line, "unknown config key '" + e.key + "'");
            }
        } catch (const std::invalid_argument& err) {
            throw ParseError(source, e.line, err.what());
        }
    }
}

std::vector<std::pair<std::string, std::string>> to_kv_entries(const TrackerConfig& c) {
    return {
        {"window", std::to_string(c.window_len)},
        {"det_threshold", format_number(c.det_threshold)},
        {"ema_sigma", format_number(c.ema_sigma)},
        {"beta_f", format_number(c.beta_f)},
        {"off", format_number(c.off)},
        {"n", std::to_string(c.velocity_window)},
        {"appearance", std::string(to_string(c.appearance))},
        {"spatial", std::string(to_string(c.spatial))},
        {"merge_cutoff", format_number(c.merge_cutoff)},
        {"stage1_gate", format_number(c.stage1_gate)},
        {"freeze_size", c.freeze_size ? "true" : "false"},
    };
}

}  // namespace fcgtrack
