#include "fcgtrack/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "fcgtrack/association.hpp"
#include "fcgtrack/error.hpp"
#include "fcgtrack/log.hpp"
#include "fcgtrack/mot_io.hpp"
#include "fcgtrack/simd.hpp"

#ifndef FCGTRACK_VERSION
#define FCGTRACK_VERSION "dev"
#endif

namespace fcgtrack::cli {

namespace {

using Clock = std::chrono::steady_clock;
using Json = nlohmann::ordered_json;

constexpr const char* kHotaNote =
    "note: HOTA/DetA/AssA are not computed here; use the official TrackEval toolkit for those.";

// Flags that mirror TrackerConfig keys, in the order they are applied.
struct TrackerFlags {
    std::string preset = "mot17";
    std::optional<std::string> config_file;
    std::optional<std::string> window, sigma, ema_sigma, beta_f, off, n, appearance, spatial, merge_cutoff,
        stage1_gate, freeze_size;

    void attach(CLI::App& app) {
        app.add_option("--preset", preset, "Built-in preset: mot17|mot20|dancetrack|baseline")
            ->capture_default_str();
        app.add_option("--config", config_file, "key = value file applied over the preset");
        app.add_option("--window", window, "Stage-1 window length (frames)");
        app.add_option("--sigma", sigma, "Detection threshold; also sets the EMA confidence floor");
        app.add_option("--ema-sigma", ema_sigma, "EMA confidence floor, if different from --sigma");
        app.add_option("--beta-f", beta_f, "EMA base weight beta_f");
        app.add_option("--off", off, "Spatial modulation offset");
        app.add_option("--n", n, "Velocity averaging window N (frames)");
        app.add_option("--appearance", appearance, "dynamic|median|max|mean");
        app.add_option("--spatial", spatial, "iou|giou|wgiou|hgiou|dgiou");
        app.add_option("--merge-cutoff", merge_cutoff, "Clustering stop distance");
        app.add_option("--stage1-gate", stage1_gate, "Max cosine distance for stage-1 links");
        app.add_option("--freeze-size", freeze_size, "Extrapolate centers only (true|false)");
    }

    std::vector<std::pair<std::string, std::string>> overrides() const {
        std::vector<std::pair<std::string, std::string>> out;
        auto add = [&](const char* key, const std::optional<std::string>& v) {
            if (v) out.emplace_back(key, *v);
        };
        add("window", window);
        add("sigma", sigma);
        add("ema_sigma", ema_sigma);
        add("beta_f", beta_f);
        add("off", off);
        add("n", n);
        add("appearance", appearance);
        add("spatial", spatial);
        add("merge_cutoff", merge_cutoff);
        add("stage1_gate", stage1_gate);
        add("freeze_size", freeze_size);
        return out;
    }

    TrackerConfig resolve() const {
        std::optional<std::filesystem::path> file;
        if (config_file) file = *config_file;
        return resolve_config(preset, file, overrides());
    }
};

Json config_json(const TrackerConfig& config) {
    Json j = Json::object();
    for (const auto& [k, v] : to_kv_entries(config)) j[k] = v;
    return j;
}

Json manifest_base(const std::string& command, const std::vector<std::string>& args) {
    Json j;
    j["command"] = command;
    j["version"] = FCGTRACK_VERSION;
    j["argv"] = args;
    j["simd"] = std::string(simd::to_string(simd::active_isa()));
    return j;
}

void write_manifest(const std::filesystem::path& path, Json manifest, Clock::time_point started) {
    manifest["wall_time_s"] = std::chrono::duration<double>(Clock::now() - started).count();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << manifest.dump(2) << '\n';
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output, const std::optional<std::string>& given) {
    if (given) return *given;
    return std::filesystem::path(output.string() + ".manifest.json");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

void require_file(const std::string& path, const char* what) {
    if (!std::filesystem::is_regular_file(path)) throw IoError(std::string(what) + " not found: " + path);
}

// ---------------------------------------------------------------------------

int cmd_track(const TrackerFlags& flags, const std::string& det, const std::string& emb, const std::string& out_path,
              const std::optional<std::string>& manifest, std::optional<std::uint64_t> seed,
              const std::vector<std::string>& args, std::ostream& out) {
    const auto started = Clock::now();
    const TrackerConfig config = flags.resolve();
    config.validate();
    require_file(det, "detection file");
    require_file(emb, "embedding file");

    auto detections = read_detections(det, emb, config.det_threshold);
    const std::size_t kept = detections.size();
    log::info("track: " + std::to_string(kept) + " detections at or above sigma " + format_number(config.det_threshold) +
              " from " + det);
    const auto trajectories = track_sequence(std::move(detections), config);
    write_results(trajectories, out_path);

    Json m = manifest_base("track", args);
    m["preset"] = flags.preset;
    if (flags.config_file) m["config_file"] = *flags.config_file;
    m["config"] = config_json(config);
    m["inputs"] = {{"detections", det}, {"embeddings", emb}};
    m["outputs"] = {{"results", out_path}};
    m["seed"] = seed ? Json(*seed) : Json(nullptr);
    m["detections_kept"] = kept;
    m["trajectories"] = trajectories.size();
    write_manifest(manifest_path_for(out_path, manifest), std::move(m), started);

    out << "tracked " << kept << " detections into " << trajectories.size() << " trajectories -> " << out_path
        << '\n';
    return 0;
}

std::string sequence_name(const std::filesystem::path& res, std::size_t index) {
    std::string name = res.stem().string();
    if (name.empty()) name = "seq" + std::to_string(index);
    return name;
}

int cmd_eval(const std::vector<std::string>& gt_paths, const std::vector<std::string>& res_paths,
             std::vector<std::string> names, double iou_threshold, const std::optional<std::string>& csv,
             const std::optional<std::string>& manifest, const std::vector<std::string>& args, std::ostream& out) {
    const auto started = Clock::now();
    if (gt_paths.size() != res_paths.size()) {
        throw std::invalid_argument("eval needs one --res per --gt (got " + std::to_string(gt_paths.size()) + " and " +
                                    std::to_string(res_paths.size()) + ")");
    }
    if (!names.empty() && names.size() != gt_paths.size()) {
        throw std::invalid_argument("--name must be given once per sequence or not at all");
    }
    std::vector<EvalReport> reports;
    for (std::size_t i = 0; i < gt_paths.size(); ++i) {
        require_file(gt_paths[i], "ground-truth file");
        require_file(res_paths[i], "result file");
        const auto gt = read_ground_truth(gt_paths[i]);
        const auto res = read_results(res_paths[i]);
        const std::string name = names.empty() ? sequence_name(res_paths[i], i) : names[i];
        reports.push_back(evaluate(name, gt, res, iou_threshold));
    }
    reports.push_back(aggregate(reports));
    out << format_report_table(reports) << kHotaNote << '\n';

    if (csv) {
        write_text(*csv, format_report_csv(reports));
    }
    if (csv || manifest) {
        Json m = manifest_base("eval", args);
        m["iou_threshold"] = iou_threshold;
        m["inputs"] = {{"ground_truth", gt_paths}, {"results", res_paths}};
        m["outputs"] = {{"csv", csv ? Json(*csv) : Json(nullptr)}};
        const auto& agg = reports.back();
        m["aggregate"] = {{"MOTA", agg.mota()}, {"IDF1", agg.idf1()}, {"IDSW", agg.idsw}};
        write_manifest(manifest_path_for(csv ? *csv : std::string("eval"), manifest), std::move(m), started);
    }
    return 0;
}

int cmd_synth(const std::optional<std::string>& scenario_path, const std::vector<std::string>& sets,
              std::optional<std::uint64_t> seed, const std::string& out_dir, bool emb_csv,
              const std::optional<std::string>& manifest, const std::vector<std::string>& args, std::ostream& out) {
    const auto started = Clock::now();
    std::vector<KvEntry> entries;
    if (scenario_path) {
        require_file(*scenario_path, "scenario file");
        entries = read_kv_file(*scenario_path);
    }
    std::size_t line = 0;
    for (const std::string& s : sets) {
        auto parsed = parse_kv_text(s, "--set");
        for (auto& e : parsed) {
            e.line = ++line;
            entries.push_back(std::move(e));
        }
    }
    Scenario scenario = parse_scenario(entries, scenario_path.value_or("--set"));
    if (seed) scenario.seed = *seed;

    const SyntheticData data = generate(scenario);
    const SyntheticFiles files = write_synthetic(data, out_dir);
    const std::filesystem::path scenario_out = std::filesystem::path(out_dir) / "scenario.txt";
    write_text(scenario_out, format_scenario(scenario));
    if (emb_csv) write_embeddings_csv(std::filesystem::path(out_dir) / "det.emb.csv", data.embeddings);

    Json m = manifest_base("synth", args);
    m["seed"] = scenario.seed;
    m["scenario"] = format_scenario(scenario);
    m["outputs"] = {{"ground_truth", files.ground_truth.string()},
                    {"detections", files.detections.string()},
                    {"embeddings", files.embeddings.string()},
                    {"scenario", scenario_out.string()}};
    write_manifest(manifest ? std::filesystem::path(*manifest) : std::filesystem::path(out_dir) / "manifest.json",
                   std::move(m), started);
    out << "wrote " << data.detections.size() << " detections, " << data.ground_truth.size()
        << " ground-truth rows to " << out_dir << '\n';
    return 0;
}

int cmd_sweep(const TrackerFlags& flags, const std::vector<std::string>& grid, const std::optional<std::string>& scenario_path,
              const std::vector<std::string>& sets, const std::string& seeds, const std::optional<std::string>& det,
              const std::optional<std::string>& emb, const std::optional<std::string>& gt, int jobs,
              const std::string& out_path, const std::optional<std::string>& manifest,
              const std::vector<std::string>& args, std::ostream& out) {
    const auto started = Clock::now();
    const TrackerConfig base = flags.resolve();

    std::vector<SweepAxis> axes;
    for (const std::string& g : grid) {
        auto [key, values] = parse_grid_axis(g);
        axes.push_back({std::move(key), std::move(values)});
    }

    SweepInput input;
    const bool dataset = det || emb || gt;
    if (dataset) {
        if (!det || !emb || !gt) throw std::invalid_argument("dataset sweeps need --det, --emb and --gt");
        if (scenario_path || !sets.empty()) throw std::invalid_argument("give either a scenario or a dataset, not both");
        require_file(*det, "detection file");
        require_file(*emb, "embedding file");
        require_file(*gt, "ground-truth file");
        input.det_path = *det;
        input.emb_path = *emb;
        input.gt_path = *gt;
    } else {
        std::vector<KvEntry> entries;
        if (scenario_path) {
            require_file(*scenario_path, "scenario file");
            entries = read_kv_file(*scenario_path);
        }
        for (const std::string& s : sets) {
            auto parsed = parse_kv_text(s, "--set");
            entries.insert(entries.end(), parsed.begin(), parsed.end());
        }
        input.scenario = parse_scenario(entries, scenario_path.value_or("--set"));
        input.seeds = parse_seed_list(seeds);
    }

    const auto rows = run_sweep(base, axes, input, jobs);
    write_text(out_path, format_sweep_csv(rows));

    Json m = manifest_base("sweep", args);
    m["preset"] = flags.preset;
    m["config"] = config_json(base);
    Json jaxes = Json::array();
    for (const auto& a : axes) jaxes.push_back({{"key", a.key}, {"values", a.values}});
    m["grid"] = jaxes;
    if (input.scenario) {
        m["scenario"] = format_scenario(*input.scenario);
        m["seeds"] = input.seeds;
    } else {
        m["inputs"] = {{"detections", *det}, {"embeddings", *emb}, {"ground_truth", *gt}};
    }
    m["outputs"] = {{"csv", out_path}};
    write_manifest(manifest_path_for(out_path, manifest), std::move(m), started);

    int failures = 0;
    for (const auto& r : rows) failures += r.failed > 0 ? 1 : 0;
    out << "sweep: " << rows.size() << " rows -> " << out_path;
    if (failures > 0) out << " (" << failures << " rows with failed runs)";
    out << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct MetricDef {
    const char* name;
    double (*get)(const EvalReport&);
};

const std::vector<MetricDef>& sweep_metrics() {
    static const std::vector<MetricDef> defs = {
        {"MOTA", [](const EvalReport& r) { return r.mota(); }},
        {"IDF1", [](const EvalReport& r) { return r.idf1(); }},
        {"IDP", [](const EvalReport& r) { return r.idp(); }},
        {"IDR", [](const EvalReport& r) { return r.idr(); }},
        {"Recall", [](const EvalReport& r) { return r.recall(); }},
        {"Precision", [](const EvalReport& r) { return r.precision(); }},
        {"FP", [](const EvalReport& r) { return static_cast<double>(r.fp); }},
        {"FN", [](const EvalReport& r) { return static_cast<double>(r.fn); }},
        {"IDSW", [](const EvalReport& r) { return static_cast<double>(r.idsw); }},
    };
    return defs;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

}  // namespace

TrackerConfig resolve_config(const std::string& preset, const std::optional<std::filesystem::path>& config_file,
                             const std::vector<std::pair<std::string, std::string>>& overrides) {
    TrackerConfig config = preset_config(preset);
    if (config_file) {
        if (!std::filesystem::is_regular_file(*config_file)) {
            throw IoError("config file not found: " + config_file->string());
        }
        apply_kv(config, read_kv_file(*config_file), config_file->string());
    }
    for (const auto& [key, value] : overrides) {
        if (!set_config_value(config, key, value)) throw std::invalid_argument("unknown config key '" + key + "'");
    }
    return config;
}

std::pair<std::string, std::vector<std::string>> parse_grid_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw std::invalid_argument("grid axis must look like key=v1,v2: " + spec);
    std::string key = normalize_key(spec.substr(0, eq));
    std::vector<std::string> values;
    std::stringstream ss(spec.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(item);
    }
    if (values.empty()) throw std::invalid_argument("grid axis '" + key + "' has no values");
    return {std::move(key), std::move(values)};
}

std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(spec);
    std::string item;
    auto num = [&](const std::string& s) -> std::uint64_t {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
        return v;
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto dots = item.find("..");
        try {
            if (dots == std::string::npos) {
                seeds.push_back(num(item));
            } else {
                const auto lo = num(item.substr(0, dots));
                const auto hi = num(item.substr(dots + 2));
                if (hi < lo) throw std::invalid_argument("empty seed range " + item);
                for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
            }
        } catch (const std::logic_error&) {
            throw std::invalid_argument("bad seed list '" + spec + "'");
        }
    }
    if (seeds.empty()) throw std::invalid_argument("seed list is empty");
    return seeds;
}

EvalReport run_synthetic(const Scenario& scenario, const TrackerConfig& config) {
    const SyntheticData data = generate(scenario);
    auto detections = join_detections(data.detections, data.embeddings, config.det_threshold, "synthetic");
    const auto trajectories = track_sequence(std::move(detections), config);
    const auto rows = trajectories_to_rows(trajectories);
    return evaluate("seed" + std::to_string(scenario.seed), data.ground_truth, rows);
}

std::vector<SweepRow> run_sweep(const TrackerConfig& base, const std::vector<SweepAxis>& axes, const SweepInput& input,
                                int jobs) {
    // Cartesian product of the axes, last axis fastest.
    std::vector<std::vector<std::string>> points{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<std::string>> next;
        for (const auto& p : points) {
            for (const auto& v : axis.values) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    std::vector<std::string> keys;
    for (const auto& a : axes) keys.push_back(a.key);

    struct Dataset {
        std::vector<MotRow> det_rows;
        EmbeddingTable embeddings;
        std::vector<MotRow> gt;
    };
    std::optional<Dataset> dataset;
    if (!input.scenario) {
        if (!input.det_path || !input.emb_path || !input.gt_path) {
            throw std::invalid_argument("sweep needs a scenario or a det/emb/gt dataset");
        }
        dataset = Dataset{read_mot_rows(*input.det_path, 7, 10), read_embeddings(*input.emb_path),
                          read_ground_truth(*input.gt_path)};
    }

    struct PointResult {
        std::vector<EvalReport> reports;
        int failed = 0;
        std::string error;
    };
    std::vector<PointResult> results(points.size());

    auto run_point = [&](std::size_t index) {
        PointResult& pr = results[index];
        TrackerConfig config = base;
        try {
            for (std::size_t k = 0; k < keys.size(); ++k) {
                if (!set_config_value(config, keys[k], points[index][k])) {
                    throw std::invalid_argument("unknown config key '" + keys[k] + "'");
                }
            }
            config.validate();
        } catch (const std::exception& e) {
            pr.failed = input.scenario ? static_cast<int>(input.seeds.size()) : 1;
            pr.error = e.what();
            return;
        }
        auto attempt = [&](auto&& fn) {
            try {
                pr.reports.push_back(fn());
            } catch (const std::exception& e) {
                ++pr.failed;
                if (pr.error.empty()) pr.error = e.what();
            }
        };
        if (input.scenario) {
            for (std::uint64_t seed : input.seeds) {
                attempt([&] {
                    Scenario s = *input.scenario;
                    s.seed = seed;
                    return run_synthetic(s, config);
                });
            }
        } else {
            attempt([&] {
                auto detections = join_detections(dataset->det_rows, dataset->embeddings, config.det_threshold,
                                                  input.det_path->string());
                const auto trajectories = track_sequence(std::move(detections), config);
                const auto rows = trajectories_to_rows(trajectories);
                return evaluate("dataset", dataset->gt, rows);
            });
        }
    };

    const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1, points.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
    } else {
        std::mutex mu;
        std::size_t next = 0;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    std::size_t i = 0;
                    {
                        std::lock_guard lock(mu);
                        if (next >= points.size()) return;
                        i = next++;
                    }
                    run_point(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const PointResult& pr = results[i];
        if (pr.failed > 0) {
            log::warn("sweep: " + join(keys, '|') + "=" + join(points[i], '|') + ": " + std::to_string(pr.failed) +
                      " failed run(s): " + pr.error);
        }
        for (const MetricDef& metric : sweep_metrics()) {
            SweepRow row;
            row.param = join(keys, '|');
            row.value = join(points[i], '|');
            row.metric = metric.name;
            row.runs = static_cast<int>(pr.reports.size());
            row.failed = pr.failed;
            row.error = pr.error;
            if (pr.reports.empty()) {
                row.mean = std::nan("");
                row.stddev = std::nan("");
            } else {
                double sum = 0.0;
                for (const auto& r : pr.reports) sum += metric.get(r);
                row.mean = sum / static_cast<double>(pr.reports.size());
                double sq = 0.0;
                for (const auto& r : pr.reports) sq += (metric.get(r) - row.mean) * (metric.get(r) - row.mean);
                row.stddev = pr.reports.size() > 1 ? std::sqrt(sq / static_cast<double>(pr.reports.size() - 1)) : 0.0;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "param,value,metric,mean,stddev,runs,failed,error\n";
    char num[64];
    for (const auto& r : rows) {
        out += csv_field(r.param) + ',' + csv_field(r.value) + ',' + r.metric + ',';
        std::snprintf(num, sizeof(num), "%.6f,%.6f", r.mean, r.stddev);
        out += num;
        out += ',' + std::to_string(r.runs) + ',' + std::to_string(r.failed) + ',' + csv_field(r.error) + '\n';
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"fcgtrack: offline clustering association for multi-object tracking"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(FCGTRACK_VERSION));

    std::optional<std::uint64_t> seed;
    std::optional<std::string> manifest;

    TrackerFlags track_flags;
    std::string det, emb, res_out;
    auto* track = app.add_subcommand("track", "Associate detections into trajectories");
    track_flags.attach(*track);
    track->add_option("--det", det, "MOT detection file")->required();
    track->add_option("--emb", emb, "Embedding sidecar (EMB1 binary or CSV)")->required();
    track->add_option("--out", res_out, "Result file to write")->required();
    track->add_option("--seed", seed, "Recorded in the manifest");
    track->add_option("--manifest", manifest, "Manifest path (default <out>.manifest.json)");

    std::vector<std::string> gt_paths, res_paths, names;
    double iou_threshold = 0.5;
    std::optional<std::string> csv;
    auto* eval = app.add_subcommand("eval", "CLEAR-MOT and IDF1 of results against ground truth");
    eval->add_option("--gt", gt_paths, "Ground-truth file (repeat per sequence)")->required();
    eval->add_option("--res", res_paths, "Result file (repeat per sequence)")->required();
    eval->add_option("--name", names, "Sequence name (repeat per sequence)");
    eval->add_option("--iou", iou_threshold, "IoU threshold for a match")->capture_default_str();
    eval->add_option("--csv", csv, "Write the report as CSV");
    eval->add_option("--manifest", manifest, "Manifest path (default <csv>.manifest.json)");

    std::optional<std::string> scenario_path;
    std::vector<std::string> sets;
    std::string synth_out;
    bool emb_csv = false;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic sequence");
    synth->add_option("--scenario", scenario_path, "Scenario key = value file");
    synth->add_option("--set", sets, "Scenario override key=value (repeatable)");
    synth->add_option("--seed", seed, "Overrides the scenario seed");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_flag("--emb-csv", emb_csv, "Also dump embeddings as text");
    synth->add_option("--manifest", manifest, "Manifest path (default <out>/manifest.json)");

    TrackerFlags sweep_flags;
    std::vector<std::string> grid;
    std::string seeds = "1";
    std::optional<std::string> sweep_det, sweep_emb, sweep_gt;
    std::string sweep_out;
    int jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "Track + evaluate over a parameter grid");
    sweep_flags.attach(*sweep);
    sweep->add_option("--grid", grid, "Axis key=v1,v2,... (repeat for a cartesian product)")->required();
    sweep->add_option("--scenario", scenario_path, "Synthetic scenario file");
    sweep->add_option("--set", sets, "Scenario override key=value (repeatable)");
    sweep->add_option("--seeds", seeds, "Seeds, e.g. 1..20 or 3,5,8")->capture_default_str();
    sweep->add_option("--det", sweep_det, "Dataset detections");
    sweep->add_option("--emb", sweep_emb, "Dataset embeddings");
    sweep->add_option("--gt", sweep_gt, "Dataset ground truth");
    sweep->add_option("--jobs", jobs, "Grid points run in parallel")->capture_default_str();
    sweep->add_option("--out", sweep_out, "Long-format CSV to write")->required();
    sweep->add_option("--manifest", manifest, "Manifest path (default <out>.manifest.json)");

    std::vector<std::string> argv_storage = args;
    if (argv_storage.empty()) argv_storage.push_back("fcgtrack");
    std::vector<char*> argv;
    for (auto& s : argv_storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*track) return cmd_track(track_flags, det, emb, res_out, manifest, seed, args, out);
        if (*eval) return cmd_eval(gt_paths, res_paths, names, iou_threshold, csv, manifest, args, out);
        if (*synth) return cmd_synth(scenario_path, sets, seed, synth_out, emb_csv, manifest, args, out);
        if (*sweep) {
            return cmd_sweep(sweep_flags, grid, scenario_path, sets, seeds, sweep_det, sweep_emb, sweep_gt, jobs,
                             sweep_out, manifest, args, out);
        }
    } catch (const std::exception& e) {
        err << "fcgtrack: error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace fcgtrack::cli
