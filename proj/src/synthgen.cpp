#include "fcgtrack/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fcgtrack/error.hpp"
#include "fcgtrack/kv_file.hpp"

namespace fcgtrack {

namespace {

constexpr double kCellWidth = 120.0;
constexpr double kCellHeight = 240.0;
constexpr double kCorruptVisibility = 0.3;

struct TargetPath {
    double cx0 = 0.0;
    double cy0 = 0.0;
    double vx = 0.0;
    double vy = 0.0;
    double w = 0.0;
    double h = 0.0;
    double phase_x = 0.0;
    double phase_y = 0.0;
};

BBox box_at(const TargetPath& p, const Scenario& s, int frame) {
    const double t = frame - 1;
    double cx = p.cx0 + p.vx * t;
    double cy = p.cy0 + p.vy * t;
    if (s.motion == MotionPattern::kSinusoidal) {
        const double omega = 2.0 * std::numbers::pi / s.sin_period;
        cx += s.sin_amplitude * std::sin(omega * t + p.phase_x);
        cy += 0.5 * s.sin_amplitude * std::sin(omega * t + p.phase_y);
    }
    return BBox::from_center(cx, cy, p.w, p.h);
}

void normalize(std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (double& x : v) x /= n;
}

// Unit prototypes with pairwise dot product `similarity` (exact when
// n_targets < dim, otherwise only approximately).
std::vector<std::vector<float>> make_prototypes(const Scenario& s, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t dim = static_cast<std::size_t>(s.embed_dim);
    const std::size_t count = static_cast<std::size_t>(s.n_targets) + 1;  // last one is the shared component
    std::vector<std::vector<double>> basis;
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<double> v(dim);
        for (double& x : v) x = gauss(rng);
        if (basis.size() < dim) {
            for (const auto& b : basis) {
                double d = 0.0;
                for (std::size_t i = 0; i < dim; ++i) d += v[i] * b[i];
                for (std::size_t i = 0; i < dim; ++i) v[i] -= d * b[i];
            }
        }
        normalize(v);
        basis.push_back(std::move(v));
    }
    const std::vector<double>& shared = basis.back();
    const double a = std::sqrt(s.appearance_similarity);
    const double b = std::sqrt(1.0 - s.appearance_similarity);
    std::vector<std::vector<float>> out;
    for (int t = 0; t < s.n_targets; ++t) {
        std::vector<double> v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = a * shared[i] + b * basis[static_cast<std::size_t>(t)][i];
        normalize(v);
        out.emplace_back(v.begin(), v.end());
    }
    return out;
}

std::vector<float> noisy_embedding(const std::vector<float>& own, const std::vector<float>* foreign, double blend,
                                   double noise, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double scale = noise / std::sqrt(static_cast<double>(own.size()));
    std::vector<double> v(own.size());
    for (std::size_t i = 0; i < own.size(); ++i) {
        double base = own[i];
        if (foreign != nullptr) base = (1.0 - blend) * own[i] + blend * (*foreign)[i];
        v[i] = base + scale * gauss(rng);
    }
    normalize(v);
    return {v.begin(), v.end()};
}

const Occlusion* occlusion_at(const std::vector<Occlusion>& occlusions, int target, int frame) {
    for (const Occlusion& o : occlusions) {
        if (o.target == target && frame >= o.start_frame && frame <= o.end_frame) return &o;
    }
    return nullptr;
}

std::string_view to_string(MotionPattern m) { return m == MotionPattern::kLinear ? "linear" : "sinusoidal"; }
std::string_view to_string(OcclusionMode m) { return m == OcclusionMode::kDrop ? "drop" : "corrupt"; }

}  // namespace

int Scenario::layout_capacity() const {
    return static_cast<int>(std::floor(image_width / kCellWidth)) *
           static_cast<int>(std::floor(image_height / kCellHeight));
}

void Scenario::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw std::invalid_argument("invalid scenario: " + what);
    };
    require(n_targets >= 1, "n_targets must be >= 1");
    require(n_frames >= 1, "n_frames must be >= 1");
    require(n_targets <= layout_capacity(), "n_targets " + std::to_string(n_targets) + " exceeds layout capacity " +
                                                std::to_string(layout_capacity()));
    require(det_noise_px >= 0.0 && embed_noise >= 0.0, "noise parameters must be >= 0");
    require(embed_dim >= 2, "embed_dim must be >= 2");
    require(appearance_similarity >= 0.0 && appearance_similarity < 1.0, "appearance_similarity must lie in [0, 1)");
    require(sigma >= 0.0 && sigma < 1.0, "sigma must lie in [0, 1)");
    require(corrupt_fraction >= 0.0 && corrupt_fraction <= 1.0, "corrupt_fraction must lie in [0, 1]");
    require(corrupt_blend >= 0.0 && corrupt_blend <= 1.0, "corrupt_blend must lie in [0, 1]");
    require(random_occlusions >= 0, "random_occlusions must be >= 0");
    require(occlusion_min_len >= 1 && occlusion_max_len >= occlusion_min_len, "bad occlusion length range");
    require(sin_period > 0.0, "sin_period must be > 0");
    for (const Occlusion& o : occlusions) {
        require(o.target >= 0 && o.target < n_targets, "occlusion target out of range");
        require(o.start_frame >= 1 && o.end_frame <= n_frames && o.start_frame <= o.end_frame,
                "occlusion window must lie within [1, n_frames]");
    }
}

Scenario parse_scenario(const std::vector<KvEntry>& entries, const std::string& source) {
    Scenario s;
    for (const KvEntry& e : entries) {
        const std::string& k = e.key;
        if (k == "n_targets") s.n_targets = kv_to_int(e, source);
        else if (k == "n_frames") s.n_frames = kv_to_int(e, source);
        else if (k == "motion") {
            if (e.value == "linear") s.motion = MotionPattern::kLinear;
            else if (e.value == "sinusoidal") s.motion = MotionPattern::kSinusoidal;
            else throw ParseError(source, e.line, "motion must be linear or sinusoidal");
        }
        else if (k == "det_noise_px") s.det_noise_px = kv_to_double(e, source);
        else if (k == "embed_noise") s.embed_noise = kv_to_double(e, source);
        else if (k == "occlusion") {
            std::istringstream in(e.value);
            Occlusion o;
            std::string mode;
            if (!(in >> o.target >> o.start_frame >> o.end_frame >> mode) || (mode != "drop" && mode != "corrupt")) {
                throw ParseError(source, e.line, "occlusion expects '<target> <start> <end> drop|corrupt'");
            }
            o.mode = mode == "drop" ? OcclusionMode::kDrop : OcclusionMode::kCorrupt;
            s.occlusions.push_back(o);
        }
        else if (k == "random_occlusions") s.random_occlusions = kv_to_int(e, source);
        else if (k == "occlusion_min_len") s.occlusion_min_len = kv_to_int(e, source);
        else if (k == "occlusion_max_len") s.occlusion_max_len = kv_to_int(e, source);
        else if (k == "corrupt_fraction") s.corrupt_fraction = kv_to_double(e, source);
        else if (k == "corrupt_blend") s.corrupt_blend = kv_to_double(e, source);
        else if (k == "conf_base") s.confidence.base = kv_to_double(e, source);
        else if (k == "conf_visibility_penalty") s.confidence.visibility_penalty = kv_to_double(e, source);
        else if (k == "conf_jitter") s.confidence.jitter = kv_to_double(e, source);
        else if (k == "corrupt_margin") s.confidence.corrupt_margin = kv_to_double(e, source);
        else if (k == "sigma") s.sigma = kv_to_double(e, source);
        else if (k == "appearance_similarity") s.appearance_similarity = kv_to_double(e, source);
        else if (k == "embed_dim") s.embed_dim = kv_to_int(e, source);
        else if (k == "image_width") s.image_width = kv_to_double(e, source);
        else if (k == "image_height") s.image_height = kv_to_double(e, source);
        else if (k == "max_speed") s.max_speed = kv_to_double(e, source);
        else if (k == "sin_amplitude") s.sin_amplitude = kv_to_double(e, source);
        else if (k == "sin_period") s.sin_period = kv_to_double(e, source);
        else if (k == "seed") s.seed = static_cast<std::uint64_t>(kv_to_int(e, source));
        else throw ParseError(source, e.line, "unknown scenario key '" + k + "'");
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& err) {
        throw ParseError(source, entries.empty() ? 0 : entries.back().line, err.what());
    }
    return s;
}

Scenario read_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_kv_file(path), path.string());
}

std::string format_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "n_targets = " << s.n_targets << "\n"
        << "n_frames = " << s.n_frames << "\n"
        << "motion = " << to_string(s.motion) << "\n"
        << "det_noise_px = " << format_number(s.det_noise_px) << "\n"
        << "embed_noise = " << format_number(s.embed_noise) << "\n";
    for (const Occlusion& o : s.occlusions) {
        out << "occlusion = " << o.target << " " << o.start_frame << " " << o.end_frame << " " << to_string(o.mode)
            << "\n";
    }
    out << "random_occlusions = " << s.random_occlusions << "\n"
        << "occlusion_min_len = " << s.occlusion_min_len << "\n"
        << "occlusion_max_len = " << s.occlusion_max_len << "\n"
        << "corrupt_fraction = " << format_number(s.corrupt_fraction) << "\n"
        << "corrupt_blend = " << format_number(s.corrupt_blend) << "\n"
        << "conf_base = " << format_number(s.confidence.base) << "\n"
        << "conf_visibility_penalty = " << format_number(s.confidence.visibility_penalty) << "\n"
        << "conf_jitter = " << format_number(s.confidence.jitter) << "\n"
        << "corrupt_margin = " << format_number(s.confidence.corrupt_margin) << "\n"
        << "sigma = " << format_number(s.sigma) << "\n"
        << "appearance_similarity = " << format_number(s.appearance_similarity) << "\n"
        << "embed_dim = " << s.embed_dim << "\n"
        << "image_width = " << format_number(s.image_width) << "\n"
        << "image_height = " << format_number(s.image_height) << "\n"
        << "max_speed = " << format_number(s.max_speed) << "\n"
        << "sin_amplitude = " << format_number(s.sin_amplitude) << "\n"
        << "sin_period = " << format_number(s.sin_period) << "\n"
        << "seed = " << s.seed << "\n";
    return out.str();
}

SyntheticData generate(const Scenario& scenario) {
    scenario.validate();
    const Scenario& s = scenario;
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SyntheticData data;
    data.prototypes = make_prototypes(s, rng);
    data.embeddings = EmbeddingTable(static_cast<std::size_t>(s.embed_dim));

    const int cols = static_cast<int>(std::floor(s.image_width / kCellWidth));
    std::vector<int> cells(static_cast<std::size_t>(s.layout_capacity()));
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
    std::shuffle(cells.begin(), cells.end(), rng);

    std::vector<TargetPath> paths;
    for (int t = 0; t < s.n_targets; ++t) {
        const int cell = cells[static_cast<std::size_t>(t)];
        TargetPath p;
        p.cx0 = (cell % cols + 0.5) * kCellWidth;
        p.cy0 = (cell / cols + 0.5) * kCellHeight;
        const double heading = 2.0 * std::numbers::pi * unit(rng);
        const double speed = s.max_speed * (0.15 + 0.85 * unit(rng));
        p.vx = speed * std::cos(heading);
        p.vy = speed * std::sin(heading);
        p.w = 40.0 + 30.0 * unit(rng);
        p.h = p.w * (2.0 + 0.6 * unit(rng));
        p.phase_x = 2.0 * std::numbers::pi * unit(rng);
        p.phase_y = 2.0 * std::numbers::pi * unit(rng);
        paths.push_back(p);
    }

    std::vector<Occlusion> occlusions = s.occlusions;
    for (int k = 0; k < s.random_occlusions; ++k) {
        Occlusion o;
        o.target = static_cast<int>(unit(rng) * s.n_targets) % s.n_targets;
        const int len = std::min(s.occlusion_min_len +
                                     static_cast<int>(unit(rng) * (s.occlusion_max_len - s.occlusion_min_len + 1)),
                                 std::max(1, s.n_frames - 2));
        const int latest_start = std::max(2, s.n_frames - len);
        o.start_frame = std::min(2 + static_cast<int>(unit(rng) * (latest_start - 1)), latest_start);
        o.end_frame = std::min(o.start_frame + len - 1, s.n_frames);
        o.start_frame = std::min(o.start_frame, o.end_frame);
        o.mode = unit(rng) < s.corrupt_fraction ? OcclusionMode::kCorrupt : OcclusionMode::kDrop;
        occlusions.push_back(o);
    }

    for (int frame = 1; frame <= s.n_frames; ++frame) {
        std::vector<BBox> truth;
        truth.reserve(paths.size());
        for (const TargetPath& p : paths) truth.push_back(box_at(p, s, frame));

        struct Pending {
            int target;
            BBox box;
            double conf;
            std::vector<float> embedding;
        };
        std::vector<Pending> pending;
        for (int t = 0; t < s.n_targets; ++t) {
            const auto ti = static_cast<std::size_t>(t);
            const Occlusion* occ = occlusion_at(occlusions, t, frame);
            double visibility = 1.0;
            if (occ != nullptr) visibility = occ->mode == OcclusionMode::kDrop ? 0.0 : kCorruptVisibility;
            data.ground_truth.push_back(MotRow{frame, t + 1, truth[ti], 1.0, 1.0, visibility, -1.0});
            if (occ != nullptr && occ->mode == OcclusionMode::kDrop) continue;

            BBox box = truth[ti];
            if (s.det_noise_px > 0.0) {
                box.left += s.det_noise_px * gauss(rng);
                box.top += s.det_noise_px * gauss(rng);
                box.width = std::max(1.0, box.width + 0.5 * s.det_noise_px * gauss(rng));
                box.height = std::max(1.0, box.height + 0.5 * s.det_noise_px * gauss(rng));
            }

            const std::vector<float>* foreign = nullptr;
            double conf = 0.0;
            if (occ != nullptr) {
                std::size_t nearest = ti;
                double best = 0.0;
                for (std::size_t o = 0; o < truth.size(); ++o) {
                    if (o == ti) continue;
                    const double d = std::hypot(truth[o].center_x() - truth[ti].center_x(),
                                                truth[o].center_y() - truth[ti].center_y());
                    if (nearest == ti || d < best) {
                        nearest = o;
                        best = d;
                    }
                }
                if (nearest != ti) foreign = &data.prototypes[nearest];
                conf = s.sigma + s.confidence.corrupt_margin * unit(rng);
            } else {
                conf = s.confidence.base - s.confidence.visibility_penalty * (1.0 - visibility) +
                       s.confidence.jitter * gauss(rng);
                conf = std::clamp(conf, 0.0, 1.0);
            }
            pending.push_back({t, box, conf,
                               noisy_embedding(data.prototypes[ti], foreign, s.corrupt_blend, s.embed_noise, rng)});
        }

        std::shuffle(pending.begin(), pending.end(), rng);
        for (std::size_t rank = 0; rank < pending.size(); ++rank) {
            Pending& p = pending[rank];
            data.detections.push_back(MotRow{frame, -1, p.box, p.conf, -1.0, -1.0, -1.0});
            data.detection_truth.push_back(p.target + 1);
            data.embeddings.insert({frame, static_cast<int>(rank)}, std::move(p.embedding));
        }
    }
    return data;
}

SyntheticFiles write_synthetic(const SyntheticData& data, const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
    SyntheticFiles files{directory / "gt.txt", directory / "det.txt", directory / "det.emb"};
    write_mot_rows(files.ground_truth, data.ground_truth);
    write_mot_rows(files.detections, data.detections);
    write_embeddings(files.embeddings, data.embeddings);
    return files;
}

}  // namespace fcgtrack
