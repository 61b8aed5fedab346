#include "fcgtrack/appearance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcgtrack/simd.hpp"

namespace fcgtrack {

namespace {

// Below this the mean of unit vectors is treated as having cancelled out.
constexpr double kMinMeanNorm = 1e-6;

}  // namespace

Embedding::Embedding(std::vector<float> values) : values_(std::move(values)) {
    for (float v : values_) {
        if (!std::isfinite(v)) throw EmbeddingError("embedding contains a non-finite value");
    }
}

double Embedding::norm() const { return std::sqrt(simd::dot(values_, values_)); }

bool Embedding::normalize() {
    const double n = norm();
    if (n <= 0.0) return false;
    simd::scale(static_cast<float>(1.0 / n), values_);
    return true;
}

Embedding Embedding::normalized() const {
    Embedding copy = *this;
    if (!copy.normalize()) throw EmbeddingError("cannot normalize a zero embedding");
    return copy;
}

double cosine_distance(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw EmbeddingError("embedding dimensions differ: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
    const simd::DotNorms d = simd::dot_norms(a.values(), b.values());
    if (d.aa <= 0.0 || d.bb <= 0.0) throw EmbeddingError("zero-norm embedding");
    return std::clamp(1.0 - d.ab / std::sqrt(d.aa * d.bb), 0.0, 2.0);
}

std::string_view to_string(AppearanceMode mode) {
    switch (mode) {
        case AppearanceMode::kDynamic: return "dynamic";
        case AppearanceMode::kMedian: return "median";
        case AppearanceMode::kMax: return "max";
        case AppearanceMode::kMean: return "mean";
    }
    return "?";
}

AppearanceMode parse_appearance_mode(std::string_view name) {
    for (auto m : {AppearanceMode::kDynamic, AppearanceMode::kMedian, AppearanceMode::kMax,
                   AppearanceMode::kMean}) {
        if (name == to_string(m)) return m;
    }
    throw std::invalid_argument("unknown appearance mode '" + std::string(name) +
                                "' (expected dynamic|median|max|mean)");
}

std::optional<double> adaptive_beta(double s_det, double sigma, double beta_f) {
    if (!(sigma < 1.0)) throw std::invalid_argument("adaptive_beta requires sigma < 1");
    if (s_det < sigma) return std::nullopt;
    const double s = std::min(s_det, 1.0);
    const double trust = (s - sigma) / (1.0 - sigma);
    return beta_f + (1.0 - beta_f) * (1.0 - trust);
}

Embedding ema_update(const Embedding& previous, const Embedding& incoming, double s_det,
                     const EmaParams& params) {
    const auto beta = adaptive_beta(s_det, params.sigma, params.beta_f);
    if (!beta) return previous;
    if (previous.dim() != incoming.dim()) {
        throw EmbeddingError("embedding dimensions differ in EMA update");
    }
    Embedding blended = previous;
    simd::axpby(static_cast<float>(*beta), previous.values(), static_cast<float>(1.0 - *beta),
                incoming.values(), blended.mutable_values());
    if (!blended.normalize()) throw EmbeddingError("EMA update produced a zero embedding");
    return blended;
}

namespace {

std::size_t median_index(std::span<const AppearanceSample> history) {
    const long long n = history.front().frame;
    const long long m = history.back().frame;
    const auto target = static_cast<long long>(std::floor((n + m) / 2.0));
    std::size_t best = 0;
    long long best_gap = -1;
    for (std::size_t i = 0; i < history.size(); ++i) {
        const long long gap = std::llabs(history[i].frame - target);
        if (best_gap < 0 || gap < best_gap) {
            best = i;
            best_gap = gap;
        }
    }
    return best;
}

Embedding mean_embedding(std::span<const AppearanceSample> history) {
    Embedding sum = history.front().embedding;
    for (std::size_t i = 1; i < history.size(); ++i) {
        if (history[i].embedding.dim() != sum.dim()) {
            throw EmbeddingError("embedding dimensions differ in tracklet history");
        }
        simd::axpby(1.0F, sum.values(), 1.0F, history[i].embedding.values(), sum.mutable_values());
    }
    const double n = sum.norm();
    if (n < kMinMeanNorm * static_cast<double>(history.size())) {
        throw EmbeddingError("mean appearance cancels to a zero vector");
    }
    simd::scale(static_cast<float>(1.0 / n), sum.mutable_values());
    return sum;
}

}  // namespace

Embedding representative(std::span<const AppearanceSample> history, AppearanceMode mode,
                         const EmaParams& params) {
    if (history.empty()) throw EmbeddingError("representative of an empty history");
    switch (mode) {
        case AppearanceMode::kMedian: return history[median_index(history)].embedding;
        case AppearanceMode::kMax: {
            std::size_t best = 0;
            for (std::size_t i = 1; i < history.size(); ++i) {
                if (history[i].confidence > history[best].confidence) best = i;
            }
            return history[best].embedding;
        }
        case AppearanceMode::kMean: return mean_embedding(history);
        case AppearanceMode::kDynamic: {
            Embedding state = history.front().embedding;
            for (std::size_t i = 1; i < history.size(); ++i) {
                state = ema_update(state, history[i].embedding, history[i].confidence, params);
            }
            return state;
        }
    }
    throw std::logic_error("unhandled appearance mode");
}

void AppearanceState::observe(int frame, const Embedding& embedding, double confidence) {
    if (mode_ == AppearanceMode::kDynamic) {
        current_ = count_ == 0 ? embedding : ema_update(current_, embedding, confidence, params_);
    } else {
        history_.push_back({frame, confidence, embedding});
    }
    ++count_;
}

Embedding AppearanceState::representative() const {
    if (count_ == 0) throw EmbeddingError("appearance state has no observations");
    if (mode_ == AppearanceMode::kDynamic) return current_;
    return fcgtrack::representative(history_, mode_, params_);
}

}  // namespace fcgtrack
