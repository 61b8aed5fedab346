#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fcgtrack {

/// Raised for zero-norm, non-finite or dimension-mismatched embeddings, and for
/// a mean representation that cancels to zero.
class EmbeddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Re-identification feature vector. Entries are always finite.
class Embedding {
public:
    Embedding() = default;
    explicit Embedding(std::vector<float> values);

    std::size_t dim() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    std::span<const float> values() const { return values_; }
    std::span<float> mutable_values() { return values_; }

    double norm() const;

    /// Scales to unit length. Returns false (and leaves the vector alone) for a
    /// zero vector.
    bool normalize();
    Embedding normalized() const;

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::vector<float> values_;
};

/// 1 - cos(a, b) in [0, 2]. Throws EmbeddingError on zero norm or mismatched
/// dimensions.
double cosine_distance(const Embedding& a, const Embedding& b);

enum class AppearanceMode { kDynamic, kMedian, kMax, kMean };

std::string_view to_string(AppearanceMode mode);
AppearanceMode parse_appearance_mode(std::string_view name);

struct EmaParams {
    double beta_f = 0.822;
    double sigma = 0.7;
};

/// Confidence-adaptive EMA weight on the previous embedding:
///   beta_t = beta_f + (1 - beta_f) * (1 - (s - sigma) / (1 - sigma)).
/// Returns nullopt when s < sigma (the detection is not blended in).
/// Confidences above 1 are treated as 1. Requires sigma < 1.
std::optional<double> adaptive_beta(double s_det, double sigma, double beta_f);

/// One EMA step, renormalized. Returns `previous` untouched when the
/// detection is rejected by adaptive_beta.
Embedding ema_update(const Embedding& previous, const Embedding& incoming, double s_det,
                     const EmaParams& params);

struct AppearanceSample {
    int frame = 0;
    double confidence = 0.0;
    Embedding embedding;
};

/// Tracklet-level embedding from a frame-ordered history.
///   median:  element nearest to frame floor((n + m) / 2), earlier on ties
///   max:     highest confidence, earliest on ties
///   mean:    normalized arithmetic mean; throws if it cancels to zero
///   dynamic: EMA replayed over the history, seeded by the first element
Embedding representative(std::span<const AppearanceSample> history, AppearanceMode mode,
                         const EmaParams& params = {});

/// Per-tracklet appearance. Dynamic mode keeps only the running EMA; the
/// other modes keep the full history.
class AppearanceState {
public:
    AppearanceState(AppearanceMode mode, EmaParams params) : mode_(mode), params_(params) {}

    /// Adds the next detection; frames must arrive in increasing order.
    void observe(int frame, const Embedding& embedding, double confidence);

    AppearanceMode mode() const { return mode_; }
    std::size_t observations() const { return count_; }
    const std::vector<AppearanceSample>& history() const { return history_; }

    /// Throws EmbeddingError if nothing has been observed.
    Embedding representative() const;

private:
    AppearanceMode mode_;
    EmaParams params_;
    std::size_t count_ = 0;
    Embedding current_;
    std::vector<AppearanceSample> history_;
};

}  // namespace fcgtrack
