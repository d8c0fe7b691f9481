#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "evotse/embedding.hpp"

namespace evotse {

inline constexpr double kSampleRateHz = 8000.0;

/// Latent ground truth attached to simulator-produced segments. Real
/// imported audio carries none and must be embedded from a table.
struct SourceTruth {
    std::string speaker_id;
    int emotion_state = 0;
    EmbeddingVec latent_spk;
    EmbeddingVec latent_emo;
};

/// Mono PCM audio at 8 kHz. `truth` is present for simulator segments;
/// `parts` is filled for concatenated enrollments (id + weight per
/// constituent) so file-backed embedders can combine table vectors.
struct Segment {
    std::string id;
    std::vector<float> samples;

    std::optional<SourceTruth> truth;
    std::vector<std::pair<std::string, double>> parts;

    // Set on mixtures only: the clean constituents and the interferer gain.
    std::shared_ptr<const Segment> mix_target;
    std::shared_ptr<const Segment> mix_interferer;
    double interferer_gain = 0.0;

    double duration_s() const { return static_cast<double>(samples.size()) / kSampleRateHz; }
    bool is_mixture() const { return mix_target != nullptr; }
};

/// Root-mean-square amplitude; 0 for an empty buffer.
double segment_rms(const Segment& s);

} // namespace evotse
