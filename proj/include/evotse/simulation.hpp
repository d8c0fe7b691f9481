#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "evotse/embedding.hpp"
#include "evotse/segment.hpp"

namespace evotse {

/// Emotion-state dynamics and how strongly emotion displaces the
/// speaker latent. Offsets for adjacent states are correlated, so a
/// slow chain produces gradual acoustic drift.
struct DriftParams {
    double stay_prob = 0.6;     // diagonal of the emotion transition chain
    double sigma_id = 0.05;     // per-segment latent jitter
    double emo_coupling = 2.0;  // scale of the emotion offset in speaker space
    double offset_walk = 0.8;   // random-walk step between adjacent state offsets
};

struct SpeakerModel {
    std::string speaker_id;
    EmbeddingVec identity_vec;
    std::vector<EmbeddingVec> emotion_prototypes;     // emotion space, one per state
    std::vector<std::vector<double>> emotion_offsets; // speaker space, one per state
    std::vector<std::vector<double>> transition;      // row-stochastic
    double f0_base = 0.0;
    DriftParams drift;
};

struct SimParams {
    int dim = 32;
    int n_emotions = 5;
    DriftParams drift;
    double harmonic_noise = 0.05; // noise floor mixed into synthesized speech
};

SpeakerModel gen_speaker(std::uint64_t seed, const SimParams& params = {});

/// Deterministic harmonic-stack waveform plus speaker-shaped noise,
/// peak-normalized to 0.9, with latent truth vectors attached.
Segment synth_segment(const SpeakerModel& model, int emotion_state, double duration_s,
                      std::uint64_t seed, const SimParams& params = {});

/// x = s + g*v with g chosen so 10*log10(P_s / P_gv) == sir_db. Truth
/// latents are the amplitude-weighted normalized sum of the
/// constituents'; the clean sources are kept for oracle extraction.
Segment make_mixture(const Segment& target, const Segment& interferer, double sir_db);

/// Stand-in encoder: normalize(latent + gaussian noise), with the noise
/// a pure function of (seed, segment id, attribute). noise_sigma is the
/// level for a 2 s segment; it scales with 1/sqrt(duration), so longer
/// enrollments embed more reliably. Mixtures embed to the
/// amplitude-weighted blend of their constituents' latents.
class SyntheticEmbedder : public Embedder {
public:
    SyntheticEmbedder(Attribute attr, double noise_sigma, std::uint64_t seed)
        : attr_(attr), noise_sigma_(noise_sigma), seed_(seed) {}

    Attribute attribute() const override { return attr_; }
    EmbeddingVec embed(const Segment& segment) const override;

private:
    Attribute attr_;
    double noise_sigma_;
    std::uint64_t seed_;
};

struct ConfusionOracleParams {
    double slope = 6.0;                    // logistic steepness on the identity margin
    double artifact_snr_db = 20.0;         // distortion on correct extractions
    double confusion_artifact_snr_db = 5.0;
};

struct OracleExtraction {
    Segment estimate;
    bool chose_interferer = false;
};

/// Behavioral extractor: picks the target with probability
/// sigma(slope * margin), where the margin is the enrollment's speaker
/// similarity to the target latent minus to the interferer latent. The
/// chosen source is returned with additive white distortion.
OracleExtraction oracle_extract(const Segment& mixture, const Segment& enrollment,
                                const ConfusionOracleParams& params,
                                const Embedder& spk_embedder, std::uint64_t seed);

struct SessionConfig {
    int n_segments = 50;
    double duration_s = 2.0;
    double sir_db = 0.0;
    SimParams sim;
    int init_enrollment_emotion = 0;
    bool fresh_interferer_per_segment = false;
    double embed_noise_sigma = 0.05;
};

struct SessionData {
    Segment enrollment;
    std::vector<Segment> mixtures;
    std::vector<Segment> target_refs;
    std::vector<Segment> interferer_refs;
    SpeakerModel target;
};

SessionData gen_session(const SessionConfig& config, std::uint64_t seed);

} // namespace evotse
