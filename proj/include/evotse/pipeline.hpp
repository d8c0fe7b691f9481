#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evotse/embedding.hpp"
#include "evotse/memory.hpp"
#include "evotse/retrieval.hpp"
#include "evotse/segment.hpp"

namespace evotse {

enum class Mode { evolve, static_enroll, oracle_label };

const char* mode_name(Mode m);
Mode parse_mode(const std::string& name);

/// Produces a sample-aligned estimate of the target from a mixture,
/// conditioned on the (possibly recomposed) enrollment.
class Extractor {
public:
    virtual ~Extractor() = default;
    virtual Segment extract(const Segment& mixture, const Segment& enrollment) = 0;
};

struct Hyper {
    double tau = 0.5;
    int k = 3;
    std::size_t capacity = 64;
    double alpha = 1.0;
};

struct SessionState {
    Segment initial_enrollment;
    MemoryBank bank;
    int step = 0;
    Hyper hyper;
    Mode mode = Mode::evolve;
};

/// Seeds the bank with the initial enrollment as protected anchor.
SessionState make_session_state(const Segment& initial_enrollment, const Hyper& hyper, Mode mode,
                                const Embedder& spk_embedder, const Embedder& emo_embedder);

struct StepMetrics {
    double si_sdr = 0.0;
    double si_sdri = 0.0;
    bool confused = false;
};

struct StepRecord {
    int step = 0;
    double c_n = 0.0;
    Decision decision = Decision::rejected;
    std::size_t bank_size = 0;
    std::size_t enrollment_len = 0;
    std::string estimate_id;
    std::optional<StepMetrics> metrics;
};

/// Initial enrollment followed by each retrieved entry's waveform in
/// retrieval order. Part ids and amplitude weights are recorded so
/// embedders can represent the concatenation; when the base enrollment
/// carries latent truth, a blended truth is attached.
Segment compose_enrollment(const Segment& r, const RetrievedSet& retrieved,
                           const MemoryBank& bank);

struct StepOutput {
    Segment estimate;
    StepRecord record;
};

/// One pass of the evolving loop: retrieve, recompose the enrollment,
/// extract, classify, and (in evolve mode) admit with curation. Static
/// mode always conditions on r and never mutates the bank; oracle-label
/// mode conditions on the ground-truth reference.
StepOutput step(SessionState& state, const Segment& mixture, Extractor& extractor,
                const Embedder& spk_embedder, const Embedder& emo_embedder,
                const Segment* oracle_ref = nullptr);

struct SessionResult {
    std::vector<StepRecord> records;
    std::vector<Segment> estimates;
    std::optional<MemoryBank> final_bank;
};

SessionResult run_session(const std::vector<Segment>& mixtures,
                          const std::vector<Segment>* refs, SessionState state,
                          Extractor& extractor, const Embedder& spk_embedder,
                          const Embedder& emo_embedder);

} // namespace evotse
