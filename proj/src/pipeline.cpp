#include "evotse/pipeline.hpp"

#include <cmath>
#include <utility>

#include "evotse/errors.hpp"
#include "evotse/metrics.hpp"

namespace evotse {

namespace {

double waveform_weight(const std::vector<float>& samples) {
    double sq = 0.0;
    for (float x : samples) {
        sq += static_cast<double>(x) * static_cast<double>(x);
    }
    if (samples.empty()) {
        return 0.0;
    }
    const double rms = std::sqrt(sq / static_cast<double>(samples.size()));
    return static_cast<double>(samples.size()) * rms;
}

} // namespace

const char* mode_name(Mode m) {
    switch (m) {
    case Mode::evolve:
        return "evolve";
    case Mode::static_enroll:
        return "static";
    case Mode::oracle_label:
        return "oracle_label";
    }
    return "?";
}

Mode parse_mode(const std::string& name) {
    if (name == "evolve") {
        return Mode::evolve;
    }
    if (name == "static") {
        return Mode::static_enroll;
    }
    if (name == "oracle_label") {
        return Mode::oracle_label;
    }
    throw ConfigError("unknown mode: " + name);
}

SessionState make_session_state(const Segment& initial_enrollment, const Hyper& hyper, Mode mode,
                                const Embedder& spk_embedder, const Embedder& emo_embedder) {
    if (hyper.tau < 0.0 || hyper.tau > 1.0) {
        throw ConfigError("tau must lie in [0, 1]");
    }
    if (hyper.k < 1) {
        throw ConfigError("k must be >= 1");
    }
    MemoryEntry anchor;
    anchor.segment_id = initial_enrollment.id;
    anchor.waveform = initial_enrollment.samples;
    anchor.spk_emb = spk_embedder.embed(initial_enrollment);
    anchor.emo_emb = emo_embedder.embed(initial_enrollment);
    return SessionState{initial_enrollment,
                        MemoryBank(std::move(anchor), hyper.capacity, hyper.alpha), 0, hyper,
                        mode};
}

Segment compose_enrollment(const Segment& r, const RetrievedSet& retrieved,
                           const MemoryBank& bank) {
    if (r.samples.empty()) {
        throw ConfigError("initial enrollment is empty");
    }
    if (retrieved.entries.empty()) {
        return r;
    }
    Segment out;
    out.id = "enr(" + r.id + "+" + std::to_string(retrieved.entries.size()) + ")";
    out.samples = r.samples;
    out.parts.emplace_back(r.id, waveform_weight(r.samples));

    std::vector<double> spk_acc;
    std::vector<double> emo_acc;
    const bool blend_truth = r.truth.has_value();
    if (blend_truth) {
        const double w = out.parts.back().second;
        spk_acc.assign(r.truth->latent_spk.dim(), 0.0);
        emo_acc.assign(r.truth->latent_emo.dim(), 0.0);
        for (std::size_t i = 0; i < spk_acc.size(); ++i) {
            spk_acc[i] = w * r.truth->latent_spk.values()[i];
        }
        for (std::size_t i = 0; i < emo_acc.size(); ++i) {
            emo_acc[i] = w * r.truth->latent_emo.values()[i];
        }
    }

    for (const auto& re : retrieved.entries) {
        const MemoryEntry& entry = bank.entries().at(re.bank_index);
        out.samples.insert(out.samples.end(), entry.waveform.begin(), entry.waveform.end());
        const double w = waveform_weight(entry.waveform);
        out.parts.emplace_back(entry.segment_id, w);
        if (blend_truth) {
            for (std::size_t i = 0; i < spk_acc.size(); ++i) {
                spk_acc[i] += w * entry.spk_emb.values()[i];
            }
            for (std::size_t i = 0; i < emo_acc.size(); ++i) {
                emo_acc[i] += w * entry.emo_emb.values()[i];
            }
        }
    }
    if (blend_truth) {
        SourceTruth truth;
        truth.speaker_id = r.truth->speaker_id;
        truth.emotion_state = r.truth->emotion_state;
        truth.latent_spk = normalize(spk_acc, Attribute::speaker);
        truth.latent_emo = normalize(emo_acc, Attribute::emotion);
        out.truth = std::move(truth);
    }
    return out;
}

StepOutput step(SessionState& state, const Segment& mixture, Extractor& extractor,
                const Embedder& spk_embedder, const Embedder& emo_embedder,
                const Segment* oracle_ref) {
    if (mixture.samples.empty()) {
        throw ConfigError("mixture segment is empty");
    }
    const int n = state.step + 1;

    Segment composed;
    const Segment* enrollment = &state.initial_enrollment;
    switch (state.mode) {
    case Mode::static_enroll:
        break;
    case Mode::oracle_label:
        if (oracle_ref == nullptr) {
            throw ConfigError("oracle_label mode requires reference targets");
        }
        enrollment = oracle_ref;
        break;
    case Mode::evolve:
        // With only the anchor present the enrollment stays exactly r;
        // otherwise the anchor competes with the rest of the bank.
        if (state.bank.size() > 1) {
            const EmbeddingVec q_spk = spk_embedder.embed(mixture);
            const EmbeddingVec q_emo = emo_embedder.embed(mixture);
            const RetrievedSet retrieved =
                retrieve_context(state.bank, q_spk, q_emo, state.hyper.k);
            composed = compose_enrollment(state.initial_enrollment, retrieved, state.bank);
            enrollment = &composed;
        }
        break;
    }

    StepOutput out;
    out.estimate = extractor.extract(mixture, *enrollment);
    const EmbeddingVec est_spk = spk_embedder.embed(out.estimate);

    StepRecord& rec = out.record;
    rec.step = n;
    rec.enrollment_len = enrollment->samples.size();
    rec.estimate_id = out.estimate.id;

    if (state.mode == Mode::evolve) {
        MemoryEntry candidate;
        candidate.segment_id = out.estimate.id;
        candidate.waveform = out.estimate.samples;
        candidate.spk_emb = est_spk;
        candidate.emo_emb = emo_embedder.embed(out.estimate);
        const AdmitResult res = state.bank.admit(std::move(candidate), state.hyper.tau, n);
        rec.c_n = res.score;
        rec.decision = res.decision;
    } else {
        rec.c_n = state.bank.reliability_score(est_spk);
        rec.decision = rec.c_n > state.hyper.tau ? Decision::accepted : Decision::rejected;
    }
    rec.bank_size = state.bank.size();
    state.step = n;
    return out;
}

SessionResult run_session(const std::vector<Segment>& mixtures,
                          const std::vector<Segment>* refs, SessionState state,
                          Extractor& extractor, const Embedder& spk_embedder,
                          const Embedder& emo_embedder) {
    if (mixtures.empty()) {
        throw ConfigError("session has no mixtures");
    }
    if (refs != nullptr && refs->size() != mixtures.size()) {
        throw AlignmentError("reference targets misaligned with mixtures");
    }
    if (state.mode == Mode::oracle_label && refs == nullptr) {
        throw ConfigError("oracle_label mode requires reference targets");
    }
    SessionResult result;
    for (std::size_t i = 0; i < mixtures.size(); ++i) {
        const Segment* ref = refs != nullptr ? &(*refs)[i] : nullptr;
        StepOutput so = step(state, mixtures[i], extractor, spk_embedder, emo_embedder, ref);
        if (ref != nullptr) {
            StepMetrics m;
            m.si_sdr = si_sdr(so.estimate.samples, ref->samples);
            m.si_sdri = m.si_sdr - si_sdr(mixtures[i].samples, ref->samples);
            m.confused = m.si_sdri < 0.0;
            so.record.metrics = m;
        }
        result.records.push_back(std::move(so.record));
        result.estimates.push_back(std::move(so.estimate));
    }
    result.final_bank = std::move(state.bank);
    return result;
}

} // namespace evotse
