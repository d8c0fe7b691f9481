#include "evotse/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "evotse/errors.hpp"
#include "evotse/rng.hpp"

namespace evotse {

namespace {

std::vector<double> gaussian_vec(Rng& rng, int dim, double sigma = 1.0) {
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) {
        x = g(rng);
    }
    return v;
}

std::vector<double> add_scaled(std::vector<double> a, const std::vector<double>& b,
                               double scale) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += scale * b[i];
    }
    return a;
}

// Prototypes are drawn from a fixed seed so every speaker shares the
// same emotion geometry, then rotated slightly per speaker.
std::vector<double> global_emotion_prototype(int state, int dim) {
    Rng rng = make_rng(0xE5D0001ULL, "emotion-prototype", static_cast<std::uint64_t>(state));
    return gaussian_vec(rng, dim);
}

std::string hex_id(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(x));
    return std::string(buf);
}

} // namespace

SpeakerModel gen_speaker(std::uint64_t seed, const SimParams& params) {
    SpeakerModel model;
    model.speaker_id = "spk" + hex_id(mix64(seed));
    model.drift = params.drift;

    Rng rng = make_rng(seed, "speaker-model");
    model.identity_vec = normalize(gaussian_vec(rng, params.dim), Attribute::speaker);

    model.emotion_prototypes.reserve(static_cast<std::size_t>(params.n_emotions));
    for (int s = 0; s < params.n_emotions; ++s) {
        auto proto = global_emotion_prototype(s, params.dim);
        proto = add_scaled(std::move(proto), gaussian_vec(rng, params.dim), 0.3);
        model.emotion_prototypes.push_back(normalize(proto, Attribute::emotion));
    }

    // Offset directions form a random walk over states, so neighboring
    // emotions displace the speaker latent in correlated directions.
    std::vector<double> dir = normalize(gaussian_vec(rng, params.dim), Attribute::speaker).values();
    for (int s = 0; s < params.n_emotions; ++s) {
        std::vector<double> offset(dir);
        for (double& x : offset) {
            x *= params.drift.emo_coupling;
        }
        model.emotion_offsets.push_back(std::move(offset));
        dir = normalize(add_scaled(std::move(dir), gaussian_vec(rng, params.dim),
                                   params.drift.offset_walk),
                        Attribute::speaker)
                  .values();
    }

    // Reflecting birth-death chain over the emotion states.
    const int n = params.n_emotions;
    model.transition.assign(static_cast<std::size_t>(n),
                            std::vector<double>(static_cast<std::size_t>(n), 0.0));
    const double move = 1.0 - params.drift.stay_prob;
    for (int i = 0; i < n; ++i) {
        auto& row = model.transition[static_cast<std::size_t>(i)];
        row[static_cast<std::size_t>(i)] = params.drift.stay_prob;
        if (i == 0) {
            row[1] += move;
        } else if (i == n - 1) {
            row[static_cast<std::size_t>(n - 2)] += move;
        } else {
            row[static_cast<std::size_t>(i - 1)] += move / 2.0;
            row[static_cast<std::size_t>(i + 1)] += move / 2.0;
        }
    }

    std::uniform_real_distribution<double> f0(90.0, 220.0);
    model.f0_base = f0(rng);
    return model;
}

Segment synth_segment(const SpeakerModel& model, int emotion_state, double duration_s,
                      std::uint64_t seed, const SimParams& params) {
    if (duration_s <= 0.0) {
        throw ConfigError("segment duration must be > 0");
    }
    const auto n = static_cast<std::size_t>(std::llround(duration_s * kSampleRateHz));

    Segment seg;
    seg.id = model.speaker_id + "_e" + std::to_string(emotion_state) + "_" + hex_id(seed);
    seg.samples.resize(n);

    Rng rng = make_rng(seed, "synth");
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    // Per-speaker timbre from the model's own seed-independent fields.
    Rng timbre = make_rng(seed_for(0, model.speaker_id), "timbre");
    std::uniform_real_distribution<double> amp(0.4, 1.0);
    std::uniform_real_distribution<double> pole(0.6, 0.95);
    constexpr int kHarmonics = 6;
    double harmonic_amp[kHarmonics];
    for (int h = 0; h < kHarmonics; ++h) {
        harmonic_amp[h] = amp(timbre) / static_cast<double>(h + 1);
    }
    const double noise_pole = pole(timbre);

    const double f0 = model.f0_base * (1.0 + 0.05 * emotion_state);
    double phases[kHarmonics];
    for (int h = 0; h < kHarmonics; ++h) {
        phases[h] = phase(rng);
    }

    std::normal_distribution<double> white(0.0, 1.0);
    double filtered = 0.0;
    double peak = 0.0;
    std::vector<double> raw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / kSampleRateHz;
        double v = 0.0;
        for (int h = 0; h < kHarmonics; ++h) {
            v += harmonic_amp[h] *
                 std::sin(2.0 * std::numbers::pi * f0 * (h + 1) * t + phases[h]);
        }
        filtered = noise_pole * filtered + (1.0 - noise_pole) * white(rng);
        v += params.harmonic_noise * filtered;
        raw[i] = v;
        peak = std::max(peak, std::abs(v));
    }
    const double gain = peak > 0.0 ? 0.9 / peak : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        seg.samples[i] = static_cast<float>(raw[i] * gain);
    }

    SourceTruth truth;
    truth.speaker_id = model.speaker_id;
    truth.emotion_state = emotion_state;
    const auto st = static_cast<std::size_t>(emotion_state);
    truth.latent_spk = normalize(
        add_scaled(add_scaled(model.identity_vec.values(), model.emotion_offsets.at(st), 1.0),
                   gaussian_vec(rng, static_cast<int>(model.identity_vec.dim())),
                   model.drift.sigma_id),
        Attribute::speaker);
    truth.latent_emo = normalize(
        add_scaled(model.emotion_prototypes.at(st).values(),
                   gaussian_vec(rng, static_cast<int>(model.identity_vec.dim())),
                   model.drift.sigma_id),
        Attribute::emotion);
    seg.truth = std::move(truth);
    return seg;
}

Segment make_mixture(const Segment& target, const Segment& interferer, double sir_db) {
    if (target.samples.size() != interferer.samples.size()) {
        throw LengthMismatchError("mixture constituents differ in length");
    }
    if (!std::isfinite(sir_db)) {
        throw ConfigError("sir_db must be finite");
    }
    const double rms_s = segment_rms(target);
    const double rms_v = segment_rms(interferer);
    double gain = 0.0;
    if (rms_v > 0.0) {
        gain = rms_s / (rms_v * std::pow(10.0, sir_db / 20.0));
    }

    Segment mix;
    mix.id = "mix(" + target.id + "+" + interferer.id + ")";
    mix.samples.resize(target.samples.size());
    for (std::size_t i = 0; i < mix.samples.size(); ++i) {
        mix.samples[i] = target.samples[i] + static_cast<float>(gain) * interferer.samples[i];
    }
    mix.mix_target = std::make_shared<Segment>(target);
    mix.mix_interferer = std::make_shared<Segment>(interferer);
    mix.interferer_gain = gain;

    if (target.truth && interferer.truth) {
        const double w_s = rms_s;
        const double w_v = gain * rms_v;
        SourceTruth truth;
        truth.speaker_id = target.truth->speaker_id;
        truth.emotion_state = target.truth->emotion_state;
        auto blend = [&](const EmbeddingVec& a, const EmbeddingVec& b, Attribute attr) {
            std::vector<double> v(a.dim(), 0.0);
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] = w_s * a.values()[i] + w_v * b.values()[i];
            }
            return normalize(v, attr);
        };
        truth.latent_spk = blend(target.truth->latent_spk, interferer.truth->latent_spk,
                                 Attribute::speaker);
        truth.latent_emo = blend(target.truth->latent_emo, interferer.truth->latent_emo,
                                 Attribute::emotion);
        mix.truth = std::move(truth);
    }
    return mix;
}

EmbeddingVec SyntheticEmbedder::embed(const Segment& segment) const {
    if (!segment.truth) {
        throw MissingTruthError();
    }
    const EmbeddingVec& latent =
        attr_ == Attribute::speaker ? segment.truth->latent_spk : segment.truth->latent_emo;
    if (noise_sigma_ <= 0.0) {
        return latent;
    }
    // Longer segments yield more reliable embeddings: noise shrinks with
    // the square root of duration, referenced to a 2 s segment.
    const double duration = std::max(segment.duration_s(), 1e-3);
    const double sigma = noise_sigma_ / std::sqrt(duration / 2.0);
    Rng rng = make_rng(seed_, segment.id + "|" + attribute_name(attr_));
    std::vector<double> v = latent.values();
    std::normal_distribution<double> g(0.0, sigma);
    for (double& x : v) {
        x += g(rng);
    }
    return normalize(v, attr_);
}

OracleExtraction oracle_extract(const Segment& mixture, const Segment& enrollment,
                                const ConfusionOracleParams& params,
                                const Embedder& spk_embedder, std::uint64_t seed) {
    if (!mixture.mix_target || !mixture.mix_interferer || !mixture.mix_target->truth ||
        !mixture.mix_interferer->truth) {
        throw MissingTruthError();
    }
    if (params.slope <= 0.0) {
        throw ConfigError("oracle slope must be > 0");
    }
    const EmbeddingVec enroll_emb = spk_embedder.embed(enrollment);
    const double margin = cosine_sim(enroll_emb, mixture.mix_target->truth->latent_spk) -
                          cosine_sim(enroll_emb, mixture.mix_interferer->truth->latent_spk);
    const double p_target = 1.0 / (1.0 + std::exp(-params.slope * margin));

    Rng rng = make_rng(seed, "oracle-extract");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const bool chose_interferer = !(u(rng) < p_target);

    const Segment& src = chose_interferer ? *mixture.mix_interferer : *mixture.mix_target;
    const double src_gain = chose_interferer ? mixture.interferer_gain : 1.0;
    const double snr_db =
        chose_interferer ? params.confusion_artifact_snr_db : params.artifact_snr_db;
    const double noise_sigma = src_gain * segment_rms(src) * std::pow(10.0, -snr_db / 20.0);

    OracleExtraction out;
    out.chose_interferer = chose_interferer;
    out.estimate.id = mixture.id + "|est";
    out.estimate.samples.resize(mixture.samples.size());
    std::normal_distribution<double> white(0.0, noise_sigma);
    for (std::size_t i = 0; i < out.estimate.samples.size(); ++i) {
        out.estimate.samples[i] =
            static_cast<float>(src_gain * src.samples[i] + white(rng));
    }
    out.estimate.truth = src.truth;
    return out;
}

SessionData gen_session(const SessionConfig& config, std::uint64_t seed) {
    if (config.n_segments < 1) {
        throw ConfigError("n_segments must be >= 1");
    }
    SessionData data;
    data.target = gen_speaker(seed_for(seed, "target"), config.sim);
    SpeakerModel interferer = gen_speaker(seed_for(seed, "interferer"), config.sim);

    const int init_state =
        std::clamp(config.init_enrollment_emotion, 0, config.sim.n_emotions - 1);
    data.enrollment =
        synth_segment(data.target, init_state, config.duration_s, seed_for(seed, "enroll"),
                      config.sim);

    Rng chain = make_rng(seed, "emotion-chain");
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> any_state(0, config.sim.n_emotions - 1);

    // The interferer keeps one emotional register for the whole session,
    // so its segments stay acoustically self-consistent.
    const int interferer_state = any_state(chain);
    int state = init_state;
    for (int n = 0; n < config.n_segments; ++n) {
        // Advance the target's emotion chain.
        const auto& row = data.target.transition[static_cast<std::size_t>(state)];
        double roll = u(chain);
        for (int j = 0; j < config.sim.n_emotions; ++j) {
            roll -= row[static_cast<std::size_t>(j)];
            if (roll < 0.0) {
                state = j;
                break;
            }
        }

        if (config.fresh_interferer_per_segment) {
            interferer = gen_speaker(seed_for(seed, "interferer", static_cast<std::uint64_t>(n + 1)),
                                     config.sim);
        }
        Segment tgt = synth_segment(data.target, state, config.duration_s,
                                    seed_for(seed, "target-seg", static_cast<std::uint64_t>(n)),
                                    config.sim);
        Segment itf = synth_segment(interferer, interferer_state, config.duration_s,
                                    seed_for(seed, "interferer-seg", static_cast<std::uint64_t>(n)),
                                    config.sim);
        data.mixtures.push_back(make_mixture(tgt, itf, config.sir_db));
        data.target_refs.push_back(std::move(tgt));
        data.interferer_refs.push_back(std::move(itf));
    }
    return data;
}

} // namespace evotse
