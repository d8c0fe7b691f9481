#include "evotse/experiment.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "evotse/errors.hpp"
#include "evotse/metrics.hpp"
#include "evotse/rng.hpp"
#include "evotse/wav.hpp"

namespace evotse {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string("NA");
}

Summary summarize(const std::vector<double>& si_sdri_values, int sessions) {
    Summary s;
    s.sessions = sessions;
    s.steps = static_cast<int>(si_sdri_values.size());
    double sum = 0.0;
    for (double v : si_sdri_values) {
        sum += v;
    }
    s.mean_si_sdri = sum / static_cast<double>(si_sdri_values.size());
    s.nsr_pct = nsr(si_sdri_values);
    s.si_sdric_db = si_sdric(si_sdri_values);
    return s;
}

std::string emb_hex(const EmbeddingVec& v) {
    std::string out;
    out.reserve(v.dim() * 8);
    for (double d : v.values()) {
        const auto f = static_cast<float>(d);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        char buf[9];
        std::snprintf(buf, sizeof(buf), "%08x", bits);
        out += buf;
    }
    return out;
}

} // namespace

Segment OracleExtractor::extract(const Segment& mixture, const Segment& enrollment) {
    OracleExtraction ex = oracle_extract(mixture, enrollment, params_, spk_embedder_,
                                         seed_for(seed_, "extract-call", calls_++));
    confusion_log_.push_back(ex.chose_interferer);
    return std::move(ex.estimate);
}

void validate(const RunConfig& config) {
    if (config.hyper.tau < 0.0 || config.hyper.tau > 1.0) {
        throw ConfigError("tau must lie in [0, 1]");
    }
    if (config.hyper.k < 1) {
        throw ConfigError("k must be >= 1");
    }
    if (config.hyper.capacity < 1) {
        throw ConfigError("capacity must be >= 1");
    }
    if (config.hyper.alpha < 0.0) {
        throw ConfigError("alpha must be >= 0");
    }
    if (config.sessions < 1) {
        throw ConfigError("sessions must be >= 1");
    }
    if (config.session.n_segments < 1) {
        throw ConfigError("segments must be >= 1");
    }
    if (config.session.duration_s <= 0.0) {
        throw ConfigError("duration must be > 0");
    }
}

std::vector<SessionData> gen_sessions(const RunConfig& config) {
    validate(config);
    std::vector<SessionData> sessions;
    sessions.reserve(static_cast<std::size_t>(config.sessions));
    for (int i = 0; i < config.sessions; ++i) {
        sessions.push_back(
            gen_session(config.session, seed_for(config.seed, "session", static_cast<std::uint64_t>(i))));
    }
    return sessions;
}

RunResult run_on_sessions(const RunConfig& config, const std::vector<SessionData>& sessions) {
    validate(config);
    RunResult result;
    for (std::size_t i = 0; i < sessions.size(); ++i) {
        const SessionData& data = sessions[i];
        const std::uint64_t session_seed =
            seed_for(config.seed, "session", static_cast<std::uint64_t>(i));
        const SyntheticEmbedder spk(Attribute::speaker, config.session.embed_noise_sigma,
                                    seed_for(session_seed, "embedder"));
        const SyntheticEmbedder emo(Attribute::emotion, config.session.embed_noise_sigma,
                                    seed_for(session_seed, "embedder"));
        OracleExtractor extractor(config.oracle, spk, seed_for(session_seed, "extractor"));

        SessionState state =
            make_session_state(data.enrollment, config.hyper, config.mode, spk, emo);
        SessionResult sr =
            run_session(data.mixtures, &data.target_refs, std::move(state), extractor, spk, emo);

        for (std::size_t n = 0; n < sr.records.size(); ++n) {
            RunRow row;
            row.session_id = static_cast<int>(i);
            row.record = sr.records[n];
            row.true_confused = extractor.confusion_log()[n];
            result.si_sdri_values.push_back(row.record.metrics->si_sdri);
            result.rows.push_back(std::move(row));
        }
        result.final_banks.push_back(std::move(*sr.final_bank));
    }
    result.summary = summarize(result.si_sdri_values, static_cast<int>(sessions.size()));
    return result;
}

RunResult run_experiment(const RunConfig& config) {
    return run_on_sessions(config, gen_sessions(config));
}

std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis,
                            const std::vector<double>& values) {
    if (values.empty()) {
        throw ConfigError("sweep values must be non-empty");
    }
    const std::vector<SessionData> sessions = gen_sessions(base);
    std::vector<SweepRow> rows;
    for (double v : values) {
        RunConfig cfg = base;
        cfg.mode = Mode::evolve;
        SweepRow row;
        if (axis == SweepAxis::tau) {
            cfg.hyper.tau = v;
            row.axis = "tau";
            row.value = fmt(v);
        } else {
            cfg.hyper.k = static_cast<int>(v);
            if (cfg.hyper.k < 1 || static_cast<double>(cfg.hyper.k) != v) {
                throw ConfigError("k sweep values must be positive integers");
            }
            row.axis = "k";
            row.value = std::to_string(cfg.hyper.k);
        }
        row.mode = Mode::evolve;
        row.summary = run_on_sessions(cfg, sessions).summary;
        rows.push_back(std::move(row));
    }
    // Static baseline on the same sessions, for the dashed-line comparison.
    RunConfig cfg = base;
    cfg.mode = Mode::static_enroll;
    SweepRow baseline;
    baseline.axis = axis == SweepAxis::tau ? "tau" : "k";
    baseline.value = "baseline";
    baseline.mode = Mode::static_enroll;
    baseline.summary = run_on_sessions(cfg, sessions).summary;
    rows.push_back(std::move(baseline));
    return rows;
}

void write_run_csv(std::ostream& out, const RunConfig& config, const RunResult& result) {
    out << "session_id,step,mode,tau,k,capacity,alpha,c_n,decision,bank_size,"
           "enrollment_len,si_sdr,si_sdri,confused,true_confused\n";
    for (const RunRow& row : result.rows) {
        const StepRecord& r = row.record;
        out << row.session_id << ',' << r.step << ',' << mode_name(config.mode) << ','
            << fmt(config.hyper.tau) << ',' << config.hyper.k << ',' << config.hyper.capacity
            << ',' << fmt(config.hyper.alpha) << ',' << fmt(r.c_n) << ','
            << (r.decision == Decision::accepted ? "accepted" : "rejected") << ','
            << r.bank_size << ',' << r.enrollment_len << ',';
        if (r.metrics) {
            out << fmt(r.metrics->si_sdr) << ',' << fmt(r.metrics->si_sdri) << ','
                << (r.metrics->confused ? 1 : 0);
        } else {
            out << "NA,NA,NA";
        }
        out << ',' << (row.true_confused ? 1 : 0) << '\n';
    }
    const Summary& s = result.summary;
    out << "# si_sdr capped to +/-80 dB with 1e-12 energy floors; no mean removal\n";
    out << "# summary sessions=" << s.sessions << " steps=" << s.steps
        << " mean_si_sdri=" << fmt(s.mean_si_sdri) << " nsr_pct=" << fmt(s.nsr_pct)
        << " si_sdric_db=" << fmt_opt(s.si_sdric_db) << " seed=" << config.seed << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "axis,value,mode,sessions,steps,mean_si_sdri,nsr_pct,si_sdric_db\n";
    for (const SweepRow& row : rows) {
        out << row.axis << ',' << row.value << ',' << mode_name(row.mode) << ','
            << row.summary.sessions << ',' << row.summary.steps << ','
            << fmt(row.summary.mean_si_sdri) << ',' << fmt(row.summary.nsr_pct) << ','
            << fmt_opt(row.summary.si_sdric_db) << '\n';
    }
}

void dump_bank(const MemoryBank& bank, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "bank.manifest");
    if (!manifest) {
        throw IoError("cannot write bank manifest in " + dir.string());
    }
    int index = 0;
    for (const MemoryEntry& e : bank.entries()) {
        const std::string wav_name = "entry_" + std::to_string(index++) + ".wav";
        write_wav(dir / wav_name, e.waveform);
        manifest << e.segment_id << '\t' << e.admitted_at_step << '\t' << (e.is_anchor ? 1 : 0)
                 << '\t' << emb_hex(e.spk_emb) << '\t' << emb_hex(e.emo_emb) << '\t' << wav_name
                 << '\n';
    }
}

void export_session(const SessionData& data, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "session.manifest");
    if (!manifest) {
        throw IoError("cannot write session manifest in " + dir.string());
    }
    // One gain for the whole session keeps relative levels intact while
    // making sure no sample clips in the 16-bit files. Scale-invariant
    // scoring of the exported files is unaffected.
    float peak = 0.0f;
    auto track_peak = [&peak](const std::vector<float>& samples) {
        for (float x : samples) {
            peak = std::max(peak, std::abs(x));
        }
    };
    track_peak(data.enrollment.samples);
    for (const auto& list : {&data.mixtures, &data.target_refs, &data.interferer_refs}) {
        for (const auto& seg : *list) {
            track_peak(seg.samples);
        }
    }
    const float gain = peak > 1.0f ? 0.999f / peak : 1.0f;
    auto emit = [&](const Segment& seg, const std::string& role, const std::string& name) {
        std::vector<float> scaled(seg.samples);
        for (float& x : scaled) {
            x *= gain;
        }
        write_wav(dir / name, scaled);
        manifest << seg.id << '\t' << role << '\t'
                 << (seg.truth ? seg.truth->speaker_id : "unknown") << '\t'
                 << (seg.truth ? seg.truth->emotion_state : -1) << '\t' << name << '\n';
    };
    emit(data.enrollment, "enrollment", "enrollment.wav");
    for (std::size_t i = 0; i < data.mixtures.size(); ++i) {
        const std::string stem = "seg_" + std::to_string(i);
        emit(data.mixtures[i], "mixture", stem + "_mix.wav");
        emit(data.target_refs[i], "target", stem + "_target.wav");
        emit(data.interferer_refs[i], "interferer", stem + "_interferer.wav");
    }
}

} // namespace evotse
