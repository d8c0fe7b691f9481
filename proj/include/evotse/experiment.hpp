#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "evotse/memory.hpp"
#include "evotse/pipeline.hpp"
#include "evotse/simulation.hpp"

namespace evotse {

/// Extractor adapter over the confusion oracle: per-call seeds are
/// derived from (base seed, call index) and every identity choice is
/// logged for diagnostics.
class OracleExtractor : public Extractor {
public:
    OracleExtractor(ConfusionOracleParams params, const Embedder& spk_embedder,
                    std::uint64_t seed)
        : params_(params), spk_embedder_(spk_embedder), seed_(seed) {}

    Segment extract(const Segment& mixture, const Segment& enrollment) override;

    const std::vector<bool>& confusion_log() const { return confusion_log_; }

private:
    ConfusionOracleParams params_;
    const Embedder& spk_embedder_;
    std::uint64_t seed_;
    std::uint64_t calls_ = 0;
    std::vector<bool> confusion_log_;
};

struct RunConfig {
    Mode mode = Mode::evolve;
    Hyper hyper;
    int sessions = 1;
    std::uint64_t seed = 1;
    SessionConfig session;
    ConfusionOracleParams oracle;
};

void validate(const RunConfig& config);

struct RunRow {
    int session_id = 0;
    StepRecord record;
    bool true_confused = false;
};

struct Summary {
    int sessions = 0;
    int steps = 0;
    double mean_si_sdri = 0.0;
    double nsr_pct = 0.0;
    std::optional<double> si_sdric_db;
};

struct RunResult {
    std::vector<RunRow> rows;
    std::vector<double> si_sdri_values;
    Summary summary;
    std::vector<MemoryBank> final_banks; // one per session
};

std::vector<SessionData> gen_sessions(const RunConfig& config);

/// Runs config.sessions simulated sessions under config.mode.
RunResult run_experiment(const RunConfig& config);

/// Same loop over pre-generated sessions, so modes can be compared on
/// identical inputs.
RunResult run_on_sessions(const RunConfig& config, const std::vector<SessionData>& sessions);

enum class SweepAxis { tau, k };

struct SweepRow {
    std::string axis;
    std::string value;
    Mode mode = Mode::evolve;
    Summary summary;
};

std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis,
                            const std::vector<double>& values);

void write_run_csv(std::ostream& out, const RunConfig& config, const RunResult& result);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Line-oriented manifest (id, step, anchor flag, embedding hex) plus
/// one WAV per entry.
void dump_bank(const MemoryBank& bank, const std::filesystem::path& dir);

/// Per-segment WAV files plus a manifest line per segment
/// (id, role, speaker, emotion, path).
void export_session(const SessionData& data, const std::filesystem::path& dir);

} // namespace evotse
