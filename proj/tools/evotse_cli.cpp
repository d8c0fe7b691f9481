#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "evotse/embedding_table.hpp"
#include "evotse/errors.hpp"
#include "evotse/experiment.hpp"
#include "evotse/metrics.hpp"
#include "evotse/rng.hpp"
#include "evotse/wav.hpp"

namespace fs = std::filesystem;
using namespace evotse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitPartial = 4;
constexpr int kExitFormat = 5;

struct CliOptions {
    std::string mode = "evolve";
    RunConfig run;
    std::string out;
    std::string dump_bank_dir;
    std::string axis = "tau";
    std::vector<double> values;
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--mode", opt.mode, "evolve | static | oracle_label")
        ->check(CLI::IsMember({"evolve", "static", "oracle_label"}));
    cmd->add_option("--tau", opt.run.hyper.tau, "reliability threshold in [0,1]");
    cmd->add_option("--k", opt.run.hyper.k, "per-attribute retrieval size");
    cmd->add_option("--capacity", opt.run.hyper.capacity, "memory bank capacity");
    cmd->add_option("--alpha", opt.run.hyper.alpha, "emotion weight in redundancy scores");
    cmd->add_option("--sessions", opt.run.sessions, "number of simulated sessions");
    cmd->add_option("--segments", opt.run.session.n_segments, "segments per session");
    cmd->add_option("--duration", opt.run.session.duration_s, "segment duration in seconds");
    cmd->add_option("--sir-db", opt.run.session.sir_db, "signal-to-interference ratio");
    cmd->add_option("--seed", opt.run.seed, "master random seed");
    cmd->add_option("--init-emotion", opt.run.session.init_enrollment_emotion,
                    "emotion state of the initial enrollment");
    cmd->add_option("--dim", opt.run.session.sim.dim, "embedding dimension");
    cmd->add_option("--emotions", opt.run.session.sim.n_emotions, "number of emotion states");
    cmd->add_option("--stay-prob", opt.run.session.sim.drift.stay_prob,
                    "emotion chain self-transition probability");
    cmd->add_option("--sigma-id", opt.run.session.sim.drift.sigma_id,
                    "per-segment latent jitter");
    cmd->add_option("--emo-coupling", opt.run.session.sim.drift.emo_coupling,
                    "emotion displacement of the speaker latent");
    cmd->add_option("--offset-walk", opt.run.session.sim.drift.offset_walk,
                    "state-to-state offset walk step");
    cmd->add_option("--embed-noise", opt.run.session.embed_noise_sigma,
                    "synthetic embedder noise sigma");
    cmd->add_flag("--fresh-interferer", opt.run.session.fresh_interferer_per_segment,
                  "draw a new interfering speaker per segment");
    cmd->add_option("--slope", opt.run.oracle.slope, "oracle logistic steepness");
    cmd->add_option("--artifact-snr-db", opt.run.oracle.artifact_snr_db,
                    "distortion SNR on correct extractions");
    cmd->add_option("--confusion-artifact-snr-db", opt.run.oracle.confusion_artifact_snr_db,
                    "distortion SNR on confused extractions");
}

void write_text(const std::string& out_path, const std::string& contents) {
    if (out_path.empty() || out_path == "-") {
        std::cout << contents;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f || !f.write(contents.data(), static_cast<std::streamsize>(contents.size()))) {
        throw IoError("cannot write " + out_path);
    }
}

int cmd_run(CliOptions& opt) {
    opt.run.mode = parse_mode(opt.mode);
    const RunResult result = run_experiment(opt.run);
    std::ostringstream csv;
    write_run_csv(csv, opt.run, result);
    write_text(opt.out, csv.str());
    if (!opt.dump_bank_dir.empty()) {
        for (std::size_t i = 0; i < result.final_banks.size(); ++i) {
            dump_bank(result.final_banks[i], fs::path(opt.dump_bank_dir) / ("s" + std::to_string(i)));
        }
    }
    return kExitOk;
}

int cmd_sweep(CliOptions& opt) {
    if (opt.values.empty()) {
        throw ConfigError("sweep requires --values");
    }
    opt.run.mode = parse_mode(opt.mode);
    const SweepAxis axis = opt.axis == "k" ? SweepAxis::k : SweepAxis::tau;
    const auto rows = sweep(opt.run, axis, opt.values);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    write_text(opt.out, csv.str());
    return kExitOk;
}

int cmd_score(const std::string& est_dir, const std::string& ref_dir,
              const std::string& mix_dir, const std::string& out_path) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(ref_dir)) {
        if (entry.path().extension() == ".wav") {
            names.push_back(entry.path().filename().string());
        }
    }
    std::sort(names.begin(), names.end());
    if (names.empty()) {
        throw IoError("no .wav files in " + ref_dir);
    }

    std::ostringstream csv;
    csv << "file,si_sdr_est,si_sdr_mix,si_sdri,confused\n";
    int failures = 0;
    std::vector<double> improvements;
    for (const std::string& name : names) {
        try {
            const fs::path est_path = fs::path(est_dir) / name;
            const fs::path mix_path = fs::path(mix_dir) / name;
            if (!fs::exists(est_path)) {
                throw IoError("missing estimate pair for " + name);
            }
            if (!fs::exists(mix_path)) {
                throw IoError("missing mixture pair for " + name);
            }
            const auto ref = read_wav(fs::path(ref_dir) / name);
            const auto est = read_wav(est_path);
            const auto mix = read_wav(mix_path);
            const double sdr_est = si_sdr(est, ref);
            const double sdr_mix = si_sdr(mix, ref);
            const double improvement = sdr_est - sdr_mix;
            improvements.push_back(improvement);
            char row[256];
            std::snprintf(row, sizeof(row), "%s,%.6f,%.6f,%.6f,%d\n", name.c_str(), sdr_est,
                          sdr_mix, improvement, improvement < 0.0 ? 1 : 0);
            csv << row;
        } catch (const Error& e) {
            std::cerr << "score: skipping " << name << ": " << e.what() << '\n';
            ++failures;
        }
    }
    if (!improvements.empty()) {
        double sum = 0.0;
        for (double v : improvements) {
            sum += v;
        }
        const auto cond = si_sdric(improvements);
        char line[256];
        std::snprintf(line, sizeof(line),
                      "# summary files=%zu mean_si_sdri=%.6f nsr_pct=%.6f si_sdric_db=%s\n",
                      improvements.size(), sum / static_cast<double>(improvements.size()),
                      nsr(improvements),
                      cond ? std::to_string(*cond).c_str() : "NA");
        csv << line;
    }
    write_text(out_path, csv.str());
    return failures > 0 ? kExitPartial : kExitOk;
}

int cmd_import_embeddings(const std::string& path) {
    const EmbeddingTable table = load_embedding_table(path);
    if (table.records.empty()) {
        std::cerr << "warning: embedding table is empty\n";
    }
    std::cout << "dim=" << table.dim << " count=" << table.records.size() << '\n';
    for (const auto& [id, vec] : table.records) {
        std::cout << id << " dim=" << vec.size() << '\n';
    }
    return kExitOk;
}

int cmd_export_session(CliOptions& opt, const std::string& dir) {
    validate(opt.run);
    const SessionData data =
        gen_session(opt.run.session, seed_for(opt.run.seed, "session", 0));
    export_session(data, dir);
    return kExitOk;
}

int cmd_dump_bank(CliOptions& opt, const std::string& dir) {
    opt.run.mode = parse_mode(opt.mode);
    const RunResult result = run_experiment(opt.run);
    for (std::size_t i = 0; i < result.final_banks.size(); ++i) {
        dump_bank(result.final_banks[i], fs::path(dir) / ("s" + std::to_string(i)));
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"evotse: evolving target-speaker-enrollment simulator and metrics suite"};
    app.require_subcommand(1);
    // Keys live under a section named after the subcommand, e.g. [run].
    app.set_config("--config", "", "ini-style config file");

    CliOptions opt;
    std::string est_dir, ref_dir, mix_dir, table_path, export_dir, bank_dir;

    auto* run = app.add_subcommand("run", "run sessions and emit a per-step CSV");
    add_common_options(run, opt);
    run->add_option("--out", opt.out, "output CSV path (default stdout)");
    run->add_option("--dump-bank", opt.dump_bank_dir, "directory for final bank dumps");

    auto* sw = app.add_subcommand("sweep", "sweep tau or k and emit a summary CSV");
    add_common_options(sw, opt);
    sw->add_option("--axis", opt.axis, "tau | k")->check(CLI::IsMember({"tau", "k"}));
    sw->add_option("--values", opt.values, "swept values")->delimiter(',');
    sw->add_option("--out", opt.out, "output CSV path (default stdout)");

    auto* score = app.add_subcommand("score", "score external estimate WAVs against references");
    score->add_option("--est", est_dir, "directory of estimate WAVs")->required();
    score->add_option("--ref", ref_dir, "directory of reference WAVs")->required();
    score->add_option("--mix", mix_dir, "directory of mixture WAVs")->required();
    score->add_option("--out", opt.out, "output CSV path (default stdout)");

    auto* imp = app.add_subcommand("import-embeddings", "validate and list an embedding table");
    imp->add_option("path", table_path, "embedding table file")->required();

    auto* exp = app.add_subcommand("export-session", "synthesize one session as WAV + manifest");
    add_common_options(exp, opt);
    exp->add_option("--out-dir", export_dir, "output directory")->required();

    auto* dump = app.add_subcommand("dump-bank", "run sessions and dump the final banks");
    add_common_options(dump, opt);
    dump->add_option("--out-dir", bank_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
        if (run->parsed()) {
            return cmd_run(opt);
        }
        if (sw->parsed()) {
            return cmd_sweep(opt);
        }
        if (score->parsed()) {
            return cmd_score(est_dir, ref_dir, mix_dir, opt.out);
        }
        if (imp->parsed()) {
            return cmd_import_embeddings(table_path);
        }
        if (exp->parsed()) {
            return cmd_export_session(opt, export_dir);
        }
        if (dump->parsed()) {
            return cmd_dump_bank(opt, bank_dir);
        }
        return kExitConfig;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    } catch (const BadMagicError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const TruncatedFileError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const DimMismatchError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const MalformedWavError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFormat;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
}
