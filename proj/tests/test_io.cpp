#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "evotse/embedding_table.hpp"
#include "evotse/errors.hpp"
#include "evotse/experiment.hpp"
#include "evotse/simulation.hpp"
#include "evotse/wav.hpp"

using namespace evotse;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("evotse_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream f(p, std::ios::binary);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("wav round trip preserves samples up to 16-bit quantization") {
    TempDir tmp;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<float> u(-0.95f, 0.95f);
    std::vector<float> samples(4000);
    for (float& x : samples) {
        x = u(rng);
    }
    const fs::path p = tmp.path / "roundtrip.wav";
    write_wav(p, samples);
    const auto back = read_wav(p);
    REQUIRE(back.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(std::abs(back[i] - samples[i]) <= 2.0f / 32768.0f);
    }
}

TEST_CASE("wav writer clips out-of-range samples instead of wrapping") {
    TempDir tmp;
    const fs::path p = tmp.path / "clip.wav";
    write_wav(p, {2.0f, -2.0f, 0.0f});
    const auto back = read_wav(p);
    REQUIRE(back.size() == 3);
    CHECK(back[0] == doctest::Approx(32767.0 / 32768.0));
    CHECK(back[1] == doctest::Approx(-32767.0 / 32768.0));
    CHECK(back[2] == 0.0f);
}

TEST_CASE("malformed wav inputs are hard errors") {
    TempDir tmp;
    const fs::path p = tmp.path / "bad.wav";

    CHECK_THROWS_AS(read_wav(tmp.path / "missing.wav"), IoError);

    write_bytes(p, "FORM....AIFF");
    CHECK_THROWS_AS(read_wav(p), MalformedWavError);

    // Valid container but the wrong sample rate in fmt.
    write_wav(p, {0.1f, 0.2f});
    std::string bytes = slurp(p);
    bytes[24] = 0x44; // 8000 -> 17476 Hz
    bytes[25] = 0x44;
    write_bytes(p, bytes);
    CHECK_THROWS_AS(read_wav(p), MalformedWavError);

    // Stereo is rejected too.
    bytes = slurp(p);
    write_wav(p, {0.1f, 0.2f});
    bytes = slurp(p);
    bytes[22] = 2;
    write_bytes(p, bytes);
    CHECK_THROWS_AS(read_wav(p), MalformedWavError);

    // Data chunk claiming more bytes than the file holds.
    write_wav(p, {0.1f, 0.2f});
    bytes = slurp(p);
    bytes[40] = static_cast<char>(0xff);
    write_bytes(p, bytes);
    CHECK_THROWS_AS(read_wav(p), MalformedWavError);
}

TEST_CASE("embedding table round trip and load-time normalization") {
    TempDir tmp;
    const fs::path p = tmp.path / "table.bin";
    std::map<std::string, std::vector<double>> records;
    records["a"] = {3.0, 4.0, 0.0};
    records["b"] = {0.0, 0.0, 1.0};
    save_embedding_table(p, 3, records);

    const EmbeddingTable table = load_embedding_table(p);
    CHECK(table.dim == 3);
    REQUIRE(table.records.size() == 2);
    CHECK(table.records.at("a")[0] == doctest::Approx(0.6));
    CHECK(table.records.at("a")[1] == doctest::Approx(0.8));
    CHECK(table.records.at("b")[2] == doctest::Approx(1.0));
}

TEST_CASE("embedding table format errors map to distinct exceptions") {
    TempDir tmp;
    const fs::path p = tmp.path / "table.bin";

    write_bytes(p, "NOTEVOEM rest");
    CHECK_THROWS_AS(load_embedding_table(p), BadMagicError);

    write_bytes(p, "EVOEMB1\n\x03\x00");
    CHECK_THROWS_AS(load_embedding_table(p), TruncatedFileError);

    // Valid header that promises one record but stops mid-vector.
    std::map<std::string, std::vector<double>> records{{"a", {1.0, 0.0, 0.0}}};
    save_embedding_table(p, 3, records);
    std::string bytes = slurp(p);
    bytes.resize(bytes.size() - 4);
    write_bytes(p, bytes);
    CHECK_THROWS_AS(load_embedding_table(p), TruncatedFileError);

    CHECK_THROWS_AS(save_embedding_table(p, 4, records), DimMismatchError);
}

TEST_CASE("file-backed embedder resolves ids and blends concatenation parts") {
    EmbeddingTable table;
    table.dim = 3;
    table.records["x"] = {1.0, 0.0, 0.0};
    table.records["y"] = {0.0, 1.0, 0.0};
    const FileBackedEmbedder emb(Attribute::speaker, table);

    Segment direct;
    direct.id = "x";
    CHECK(cosine_sim(emb.embed(direct), normalize({1.0, 0.0, 0.0}, Attribute::speaker)) ==
          doctest::Approx(1.0));

    Segment concat;
    concat.id = "x+y";
    concat.parts = {{"x", 3.0}, {"y", 1.0}};
    const auto blended = emb.embed(concat);
    CHECK(blended.values()[0] == doctest::Approx(3.0 / std::sqrt(10.0)));
    CHECK(blended.values()[1] == doctest::Approx(1.0 / std::sqrt(10.0)));

    Segment unknown;
    unknown.id = "z";
    CHECK_THROWS_AS(emb.embed(unknown), IoError);

    Segment bad_part;
    bad_part.id = "joined";
    bad_part.parts = {{"x", 1.0}, {"z", 1.0}};
    CHECK_THROWS_AS(emb.embed(bad_part), IoError);
}

TEST_CASE("session export writes playable wavs and an aligned manifest") {
    TempDir tmp;
    SessionConfig cfg;
    cfg.n_segments = 3;
    cfg.duration_s = 0.25;
    const SessionData data = gen_session(cfg, 11);
    const fs::path dir = tmp.path / "session";
    export_session(data, dir);

    const auto enrollment = read_wav(dir / "enrollment.wav");
    CHECK(enrollment.size() == data.enrollment.samples.size());
    for (int i = 0; i < 3; ++i) {
        const std::string stem = "seg_" + std::to_string(i);
        CHECK(read_wav(dir / (stem + "_mix.wav")).size() ==
              data.mixtures[static_cast<std::size_t>(i)].samples.size());
        CHECK(fs::exists(dir / (stem + "_target.wav")));
        CHECK(fs::exists(dir / (stem + "_interferer.wav")));
    }

    std::ifstream manifest(dir / "session.manifest");
    REQUIRE(manifest.good());
    std::string line;
    int lines = 0;
    while (std::getline(manifest, line)) {
        ++lines;
        std::istringstream row(line);
        std::string id, role, speaker, emotion, file;
        REQUIRE(std::getline(row, id, '\t'));
        REQUIRE(std::getline(row, role, '\t'));
        REQUIRE(std::getline(row, speaker, '\t'));
        REQUIRE(std::getline(row, emotion, '\t'));
        REQUIRE(std::getline(row, file, '\t'));
        CHECK(fs::exists(dir / file));
        CHECK((role == "enrollment" || role == "mixture" || role == "target" ||
               role == "interferer"));
    }
    CHECK(lines == 1 + 3 * 3);
}

TEST_CASE("bank dump manifest lists every entry with recoverable embeddings") {
    TempDir tmp;
    SessionConfig cfg;
    cfg.n_segments = 2;
    cfg.duration_s = 0.25;
    const SessionData data = gen_session(cfg, 13);
    const SyntheticEmbedder spk(Attribute::speaker, 0.05, 1);
    const SyntheticEmbedder emo(Attribute::emotion, 0.05, 1);
    MemoryEntry anchor;
    anchor.segment_id = data.enrollment.id;
    anchor.waveform = data.enrollment.samples;
    anchor.spk_emb = spk.embed(data.enrollment);
    anchor.emo_emb = emo.embed(data.enrollment);
    MemoryBank bank(anchor, 8, 1.0);
    MemoryEntry extra;
    extra.segment_id = data.target_refs[0].id;
    extra.waveform = data.target_refs[0].samples;
    extra.spk_emb = spk.embed(data.target_refs[0]);
    extra.emo_emb = emo.embed(data.target_refs[0]);
    REQUIRE(bank.admit(extra, -1.5, 1).decision == Decision::accepted);

    const fs::path dir = tmp.path / "bank";
    dump_bank(bank, dir);
    std::ifstream manifest(dir / "bank.manifest");
    REQUIRE(manifest.good());
    std::string line;
    int lines = 0;
    while (std::getline(manifest, line)) {
        std::istringstream row(line);
        std::string id, step, is_anchor, spk_hex, emo_hex, file;
        REQUIRE(std::getline(row, id, '\t'));
        REQUIRE(std::getline(row, step, '\t'));
        REQUIRE(std::getline(row, is_anchor, '\t'));
        REQUIRE(std::getline(row, spk_hex, '\t'));
        REQUIRE(std::getline(row, emo_hex, '\t'));
        REQUIRE(std::getline(row, file, '\t'));
        CHECK(id == bank.entries()[static_cast<std::size_t>(lines)].segment_id);
        CHECK(is_anchor == (lines == 0 ? "1" : "0"));
        CHECK(spk_hex.size() == bank.entries()[0].spk_emb.dim() * 8);
        const auto wav = read_wav(dir / file);
        CHECK(wav.size() == bank.entries()[static_cast<std::size_t>(lines)].waveform.size());
        ++lines;
    }
    CHECK(lines == 2);
}
