#include "evotse/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "evotse/errors.hpp"

namespace evotse {

namespace {

constexpr std::uint32_t kSampleRate = 8000;

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(static_cast<std::uint16_t>(p[0]) |
                                      (static_cast<std::uint16_t>(p[1]) << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

} // namespace

std::vector<float> read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t size = bytes.size();
    if (size < 12 || std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0) {
        throw MalformedWavError(path.string() + ": not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::size_t pos = 12;
    std::vector<float> samples;
    while (pos + 8 <= size) {
        const std::uint32_t chunk_size = read_u32(p + pos + 4);
        const bool is_fmt = std::memcmp(p + pos, "fmt ", 4) == 0;
        const bool is_data = std::memcmp(p + pos, "data", 4) == 0;
        const std::size_t body = pos + 8;
        if (body + chunk_size > size) {
            throw MalformedWavError(path.string() + ": truncated chunk");
        }
        if (is_fmt) {
            if (chunk_size < 16) {
                throw MalformedWavError(path.string() + ": short fmt chunk");
            }
            const std::uint16_t format = read_u16(p + body);
            const std::uint16_t channels = read_u16(p + body + 2);
            const std::uint32_t rate = read_u32(p + body + 4);
            const std::uint16_t bits = read_u16(p + body + 14);
            if (format != 1 || channels != 1 || rate != kSampleRate || bits != 16) {
                throw MalformedWavError(path.string() +
                                        ": expected PCM 16-bit mono 8 kHz");
            }
            have_fmt = true;
        } else if (is_data) {
            if (!have_fmt) {
                throw MalformedWavError(path.string() + ": data before fmt");
            }
            samples.reserve(chunk_size / 2);
            for (std::size_t i = 0; i + 1 < chunk_size; i += 2) {
                const auto v = static_cast<std::int16_t>(read_u16(p + body + i));
                samples.push_back(static_cast<float>(v) / 32768.0f);
            }
            return samples;
        }
        pos = body + chunk_size + (chunk_size & 1);
    }
    throw MalformedWavError(path.string() + ": missing data chunk");
}

void write_wav(const std::filesystem::path& path, const std::vector<float>& samples) {
    std::string out;
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    out.reserve(44 + data_bytes);
    out.append("RIFF");
    put_u32(out, 36 + data_bytes);
    out.append("WAVE");
    out.append("fmt ");
    put_u32(out, 16);
    put_u16(out, 1);           // PCM
    put_u16(out, 1);           // mono
    put_u32(out, kSampleRate);
    put_u32(out, kSampleRate * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.append("data");
    put_u32(out, data_bytes);
    for (float x : samples) {
        const double clipped = std::clamp(static_cast<double>(x), -1.0, 1.0);
        const auto q = static_cast<std::int16_t>(
            std::clamp(std::lround(clipped * 32767.0), -32768L, 32767L));
        put_u16(out, static_cast<std::uint16_t>(q));
    }
    std::ofstream f(path, std::ios::binary);
    if (!f || !f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
        throw IoError("cannot write " + path.string());
    }
}

} // namespace evotse
