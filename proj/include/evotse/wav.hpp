#pragma once

#include <filesystem>
#include <vector>

namespace evotse {

// PCM 16-bit mono 8 kHz only; anything else is a hard parse error.

std::vector<float> read_wav(const std::filesystem::path& path);

void write_wav(const std::filesystem::path& path, const std::vector<float>& samples);

} // namespace evotse
