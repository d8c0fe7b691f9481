#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "evotse/embedding.hpp"
#include "evotse/segment.hpp"

namespace evotse {

/// Precomputed embeddings keyed by segment id, the bridge to real
/// encoders. Binary layout: magic "EVOEMB1\n", LE u32 dim, u32 count,
/// then per record [u16 id length, id bytes, dim x f32 LE]. Vectors are
/// normalized at load.
struct EmbeddingTable {
    std::uint32_t dim = 0;
    std::map<std::string, std::vector<double>> records;
};

EmbeddingTable load_embedding_table(const std::filesystem::path& path);

void save_embedding_table(const std::filesystem::path& path, std::uint32_t dim,
                          const std::map<std::string, std::vector<double>>& records);

/// Embedder that looks vectors up by segment id. Concatenated segments
/// resolve through their parts as an amplitude-weighted blend.
class FileBackedEmbedder : public Embedder {
public:
    FileBackedEmbedder(Attribute attr, EmbeddingTable table)
        : attr_(attr), table_(std::move(table)) {}

    Attribute attribute() const override { return attr_; }
    EmbeddingVec embed(const Segment& segment) const override;

private:
    Attribute attr_;
    EmbeddingTable table_;
};

} // namespace evotse
