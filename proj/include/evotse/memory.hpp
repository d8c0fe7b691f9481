#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evotse/embedding.hpp"
#include "evotse/segment.hpp"

namespace evotse {

/// One admitted estimate: the waveform plus its cached embeddings.
struct MemoryEntry {
    std::string segment_id;
    std::vector<float> waveform;
    EmbeddingVec spk_emb;
    EmbeddingVec emo_emb;
    int admitted_at_step = 0;
    bool is_anchor = false;
};

enum class Decision { accepted, rejected };

struct AdmitResult {
    Decision decision = Decision::rejected;
    double score = 0.0;
};

/// Capacity-bounded ordered collection of entries. The first entry
/// seeded at construction is a protected anchor: it participates in
/// scoring but is never evicted.
class MemoryBank {
public:
    MemoryBank(MemoryEntry anchor_enrollment, std::size_t capacity, double alpha);

    const std::vector<MemoryEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    double alpha() const { return alpha_; }

    /// Max cosine similarity between the estimate's speaker embedding
    /// and any entry's speaker embedding.
    double reliability_score(const EmbeddingVec& est_spk_emb) const;

    /// Gate the candidate with strict score > tau. On acceptance, a full
    /// bank evicts its most redundant non-anchor entry first; a bank of
    /// capacity 1 can never admit.
    AdmitResult admit(MemoryEntry candidate, double tau, int current_step);

    /// Per-entry average combined speaker + alpha * emotion similarity
    /// to all other entries, normalized by size() - 1.
    std::vector<double> redundancy_scores() const;

    /// Removes the non-anchor entry with maximum redundancy, oldest
    /// first on ties. Returns the evicted segment id.
    std::string evict_most_redundant();

private:
    std::vector<MemoryEntry> entries_;
    std::size_t capacity_;
    double alpha_;
};

} // namespace evotse
