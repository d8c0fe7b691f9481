#pragma once

#include <cstddef>
#include <vector>

#include "evotse/embedding.hpp"
#include "evotse/memory.hpp"

namespace evotse {

struct RetrievedEntry {
    std::size_t bank_index = 0;
    double spk_sim = 0.0;
    double emo_sim = 0.0;
};

/// Union of the per-attribute top-k sets, deduplicated, ordered by
/// descending combined score spk_sim + alpha * emo_sim (ties to the
/// older entry).
struct RetrievedSet {
    std::vector<RetrievedEntry> entries;
    int k_requested = 0;
};

/// The min(k, |bank|) entries most similar to the query under the
/// query's attribute, descending, ties to the older entry.
std::vector<std::size_t> top_k_by_attribute(const MemoryBank& bank, const EmbeddingVec& query,
                                            int k);

RetrievedSet retrieve_context(const MemoryBank& bank, const EmbeddingVec& mixture_spk_emb,
                              const EmbeddingVec& mixture_emo_emb, int k);

} // namespace evotse
