#include "evotse/retrieval.hpp"

#include <algorithm>
#include <numeric>

#include "evotse/errors.hpp"

namespace evotse {

namespace {

const EmbeddingVec& entry_embedding(const MemoryEntry& e, Attribute attr) {
    return attr == Attribute::speaker ? e.spk_emb : e.emo_emb;
}

} // namespace

std::vector<std::size_t> top_k_by_attribute(const MemoryBank& bank, const EmbeddingVec& query,
                                            int k) {
    if (bank.size() == 0) {
        throw EmptyBankError();
    }
    if (k < 1) {
        throw ConfigError("retrieval k must be >= 1");
    }
    const auto& entries = bank.entries();
    std::vector<double> sims(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        sims[i] = cosine_sim(query, entry_embedding(entries[i], query.attribute()));
    }
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sims[a] != sims[b]) {
            return sims[a] > sims[b];
        }
        return entries[a].admitted_at_step < entries[b].admitted_at_step;
    });
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    order.resize(take);
    return order;
}

RetrievedSet retrieve_context(const MemoryBank& bank, const EmbeddingVec& mixture_spk_emb,
                              const EmbeddingVec& mixture_emo_emb, int k) {
    if (mixture_spk_emb.attribute() != Attribute::speaker ||
        mixture_emo_emb.attribute() != Attribute::emotion) {
        throw AttributeMismatchError("retrieve_context expects (speaker, emotion) queries");
    }
    const auto spk_top = top_k_by_attribute(bank, mixture_spk_emb, k);
    const auto emo_top = top_k_by_attribute(bank, mixture_emo_emb, k);

    std::vector<char> selected(bank.size(), 0);
    for (std::size_t i : spk_top) {
        selected[i] = 1;
    }
    for (std::size_t i : emo_top) {
        selected[i] = 1;
    }

    const auto& entries = bank.entries();
    RetrievedSet result;
    result.k_requested = k;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!selected[i]) {
            continue;
        }
        RetrievedEntry re;
        re.bank_index = i;
        re.spk_sim = cosine_sim(mixture_spk_emb, entries[i].spk_emb);
        re.emo_sim = cosine_sim(mixture_emo_emb, entries[i].emo_emb);
        result.entries.push_back(re);
    }
    const double alpha = bank.alpha();
    std::stable_sort(result.entries.begin(), result.entries.end(),
                     [&](const RetrievedEntry& a, const RetrievedEntry& b) {
                         const double sa = a.spk_sim + alpha * a.emo_sim;
                         const double sb = b.spk_sim + alpha * b.emo_sim;
                         if (sa != sb) {
                             return sa > sb;
                         }
                         return entries[a.bank_index].admitted_at_step <
                                entries[b.bank_index].admitted_at_step;
                     });
    return result;
}

} // namespace evotse
