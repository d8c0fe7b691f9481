#include "evotse/memory.hpp"

#include <algorithm>
#include <utility>

#include "evotse/errors.hpp"

namespace evotse {

MemoryBank::MemoryBank(MemoryEntry anchor_enrollment, std::size_t capacity, double alpha)
    : capacity_(capacity), alpha_(alpha) {
    if (capacity < 1) {
        throw InvalidCapacityError("memory bank capacity must be >= 1");
    }
    if (alpha < 0.0) {
        throw ConfigError("alpha must be >= 0");
    }
    anchor_enrollment.is_anchor = true;
    anchor_enrollment.admitted_at_step = 0;
    entries_.push_back(std::move(anchor_enrollment));
}

double MemoryBank::reliability_score(const EmbeddingVec& est_spk_emb) const {
    if (est_spk_emb.attribute() != Attribute::speaker) {
        throw AttributeMismatchError("reliability score expects a speaker embedding");
    }
    double best = -1.0;
    for (const auto& e : entries_) {
        best = std::max(best, cosine_sim(est_spk_emb, e.spk_emb));
    }
    return best;
}

AdmitResult MemoryBank::admit(MemoryEntry candidate, double tau, int current_step) {
    const double score = reliability_score(candidate.spk_emb);
    if (!(score > tau)) {
        return {Decision::rejected, score};
    }
    if (entries_.size() >= capacity_) {
        if (entries_.size() < 2) {
            // Anchor-only full bank (capacity 1): nothing evictable.
            return {Decision::rejected, score};
        }
        evict_most_redundant();
    }
    candidate.is_anchor = false;
    candidate.admitted_at_step = current_step;
    entries_.push_back(std::move(candidate));
    return {Decision::accepted, score};
}

std::vector<double> MemoryBank::redundancy_scores() const {
    const std::size_t n = entries_.size();
    if (n < 2) {
        throw BankTooSmallError("redundancy scores need at least 2 entries");
    }
    std::vector<double> omega(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            sum += cosine_sim(entries_[i].spk_emb, entries_[j].spk_emb) +
                   alpha_ * cosine_sim(entries_[i].emo_emb, entries_[j].emo_emb);
        }
        omega[i] = sum / static_cast<double>(n - 1);
    }
    return omega;
}

std::string MemoryBank::evict_most_redundant() {
    if (entries_.size() < 2) {
        throw BankTooSmallError("eviction needs at least 2 entries");
    }
    const std::vector<double> omega = redundancy_scores();
    std::size_t victim = entries_.size();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].is_anchor) {
            continue;
        }
        if (victim == entries_.size() || omega[i] > omega[victim] ||
            (omega[i] == omega[victim] &&
             entries_[i].admitted_at_step < entries_[victim].admitted_at_step)) {
            victim = i;
        }
    }
    std::string evicted = entries_[victim].segment_id;
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(victim));
    return evicted;
}

} // namespace evotse
