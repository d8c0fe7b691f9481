#include "evotse/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "evotse/errors.hpp"
#include "evotse/segment.hpp"

namespace evotse {

const char* attribute_name(Attribute a) {
    return a == Attribute::speaker ? "speaker" : "emotion";
}

EmbeddingVec normalize(const std::vector<double>& raw, Attribute attr) {
    if (raw.size() < 2) {
        throw DimensionMismatchError("embedding dimension must be >= 2");
    }
    double sq = 0.0;
    for (double x : raw) {
        sq += x * x;
    }
    const double norm = std::sqrt(sq);
    if (norm <= 1e-12) {
        throw ZeroVectorError();
    }
    // Bit-exact idempotence: an already-unit vector passes through
    // unchanged instead of picking up rounding from the division.
    if (std::abs(sq - 1.0) < 1e-12) {
        return EmbeddingVec(raw, attr);
    }
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = raw[i] / norm;
    }
    return EmbeddingVec(std::move(out), attr);
}

double cosine_sim(const EmbeddingVec& u, const EmbeddingVec& v) {
    if (u.attribute() != v.attribute()) {
        throw AttributeMismatchError("cosine_sim across attributes");
    }
    if (u.dim() != v.dim()) {
        throw DimensionMismatchError("cosine_sim dimension mismatch");
    }
    double dot = 0.0;
    const auto& a = u.values();
    const auto& b = v.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
    }
    return std::clamp(dot, -1.0, 1.0);
}

std::vector<double> relevance_distribution(const EmbeddingVec& query,
                                           const std::vector<EmbeddingVec>& candidates) {
    if (candidates.empty()) {
        throw EmptyCandidatesError();
    }
    std::vector<double> p(candidates.size());
    double denom = 0.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        p[i] = std::exp(cosine_sim(query, candidates[i]));
        denom += p[i];
    }
    for (double& x : p) {
        x /= denom;
    }
    return p;
}

double segment_rms(const Segment& s) {
    if (s.samples.empty()) {
        return 0.0;
    }
    double sq = 0.0;
    for (float x : s.samples) {
        sq += static_cast<double>(x) * static_cast<double>(x);
    }
    return std::sqrt(sq / static_cast<double>(s.samples.size()));
}

} // namespace evotse
