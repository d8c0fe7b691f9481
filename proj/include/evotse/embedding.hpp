#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace evotse {

enum class Attribute { speaker, emotion };

const char* attribute_name(Attribute a);

/// Unit-norm dense vector carrying either a speaker-identity or an
/// emotion representation. Construct through normalize().
class EmbeddingVec {
public:
    EmbeddingVec() = default;

    const std::vector<double>& values() const { return values_; }
    Attribute attribute() const { return attr_; }
    std::size_t dim() const { return values_.size(); }

    friend EmbeddingVec normalize(const std::vector<double>& raw, Attribute attr);

private:
    EmbeddingVec(std::vector<double> v, Attribute a) : values_(std::move(v)), attr_(a) {}

    std::vector<double> values_;
    Attribute attr_ = Attribute::speaker;
};

/// Scales a raw vector to unit L2 norm. Throws ZeroVectorError when the
/// norm is at or below 1e-12, DimensionMismatchError for dim < 2.
EmbeddingVec normalize(const std::vector<double>& raw, Attribute attr);

/// Cosine similarity of two embeddings of the same attribute and
/// dimension, clamped to [-1, 1]. Evaluation order is symmetric in the
/// arguments so cosine_sim(u, v) == cosine_sim(v, u) exactly.
double cosine_sim(const EmbeddingVec& u, const EmbeddingVec& v);

/// Softmax over cosine similarities of the query against each candidate
/// (temperature 1). Entries sum to 1; ranking matches the raw
/// similarity ranking.
std::vector<double> relevance_distribution(const EmbeddingVec& query,
                                           const std::vector<EmbeddingVec>& candidates);

struct Segment;

/// Attribute-specific encoder abstraction. Implementations must be
/// deterministic: the same segment under the same configuration yields a
/// bit-identical vector within one build.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual Attribute attribute() const = 0;
    virtual EmbeddingVec embed(const Segment& segment) const = 0;
};

} // namespace evotse
