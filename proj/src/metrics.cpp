#include "evotse/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "evotse/errors.hpp"

namespace evotse {

double si_sdr(std::span<const float> est, std::span<const float> ref) {
    if (est.size() != ref.size()) {
        throw LengthMismatchError("si_sdr length mismatch");
    }
    if (est.empty()) {
        throw LengthMismatchError("si_sdr on empty signals");
    }
    double dot = 0.0;
    double ref_sq = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        dot += static_cast<double>(est[i]) * static_cast<double>(ref[i]);
        ref_sq += static_cast<double>(ref[i]) * static_cast<double>(ref[i]);
    }
    if (ref_sq <= kEnergyFloor) {
        throw ZeroReferenceError();
    }
    const double scale = dot / ref_sq;
    double target_sq = 0.0;
    double error_sq = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const double t = scale * static_cast<double>(ref[i]);
        const double e = static_cast<double>(est[i]) - t;
        target_sq += t * t;
        error_sq += e * e;
    }
    target_sq = std::max(target_sq, kEnergyFloor);
    error_sq = std::max(error_sq, kEnergyFloor);
    const double db = 10.0 * std::log10(target_sq / error_sq);
    return std::clamp(db, -kSiSdrCapDb, kSiSdrCapDb);
}

double si_sdri(std::span<const float> est, std::span<const float> mix,
               std::span<const float> ref) {
    return si_sdr(est, ref) - si_sdr(mix, ref);
}

double nsr(const std::vector<double>& si_sdri_values) {
    if (si_sdri_values.empty()) {
        throw EmptyListError();
    }
    std::size_t negative = 0;
    for (double v : si_sdri_values) {
        if (v < 0.0) {
            ++negative;
        }
    }
    return 100.0 * static_cast<double>(negative) /
           static_cast<double>(si_sdri_values.size());
}

std::optional<double> si_sdric(const std::vector<double>& si_sdri_values) {
    if (si_sdri_values.empty()) {
        throw EmptyListError();
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (double v : si_sdri_values) {
        if (v >= 0.0) {
            sum += v;
            ++count;
        }
    }
    if (count == 0) {
        return std::nullopt;
    }
    return sum / static_cast<double>(count);
}

double group_loss(const std::vector<std::vector<std::vector<float>>>& estimates,
                  const std::vector<std::vector<std::vector<float>>>& refs,
                  const PairLoss& loss_fn) {
    if (estimates.size() != refs.size() || estimates.empty()) {
        throw ShapeMismatchError("group_loss batch size mismatch");
    }
    const PairLoss loss = loss_fn
        ? loss_fn
        : PairLoss([](std::span<const float> e, std::span<const float> r) {
              return -si_sdr(e, r);
          });
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t b = 0; b < estimates.size(); ++b) {
        if (estimates[b].size() != refs[b].size() || estimates[b].empty()) {
            throw ShapeMismatchError("group_loss group size mismatch");
        }
        for (std::size_t n = 0; n < estimates[b].size(); ++n) {
            sum += loss(estimates[b][n], refs[b][n]);
            ++count;
        }
    }
    return sum / static_cast<double>(count);
}

} // namespace evotse
