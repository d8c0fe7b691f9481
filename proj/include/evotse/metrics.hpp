#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace evotse {

inline constexpr double kSiSdrCapDb = 80.0;
inline constexpr double kEnergyFloor = 1e-12;

/// Scale-invariant signal-to-distortion ratio in dB, capped to
/// [-80, +80] with 1e-12 floors on both energies. Signals are taken as
/// given (no mean removal).
double si_sdr(std::span<const float> est, std::span<const float> ref);

/// si_sdr(est, ref) - si_sdr(mix, ref).
double si_sdri(std::span<const float> est, std::span<const float> mix,
               std::span<const float> ref);

/// Percentage of strictly negative values.
double nsr(const std::vector<double>& si_sdri_values);

/// Mean over the non-negative values; absent when there are none.
std::optional<double> si_sdric(const std::vector<double>& si_sdri_values);

using PairLoss = std::function<double(std::span<const float>, std::span<const float>)>;

/// Mean of loss_fn over a B x N grid of (estimate, reference) pairs.
/// Defaults to negative si_sdr.
double group_loss(const std::vector<std::vector<std::vector<float>>>& estimates,
                  const std::vector<std::vector<std::vector<float>>>& refs,
                  const PairLoss& loss_fn = nullptr);

} // namespace evotse
