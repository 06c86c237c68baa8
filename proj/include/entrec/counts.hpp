#pragma once

// Coincidence-count statistics: estimating p' and theta from photon
// coincidences with Poissonian error propagation (delta C = sqrt(C)).

#include <array>
#include <cstdint>
#include <stdexcept>

namespace entrec {

struct EstimationError : std::domain_error {
  using std::domain_error::domain_error;
};

enum class CountLabel : std::size_t {
  HHd,  ///< |Phi-> on path d, HH coincidences
  VVd,
  HVu,  ///< |Psi-> on path u, HV coincidences
  VHu,
  HV1,  ///< output mode theta_d
  VH1,
  HV0,  ///< output mode theta_u
  VH0,
};

inline constexpr std::size_t kCountLabels = 8;

const char* to_string(CountLabel label);

struct CoincidenceCounts {
  std::array<std::uint64_t, kCountLabels> values{};

  std::uint64_t& operator[](CountLabel l) { return values[static_cast<std::size_t>(l)]; }
  std::uint64_t operator[](CountLabel l) const { return values[static_cast<std::size_t>(l)]; }
};

/// Expected coincidences per pair for each label.
using CountProbabilities = std::array<double, kCountLabels>;

struct Estimate {
  double value;
  double delta;
};

/// p' = (C_HHd + C_VVd) / (C_HVu + C_VHu) with first-order Poisson error.
Estimate estimate_p_prime(const CoincidenceCounts& counts);

/// theta = arctan(sqrt(R)), R = (C_HV1 + C_VH1) / (C_HV0 + C_VH0), and
/// delta theta = 1 / (2 sqrt(C_HV0 + C_VH0) sqrt(1 + R)).
Estimate estimate_theta(const CoincidenceCounts& counts);

/// Independent Poisson draws with means probability * total_pairs.
CoincidenceCounts simulate_counts(const CountProbabilities& probabilities, std::uint64_t total_pairs,
                                  std::uint64_t seed);

/// Per-label coincidence probabilities of the closed-loop set-up, from the
/// constructed post-measurement states: the p' labels use the natural O basis
/// and the theta labels the uncorrected theta_u / theta_d exits.
CountProbabilities closed_loop_count_probabilities(double p, double theta);

}  // namespace entrec
