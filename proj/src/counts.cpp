#include "entrec/counts.hpp"

#include "entrec/closedloop.hpp"

#include <cmath>
#include <random>

namespace entrec {

const char* to_string(CountLabel label) {
  switch (label) {
    case CountLabel::HHd: return "C_HHd";
    case CountLabel::VVd: return "C_VVd";
    case CountLabel::HVu: return "C_HVu";
    case CountLabel::VHu: return "C_VHu";
    case CountLabel::HV1: return "C_HV1";
    case CountLabel::VH1: return "C_VH1";
    case CountLabel::HV0: return "C_HV0";
    case CountLabel::VH0: return "C_VH0";
  }
  return "?";
}

Estimate estimate_p_prime(const CoincidenceCounts& c) {
  const double hh = static_cast<double>(c[CountLabel::HHd]);
  const double vv = static_cast<double>(c[CountLabel::VVd]);
  const double hv = static_cast<double>(c[CountLabel::HVu]);
  const double vh = static_cast<double>(c[CountLabel::VHu]);
  const double den = hv + vh;
  if (den <= 0.0) throw EstimationError("p' estimate needs C_HVu + C_VHu > 0");
  const double num = hh + vv;
  const double den2 = den * den;
  const double den4 = den2 * den2;
  const double var = hh / den2 + hv * num * num / den4 + vv / den2 + vh * num * num / den4;
  return {num / den, std::sqrt(var)};
}

Estimate estimate_theta(const CoincidenceCounts& c) {
  const double d0 = static_cast<double>(c[CountLabel::HV0]) + static_cast<double>(c[CountLabel::VH0]);
  if (d0 <= 0.0) throw EstimationError("theta estimate needs C_HV0 + C_VH0 > 0");
  const double d1 = static_cast<double>(c[CountLabel::HV1]) + static_cast<double>(c[CountLabel::VH1]);
  const double r = d1 / d0;
  return {std::atan(std::sqrt(r)), 0.5 / std::sqrt(d0) / std::sqrt(1.0 + r)};
}

CoincidenceCounts simulate_counts(const CountProbabilities& probabilities, std::uint64_t total_pairs,
                                  std::uint64_t seed) {
  if (total_pairs < 1) throw std::invalid_argument("total_pairs must be at least 1");
  std::mt19937_64 rng(seed);
  CoincidenceCounts out;
  for (std::size_t i = 0; i < kCountLabels; ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("count probabilities must be >= 0");
    const double mean = p * static_cast<double>(total_pairs);
    if (mean == 0.0) continue;
    std::poisson_distribution<std::uint64_t> draw(mean);
    out.values[i] = draw(rng);
  }
  return out;
}

CountProbabilities closed_loop_count_probabilities(double p, double theta) {
  // Basis index for [A,B]: HH=0, HV=1, VH=2, VV=3.
  auto weight = [](const MeasurementOutcome& o, int idx) {
    return o.probability * std::norm(o.post_state[static_cast<std::size_t>(idx)]);
  };
  const auto natural = measure_environment(p, 0.0);
  const auto rotated = measure_environment(p, theta);

  CountProbabilities probs{};
  auto set = [&](CountLabel l, double v) { probs[static_cast<std::size_t>(l)] = v; };
  set(CountLabel::HVu, weight(natural[0], 1));
  set(CountLabel::VHu, weight(natural[0], 2));
  set(CountLabel::HHd, weight(natural[1], 0));
  set(CountLabel::VVd, weight(natural[1], 3));
  set(CountLabel::HV0, weight(rotated[0], 1));
  set(CountLabel::VH0, weight(rotated[0], 2));
  set(CountLabel::HV1, weight(rotated[1], 1));
  set(CountLabel::VH1, weight(rotated[1], 2));
  return probs;
}

}  // namespace entrec
