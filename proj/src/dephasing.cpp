#include "entrec/dephasing.hpp"

#include "entrec/entanglement.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

namespace entrec {

namespace {

constexpr std::size_t kLeafSize = 256;

// Phase kick of one noise step on qubit B: |H> -> e^{i chi}|H>.
Matrix2c noise_step(double chi) {
  Matrix2c m = Matrix2c::Zero();
  m(0, 0) = std::polar(1.0, chi);
  m(1, 1) = 1.0;
  return m;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Moments {
  Matrix4c sum = Matrix4c::Zero();
  Eigen::Matrix4d sum_abs2 = Eigen::Matrix4d::Zero();

  Moments& operator+=(const Moments& o) {
    sum += o.sum;
    sum_abs2 += o.sum_abs2;
    return *this;
  }
};

// Pairwise reduction over leaf partial sums in index order.
Moments reduce_pairwise(const std::vector<Moments>& leaves, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return leaves[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  Moments left = reduce_pairwise(leaves, lo, mid);
  left += reduce_pairwise(leaves, mid, hi);
  return left;
}

template <class Fn>
void for_each_leaf(std::size_t n_leaves, unsigned workers, Fn&& fn) {
  workers = std::max(1U, workers);
  if (workers == 1 || n_leaves <= 1) {
    for (std::size_t l = 0; l < n_leaves; ++l) fn(l);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned used = static_cast<unsigned>(std::min<std::size_t>(workers, n_leaves));
  pool.reserve(used);
  for (unsigned w = 0; w < used; ++w) {
    pool.emplace_back([&] {
      for (std::size_t l = next.fetch_add(1); l < n_leaves; l = next.fetch_add(1)) fn(l);
    });
  }
}

}  // namespace

void NoiseParams::validate() const {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in [0,1]");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!std::isfinite(mean_phase)) throw std::invalid_argument("mean phase must be finite");
  if (steps < 1) throw std::invalid_argument("steps must be at least 1");
}

double PhaseSequence::accumulated(int k) const {
  if (k < 0 || static_cast<std::size_t>(k) > phases.size())
    throw std::out_of_range("step index out of range");
  double s = 0.0;
  for (int j = 0; j < k; ++j) s += phases[static_cast<std::size_t>(j)];
  return s;
}

void TrajectoryControl::validate(int steps) const {
  if (kind == ControlKind::echoed && !(echo_after_step >= 1 && echo_after_step < steps))
    throw std::invalid_argument("echo_after_step must satisfy 1 <= step < steps");
  if (kind == ControlKind::corrected) {
    const int c = correction_step(steps);
    if (c < 1 || c > steps) throw std::invalid_argument("correction step out of range");
  }
}

const char* to_string(ControlKind kind) {
  switch (kind) {
    case ControlKind::uncontrolled: return "uncontrolled";
    case ControlKind::corrected: return "corrected";
    case ControlKind::echoed: return "echoed";
  }
  return "?";
}

ControlKind control_kind_from_string(const std::string& s) {
  if (s == "uncontrolled") return ControlKind::uncontrolled;
  if (s == "corrected") return ControlKind::corrected;
  if (s == "echoed") return ControlKind::echoed;
  throw std::invalid_argument("unknown control '" + s + "'");
}

Rng trajectory_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

PhaseSequence sample_sequence(const NoiseParams& params, Rng& rng) {
  std::normal_distribution<double> gauss(params.mean_phase, params.sigma);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto fresh = [&] {
    double x = gauss(rng);
    if (params.clip_to_hardware)
      while (x < 0.0 || x > std::numbers::pi) x = gauss(rng);
    return x;
  };

  PhaseSequence seq;
  seq.phases.reserve(static_cast<std::size_t>(params.steps));
  for (int k = 0; k < params.steps; ++k) {
    if (k == 0) {
      seq.phases.push_back(fresh());
      continue;
    }
    const bool keep = coin(rng) < params.mu;
    seq.phases.push_back(keep ? seq.phases.back() : fresh());
  }
  return seq;
}

double adjacent_correlation(std::span<const PhaseSequence> sequences) {
  double n = 0, sx = 0, sy = 0;
  for (const auto& s : sequences)
    for (std::size_t k = 0; k + 1 < s.phases.size(); ++k) {
      sx += s.phases[k];
      sy += s.phases[k + 1];
      n += 1;
    }
  if (n < 2) throw std::invalid_argument("need at least two adjacent pairs");
  const double mx = sx / n, my = sy / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (const auto& s : sequences)
    for (std::size_t k = 0; k + 1 < s.phases.size(); ++k) {
      const double dx = s.phases[k] - mx, dy = s.phases[k + 1] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
  return sxy / std::sqrt(sxx * syy);
}

Matrix2c trajectory_operator(const PhaseSequence& seq, int k, const TrajectoryControl& control) {
  const int steps = static_cast<int>(seq.phases.size());
  if (k < 0 || k > steps) throw std::out_of_range("step index " + std::to_string(k) + " out of range");
  control.validate(steps);

  const int c = control.correction_step(steps);
  Matrix2c u = Matrix2c::Identity();
  for (int j = 1; j <= k; ++j) {
    const double chi = seq.phases[static_cast<std::size_t>(j - 1)];
    switch (control.kind) {
      case ControlKind::uncontrolled:
        u = noise_step(chi) * u;
        break;
      case ControlKind::echoed:
        u = noise_step(chi) * u;
        if (j == control.echo_after_step && k > control.echo_after_step) u = pauli::x() * u;
        break;
      case ControlKind::corrected:
        if (j == c && control.variant == CorrectionVariant::replace_last_step) {
          u = noise_step(-seq.accumulated(c - 1)) * u;
        } else {
          u = noise_step(chi) * u;
          if (j == c) u = noise_step(-seq.accumulated(c)) * u;
        }
        break;
    }
  }
  return u;
}

PureState trajectory_state(const PhaseSequence& seq, int k, const TrajectoryControl& control) {
  const Matrix2c u = trajectory_operator(seq, k, control);
  return apply_unitary(bell_state(BellKind::psi_minus), embed(u, kB, Register{kA, kB}));
}

double MonteCarloAverage::standard_error(int i, int j) const {
  if (n_samples < 2) return 0.0;
  const double mean_abs2 = std::norm(rho.matrix()(i, j));
  const double var = std::max(0.0, second_moment(i, j) - mean_abs2);
  return std::sqrt(var / static_cast<double>(n_samples - 1));
}

MonteCarloAverage monte_carlo_channel(const DensityMatrix& rho_in, const NoiseParams& params,
                                      const TrajectoryControl& control, int k,
                                      const MonteCarloOptions& opts) {
  params.validate();
  control.validate(params.steps);
  if (rho_in.dim() != 4) throw DimensionError("monte_carlo_channel expects a two-qubit input");
  if (opts.n_samples < 1) throw std::invalid_argument("n_samples must be at least 1");
  if (k < 0 || k > params.steps) throw std::out_of_range("step index out of range");

  const Matrix4c r = rho_in.matrix();
  const std::size_t n = opts.n_samples;
  const std::size_t n_leaves = (n + kLeafSize - 1) / kLeafSize;
  std::vector<Moments> leaves(n_leaves);

  for_each_leaf(n_leaves, opts.workers, [&](std::size_t leaf) {
    Moments m;
    const std::size_t end = std::min(n, (leaf + 1) * kLeafSize);
    for (std::size_t i = leaf * kLeafSize; i < end; ++i) {
      Rng rng = trajectory_rng(opts.seed, i);
      const PhaseSequence seq = sample_sequence(params, rng);
      const Matrix2c u = trajectory_operator(seq, k, control);
      const Matrix4c w = kron(pauli::identity(), u);
      const Matrix4c out = w * r * w.adjoint();
      m.sum += out;
      m.sum_abs2 += out.cwiseAbs2();
    }
    leaves[leaf] = m;
  });

  const Moments total = reduce_pairwise(leaves, 0, n_leaves);
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix4c mean = total.sum * inv_n;
  mean = 0.5 * (mean + mean.adjoint()).eval();
  return MonteCarloAverage{DensityMatrix(rho_in.reg(), mean), total.sum_abs2 * inv_n, n};
}

MonteCarloAverage monte_carlo_rho(const NoiseParams& params, const TrajectoryControl& control,
                                  int k, const MonteCarloOptions& opts) {
  return monte_carlo_channel(DensityMatrix::from_pure(bell_state(BellKind::psi_minus)), params,
                             control, k, opts);
}

std::vector<PhaseSequence> sample_sequences(const NoiseParams& params, std::size_t n,
                                            std::uint64_t seed, unsigned workers) {
  params.validate();
  std::vector<PhaseSequence> out(n);
  const std::size_t n_leaves = (n + kLeafSize - 1) / kLeafSize;
  for_each_leaf(n_leaves, workers, [&](std::size_t leaf) {
    const std::size_t end = std::min(n, (leaf + 1) * kLeafSize);
    for (std::size_t i = leaf * kLeafSize; i < end; ++i) {
      Rng rng = trajectory_rng(seed, i);
      out[i] = sample_sequence(params, rng);
    }
  });
  return out;
}

complex_t analytic_bc(int k, double mu, double sigma, double mean_phase) {
  const double s2 = sigma * sigma;
  const double nu = 1.0 - mu;
  double envelope = 0.0;
  switch (k) {
    case 1:
      envelope = std::exp(-0.5 * s2);
      break;
    case 2:
      envelope = std::exp(-2.0 * s2) * (mu + nu * std::exp(s2));
      break;
    case 3:
      envelope = std::exp(-4.5 * s2) *
                 (mu * mu + 2.0 * mu * nu * std::exp(2.0 * s2) + nu * nu * std::exp(3.0 * s2));
      break;
    case 4:
      envelope = std::exp(-8.0 * s2) *
                 (mu * mu * mu + mu * mu * nu * (2.0 * std::exp(3.0 * s2) + std::exp(4.0 * s2)) +
                  3.0 * mu * nu * nu * std::exp(5.0 * s2) + nu * nu * nu * std::exp(6.0 * s2));
      break;
    default:
      throw std::out_of_range("analytic_bc is defined for k in 1..4");
  }
  return -0.5 * std::polar(1.0, -k * mean_phase) * envelope;
}

complex_t analytic_ad_echo(int k, double mu, double sigma, double mean_phase) {
  const double s2 = sigma * sigma;
  const double nu = 1.0 - mu;
  switch (k) {
    case 3: {
      const double env = mu * mu + mu * nu * (1.0 + std::exp(-2.0 * s2)) + nu * nu * std::exp(-s2);
      return -0.5 * std::polar(1.0, -mean_phase) * std::exp(-0.5 * s2) * env;
    }
    case 4: {
      const double env = mu * mu * mu +
                         mu * mu * nu * (2.0 * std::exp(-s2) + std::exp(-4.0 * s2)) +
                         mu * nu * nu * (2.0 * std::exp(-3.0 * s2) + std::exp(-s2)) +
                         nu * nu * nu * std::exp(-2.0 * s2);
      return complex_t(-0.5 * env, 0.0);
    }
    default:
      throw std::out_of_range("analytic_ad_echo is defined for k in 3..4");
  }
}

}  // namespace entrec
