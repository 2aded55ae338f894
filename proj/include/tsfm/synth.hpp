#pragma once

#include "tsfm/series.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tsfm {

/// xorshift64* (Vigna 2016: shifts 12/25/27, multiplier 0x2545F4914F6CDD1D),
/// state seeded through one SplitMix64 step so seed 0 is usable.
class Xorshift64Star {
public:
	explicit Xorshift64Star(std::uint64_t seed);

	std::uint64_t next();
	/// Uniform in [0, 1) with 53 random bits.
	double uniform();
	double uniform(double lo, double hi);
	/// Standard normal via Box-Muller (cosine branch only).
	double normal();

private:
	std::uint64_t state_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent child seed for sub-generator `stream`.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream);

Eigen::VectorXd gen_noise(double mean, double std, Eigen::Index n, std::uint64_t seed);

struct CompositeSignal {
	Eigen::VectorXd signal;
	std::vector<double> freqs;      // cycles over the whole window
	std::vector<double> amplitudes;
	std::vector<double> phases;

	/// Ground-truth frequencies in cycles per step.
	std::vector<double> freqs_per_step() const;
};

/// Sum of sinusoids A_j sin(2 pi f_j t / n + phi_j) with f ~ U[1, 24], A ~ U[0.5, 2],
/// phi ~ U[0, 2 pi]. Component count must be in [3, 10] unless `allow_any_count`.
CompositeSignal gen_composite(int n_components, Eigen::Index n, std::uint64_t seed, bool allow_any_count = false);

/// Same construction with caller-fixed amplitudes (phases and frequencies still drawn).
CompositeSignal gen_composite(const std::vector<double>& amplitudes, Eigen::Index n, std::uint64_t seed);

/// Uniform grid x_t = t * 2 pi / samples_per_cycle + phase.
Eigen::VectorXd harmonic_grid(Eigen::Index n, double samples_per_cycle = 64.0, double phase = 0.0);

/// sin(multiplier * x) on harmonic_grid.
Eigen::VectorXd gen_harmonic(int multiplier, Eigen::Index n, double phase = 0.0, double samples_per_cycle = 64.0);

/// Base features (sin x, cos x) on the same grid, one column each.
Eigen::MatrixXd gen_harmonic_base(Eigen::Index n, double phase = 0.0, double samples_per_cycle = 64.0);

enum class SynthKind { noise, linear_trend, exp_trend, seasonal, additive_combo, multiplicative_combo, composite, harmonic };

SynthKind parse_synth_kind(const std::string& text);
std::string to_string(SynthKind kind);

/// Generator description. Recognised params (all optional, defaults in brackets):
///   noise: mean [0], std [1]
///   linear_trend: a [1], b [0]            -> a*t + b
///   exp_trend: a [1], b [0.005]           -> a*exp(b*t)
///   seasonal: period [24], amplitude [1], phase [0], period2/amplitude2 [none]
///   additive_combo: trend (linear params) + seasonal + noise(noise_std [0.1])
///   multiplicative_combo: trend * (1 + seasonal)
///   composite: components [5]
///   harmonic: multiplier [1], samples_per_cycle [64]
struct SynthSpec {
	SynthKind kind = SynthKind::seasonal;
	std::map<std::string, double> params;
	std::uint64_t seed = 0;
	Eigen::Index length = 1000;
	std::string id = "synthetic";
	Timestamp start = Timestamp{std::chrono::sys_days{std::chrono::year{2020} / 1 / 1}};
	Frequency freq{FrequencyUnit::hour, 1};
};

TimeSeries gen_pattern(const SynthSpec& spec);

} // namespace tsfm
