#include "tsfm/synth.hpp"

#include "tsfm/error.hpp"

#include <cmath>
#include <numbers>

namespace tsfm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double param(const SynthSpec& spec, const std::string& key, double fallback) {
	const auto it = spec.params.find(key);
	return it == spec.params.end() ? fallback : it->second;
}

Eigen::VectorXd steps(Eigen::Index n) {
	return Eigen::VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
}

Eigen::VectorXd linear_part(const SynthSpec& spec) {
	return param(spec, "a", 1.0) * steps(spec.length).array() + param(spec, "b", 0.0);
}

Eigen::VectorXd seasonal_part(const SynthSpec& spec) {
	const Eigen::ArrayXd t = steps(spec.length).array();
	const double period = param(spec, "period", 24.0);
	if (!(period > 0.0)) {
		throw Error(ErrorCode::NonPositivePeriod, "seasonal period must be positive");
	}
	Eigen::ArrayXd out = param(spec, "amplitude", 1.0) * (kTwoPi * t / period + param(spec, "phase", 0.0)).sin();
	if (const double p2 = param(spec, "period2", 0.0); p2 > 0.0) {
		out += param(spec, "amplitude2", 1.0) * (kTwoPi * t / p2).sin();
	}
	return out.matrix();
}

CompositeSignal build_composite(std::vector<double> amplitudes, Eigen::Index n, Xorshift64Star& rng) {
	CompositeSignal c;
	const auto count = amplitudes.size();
	for (std::size_t j = 0; j < count; ++j) {
		c.freqs.push_back(rng.uniform(1.0, 24.0));
		c.phases.push_back(rng.uniform(0.0, kTwoPi));
	}
	c.amplitudes = std::move(amplitudes);
	const Eigen::ArrayXd t = steps(n).array();
	c.signal = Eigen::VectorXd::Zero(n);
	for (std::size_t j = 0; j < count; ++j) {
		c.signal.array() += c.amplitudes[j] * (kTwoPi * c.freqs[j] * t / static_cast<double>(n) + c.phases[j]).sin();
	}
	return c;
}

} // namespace

std::uint64_t splitmix64(std::uint64_t x) {
	x += 0x9E3779B97F4A7C15ULL;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
	return x ^ (x >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
	return splitmix64(seed ^ splitmix64(stream + 1));
}

Xorshift64Star::Xorshift64Star(std::uint64_t seed) : state_(splitmix64(seed)) {
	if (state_ == 0) {
		state_ = 0x9E3779B97F4A7C15ULL;
	}
}

std::uint64_t Xorshift64Star::next() {
	state_ ^= state_ >> 12;
	state_ ^= state_ << 25;
	state_ ^= state_ >> 27;
	return state_ * 0x2545F4914F6CDD1DULL;
}

double Xorshift64Star::uniform() {
	return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Xorshift64Star::uniform(double lo, double hi) {
	return lo + (hi - lo) * uniform();
}

double Xorshift64Star::normal() {
	const double u1 = 1.0 - uniform(); // (0, 1]
	const double u2 = uniform();
	return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

Eigen::VectorXd gen_noise(double mean, double std, Eigen::Index n, std::uint64_t seed) {
	if (std < 0.0 || n < 1) {
		throw Error(ErrorCode::InvalidArgument, "noise needs std >= 0 and n >= 1");
	}
	Xorshift64Star rng(seed);
	Eigen::VectorXd out(n);
	for (Eigen::Index i = 0; i < n; ++i) {
		out[i] = mean + std * rng.normal();
	}
	return out;
}

std::vector<double> CompositeSignal::freqs_per_step() const {
	std::vector<double> out;
	for (double f : freqs) {
		out.push_back(f / static_cast<double>(signal.size()));
	}
	return out;
}

CompositeSignal gen_composite(int n_components, Eigen::Index n, std::uint64_t seed, bool allow_any_count) {
	if (n < 64) {
		throw Error(ErrorCode::InvalidArgument, "composite signals need at least 64 samples");
	}
	if (n_components < 1 || (!allow_any_count && (n_components < 3 || n_components > 10))) {
		throw Error(ErrorCode::InvalidArgument, "composite signals use 3 to 10 components");
	}
	Xorshift64Star rng(seed);
	std::vector<double> amplitudes;
	Xorshift64Star amp_rng(sub_seed(seed, 1));
	for (int j = 0; j < n_components; ++j) {
		amplitudes.push_back(amp_rng.uniform(0.5, 2.0));
	}
	return build_composite(std::move(amplitudes), n, rng);
}

CompositeSignal gen_composite(const std::vector<double>& amplitudes, Eigen::Index n, std::uint64_t seed) {
	if (n < 64 || amplitudes.empty()) {
		throw Error(ErrorCode::InvalidArgument, "composite signals need n >= 64 and at least one component");
	}
	Xorshift64Star rng(seed);
	return build_composite(amplitudes, n, rng);
}

Eigen::VectorXd harmonic_grid(Eigen::Index n, double samples_per_cycle, double phase) {
	return (steps(n).array() * (kTwoPi / samples_per_cycle) + phase).matrix();
}

Eigen::VectorXd gen_harmonic(int multiplier, Eigen::Index n, double phase, double samples_per_cycle) {
	if (multiplier < 1) {
		throw Error(ErrorCode::InvalidArgument, "harmonic multiplier must be >= 1");
	}
	return (static_cast<double>(multiplier) * harmonic_grid(n, samples_per_cycle, phase).array()).sin().matrix();
}

Eigen::MatrixXd gen_harmonic_base(Eigen::Index n, double phase, double samples_per_cycle) {
	const Eigen::ArrayXd x = harmonic_grid(n, samples_per_cycle, phase).array();
	Eigen::MatrixXd base(n, 2);
	base.col(0) = x.sin().matrix();
	base.col(1) = x.cos().matrix();
	return base;
}

SynthKind parse_synth_kind(const std::string& text) {
	static const std::map<std::string, SynthKind> kinds = {
		{"noise", SynthKind::noise},
		{"linear_trend", SynthKind::linear_trend},
		{"exp_trend", SynthKind::exp_trend},
		{"seasonal", SynthKind::seasonal},
		{"additive_combo", SynthKind::additive_combo},
		{"multiplicative_combo", SynthKind::multiplicative_combo},
		{"composite", SynthKind::composite},
		{"harmonic", SynthKind::harmonic},
	};
	const auto it = kinds.find(text);
	if (it == kinds.end()) {
		throw Error(ErrorCode::InvalidArgument, "unknown synthetic kind '" + text + "'");
	}
	return it->second;
}

std::string to_string(SynthKind kind) {
	switch (kind) {
	case SynthKind::noise: return "noise";
	case SynthKind::linear_trend: return "linear_trend";
	case SynthKind::exp_trend: return "exp_trend";
	case SynthKind::seasonal: return "seasonal";
	case SynthKind::additive_combo: return "additive_combo";
	case SynthKind::multiplicative_combo: return "multiplicative_combo";
	case SynthKind::composite: return "composite";
	case SynthKind::harmonic: return "harmonic";
	}
	return "unknown";
}

TimeSeries gen_pattern(const SynthSpec& spec) {
	if (spec.length < 1) {
		throw Error(ErrorCode::InvalidArgument, "synthetic length must be >= 1");
	}
	TimeSeries ts;
	ts.id = spec.id;
	ts.start = spec.start;
	ts.freq = spec.freq;
	const Eigen::Index n = spec.length;
	switch (spec.kind) {
	case SynthKind::noise:
		ts.values = gen_noise(param(spec, "mean", 0.0), param(spec, "std", 1.0), n, spec.seed);
		break;
	case SynthKind::linear_trend:
		ts.values = linear_part(spec);
		break;
	case SynthKind::exp_trend:
		ts.values = param(spec, "a", 1.0) * (param(spec, "b", 0.005) * steps(n).array()).exp();
		break;
	case SynthKind::seasonal:
		ts.values = seasonal_part(spec);
		break;
	case SynthKind::additive_combo:
		ts.values = linear_part(spec) + seasonal_part(spec) +
		            gen_noise(0.0, param(spec, "noise_std", 0.1), n, sub_seed(spec.seed, 2));
		break;
	case SynthKind::multiplicative_combo:
		ts.values = linear_part(spec).array() * (1.0 + seasonal_part(spec).array());
		break;
	case SynthKind::composite:
		ts.values = gen_composite(static_cast<int>(param(spec, "components", 5.0)), n, spec.seed).signal;
		break;
	case SynthKind::harmonic:
		ts.values = gen_harmonic(static_cast<int>(param(spec, "multiplier", 1.0)), n, param(spec, "phase", 0.0),
		                         param(spec, "samples_per_cycle", 64.0));
		break;
	}
	return ts;
}

} // namespace tsfm
