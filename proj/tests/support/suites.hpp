#pragma once

#include "tsfm/synth.hpp"

#include <string>
#include <vector>

namespace tsfm::test {

/// Hourly trend + daily cycle + a second cycle off the daily grid + noise.
/// Parameters are drawn from a fixed stream so the suite is identical on every run.
inline std::vector<TimeSeries> periodic_trend_suite(int count, Eigen::Index length, std::uint64_t seed = 2024) {
	Xorshift64Star rng(seed);
	std::vector<TimeSeries> out;
	for (int i = 0; i < count; ++i) {
		SynthSpec spec;
		spec.kind = SynthKind::additive_combo;
		spec.length = length;
		spec.seed = sub_seed(seed, static_cast<std::uint64_t>(i) + 100);
		spec.id = "periodic_" + std::to_string(i);
		spec.params = {
			{"a", rng.uniform(0.0, 0.003)},
			{"b", 5.0},
			{"period", 24.0},
			{"amplitude", rng.uniform(0.5, 1.5)},
			{"period2", rng.uniform(8.0, 40.0)},
			{"amplitude2", rng.uniform(0.5, 1.0)},
			{"noise_std", 0.3},
		};
		out.push_back(gen_pattern(spec));
	}
	return out;
}

} // namespace tsfm::test
