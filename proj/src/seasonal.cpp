#include "tsfm/seasonal.hpp"

#include "tsfm/series.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace tsfm {

Eigen::VectorXd interpolate_missing(const Eigen::VectorXd& y) {
	Eigen::VectorXd out = y;
	const Eigen::Index n = y.size();
	Eigen::Index prev = -1;
	for (Eigen::Index i = 0; i < n; ++i) {
		if (is_missing(y[i])) {
			continue;
		}
		if (prev < 0) {
			out.head(i).setConstant(y[i]);
		} else if (i - prev > 1) {
			const double step = (y[i] - y[prev]) / static_cast<double>(i - prev);
			for (Eigen::Index j = prev + 1; j < i; ++j) {
				out[j] = y[prev] + step * static_cast<double>(j - prev);
			}
		}
		prev = i;
	}
	if (prev >= 0 && prev < n - 1) {
		out.tail(n - 1 - prev).setConstant(y[prev]);
	}
	return out;
}

SeasonalitySet detect_seasonalities(const Eigen::VectorXd& y, int k, const DetectOptions& opts) {
	SeasonalitySet result;
	result.k_requested = k;
	if (k < 1) {
		throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
	}
	const Eigen::Index observed = (y.array() == y.array()).count();
	if (observed < opts.min_observed) {
		return result;
	}

	const Eigen::VectorXd filled = interpolate_missing(y);
	const auto detrended = detrend_linear(filled);
	const Eigen::VectorXd windowed = detrended.residual.cwiseProduct(hann_window(filled.size()));
	const Eigen::VectorXd padded = zero_pad(windowed, opts.pad_factor);

	const auto fft_len = static_cast<Eigen::Index>(next_pow2(static_cast<std::size_t>(padded.size())));
	Eigen::VectorXd signal = Eigen::VectorXd::Zero(fft_len);
	signal.head(padded.size()) = padded;
	const auto spectrum = real_dft_magnitude(signal);
	const Eigen::VectorXd& mags = spectrum.mags;
	const Eigen::Index last = mags.size() - 1;

	std::vector<Eigen::Index> peaks;
	for (Eigen::Index j = 1; j <= last; ++j) {
		const bool above_left = mags[j] > mags[j - 1];
		const bool above_right = j == last || mags[j] >= mags[j + 1];
		if (above_left && above_right) {
			peaks.push_back(j);
		}
	}
	std::stable_sort(peaks.begin(), peaks.end(),
	                 [&](Eigen::Index a, Eigen::Index b) { return mags[a] > mags[b]; });

	std::vector<Eigen::Index> chosen;
	for (Eigen::Index j : peaks) {
		if (static_cast<int>(chosen.size()) == k) {
			break;
		}
		const bool separated = std::all_of(chosen.begin(), chosen.end(), [&](Eigen::Index c) {
			return std::abs(j - c) >= opts.min_separation_bins;
		});
		if (separated) {
			chosen.push_back(j);
		}
	}
	for (Eigen::Index j : chosen) {
		result.freqs.push_back(spectrum.freqs[j]);
		result.magnitudes.push_back(mags[j]);
	}
	return result;
}

FeatureMatrix seasonal_features(const SeasonalitySet& seasonalities, const Eigen::VectorXd& indices,
                                int k_requested) {
	FeatureMatrix block;
	block.values = Eigen::MatrixXd::Zero(indices.size(), 2 * k_requested);
	const double two_pi = 2.0 * std::numbers::pi;
	for (int i = 0; i < k_requested; ++i) {
		block.column_names.push_back("seasonal_" + std::to_string(i) + "_cos");
		block.column_names.push_back("seasonal_" + std::to_string(i) + "_sin");
		if (static_cast<std::size_t>(i) >= seasonalities.freqs.size()) {
			continue;
		}
		const Eigen::ArrayXd phase = two_pi * seasonalities.freqs[i] * indices.array();
		block.values.col(2 * i) = phase.cos();
		block.values.col(2 * i + 1) = phase.sin();
	}
	return block;
}

} // namespace tsfm
