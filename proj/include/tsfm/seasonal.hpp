#pragma once

#include "tsfm/error.hpp"
#include "tsfm/tabular.hpp"

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace tsfm {

/// Top-k spectral peaks; freqs in cycles per original step, sorted by
/// non-increasing magnitude.
struct SeasonalitySet {
	std::vector<double> freqs;
	std::vector<double> magnitudes;
	int k_requested = 0;

	std::size_t size() const noexcept { return freqs.size(); }
	bool empty() const noexcept { return freqs.empty(); }
};

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct LinearDetrend {
	Vector<Scalar> residual;
	Scalar slope;
	Scalar intercept;
};

/// Ordinary least squares of y against its index 0..n-1.
template <typename Derived>
LinearDetrend<typename Derived::Scalar> detrend_linear(const Eigen::MatrixBase<Derived>& y) {
	using Scalar = typename Derived::Scalar;
	const Eigen::Index n = y.size();
	if (n < 2) {
		throw Error(ErrorCode::TooShort, "linear detrend needs at least 2 points");
	}
	const Vector<Scalar> t = Vector<Scalar>::LinSpaced(n, Scalar(0), Scalar(n - 1));
	const Scalar t_mean = Scalar(n - 1) / Scalar(2);
	const Scalar y_mean = y.mean();
	const Vector<Scalar> tc = t.array() - t_mean;
	const Scalar slope = tc.dot((y.array() - y_mean).matrix()) / tc.squaredNorm();
	const Scalar intercept = y_mean - slope * t_mean;
	Vector<Scalar> residual = y.array() - (slope * t.array() + intercept);
	return {std::move(residual), slope, intercept};
}

/// Symmetric Hann taper; endpoints are zero for n >= 2.
template <typename Scalar = double>
Vector<Scalar> hann_window(Eigen::Index n) {
	if (n < 1) {
		throw Error(ErrorCode::InvalidArgument, "window length must be >= 1");
	}
	if (n == 1) {
		return Vector<Scalar>::Ones(1);
	}
	Vector<Scalar> w(n);
	const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
	for (Eigen::Index j = 0; j < n; ++j) {
		w[j] = Scalar(0.5) * (Scalar(1) - std::cos(two_pi * Scalar(j) / Scalar(n - 1)));
	}
	return w;
}

template <typename Derived>
Vector<typename Derived::Scalar> zero_pad(const Eigen::MatrixBase<Derived>& y, int factor = 2) {
	if (factor < 1) {
		throw Error(ErrorCode::InvalidArgument, "zero-pad factor must be >= 1");
	}
	Vector<typename Derived::Scalar> out = Vector<typename Derived::Scalar>::Zero(y.size() * factor);
	out.head(y.size()) = y;
	return out;
}

inline std::size_t next_pow2(std::size_t n) {
	std::size_t p = 1;
	while (p < n) {
		p <<= 1;
	}
	return p;
}

/// In-place iterative radix-2 FFT (forward sign e^{-2πi jt/N}). Size must be a power of two.
template <typename Scalar>
void fft_radix2(std::vector<std::complex<Scalar>>& a, bool inverse = false) {
	const std::size_t n = a.size();
	if (n == 0 || (n & (n - 1)) != 0) {
		throw Error(ErrorCode::InvalidArgument, "radix-2 FFT size must be a power of two");
	}
	for (std::size_t i = 1, j = 0; i < n; ++i) {
		std::size_t bit = n >> 1;
		for (; j & bit; bit >>= 1) {
			j ^= bit;
		}
		j ^= bit;
		if (i < j) {
			std::swap(a[i], a[j]);
		}
	}
	// Twiddles from direct cos/sin to avoid recurrence drift.
	const Scalar sign = inverse ? Scalar(1) : Scalar(-1);
	std::vector<std::complex<Scalar>> tw(n / 2);
	for (std::size_t k = 0; k < n / 2; ++k) {
		const Scalar ang = sign * Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(k) / Scalar(n);
		tw[k] = {std::cos(ang), std::sin(ang)};
	}
	for (std::size_t len = 2; len <= n; len <<= 1) {
		const std::size_t half = len / 2;
		const std::size_t stride = n / len;
		for (std::size_t i = 0; i < n; i += len) {
			for (std::size_t k = 0; k < half; ++k) {
				const auto u = a[i + k];
				const auto v = a[i + k + half] * tw[k * stride];
				a[i + k] = u + v;
				a[i + k + half] = u - v;
			}
		}
	}
	if (inverse) {
		for (auto& x : a) {
			x /= Scalar(n);
		}
	}
}

/// Exact length-N DFT for any N: radix-2 directly when N is a power of two,
/// Bluestein's chirp-z (over radix-2 convolutions) otherwise.
template <typename Scalar>
std::vector<std::complex<Scalar>> dft(const std::vector<std::complex<Scalar>>& x) {
	const std::size_t n = x.size();
	if (n == 0) {
		return {};
	}
	if ((n & (n - 1)) == 0) {
		auto out = x;
		fft_radix2(out);
		return out;
	}
	const std::size_t m = next_pow2(2 * n - 1);
	std::vector<std::complex<Scalar>> chirp(n);
	for (std::size_t k = 0; k < n; ++k) {
		// k^2 mod 2n keeps the angle argument small.
		const auto k2 = static_cast<std::size_t>((static_cast<unsigned long long>(k) * k) % (2 * n));
		const Scalar ang = -std::numbers::pi_v<Scalar> * Scalar(k2) / Scalar(n);
		chirp[k] = {std::cos(ang), std::sin(ang)};
	}
	std::vector<std::complex<Scalar>> a(m), b(m);
	for (std::size_t k = 0; k < n; ++k) {
		a[k] = x[k] * chirp[k];
	}
	b[0] = std::conj(chirp[0]);
	for (std::size_t k = 1; k < n; ++k) {
		b[k] = b[m - k] = std::conj(chirp[k]);
	}
	fft_radix2(a);
	fft_radix2(b);
	for (std::size_t i = 0; i < m; ++i) {
		a[i] *= b[i];
	}
	fft_radix2(a, true);
	std::vector<std::complex<Scalar>> out(n);
	for (std::size_t k = 0; k < n; ++k) {
		out[k] = a[k] * chirp[k];
	}
	return out;
}

template <typename Scalar>
struct Spectrum {
	Vector<Scalar> freqs; // j / N, cycles per sample
	Vector<Scalar> mags;  // |X_j| for j = 0..floor(N/2)
};

template <typename Derived>
Spectrum<typename Derived::Scalar> real_dft_magnitude(const Eigen::MatrixBase<Derived>& y) {
	using Scalar = typename Derived::Scalar;
	const auto n = static_cast<std::size_t>(y.size());
	if (n < 2) {
		throw Error(ErrorCode::TooShort, "DFT needs at least 2 samples");
	}
	std::vector<std::complex<Scalar>> x(n);
	for (std::size_t i = 0; i < n; ++i) {
		x[i] = {y[static_cast<Eigen::Index>(i)], Scalar(0)};
	}
	const auto spec = dft(x);
	const auto bins = static_cast<Eigen::Index>(n / 2 + 1);
	Spectrum<Scalar> out{Vector<Scalar>(bins), Vector<Scalar>(bins)};
	for (Eigen::Index j = 0; j < bins; ++j) {
		out.freqs[j] = Scalar(j) / Scalar(n);
		out.mags[j] = std::abs(spec[static_cast<std::size_t>(j)]);
	}
	return out;
}

/// Missing (NaN) entries replaced by linear interpolation between observed
/// neighbours; leading/trailing gaps take the nearest observed value.
Eigen::VectorXd interpolate_missing(const Eigen::VectorXd& y);

struct DetectOptions {
	int pad_factor = 2;
	int min_separation_bins = 1;
	Eigen::Index min_observed = 8;
};

/// Detrend, Hann window, zero-pad, real DFT, then the k largest local maxima
/// (bin 0 excluded). Fewer than min_observed points yields an empty set.
SeasonalitySet detect_seasonalities(const Eigen::VectorXd& y, int k, const DetectOptions& opts = {});

/// 2*k_requested columns of (cos, sin) pairs at each detected frequency;
/// pairs beyond the detected count are zero-filled.
FeatureMatrix seasonal_features(const SeasonalitySet& seasonalities, const Eigen::VectorXd& indices,
                                int k_requested);

} // namespace tsfm
