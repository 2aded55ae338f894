#pragma once

#include "tsfm/quantiles.hpp"
#include "tsfm/tabular.hpp"

#include <Eigen/Core>

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace tsfm {

inline constexpr const char* kFitPredictPath = "/v1/fit_predict";

/// Request body for POST /v1/fit_predict. Throws InvalidArgument on non-finite numbers.
std::string encode_fit_predict_request(const TabularSplit& split, const Eigen::VectorXd& levels);

/// Parses {"quantiles": [[...], ...]} and checks it is rows x cols of finite numbers.
/// Any deviation raises BackendFailure.
Eigen::MatrixXd decode_fit_predict_response(const std::string& body, Eigen::Index rows, Eigen::Index cols);

/// HTTP client for an out-of-process regressor. Safe to share between threads;
/// at most max_concurrency requests are in flight at once.
class ExternalRegressor {
public:
	ExternalRegressor(std::string endpoint, std::chrono::milliseconds timeout, int max_concurrency = 1);

	QuantilePrediction fit_predict(const TabularSplit& split, const Eigen::VectorXd& levels) const;

	const std::string& endpoint() const noexcept { return base_url_; }
	std::chrono::milliseconds timeout() const noexcept { return timeout_; }

private:
	std::string base_url_;
	std::string path_;
	std::chrono::milliseconds timeout_;
	std::unique_ptr<std::counting_semaphore<>> slots_;
};

/// Reference server for the fit_predict protocol: answers every request with
/// mean(y_train) at every level. Malformed requests get HTTP 400.
class EchoServer {
public:
	EchoServer();
	~EchoServer();
	EchoServer(const EchoServer&) = delete;
	EchoServer& operator=(const EchoServer&) = delete;

	/// Binds (port 0 picks a free port) and serves on a background thread.
	int start(const std::string& host = "127.0.0.1", int port = 0);
	/// Binds and serves on the calling thread until stop().
	void listen(const std::string& host, int port);
	void stop();

private:
	std::unique_ptr<httplib::Server> server_;
	std::thread thread_;
};

} // namespace tsfm
