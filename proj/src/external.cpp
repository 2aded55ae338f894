#include "tsfm/external.hpp"

#include "tsfm/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>

namespace tsfm {

namespace {

using ordered_json = nlohmann::ordered_json;

void require_finite(const Eigen::MatrixXd& m, const char* what) {
	if (!m.allFinite()) {
		throw Error(ErrorCode::InvalidArgument, std::string(what) + " contains NaN or Inf");
	}
}

ordered_json matrix_rows(const Eigen::MatrixXd& m) {
	ordered_json rows = ordered_json::array();
	for (Eigen::Index r = 0; r < m.rows(); ++r) {
		ordered_json row = ordered_json::array();
		for (Eigen::Index c = 0; c < m.cols(); ++c) {
			row.push_back(m(r, c));
		}
		rows.push_back(std::move(row));
	}
	return rows;
}

ordered_json vector_json(const Eigen::VectorXd& v) {
	ordered_json arr = ordered_json::array();
	for (Eigen::Index i = 0; i < v.size(); ++i) {
		arr.push_back(v[i]);
	}
	return arr;
}

class SlotGuard {
public:
	explicit SlotGuard(std::counting_semaphore<>& s) : s_(s) { s_.acquire(); }
	~SlotGuard() { s_.release(); }
	SlotGuard(const SlotGuard&) = delete;
	SlotGuard& operator=(const SlotGuard&) = delete;

private:
	std::counting_semaphore<>& s_;
};

std::string echo_response(const std::string& body) {
	const auto req = nlohmann::json::parse(body);
	const auto& y = req.at("y_train");
	const auto& x_test = req.at("x_test");
	const auto& levels = req.at("quantile_levels");
	if (!y.is_array() || y.empty() || !x_test.is_array() || !levels.is_array() || levels.empty()) {
		throw std::invalid_argument("request fields have the wrong shape");
	}
	double sum = 0.0;
	for (const auto& v : y) {
		sum += v.get<double>();
	}
	const double mean = sum / static_cast<double>(y.size());
	ordered_json rows = ordered_json::array();
	for (std::size_t r = 0; r < x_test.size(); ++r) {
		rows.push_back(ordered_json(std::vector<double>(levels.size(), mean)));
	}
	ordered_json out;
	out["quantiles"] = std::move(rows);
	return out.dump();
}

} // namespace

std::string encode_fit_predict_request(const TabularSplit& split, const Eigen::VectorXd& levels) {
	require_finite(split.x_train.values, "x_train");
	require_finite(split.y_train, "y_train");
	require_finite(split.x_test.values, "x_test");
	require_finite(levels, "quantile_levels");
	ordered_json body;
	body["x_train"] = matrix_rows(split.x_train.values);
	body["y_train"] = vector_json(split.y_train);
	body["x_test"] = matrix_rows(split.x_test.values);
	body["quantile_levels"] = vector_json(levels);
	return body.dump();
}

Eigen::MatrixXd decode_fit_predict_response(const std::string& body, Eigen::Index rows, Eigen::Index cols) {
	const auto doc = nlohmann::json::parse(body, nullptr, false);
	if (doc.is_discarded() || !doc.is_object() || !doc.contains("quantiles") || !doc["quantiles"].is_array()) {
		throw Error(ErrorCode::BackendFailure, "response is not a {\"quantiles\": [...]} object");
	}
	const auto& q = doc["quantiles"];
	if (static_cast<Eigen::Index>(q.size()) != rows) {
		throw Error(ErrorCode::BackendFailure, "response has " + std::to_string(q.size()) + " rows, expected " +
		                                           std::to_string(rows));
	}
	Eigen::MatrixXd out(rows, cols);
	for (Eigen::Index r = 0; r < rows; ++r) {
		const auto& row = q[static_cast<std::size_t>(r)];
		if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
			throw Error(ErrorCode::BackendFailure, "response row " + std::to_string(r) + " has the wrong width");
		}
		for (Eigen::Index c = 0; c < cols; ++c) {
			const auto& v = row[static_cast<std::size_t>(c)];
			if (!v.is_number() || !std::isfinite(v.get<double>())) {
				throw Error(ErrorCode::BackendFailure, "response contains a non-finite or non-numeric value");
			}
			out(r, c) = v.get<double>();
		}
	}
	return out;
}

ExternalRegressor::ExternalRegressor(std::string endpoint, std::chrono::milliseconds timeout, int max_concurrency)
	: timeout_(timeout) {
	if (endpoint.empty()) {
		throw Error(ErrorCode::InvalidArgument, "external regressor needs an endpoint URL");
	}
	if (max_concurrency < 1) {
		throw Error(ErrorCode::InvalidArgument, "max_concurrency must be >= 1");
	}
	const auto scheme = endpoint.find("://");
	const auto path_at = endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
	if (path_at == std::string::npos) {
		base_url_ = endpoint;
		path_ = kFitPredictPath;
	} else {
		base_url_ = endpoint.substr(0, path_at);
		path_ = endpoint.substr(path_at);
		if (path_ == "/") {
			path_ = kFitPredictPath;
		}
	}
	slots_ = std::make_unique<std::counting_semaphore<>>(max_concurrency);
}

QuantilePrediction ExternalRegressor::fit_predict(const TabularSplit& split, const Eigen::VectorXd& levels) const {
	const std::string body = encode_fit_predict_request(split, levels);

	httplib::Result res{nullptr, httplib::Error::Unknown};
	{
		SlotGuard slot(*slots_);
		httplib::Client client(base_url_);
		const auto secs = timeout_.count() / 1000;
		const auto usecs = (timeout_.count() % 1000) * 1000;
		client.set_connection_timeout(secs, usecs);
		client.set_read_timeout(secs, usecs);
		client.set_write_timeout(secs, usecs);
		res = client.Post(path_, body, "application/json");
	}
	if (!res) {
		throw Error(ErrorCode::BackendFailure, base_url_ + path_ + ": " + httplib::to_string(res.error()));
	}
	if (res->status != 200) {
		throw Error(ErrorCode::BackendFailure, base_url_ + path_ + " returned HTTP " + std::to_string(res->status));
	}
	QuantilePrediction pred;
	pred.levels = levels;
	pred.values = decode_fit_predict_response(res->body, split.x_test.rows(), levels.size());
	pred.repaired_rows = repair_monotone(pred.values);
	return pred;
}

EchoServer::EchoServer() : server_(std::make_unique<httplib::Server>()) {
	server_->Post(kFitPredictPath, [](const httplib::Request& req, httplib::Response& res) {
		try {
			res.set_content(echo_response(req.body), "application/json");
		} catch (const std::exception&) {
			res.status = 400;
			res.set_content(R"({"error": "malformed request"})", "application/json");
		}
	});
}

EchoServer::~EchoServer() { stop(); }

int EchoServer::start(const std::string& host, int port) {
	int bound = port;
	if (port == 0) {
		bound = server_->bind_to_any_port(host);
	} else if (!server_->bind_to_port(host, port)) {
		bound = -1;
	}
	if (bound < 0) {
		throw Error(ErrorCode::IOError, "cannot bind echo server to " + host + ":" + std::to_string(port));
	}
	thread_ = std::thread([this] { server_->listen_after_bind(); });
	server_->wait_until_ready();
	return bound;
}

void EchoServer::listen(const std::string& host, int port) {
	if (!server_->listen(host, port)) {
		throw Error(ErrorCode::IOError, "cannot listen on " + host + ":" + std::to_string(port));
	}
}

void EchoServer::stop() {
	if (server_) {
		server_->stop();
	}
	if (thread_.joinable()) {
		thread_.join();
	}
}

} // namespace tsfm
