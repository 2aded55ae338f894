#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace tsfm {

struct FeatureMatrix {
	std::vector<std::string> column_names;
	Eigen::MatrixXd values; // rows x columns

	Eigen::Index rows() const noexcept { return values.rows(); }
	Eigen::Index cols() const noexcept { return values.cols(); }
};

struct TabularSplit {
	FeatureMatrix x_train;
	Eigen::VectorXd y_train;
	FeatureMatrix x_test;
};

} // namespace tsfm
