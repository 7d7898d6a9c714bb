#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

namespace minorclt {

struct Estimate {
	double value = 0;
	double se = 0;
};

inline nlohmann::json to_json(const Estimate &e) {
	return {{"value", e.value}, {"se", e.se}};
}

// Block jackknife for estimators that are smooth functions of feature means.
// fn receives the feature means and the number of samples they were taken over.
class MeanJackknife {
public:
	MeanJackknife(const std::vector<std::vector<double>> &features, int blocks);

	Estimate operator()(const std::function<double(const std::vector<double> &, double)> &fn) const;

	int blocks() const { return static_cast<int>(block_sums_.size()); }
	int samples() const { return samples_; }

private:
	int samples_;
	std::vector<double> total_;
	std::vector<std::vector<double>> block_sums_;
	std::vector<int> block_sizes_;
};

double median(std::vector<double> v);
double quantile(std::vector<double> v, double q);

// least-squares slope of log|y| against log x
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

}
