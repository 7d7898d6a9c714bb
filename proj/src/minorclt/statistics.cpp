#include "minorclt/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "minorclt/errors.hpp"

namespace minorclt {

MeanJackknife::MeanJackknife(const std::vector<std::vector<double>> &features, int blocks) {
	if(features.empty() || features[0].size() < 2) {
		throw ConfigError("jackknife needs at least two samples");
	}
	samples_ = static_cast<int>(features[0].size());
	size_t k = features.size();
	for(const auto &f : features) {
		if(static_cast<int>(f.size()) != samples_) {
			throw DimensionError("jackknife feature columns differ in length");
		}
	}
	blocks = std::clamp(blocks, 2, samples_);
	block_sums_.assign(blocks, std::vector<double>(k, 0.0));
	block_sizes_.assign(blocks, 0);
	total_.assign(k, 0.0);
	for(int i = 0; i < samples_; i++) {
		// contiguous blocks of near-equal size
		int b = static_cast<int>(static_cast<long long>(i) * blocks / samples_);
		block_sizes_[b]++;
		for(size_t c = 0; c < k; c++) {
			block_sums_[b][c] += features[c][i];
		}
	}
	for(const auto &bs : block_sums_) {
		for(size_t c = 0; c < k; c++) {
			total_[c] += bs[c];
		}
	}
}

Estimate MeanJackknife::operator()(const std::function<double(const std::vector<double> &, double)> &fn) const {
	size_t k = total_.size();
	std::vector<double> means(k);
	for(size_t c = 0; c < k; c++) {
		means[c] = total_[c] / samples_;
	}
	Estimate e;
	e.value = fn(means, samples_);

	int b_count = blocks();
	std::vector<double> theta(b_count);
	double avg = 0;
	for(int b = 0; b < b_count; b++) {
		double n = samples_ - block_sizes_[b];
		for(size_t c = 0; c < k; c++) {
			means[c] = (total_[c] - block_sums_[b][c]) / n;
		}
		theta[b] = fn(means, n);
		avg += theta[b];
	}
	avg /= b_count;
	double ss = 0;
	for(double t : theta) {
		ss += (t - avg) * (t - avg);
	}
	e.se = std::sqrt((b_count - 1.0) / b_count * ss);
	return e;
}

double quantile(std::vector<double> v, double q) {
	if(v.empty()) {
		throw ConfigError("quantile of an empty sample");
	}
	std::sort(v.begin(), v.end());
	double pos = q * (v.size() - 1);
	size_t lo = static_cast<size_t>(std::floor(pos));
	size_t hi = std::min(lo + 1, v.size() - 1);
	double frac = pos - lo;
	return v[lo] * (1 - frac) + v[hi] * frac;
}

double median(std::vector<double> v) {
	return quantile(std::move(v), 0.5);
}

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
	if(x.size() != y.size() || x.size() < 2) {
		throw ConfigError("slope fit needs at least two points");
	}
	double sx = 0, sy = 0, sxx = 0, sxy = 0;
	size_t n = x.size();
	for(size_t i = 0; i < n; i++) {
		double lx = std::log(x[i]);
		double ly = std::log(std::abs(y[i]));
		sx += lx;
		sy += ly;
		sxx += lx * lx;
		sxy += lx * ly;
	}
	return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}
