#include <doctest.h>

#include <cmath>
#include <random>

#include "minorclt/statistics.hpp"

using namespace minorclt;

TEST_CASE("median and quantile") {
	CHECK(median({3, 1, 2}) == 2);
	CHECK(median({4, 1, 3, 2}) == 2.5);
	CHECK(quantile({0, 1, 2, 3, 4}, 0.5) == 2);
	CHECK(quantile({0, 1, 2, 3, 4}, 1.0) == 4);
	CHECK(quantile({0, 1, 2, 3, 4}, 0.0) == 0);
}

TEST_CASE("log-log slope") {
	std::vector<double> x{100, 400, 1600}, y;
	for(double v : x) {
		y.push_back(3 / v);
	}
	CHECK(loglog_slope(x, y) == doctest::Approx(-1));
}

TEST_CASE("jackknife standard errors") {
	std::mt19937_64 rng(3);
	std::normal_distribution<double> g(0, 2);
	int n = 4000;
	std::vector<double> x(n), x2(n);
	double s = 0, ss = 0;
	for(int i = 0; i < n; i++) {
		x[i] = g(rng);
		x2[i] = x[i] * x[i];
		s += x[i];
		ss += x[i] * x[i];
	}
	double mean = s / n;
	double sd = std::sqrt((ss - n * mean * mean) / (n - 1));
	MeanJackknife jk({x, x2}, n);
	auto m = jk([](const std::vector<double> &mu, double) { return mu[0]; });
	CHECK(m.value == doctest::Approx(mean));
	// delete-one jackknife of a mean reproduces sd / sqrt(n)
	CHECK(m.se == doctest::Approx(sd / std::sqrt(n)).epsilon(1e-9));
	auto var = jk([](const std::vector<double> &mu, double k) { return (mu[1] - mu[0] * mu[0]) * k / (k - 1); });
	CHECK(var.value == doctest::Approx(sd * sd));
	// Gaussian: SE of the variance ~ sigma^2 sqrt(2/n)
	CHECK(var.se == doctest::Approx(4 * std::sqrt(2.0 / n)).epsilon(0.15));

	MeanJackknife blocked({x}, 200);
	auto mb = blocked([](const std::vector<double> &mu, double) { return mu[0]; });
	CHECK(mb.value == doctest::Approx(mean));
	CHECK(mb.se == doctest::Approx(sd / std::sqrt(n)).epsilon(0.2));
}
