#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "minorclt/test_function.hpp"

namespace minorclt {

struct GffCovariance {
	double x = 1, y = 1;
	double c1 = 0, c2 = 0, c3 = 0;
	double value = 0;
	std::vector<std::string> warnings;
};

GffCovariance gff_covariance(const TestFunction &f, double x, double y, double sigma4, double s11);

struct GffDerivativeVariance {
	std::vector<double> eps;
	std::vector<double> d_eps;
	std::vector<double> extrapolated;  // order-1 Richardson on consecutive pairs
	double d_extrapolated = 0;          // last Richardson value
	double d_closed_form = 0;
	double var_total_w = 0;             // variance_components at sigma2 = 1
	double relative_deviation = 0;
	std::vector<std::string> warnings;
};

GffDerivativeVariance gff_derivative_variance(const TestFunction &f, double sigma4, double s11,
                                              std::vector<double> eps = {1e-2, 5e-3, 2.5e-3});

// 2 int f'^2 rho + (sigma4 - 3)(int s f' rho)^2 + (s11 - 2)(int f' rho)^2
double gff_closed_form(const TestFunction &f, double sigma4, double s11);

nlohmann::json to_json(const GffCovariance &c);
nlohmann::json to_json(const GffDerivativeVariance &d);

}
