#pragma once

#include <cmath>
#include <numbers>

#include "minorclt/quadrature.hpp"

namespace minorclt {

namespace detail {

inline std::vector<double> theta_breaks(const std::vector<double> &breaks) {
	std::vector<double> out;
	for(double x : breaks) {
		if(x > -2 && x < 2) {
			out.push_back(std::acos(x / 2));
		}
	}
	return out;
}

}

template<class G>
double semicircle_integral(G &&g, const std::vector<double> &breaks) {
	auto integrand = [&](double t) {
		double s = std::sin(t);
		return g(2 * std::cos(t)) * s * s;
	};
	return 2 / std::numbers::pi * quad::integrate(integrand, 0.0, std::numbers::pi, detail::theta_breaks(breaks));
}

template<class G>
double arcsine_integral(G &&g, const std::vector<double> &breaks) {
	auto integrand = [&](double t) { return g(2 * std::cos(t)); };
	return quad::integrate(integrand, 0.0, std::numbers::pi, detail::theta_breaks(breaks)) / std::numbers::pi;
}

}
