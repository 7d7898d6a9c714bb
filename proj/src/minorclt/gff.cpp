#include "minorclt/gff.hpp"

#include <cmath>
#include <numbers>

#include "minorclt/errors.hpp"
#include "minorclt/quadrature.hpp"
#include "minorclt/theory.hpp"

namespace minorclt {

using std::numbers::pi;

namespace {

std::vector<double> angle_breaks(const TestFunction &f, double radius) {
	std::vector<double> out;
	for(double b : f.breakpoints()) {
		if(std::abs(b) < radius) {
			out.push_back(std::acos(b / radius));
		}
	}
	return out;
}

// log|(M - r e^{iu}) / (M - r e^{iv})| with |M - r e^{iw}|^2 = (M-r)^2 + 4 M r sin^2(w/2)
double log_kernel(double M, double r, double u, double v) {
	double su = std::sin(u / 2), sv = std::sin(v / 2);
	double a = (M - r) * (M - r) + 4 * M * r * su * su;
	double b = (M - r) * (M - r) + 4 * M * r * sv * sv;
	return 0.5 * std::log(a / b);
}

double c1_term(const TestFunction &f, double x, double y) {
	double rx = 2 * std::sqrt(x), ry = 2 * std::sqrt(y);
	double M = std::min(x, y);
	double r = std::sqrt(x * y);
	auto bx = angle_breaks(f, rx);
	auto by = angle_breaks(f, ry);

	auto outer = [&](double phi) {
		double fx = f.derivative(rx * std::cos(phi));
		if(fx == 0) {
			return 0.0;
		}
		double sphi = std::sin(phi);
		auto inner = [&](double psi) {
			return f.derivative(ry * std::cos(psi)) * log_kernel(M, r, phi + psi, phi - psi) * std::sin(psi);
		};
		std::vector<double> breaks = by;
		for(double d : {0.0, -0.1, 0.1}) {
			breaks.push_back(phi + d);
		}
		return fx * sphi * quad::integrate(inner, 0.0, pi, breaks, 1e-11, 15);
	};
	return 4 * r / (pi * pi) * quad::integrate(outer, 0.0, pi, bx, 1e-10, 15);
}

// (1/2pi) int s f(s) / sqrt(4x - s^2) ds
double a_term(const TestFunction &f, double x) {
	double rx = 2 * std::sqrt(x);
	auto g = [&](double phi) {
		double s = rx * std::cos(phi);
		return s * f.value(s);
	};
	return quad::integrate(g, 0.0, pi, angle_breaks(f, rx)) / (2 * pi);
}

// int (2x - s^2) f(s) / (pi sqrt(4x - s^2)) ds
double b_term(const TestFunction &f, double x) {
	double rx = 2 * std::sqrt(x);
	auto g = [&](double phi) { return std::cos(2 * phi) * f.value(rx * std::cos(phi)); };
	return -2 * x / pi * quad::integrate(g, 0.0, pi, angle_breaks(f, rx));
}

}

GffCovariance gff_covariance(const TestFunction &f, double x, double y, double sigma4, double s11) {
	if(!(x > 0 && x <= 1 && y > 0 && y <= 1)) {
		throw DomainError("GFF covariance needs x, y in (0, 1]");
	}
	GffCovariance c;
	c.x = x;
	c.y = y;
	double M = std::max(x, y);
	c.c1 = c1_term(f, x, y);
	c.c2 = (s11 - 2) / M * a_term(f, x) * a_term(f, y);
	c.c3 = (sigma4 - 3) / (2 * M * M) * b_term(f, x) * b_term(f, y);
	c.value = c.c1 + c.c2 + c.c3;
	if(x == y && f.kind() == TestFunction::Kind::AbsShift) {
		c.warnings.push_back("logarithmic kernel singularity on the diagonal with a discontinuous f'");
	}
	return c;
}

double gff_closed_form(const TestFunction &f, double sigma4, double s11) {
	auto bp = f.breakpoints();
	auto fp = [&](double s) { return f.derivative(s); };
	double i_f2 = semicircle_integral([&](double s) { return fp(s) * fp(s); }, bp);
	double i_sf = semicircle_integral([&](double s) { return s * fp(s); }, bp);
	double i_f = semicircle_integral(fp, bp);
	return 2 * i_f2 + (sigma4 - 3) * i_sf * i_sf + (s11 - 2) * i_f * i_f;
}

GffDerivativeVariance gff_derivative_variance(const TestFunction &f, double sigma4, double s11,
                                              std::vector<double> eps) {
	if(eps.size() < 2) {
		throw ConfigError("need at least two eps values");
	}
	for(size_t i = 0; i < eps.size(); i++) {
		if(!(eps[i] > 0 && eps[i] < 1) || (i && !(eps[i] < eps[i - 1]))) {
			throw ConfigError("eps sequence must be decreasing within (0, 1)");
		}
	}
	GffDerivativeVariance d;
	d.eps = eps;
	auto top = gff_covariance(f, 1, 1, sigma4, s11);
	d.warnings = top.warnings;
	for(double e : eps) {
		// C is symmetric, so C(1,1-e) = C(1-e,1)
		double cross = gff_covariance(f, 1, 1 - e, sigma4, s11).value;
		double low = gff_covariance(f, 1 - e, 1 - e, sigma4, s11).value;
		d.d_eps.push_back((top.value - 2 * cross + low) / e);
	}
	for(size_t i = 0; i + 1 < eps.size(); i++) {
		double a = eps[i], b = eps[i + 1];
		d.extrapolated.push_back((a * d.d_eps[i + 1] - b * d.d_eps[i]) / (a - b));
	}
	d.d_extrapolated = d.extrapolated.back();
	d.d_closed_form = gff_closed_form(f, sigma4, s11);
	d.var_total_w = variance_components(f, 1.0, sigma4, s11).var_total_w;
	d.relative_deviation = std::abs(d.d_extrapolated - d.d_closed_form) / std::max(1.0, std::abs(d.d_closed_form));

	double scale = std::max(1.0, std::abs(d.d_closed_form));
	if(std::abs(d.var_total_w - d.d_closed_form) > 1e-8 * scale) {
		throw PrecisionError("closed form and var_total_w disagree");
	}
	// finite-difference residuals against the extrapolated value must shrink with eps
	for(size_t i = 0; i + 1 < d.d_eps.size(); i++) {
		double r0 = std::abs(d.d_eps[i] - d.d_extrapolated);
		double r1 = std::abs(d.d_eps[i + 1] - d.d_extrapolated);
		if(r1 > r0 + 1e-9 * scale) {
			throw PrecisionError("finite-difference sequence for D_f is not monotone");
		}
	}
	return d;
}

nlohmann::json to_json(const GffCovariance &c) {
	return {{"x", c.x},   {"y", c.y},         {"c1", c.c1},
	        {"c2", c.c2}, {"value", c.value}, {"c3", c.c3},
	        {"warnings", c.warnings}};
}

nlohmann::json to_json(const GffDerivativeVariance &d) {
	return {{"eps", d.eps},
	        {"d_eps", d.d_eps},
	        {"extrapolated", d.extrapolated},
	        {"d_extrapolated", d.d_extrapolated},
	        {"d_closed_form", d.d_closed_form},
	        {"var_total_w", d.var_total_w},
	        {"relative_deviation", d.relative_deviation},
	        {"warnings", d.warnings}};
}

}
