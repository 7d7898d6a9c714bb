#include "minorclt/theory.hpp"

#include <Eigen/Dense>

#include "minorclt/errors.hpp"

namespace minorclt {

using cplx = std::complex<double>;
using std::numbers::pi;

double semicircle_density(double x) {
	double d = 4 - x * x;
	return d > 0 ? std::sqrt(d) / (2 * pi) : 0.0;
}

cplx semicircle_stieltjes(cplx z) {
	if(z.imag() == 0 && std::abs(z.real()) <= 2) {
		throw DomainError("Stieltjes transform on the cut needs a boundary side");
	}
	// sqrt(z-2) sqrt(z+2) carries the branch cut [-2,2] and behaves like z at infinity
	cplx s = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
	return -2.0 / (z + s);
}

cplx semicircle_stieltjes_boundary(double x, int side) {
	if(side != 1 && side != -1) {
		throw DomainError("boundary side must be +1 or -1");
	}
	if(std::abs(x) >= 2) {
		return semicircle_stieltjes(cplx{x, 0.0});
	}
	return {-x / 2, side * std::sqrt(4 - x * x) / 2};
}

double omega_f(const TestFunction &f) {
	return arcsine_integral([&](double x) { return f.value(x); }, f.breakpoints());
}

double vksl_curve(double E) {
	if(std::abs(E) >= 2) {
		return std::abs(E);
	}
	return 2 / pi * (E * std::asin(E / 2) + std::sqrt(4 - E * E));
}

nlohmann::json to_json(const TheoryValues &t) {
	return {
	    {"omega_f", t.omega_f},         {"v_f1", t.v_f1},
	    {"v_f2", t.v_f2},               {"v_sigma2", t.v_sigma2},
	    {"coef_w", t.coef_w},           {"coef_wtilde", t.coef_wtilde},
	    {"v_f_total", t.v_f_total},     {"var_total_w", t.var_total_w},
	    {"var_total_wtilde", t.var_total_wtilde},
	};
}

TheoryValues theory_values_from_json(const nlohmann::json &j) {
	TheoryValues t;
	t.omega_f = j.at("omega_f");
	t.v_f1 = j.at("v_f1");
	t.v_f2 = j.at("v_f2");
	t.v_sigma2 = j.at("v_sigma2");
	t.coef_w = j.at("coef_w");
	t.coef_wtilde = j.at("coef_wtilde");
	t.v_f_total = j.at("v_f_total");
	t.var_total_w = j.at("var_total_w");
	t.var_total_wtilde = j.at("var_total_wtilde");
	return t;
}

namespace {

bool is_zero(cplx s) {
	return s == cplx{0.0, 0.0};
}

bool is_one(cplx s) {
	return s == cplx{1.0, 0.0};
}

void check_params(cplx sigma2, double sigma4, double s11) {
	if(std::abs(sigma2) > 1 + 1e-12) {
		throw ConfigError("|sigma2| must not exceed 1");
	}
	if(!(sigma4 >= 1)) {
		throw ConfigError("sigma4 must be at least 1");
	}
	if(!(s11 >= 0)) {
		throw ConfigError("s11 must be nonnegative");
	}
}

}

TheoryValues variance_components(const TestFunction &f, cplx sigma2, double sigma4, double s11) {
	check_params(sigma2, sigma4, s11);
	if(f.kind() == TestFunction::Kind::Tabulated && f.nodes_in(-2, 2) < 200) {
		throw PrecisionError("tabulated test function has fewer than 200 nodes on [-2,2]");
	}
	auto bp = f.breakpoints();
	auto fp = [&](double x) { return f.derivative(x); };

	TheoryValues t;
	t.omega_f = omega_f(f);
	double i_f2 = semicircle_integral([&](double x) { return fp(x) * fp(x); }, bp);
	double i_xf = semicircle_integral([&](double x) { return x * fp(x); }, bp);
	t.coef_w = semicircle_integral(fp, bp);
	if(auto E = f.kink()) {
		t.coef_wtilde = *E * semicircle_density(*E);
	} else {
		t.coef_wtilde = semicircle_integral([&](double x) { return x * f.second_derivative(x) / 2; }, bp);
	}
	t.v_f1 = i_f2 - i_xf * i_xf - t.coef_w * t.coef_w;
	t.v_f2 = i_xf * i_xf;
	if(is_zero(sigma2)) {
		t.v_sigma2 = 0;
	} else if(is_one(sigma2)) {
		t.v_sigma2 = t.v_f1;
	} else {
		t.v_sigma2 = v_sigma2(f, sigma2);
	}
	t.v_f_total = t.v_f1 + std::norm(sigma2) * t.v_sigma2 + (sigma4 - 1) * t.v_f2;
	t.var_total_w = t.v_f_total + s11 * t.coef_w * t.coef_w;
	t.var_total_wtilde = t.v_f_total + s11 * t.coef_wtilde * t.coef_wtilde;
	return t;
}

cplx vsigma2_kernel(cplx a, cplx sigma2) {
	double sr = sigma2.real();
	double si = sigma2.imag();
	cplx T = 1.0;
	if(si != 0) {
		cplx u = a * si;
		T = std::abs(u) < 1e-6 ? 1.0 + u * u / 3.0 : std::tan(u) / u;
	}
	cplx phi = ((1.0 + a * sr) * T - 1.0) / (1.0 - sr * a * T);
	return a * a * phi;
}

double v_sigma2_at(const TestFunction &f, cplx sigma2, double eta0) {
	double lo = std::max(-3.0, f.domain_min());
	double hi = std::min(3.0, f.domain_max());
	std::vector<double> outer_breaks{-2.0, 2.0};
	if(auto E = f.kink()) {
		outer_breaks.push_back(*E);
	}

	auto outer = [&](double x) {
		double fx = f.derivative(x);
		if(fx == 0) {
			return 0.0;
		}
		cplx m0 = semicircle_stieltjes({x, eta0});
		auto inner = [&](double y) {
			double fy = f.derivative(y);
			if(fy == 0) {
				return 0.0;
			}
			cplx m1 = semicircle_stieltjes({y, eta0});
			cplx k = vsigma2_kernel(m0 * std::conj(m1), sigma2) - vsigma2_kernel(m0 * m1, sigma2);
			return fy * k.real();
		};
		std::vector<double> breaks = outer_breaks;
		for(double s : {0.0, 1.0, 10.0, 100.0, 1000.0}) {
			breaks.push_back(x - s * eta0);
			breaks.push_back(x + s * eta0);
		}
		return fx * quad::integrate(inner, lo, hi, breaks, 1e-10, 15);
	};
	return quad::integrate(outer, lo, hi, outer_breaks, 1e-9, 15) / (2 * pi * pi);
}

VSigma2Detail v_sigma2_detail(const TestFunction &f, cplx sigma2) {
	if(std::abs(sigma2) > 1 + 1e-12) {
		throw ConfigError("|sigma2| must not exceed 1");
	}
	VSigma2Detail d;
	d.eta = {1e-3, 5e-4, 2.5e-4};
	if(is_zero(sigma2)) {
		d.raw = {0, 0, 0};
		return d;
	}
	for(double e : d.eta) {
		d.raw.push_back(v_sigma2_at(f, sigma2, e));
	}
	// V(eta) = V0 + a eta + b eta log eta
	Eigen::Matrix3d A;
	Eigen::Vector3d rhs;
	for(int i = 0; i < 3; i++) {
		A(i, 0) = 1;
		A(i, 1) = d.eta[i];
		A(i, 2) = d.eta[i] * std::log(d.eta[i]);
		rhs(i) = d.raw[i];
	}
	d.fit = A.colPivHouseholderQr().solve(rhs)(0);
	d.richardson = 2 * d.raw[2] - d.raw[1];
	d.value = d.fit;
	if(!std::isfinite(d.fit) || std::abs(d.fit - d.richardson) > 5e-3 * std::max(1.0, std::abs(d.fit))) {
		throw PrecisionError("sigma2 correction does not settle as eta0 -> 0 (fit " + std::to_string(d.fit) +
		                     ", richardson " + std::to_string(d.richardson) + ")");
	}
	return d;
}

double v_sigma2(const TestFunction &f, cplx sigma2) {
	return v_sigma2_detail(f, sigma2).value;
}

nlohmann::json to_json(const YoungVariance &y) {
	return {
	    {"E", y.E},
	    {"V", y.V},
	    {"V1", y.V1},
	    {"V2", y.V2},
	    {"v_sigma2", y.v_sigma2},
	    {"coef_w", y.coef_w},
	    {"coef_wtilde", y.coef_wtilde},
	    {"var_total_w", y.var_total_w},
	    {"var_total_wtilde", y.var_total_wtilde},
	};
}

YoungVariance young_variance(double E, cplx sigma2, double sigma4, double s11) {
	check_params(sigma2, sigma4, s11);
	YoungVariance y;
	y.E = E;
	double d = std::max(4 - E * E, 0.0);
	double sq = std::sqrt(d);
	double arc = std::abs(E) >= 2 ? std::copysign(pi / 2, E) : std::asin(E / 2);
	y.V2 = d * d * d / (9 * pi * pi);
	y.coef_w = -(E * sq + 4 * arc) / (2 * pi);
	y.coef_wtilde = E * sq / (2 * pi);
	y.V1 = 1 - y.V2 - y.coef_w * y.coef_w;
	if(is_zero(sigma2)) {
		y.v_sigma2 = 0;
	} else if(is_one(sigma2)) {
		y.v_sigma2 = y.V1;
	} else {
		y.v_sigma2 = v_sigma2(TestFunction::abs_shift(E), sigma2);
	}
	y.V = y.V1 + std::norm(sigma2) * y.v_sigma2 + (sigma4 - 1) * y.V2;
	y.var_total_w = y.V + s11 * y.coef_w * y.coef_w;
	y.var_total_wtilde = y.V + s11 * y.coef_wtilde * y.coef_wtilde;
	return y;
}

}
