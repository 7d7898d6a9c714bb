#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "minorclt/errors.hpp"
#include "minorclt/theory.hpp"

using namespace minorclt;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

// composite Simpson on [a,b]
double simpson(const std::function<double(double)> &g, double a, double b, int n = 20000) {
	double h = (b - a) / n, s = g(a) + g(b);
	for(int i = 1; i < n; i++) {
		s += g(a + i * h) * (i % 2 ? 4 : 2);
	}
	return s * h / 3;
}

// int g d(semicircle) through x = 2 cos t, split where g jumps
double semicircle_mean(const std::function<double(double)> &g, std::vector<double> jumps = {}) {
	auto h = [&](double t) { return g(2 * std::cos(t)) * std::sin(t) * std::sin(t); };
	std::vector<double> ts{0};
	for(auto it = jumps.rbegin(); it != jumps.rend(); ++it) {
		ts.push_back(std::acos(*it / 2));
	}
	ts.push_back(pi);
	double s = 0;
	for(size_t i = 0; i + 1 < ts.size(); i++) {
		s += simpson(h, ts[i] + 1e-13, ts[i + 1] - 1e-13);
	}
	return 2 / pi * s;
}

// Chebyshev-side coefficients b_k = (1/pi) int f'(x) m(x + i0)^k dx with m(2 cos t + i0) = -e^{-it}
cplx b_coefficient(const std::function<double(double)> &fp, int k) {
	double sign = k % 2 ? -1 : 1;
	double re = simpson([&](double t) { return fp(2 * std::cos(t)) * std::cos(k * t) * std::sin(t); }, 0, pi);
	double im = simpson([&](double t) { return fp(2 * std::cos(t)) * std::sin(k * t) * std::sin(t); }, 0, pi);
	return sign * 2 / pi * cplx{re, -im};
}

// kernel a^2 Phi(a) written out again for the series oracle
cplx kernel(cplx a, cplx s) {
	double r = s.real(), q = s.imag();
	cplx T = q == 0 ? cplx{1} : std::tan(a * q) / (a * q);
	return a * a * ((1.0 + a * r) * T - 1.0) / (1.0 - r * a * T);
}

// V_sigma2 = (1/2) sum_k Re[d_k (|b_k|^2 - b_k^2)] with d_k the Taylor coefficients of the kernel
double v_sigma2_series(const std::function<double(double)> &fp, cplx s, int kmax = 60) {
	const int m = 512;
	const double rho = 0.8;
	double total = 0;
	for(int k = 3; k <= kmax; k++) {
		cplx d = 0;
		for(int j = 0; j < m; j++) {
			double phi = 2 * pi * j / m;
			d += kernel(rho * std::polar(1.0, phi), s) * std::polar(1.0, -k * phi);
		}
		d /= m * std::pow(rho, k);
		cplx b = b_coefficient(fp, k);
		total += 0.5 * (d * (std::norm(b) - b * b)).real();
	}
	return total;
}

}

TEST_CASE("semicircle density and Stieltjes transform") {
	CHECK(semicircle_mean([](double) { return 1.0; }) == doctest::Approx(1));
	CHECK(semicircle_density(0) == doctest::Approx(1 / pi));
	CHECK(semicircle_density(2.5) == 0);
	for(cplx z : {cplx{0.3, 1}, cplx{-1.2, 0.01}, cplx{3, -0.5}, cplx{0, 2}}) {
		cplx m = semicircle_stieltjes(z);
		CHECK(std::abs(m * m + z * m + 1.0) < 1e-12);
		CHECK(m.imag() * z.imag() > 0);
	}
	cplx m2i = semicircle_stieltjes({0, 2});
	CHECK(std::abs(m2i - cplx{0, std::sqrt(2.0) - 1}) < 1e-14);
	CHECK(std::abs(semicircle_stieltjes({1e4, 1}) * cplx{1e4, 1} + 1.0) < 1e-7);
	CHECK_THROWS_AS(semicircle_stieltjes({1.0, 0.0}), DomainError);
	cplx up = semicircle_stieltjes_boundary(1.0, 1);
	CHECK(std::abs(up - semicircle_stieltjes({1.0, 1e-12})) < 1e-6);
	CHECK(std::abs(semicircle_stieltjes_boundary(1.0, -1) - std::conj(up)) < 1e-15);
}

TEST_CASE("centering constants") {
	// arcsine moments: E X^2 = 2, E X^4 = 6
	CHECK(omega_f(TestFunction::parse("poly:0,0,1")) == doctest::Approx(2));
	CHECK(omega_f(TestFunction::parse("poly:0,0,0,0,1")) == doctest::Approx(6));
	CHECK(std::abs(omega_f(TestFunction::parse("poly:0,1"))) < 1e-14);
	for(double E : {0.0, 0.7, -1.3, 2.5}) {
		CHECK(omega_f(TestFunction::abs_shift(E)) == doctest::Approx(vksl_curve(E)).epsilon(1e-10));
	}
	CHECK(vksl_curve(0) == doctest::Approx(4 / pi));
	CHECK(vksl_curve(-3) == 3);
}

TEST_CASE("variance components for polynomials") {
	auto x2 = TestFunction::parse("poly:0,0,1");
	// 4 (sigma4 - 1)
	CHECK(variance_components(x2, 1.0, 3, 2).var_total_w == doctest::Approx(8));
	CHECK(variance_components(x2, 0.0, 2, 1).var_total_w == doctest::Approx(4));
	auto t = variance_components(x2, 1.0, 3, 2);
	CHECK(t.v_f2 == doctest::Approx(4));
	CHECK(std::abs(t.v_f1) < 1e-12);
	CHECK(std::abs(t.coef_w) < 1e-12);

	auto x = TestFunction::parse("poly:0,1");
	for(double s11 : {0.5, 1.0, 2.0}) {
		auto tx = variance_components(x, 1.0, 3, s11);
		CHECK(tx.var_total_w == doctest::Approx(s11));
		CHECK(std::abs(tx.v_f_total) < 1e-12);
		CHECK(tx.coef_w == doctest::Approx(1));
	}
	// T_k(x/2): int f'^2 rho = k^2 / 4 and the linear terms vanish for k >= 3
	for(int k : {3, 4, 5}) {
		auto tk = variance_components(TestFunction::chebyshev(k), 1.0, 3, 2);
		CHECK(tk.v_f1 == doctest::Approx(k * k / 4.0));
		CHECK(std::abs(tk.v_f2) < 1e-12);
		CHECK(tk.var_total_w == doctest::Approx(k * k / 2.0));
	}
}

TEST_CASE("variance components against direct quadrature") {
	for(const char *spec : {"abs:0.4", "poly:1,-2,0.5,0.3", "cheb:2"}) {
		auto f = TestFunction::parse(spec);
		auto fp = [&](double x) { return f.derivative(x); };
		std::vector<double> jumps;
		if(f.kink()) {
			jumps.push_back(*f.kink());
		}
		double c = semicircle_mean(fp, jumps);
		double xf = semicircle_mean([&](double x) { return x * fp(x); }, jumps);
		double f2 = semicircle_mean([&](double x) { return fp(x) * fp(x); }, jumps);
		auto t = variance_components(f, 1.0, 2.5, 1.5);
		CHECK(t.coef_w == doctest::Approx(c).epsilon(1e-6));
		CHECK(t.v_f2 == doctest::Approx(xf * xf).epsilon(1e-6));
		CHECK(t.v_f1 == doctest::Approx(f2 - xf * xf - c * c).epsilon(1e-6));
		CHECK(t.var_total_w == doctest::Approx(2 * t.v_f1 + 1.5 * t.v_f2 + 1.5 * c * c).epsilon(1e-12));
	}
}

TEST_CASE("Young diagram closed forms") {
	auto y0 = young_variance(0, 1.0, 3, 2);
	CHECK(y0.V2 == doctest::Approx(64 / (9 * pi * pi)));
	CHECK(y0.var_total_w == doctest::Approx(2.0));
	CHECK(std::abs(y0.coef_w) < 1e-15);
	for(double E : {-1.5, -0.3, 0.0, 1.0, 1.9}) {
		auto y = young_variance(E, 1.0, 3, 2);
		auto t = variance_components(TestFunction::abs_shift(E), 1.0, 3, 2);
		CHECK(y.V1 == doctest::Approx(t.v_f1).epsilon(1e-8));
		CHECK(y.V2 == doctest::Approx(t.v_f2).epsilon(1e-8));
		CHECK(y.coef_w == doctest::Approx(t.coef_w).epsilon(1e-8));
		CHECK(y.coef_wtilde == doctest::Approx(t.coef_wtilde).epsilon(1e-8));
		CHECK(y.var_total_w == doctest::Approx(t.var_total_w).epsilon(1e-8));
	}
	auto y1 = young_variance(1, 1.0, 3, 2);
	// coefficient of xi11 at E = 1: int sign(x - 1) rho
	double c = semicircle_mean([](double x) { return x > 1 ? 1.0 : -1.0; }, {1.0});
	CHECK(y1.coef_w == doctest::Approx(c).epsilon(1e-6));
	CHECK(y1.var_total_w == doctest::Approx(y1.V + 2 * c * c).epsilon(1e-6));
	auto outside = young_variance(2.5, 1.0, 3, 2);
	CHECK(outside.V2 == 0);
	CHECK(outside.coef_w == doctest::Approx(-1));
}

TEST_CASE("sigma2 correction: limits and series oracle") {
	auto cheb3 = TestFunction::chebyshev(3);
	// only b_3 is nonzero and it is purely imaginary: V = Re(sigma2) * 9/4
	CHECK(v_sigma2(cheb3, 0.5) == doctest::Approx(0.5 * 9 / 4).epsilon(1e-4));
	CHECK(std::abs(v_sigma2(TestFunction::parse("poly:0,0,1"), 0.5)) < 1e-6);
	auto t0 = variance_components(cheb3, 0.0, 2, 1);
	CHECK(t0.v_sigma2 == 0);

	auto f = TestFunction::abs_shift(0.5);
	auto fp = [](double x) { return x > 0.5 ? 1.0 : -1.0; };
	for(cplx s : {cplx{0.5, 0}, cplx{0.3, 0.4}, cplx{-0.2, 0.6}}) {
		double oracle = v_sigma2_series(fp, s);
		CHECK(v_sigma2(f, s) == doctest::Approx(oracle).epsilon(2e-3));
	}
	// real sigma2 = s has d_k = s^(k-2); at s = 1 the series is V_f1
	double at_one = 0;
	for(int k = 3; k <= 1000; k++) {
		at_one += std::pow(b_coefficient(fp, k).imag(), 2);
	}
	CHECK(at_one == doctest::Approx(variance_components(f, 1.0, 3, 2).v_f1).epsilon(5e-3));
}

TEST_CASE("parameter checks") {
	auto f = TestFunction::parse("poly:0,0,1");
	CHECK_THROWS_AS(variance_components(f, cplx{1, 1}, 3, 2), ConfigError);
	CHECK_THROWS_AS(variance_components(f, 1.0, 0.5, 2), ConfigError);
	CHECK_THROWS_AS(variance_components(f, 1.0, 3, -1), ConfigError);
	std::vector<double> x, y, d;
	for(int i = 0; i < 50; i++) {
		double t = -2 + 4.0 * i / 49;
		x.push_back(t);
		y.push_back(t * t);
		d.push_back(2 * t);
	}
	CHECK_THROWS_AS(variance_components(TestFunction::tabulated(x, y, d), 1.0, 3, 2), PrecisionError);
}

TEST_CASE("tabulated functions reproduce the analytic values") {
	std::vector<double> x, y, d;
	for(int i = 0; i < 801; i++) {
		double t = -3 + 6.0 * i / 800;
		x.push_back(t);
		y.push_back(t * t * t);
		d.push_back(3 * t * t);
	}
	auto tab = TestFunction::tabulated(x, y, d);
	auto ana = variance_components(TestFunction::parse("poly:0,0,0,1"), 1.0, 3, 2);
	auto num = variance_components(tab, 1.0, 3, 2);
	CHECK(num.var_total_w == doctest::Approx(ana.var_total_w).epsilon(1e-6));
}

TEST_CASE("theory JSON round trip") {
	auto t = variance_components(TestFunction::abs_shift(1), 1.0, 3, 2);
	auto u = theory_values_from_json(nlohmann::json::parse(to_json(t).dump()));
	CHECK(u.var_total_w == t.var_total_w);
	CHECK(u.coef_wtilde == t.coef_wtilde);
}
