#include <doctest.h>

#include <cmath>
#include <sstream>

#include "minorclt/ensemble.hpp"
#include "minorclt/errors.hpp"
#include "minorclt/hs.hpp"
#include "minorclt/spectra.hpp"

using namespace minorclt;

TEST_CASE("cutoff is C^2 with the right support") {
	CHECK(hs_cutoff(0) == 1);
	CHECK(hs_cutoff(5) == 1);
	CHECK(hs_cutoff(-10) == 0);
	CHECK(hs_cutoff(12) == 0);
	CHECK(hs_cutoff(7.5) == doctest::Approx(0.5));
	double h = 1e-5;
	for(double t : {5.0, 6.3, 8.8, 10.0, -7.1}) {
		double d1 = (hs_cutoff(t + h) - hs_cutoff(t - h)) / (2 * h);
		double d2 = (hs_cutoff(t + h) - 2 * hs_cutoff(t) + hs_cutoff(t - h)) / (h * h);
		CHECK(hs_cutoff_d1(t) == doctest::Approx(d1).epsilon(1e-6));
		CHECK(hs_cutoff_d2(t) == doctest::Approx(d2).epsilon(1e-3).scale(1));
	}
}

TEST_CASE("single eigenvalues") {
	struct Case {
		const char *f;
		double lambda;
	};
	for(auto c : {Case{"poly:0,0,1", 0.7}, Case{"cheb:3", -1.1}, Case{"poly:1,2,3,4", 1.9}, Case{"abs:0.3", -1.0},
	              Case{"abs:0.3", 0.35}}) {
		auto f = TestFunction::parse(c.f);
		double v = hs_functional(f, {c.lambda}, 1e-3);
		CHECK(v == doctest::Approx(f.value(c.lambda)).epsilon(1e-5).scale(1));
	}
}

TEST_CASE("truncation error is eta0^2 f''/2") {
	auto f = TestFunction::parse("poly:0,0,1");
	double v = hs_functional(f, {0.4}, 1e-2);
	CHECK(v - 0.16 == doctest::Approx(1e-4).epsilon(1e-3));
}

TEST_CASE("GOE spectrum") {
	auto eig = eigenvalues(sample_wigner(EnsembleSpec::goe(200), 3, 0).entries);
	for(const char *spec : {"poly:0,0,1", "cheb:3"}) {
		auto f = TestFunction::parse(spec);
		double sum = 0;
		for(double l : eig) {
			sum += f.value(l);
		}
		CHECK(std::abs(hs_functional(f, eig, 1e-3) - sum) < 1e-3 * std::abs(sum));
	}
}

TEST_CASE("almost analytic extension") {
	auto f = TestFunction::parse("poly:0,0,0,1");
	auto a = almost_analytic(f);
	CHECK(a.x.size() >= 400);
	CHECK(a.eta.size() >= 400);
	// in the bulk the extension is (f + i eta f') and dbar is (i eta / 2) f''
	auto d = dbar_extension(f, 0.5, 0.2);
	CHECK(d.real() == doctest::Approx(0));
	CHECK(d.imag() == doctest::Approx(0.2 / 2 * 3.0));
	std::ostringstream os;
	write_dbar_csv(os, a);
	CHECK(os.str().rfind("x,eta,re_fc,im_fc,re_dbar,im_dbar\n", 0) == 0);
}

TEST_CASE("errors") {
	auto f = TestFunction::parse("poly:0,0,1");
	CHECK_THROWS_AS(almost_analytic(f, HsGrid{100, 400, 1e-3}), PrecisionError);
	CHECK_THROWS_AS(hs_functional(f, {6.0}, 1e-3), DomainError);
	CHECK_THROWS_AS(hs_functional(f, {0.0}, 0.5), ConfigError);
	CHECK_THROWS_AS(hs_functional(f, {0.0}, 1e-6), ConfigError);
}
