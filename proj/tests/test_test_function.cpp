#include <doctest.h>

#include <cmath>

#include "minorclt/errors.hpp"
#include "minorclt/test_function.hpp"

using namespace minorclt;

TEST_CASE("parsing") {
	auto p = TestFunction::parse("poly:1,2,3");
	CHECK(p.value(2) == 17);
	CHECK(p.derivative(2) == 14);
	CHECK(p.second_derivative(2) == 6);
	auto a = TestFunction::parse("abs:0.5");
	CHECK(a.value(-1) == 1.5);
	CHECK(a.derivative(1) == 1);
	CHECK(a.derivative(0) == -1);
	REQUIRE(a.kink());
	CHECK(*a.kink() == 0.5);
	CHECK_THROWS_AS(TestFunction::parse("sin:1"), ConfigError);
	CHECK_THROWS_AS(TestFunction::parse("poly:"), ConfigError);
	CHECK_THROWS_AS(TestFunction::parse("cheb:-1"), ConfigError);
}

TEST_CASE("Chebyshev functions are cos(k t) at x = 2 cos t") {
	for(int k : {0, 1, 2, 3, 6}) {
		auto f = TestFunction::chebyshev(k);
		for(double t : {0.1, 0.9, 2.0, 3.0}) {
			CHECK(f.value(2 * std::cos(t)) == doctest::Approx(std::cos(k * t)));
			if(k > 0) {
				CHECK(f.derivative(2 * std::cos(t)) == doctest::Approx(k * std::sin(k * t) / (2 * std::sin(t))));
			}
		}
	}
}

TEST_CASE("tabulated cubic Hermite interpolation") {
	std::vector<double> x, y, d;
	for(int i = 0; i <= 20; i++) {
		double t = -2 + 0.2 * i;
		x.push_back(t);
		y.push_back(t * t * t);
		d.push_back(3 * t * t);
	}
	auto f = TestFunction::tabulated(x, y, d);
	// cubic data is reproduced exactly
	CHECK(f.value(0.37) == doctest::Approx(0.37 * 0.37 * 0.37));
	CHECK(f.derivative(-1.13) == doctest::Approx(3 * 1.13 * 1.13));
	CHECK(f.nodes_in(-1, 1) == 11);
	CHECK_THROWS_AS(TestFunction::tabulated({0, 1}, {0}, {0, 0}), ConfigError);
	CHECK_THROWS_AS(TestFunction::tabulated({1, 0}, {0, 0}, {0, 0}), ConfigError);
	auto back = test_function_from_json(to_json(f));
	CHECK(back.value(0.5) == doctest::Approx(f.value(0.5)));
}

TEST_CASE("JSON forms") {
	auto f = test_function_from_json(nlohmann::json::parse(R"({"kind":"abs_shift","E":1})"));
	CHECK(f.kind() == TestFunction::Kind::AbsShift);
	CHECK(test_function_from_json("cheb:3").kind() == TestFunction::Kind::Chebyshev);
	CHECK_THROWS_AS(test_function_from_json(nlohmann::json::parse(R"({"kind":"spline"})")), ConfigError);
	CHECK(TestFunction::parse("cheb:3").describe() == "cheb:3");
}
