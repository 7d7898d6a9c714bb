#include <doctest.h>

#include <cmath>
#include <sstream>

#include "minorclt/diagram.hpp"
#include "minorclt/ensemble.hpp"
#include "minorclt/errors.hpp"
#include "minorclt/theory.hpp"

using namespace minorclt;

TEST_CASE("diagram against direct sums") {
	auto s = spectral_sample(sample_wigner(EnsembleSpec::goe(60), 9, 0));
	auto grid = default_grid(301, -3.5, 3.5);
	auto c = rectangular_diagram(s, grid, false);
	REQUIRE(c.values.size() == grid.size());
	for(size_t i = 0; i < grid.size(); i += 37) {
		double E = grid[i], w = 0;
		for(double l : s.eigs_full) {
			w += std::abs(l - E);
		}
		for(double l : s.eigs_minor) {
			w -= std::abs(l - E);
		}
		CHECK(c.values[i] == doctest::Approx(w).epsilon(1e-12));
	}
	// far left and right: -E + h11 and E - h11
	CHECK(c.values.front() == doctest::Approx(3.5 + s.h11));
	CHECK(c.values.back() == doctest::Approx(3.5 - s.h11));
	// slopes are +-1
	for(size_t i = 1; i < grid.size(); i++) {
		CHECK(std::abs(c.values[i] - c.values[i - 1]) <= grid[i] - grid[i - 1] + 1e-12);
	}
	auto sh = rectangular_diagram(s, grid, true);
	CHECK(sh.values.back() == doctest::Approx(3.5));
}

TEST_CASE("node-augmented grid contains the eigenvalues") {
	auto s = spectral_sample(sample_wigner(EnsembleSpec::goe(30), 2, 0));
	auto g = node_augmented_grid(s, false);
	for(double l : s.eigs_minor) {
		CHECK(std::binary_search(g.begin(), g.end(), l));
	}
	CHECK(std::is_sorted(g.begin(), g.end()));
	CHECK(diagram_deviation(rectangular_diagram(s, g, true)) > 0);
}

TEST_CASE("CSV round trip") {
	auto s = spectral_sample(sample_wigner(EnsembleSpec::gue(40), 2, 1));
	auto c = rectangular_diagram(s, default_grid(101, -3, 3), false);
	std::stringstream ss;
	write_diagram_csv(ss, c);
	CHECK(ss.str().rfind("E,w,omega,residual\n", 0) == 0);
	auto back = read_diagram_csv(ss);
	CHECK(back.grid == c.grid);
	CHECK(back.values == c.values);
	std::stringstream bad("E,w\n1,2\n");
	CHECK_THROWS(read_diagram_csv(bad));
}

TEST_CASE("grid errors") {
	CHECK_THROWS_AS(default_grid(1, 0, 1), ConfigError);
	CHECK_THROWS_AS(default_grid(10, 1, 0), ConfigError);
}
