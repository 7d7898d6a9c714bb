#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "minorclt/errors.hpp"
#include "minorclt/montecarlo.hpp"

using namespace minorclt;

namespace {

ExperimentConfig small_config(const char *f, int n = 60, int m = 120) {
	ExperimentConfig c;
	c.ensemble = EnsembleSpec::goe(n);
	c.f = TestFunction::parse(f);
	c.samples = m;
	c.master_seed = 77;
	return c;
}

}

TEST_CASE("config JSON and validation") {
	auto c = experiment_config_from_json(nlohmann::json::parse(
	    R"({"mode":"diagram","ensemble":{"n":100},"samples":200,"E_grid":{"lo":-1,"hi":1,"points":5}})"));
	CHECK(c.mode == Mode::Diagram);
	CHECK(c.E_grid.size() == 5);
	auto again = experiment_config_from_json(to_json(c));
	CHECK(config_hash(again) == config_hash(c));
	c.master_seed++;
	CHECK(config_hash(again) != config_hash(c));

	CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json::parse(R"({"ensemble":{"n":100},"samples":200})")),
	                ConfigError);
	CHECK_THROWS_AS(
	    experiment_config_from_json(nlohmann::json::parse(R"({"ensemble":{"n":100},"samples":20,"f":"poly:0,1"})")),
	    ConfigError);
	CHECK_THROWS_AS(experiment_config_from_json(nlohmann::json::parse(R"({"mode":"bogus","ensemble":{"n":100}})")),
	                ConfigError);
	CHECK_THROWS_AS(mode_from_string("x"), ConfigError);
}

TEST_CASE("f = x is exact") {
	for(auto ens : {EnsembleSpec::goe(50), EnsembleSpec::gue(50)}) {
		auto c = small_config("poly:0,1", 50, 100);
		c.ensemble = ens;
		auto r = run_clt_experiment(c);
		REQUIRE(r.analysis);
		CHECK(r.analysis->exact);
		CHECK(r.analysis->max_abs_residual < 1e-6);
		bool found = false;
		for(const auto &v : r.analysis->verdicts) {
			found |= v.name == "exact: residual 0" && v.pass;
		}
		CHECK(found);
	}
}

TEST_CASE("reproducible regardless of worker count") {
	auto c = small_config("abs:0.5");
	auto a = to_json(run_clt_experiment(c, 1));
	auto b = to_json(run_clt_experiment(c, 3));
	CHECK(a.dump() == b.dump());
}

TEST_CASE("statistic analysis on synthetic data") {
	// X = sqrt(V) Z + c xi with xi ~ N(0, s11)
	std::mt19937_64 rng(5);
	std::normal_distribution<double> g;
	int m = 4000;
	double v = 1.5, c = -0.7, s11 = 2;
	std::vector<double> x(m), xi(m);
	for(int i = 0; i < m; i++) {
		xi[i] = std::sqrt(s11) * g(rng);
		x[i] = std::sqrt(v) * g(rng) + c * xi[i];
	}
	auto a = analyze_statistic(x, xi, 400, 0, v + c * c * s11, v, c, s11);
	CHECK(a.all_pass);
	CHECK(a.sign.supported == "direct_integral");
	CHECK(a.sign.used == doctest::Approx(c));
	CHECK(std::abs(a.kurtosis.value - 3) < 5 * a.kurtosis.se);

	auto flipped = analyze_statistic(x, xi, 400, 0, v + c * c * s11, v, -c, s11);
	CHECK(flipped.sign.supported == "negated");
	CHECK(flipped.sign.used == doctest::Approx(c));

	auto wrong = analyze_statistic(x, xi, 400, 0, 2 * (v + c * c * s11), v, c, s11);
	CHECK_FALSE(wrong.all_pass);
}

TEST_CASE("moment predictions") {
	auto spec = EnsembleSpec::goe(10);
	spec.corner_law = Law::Rademacher;
	spec.s11 = 4;
	auto xi = xi_moments(spec);
	CHECK(xi.m2 == 4);
	CHECK(xi.m4 == 16);
	StatisticAnalysis a;
	auto d = moment_diagnostics(a, 1.0, 0.5, xi);
	// Rademacher: excess -2 c^4 s11^2
	CHECK(d.predicted_excess == doctest::Approx(-2 * std::pow(0.5, 4) * 16));
	CHECK(d.gaussian_m4 == doctest::Approx(3 * std::pow(1.0 + 0.25 * 4, 2)));
	CHECK(d.predicted_m4 - d.gaussian_m4 == doctest::Approx(d.predicted_excess));
}

TEST_CASE("exact mean of x^2 and control variates") {
	// E[h11^2 + 2 sum |h1j|^2] - 2 = (s11 - 2) / N, and the controls span this statistic
	ConvergenceConfig c;
	c.ensemble = EnsembleSpec::goe(10);
	c.ensemble.s11 = 1;
	c.functions = {TestFunction::parse("poly:0,0,1"), TestFunction::parse("poly:0,1")};
	c.n_list = {20, 40, 80};
	c.samples = 50;
	auto s = convergence_scan(c);
	for(const auto &p : s.functions[0].points) {
		CHECK(p.mean_cv.value == doctest::Approx(-1.0 / p.n).epsilon(1e-8));
	}
	CHECK(s.functions[0].bias_slope == doctest::Approx(-1).epsilon(1e-6));
	for(const auto &p : s.functions[1].points) {
		CHECK(std::abs(p.mean_cv.value) < 1e-12);
	}
	c.n_list = {20, 40};
	CHECK_THROWS_AS(convergence_scan(c), ConfigError);
	c.n_list = {20, 40, 30};
	CHECK_THROWS_AS(convergence_scan(c), ConfigError);
}

TEST_CASE("diagram mode and output files") {
	ExperimentConfig c;
	c.mode = Mode::Diagram;
	c.ensemble = EnsembleSpec::goe(60);
	c.samples = 120;
	c.E_grid = {-1, 0, 1};
	auto r = run_clt_experiment(c);
	REQUIRE(r.diagram.size() == 3);
	CHECK(r.diagram[1].theory.var_total_w == doctest::Approx(2.0));
	auto dir = std::filesystem::temp_directory_path() / "minorclt_test_diagram";
	std::filesystem::remove_all(dir);
	auto files = write_experiment(r, dir.string());
	CHECK(files.size() == 4);
	std::ifstream is(dir / "record.json");
	auto j = nlohmann::json::parse(is);
	CHECK(j["config_hash"] == r.hash);
	std::filesystem::remove_all(dir);
}

TEST_CASE("resolvent modes") {
	ExperimentConfig c;
	c.mode = Mode::LocalLaw;
	c.ensemble = EnsembleSpec::goe(200);
	c.samples = 5;
	c.eta_grid = {1.0, 0.1};
	auto r = run_clt_experiment(c);
	CHECK(r.diagnostics.size() == 2);
	CHECK(r.all_pass);
	c.mode = Mode::PairedTrace;
	c.ensemble = EnsembleSpec::gue(200);
	auto p = run_clt_experiment(c);
	CHECK(p.diagnostics.contains("fraction_within_trgg"));
}
