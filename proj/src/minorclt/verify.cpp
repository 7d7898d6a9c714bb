#include "minorclt/verify.hpp"

#include <algorithm>
#include <cmath>

#include "minorclt/errors.hpp"
#include "minorclt/gff.hpp"
#include "minorclt/hs.hpp"
#include "minorclt/montecarlo.hpp"
#include "minorclt/parallel.hpp"
#include "minorclt/resolvent.hpp"
#include "minorclt/spectra.hpp"

namespace minorclt {

namespace {

struct Report {
	nlohmann::json checks = nlohmann::json::array();
	bool pass = true;

	// value must satisfy value < threshold (or <= when inclusive)
	void below(const std::string &name, double value, double threshold, bool inclusive = false) {
		bool ok = inclusive ? value <= threshold : value < threshold;
		add(name, value, "< " + fmt(threshold), ok);
	}
	void within(const std::string &name, double value, double lo, double hi) {
		add(name, value, "[" + fmt(lo) + ", " + fmt(hi) + "]", value >= lo && value <= hi);
	}
	void add(const std::string &name, double value, const std::string &threshold, bool ok) {
		checks.push_back({{"name", name}, {"value", value}, {"threshold", threshold}, {"pass", ok}});
		pass &= ok;
	}
	static std::string fmt(double v) {
		char buf[32];
		std::snprintf(buf, sizeof buf, "%.3g", v);
		return buf;
	}
};

std::uint64_t seed_of(const nlohmann::json &o) {
	return o.value("seed", std::uint64_t{20240101});
}

nlohmann::json suite_schur(const nlohmann::json &o, int workers) {
	int samples = o.value("samples", 20);
	auto spec = EnsembleSpec::goe(o.value("n", 100));
	std::uint64_t seed = seed_of(o);
	std::vector<cplx> zs{{0.5, 0.5}, {0.0, 1.0}, {-1.5, 0.1}, {2.5, 0.05}, {0.3, 2.0}};
	std::vector<double> xs, etas;
	for(int i = 0; i < 20; i++) {
		xs.push_back(-3 + 6.0 * i / 19);
		etas.push_back(1e-2 * std::pow(1e3, i / 19.0));
	}
	std::vector<double> residual(samples), bound(samples);
	parallel_for(samples, workers, [&](std::size_t s) {
		auto m = sample_wigner(spec, seed, s);
		SchurEvaluator ev(m.entries);
		double r = 0, b = 0;
		for(auto z : zs) {
			auto d = schur_delta(m.entries, z);
			r = std::max({r, d.residual, d.residual_tilde});
		}
		for(double x : xs) {
			for(double eta : etas) {
				auto d = ev({x, eta});
				b = std::max({b, eta * std::abs(d.delta_direct), eta * std::abs(d.delta_schur),
				              eta * std::abs(d.delta_tilde_direct), eta * std::abs(d.delta_tilde_schur)});
			}
		}
		residual[s] = r;
		bound[s] = b;
	});
	Report rep;
	rep.below("max schur residual", *std::max_element(residual.begin(), residual.end()), 1e-9);
	rep.below("max |eta Delta| on 20x20 grid", *std::max_element(bound.begin(), bound.end()), 1 + 1e-9, true);
	return {{"checks", rep.checks}, {"pass", rep.pass}, {"samples", samples}, {"n", spec.n}};
}

nlohmann::json suite_locallaw(const nlohmann::json &o, int workers) {
	ExperimentConfig c;
	c.mode = Mode::LocalLaw;
	c.ensemble = EnsembleSpec::goe(o.value("n", 400));
	c.samples = o.value("samples", 20);
	c.master_seed = seed_of(o);
	c.eta_grid = o.value("eta_grid", std::vector<double>{1.0, 0.3, 0.1, 0.03});
	c.x = o.value("x", 0.0);
	auto rec = run_clt_experiment(c, workers);
	Report rep;
	for(const auto &row : rec.diagnostics) {
		double eta = row["eta"].get<double>();
		rep.within("eta=" + Report::fmt(eta) + " fraction max|G_ij| <= 10/sqrt(N eta)",
		           row["fraction_offdiag_within_10"].get<double>(), 0.9, 1.0);
		rep.within("eta=" + Report::fmt(eta) + " fraction |m_N - m| <= 10/(N eta)",
		           row["fraction_mn_within_10_over_n_eta"].get<double>(), 0.9, 1.0);
	}
	return {{"checks", rep.checks}, {"pass", rep.pass}, {"rows", rec.diagnostics}};
}

nlohmann::json suite_trgg(const nlohmann::json &o, int workers) {
	auto spec = EnsembleSpec::gue(o.value("n", 800));
	int samples = o.value("samples", 50);
	auto r = paired_trace_check(samples, spec, {0, 2}, {0, 2}, seed_of(o), workers);
	Report rep;
	rep.within("fraction within band (G_ij G'_ji)", r.fraction_within_trgg, 0.9, 1.0);
	rep.within("fraction within band (G_ij G'_ij)", r.fraction_within_trggt, 0.9, 1.0);
	return {{"checks", rep.checks}, {"pass", rep.pass}, {"record", to_json(r)}};
}

nlohmann::json suite_tanh(const nlohmann::json &) {
	Report rep;
	auto r500 = s_matrix_resolvent(500, 0.5);
	auto r400 = s_matrix_resolvent(400, 0.5);
	auto r800 = s_matrix_resolvent(800, 0.5);
	rep.below("deviation n=500 alpha=0.5", r500.deviation, 1e-2);
	rep.within("deviation ratio n=800 / n=400", r800.deviation / r400.deviation, 0.25, 0.75);
	double odd = 0;
	for(int k : {1, 3, 5, 7}) {
		odd = std::max(odd, std::abs(s_matrix_moment(500, k)));
	}
	rep.below("max |<e, S^k e>| for odd k", odd, 1e-12);
	return {{"checks", rep.checks},
	        {"pass", rep.pass},
	        {"n500", to_json(r500)},
	        {"n400", to_json(r400)},
	        {"n800", to_json(r800)}};
}

nlohmann::json suite_hs(const nlohmann::json &o) {
	auto m = sample_wigner(EnsembleSpec::goe(o.value("n", 200)), seed_of(o), 0);
	auto eigs = eigenvalues(m.entries);
	double eta0 = o.value("eta0", 1e-3);
	Report rep;
	nlohmann::json values = nlohmann::json::array();
	for(const auto &spec : o.value("functions", std::vector<std::string>{"poly:0,0,1", "cheb:3"})) {
		auto f = TestFunction::parse(spec);
		double exact = 0;
		for(double l : eigs) {
			exact += f.value(l);
		}
		double hs = hs_functional(f, eigs, eta0);
		rep.below("relative error " + spec, std::abs(hs - exact) / std::abs(exact), 1e-3);
		values.push_back({{"f", spec}, {"sum", exact}, {"hs", hs}});
	}
	return {{"checks", rep.checks}, {"pass", rep.pass}, {"values", values}};
}

nlohmann::json suite_gff(const nlohmann::json &o) {
	Report rep;
	nlohmann::json results = nlohmann::json::array();
	auto fs = o.value("functions", std::vector<std::string>{"poly:0,0,1"});
	auto s4 = o.value("sigma4", std::vector<double>{3});
	auto s11 = o.value("s11", std::vector<double>{2});
	for(const auto &spec : fs) {
		auto f = TestFunction::parse(spec);
		for(double a : s4) {
			for(double b : s11) {
				auto d = gff_derivative_variance(f, a, b);
				std::string tag = spec + " sigma4=" + Report::fmt(a) + " s11=" + Report::fmt(b);
				rep.below("relative deviation " + tag, d.relative_deviation, 1e-2);
				rep.below("|closed form - var_total_w| " + tag, std::abs(d.d_closed_form - d.var_total_w), 1e-8);
				results.push_back(to_json(d));
			}
		}
	}
	return {{"checks", rep.checks}, {"pass", rep.pass}, {"results", results}};
}

}

const std::vector<std::string> &verify_suite_names() {
	static const std::vector<std::string> names{"schur", "locallaw", "trgg", "tanh", "hs", "gff"};
	return names;
}

nlohmann::json run_verify_suite(const std::string &suite, const nlohmann::json &options, int workers) {
	const nlohmann::json o = options.is_object() ? options : nlohmann::json::object();
	nlohmann::json out;
	try {
		if(suite == "schur") {
			out = suite_schur(o, workers);
		} else if(suite == "locallaw") {
			out = suite_locallaw(o, workers);
		} else if(suite == "trgg") {
			out = suite_trgg(o, workers);
		} else if(suite == "tanh") {
			out = suite_tanh(o);
		} else if(suite == "hs") {
			out = suite_hs(o);
		} else if(suite == "gff") {
			out = suite_gff(o);
		} else {
			throw ConfigError("unknown verify suite '" + suite + "'");
		}
	} catch(const nlohmann::json::exception &e) {
		throw ConfigError(std::string{"bad verify options: "} + e.what());
	}
	out["suite"] = suite;
	return out;
}

}
