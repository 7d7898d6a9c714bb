#include "minorclt/montecarlo.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Dense>

#include "minorclt/diagram.hpp"
#include "minorclt/errors.hpp"
#include "minorclt/parallel.hpp"
#include "minorclt/resolvent.hpp"

namespace minorclt {

std::string to_string(Mode m) {
	switch(m) {
	case Mode::LinearStat:
		return "linear_stat";
	case Mode::Diagram:
		return "diagram";
	case Mode::LocalLaw:
		return "local_law";
	case Mode::PairedTrace:
		return "paired_trace";
	}
	return "?";
}

Mode mode_from_string(const std::string &s) {
	for(auto m : {Mode::LinearStat, Mode::Diagram, Mode::LocalLaw, Mode::PairedTrace}) {
		if(to_string(m) == s) {
			return m;
		}
	}
	throw ConfigError("unknown mode '" + s + "'");
}

void ExperimentConfig::validate() const {
	ensemble.validate();
	bool stat = mode == Mode::LinearStat || mode == Mode::Diagram;
	if(stat) {
		if(samples < 100) {
			throw ConfigError("variance verdicts need at least 100 samples");
		}
		if(ensemble.n < 50) {
			throw ConfigError("experiments need N >= 50");
		}
	} else {
		if(samples < 1) {
			throw ConfigError("need at least one sample");
		}
		if(ensemble.n < 2) {
			throw ConfigError("resolvent diagnostics need N >= 2");
		}
	}
	if(mode == Mode::LinearStat && !f) {
		throw ConfigError("linear_stat mode needs a test function 'f'");
	}
	if(mode == Mode::Diagram && E_grid.empty()) {
		throw ConfigError("diagram mode needs a nonempty 'E_grid'");
	}
	if(mode == Mode::LocalLaw) {
		if(eta_grid.empty()) {
			throw ConfigError("local_law mode needs 'eta_grid'");
		}
		for(double e : eta_grid) {
			if(!(e > 0)) {
				throw ConfigError("eta values must be positive");
			}
		}
	}
	if(mode == Mode::PairedTrace && (z.imag() == 0 || zp.imag() == 0)) {
		throw ConfigError("paired_trace needs Im z, Im z' != 0");
	}
}

nlohmann::json to_json(const ExperimentConfig &c) {
	nlohmann::json j{{"mode", to_string(c.mode)},
	                 {"ensemble", to_json(c.ensemble)},
	                 {"shifted", c.shifted},
	                 {"samples", c.samples},
	                 {"master_seed", c.master_seed}};
	if(c.f) {
		j["f"] = c.f->describe();
		if(c.f->kind() == TestFunction::Kind::Tabulated) {
			j["f"] = to_json(*c.f);
		}
	}
	if(!c.E_grid.empty()) {
		j["E_grid"] = c.E_grid;
	}
	if(c.mode == Mode::LocalLaw) {
		j["eta_grid"] = c.eta_grid;
		j["x"] = c.x;
	}
	if(c.mode == Mode::PairedTrace) {
		j["z"] = {c.z.real(), c.z.imag()};
		j["zp"] = {c.zp.real(), c.zp.imag()};
	}
	return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json &j) {
	ExperimentConfig c;
	try {
		c.mode = mode_from_string(j.value("mode", std::string{"linear_stat"}));
		c.ensemble = ensemble_from_json(j.at("ensemble"));
		if(j.contains("f")) {
			c.f = test_function_from_json(j["f"]);
		}
		c.shifted = j.value("shifted", false);
		c.samples = j.value("samples", 1000);
		c.master_seed = j.value("master_seed", c.master_seed);
		if(j.contains("E_grid")) {
			auto &g = j["E_grid"];
			if(g.is_array()) {
				c.E_grid = g.get<std::vector<double>>();
			} else {
				c.E_grid = default_grid(g.at("points").get<int>(), g.at("lo").get<double>(), g.at("hi").get<double>());
			}
		}
		if(j.contains("eta_grid")) {
			c.eta_grid = j["eta_grid"].get<std::vector<double>>();
		}
		c.x = j.value("x", 0.0);
		auto read_z = [&](const char *key, std::complex<double> &z) {
			if(j.contains(key)) {
				auto v = j[key].get<std::vector<double>>();
				if(v.size() != 2) {
					throw ConfigError(std::string{key} + " must be [re, im]");
				}
				z = {v[0], v[1]};
			}
		};
		read_z("z", c.z);
		read_z("zp", c.zp);
	} catch(const nlohmann::json::exception &e) {
		throw ConfigError(std::string{"malformed experiment config: "} + e.what());
	}
	c.validate();
	return c;
}

std::string config_hash(const ExperimentConfig &c) {
	std::string text = to_json(c).dump();
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for(unsigned char ch : text) {
		h ^= ch;
		h *= 0x100000001b3ULL;
	}
	std::ostringstream os;
	os << std::hex << std::setw(16) << std::setfill('0') << h;
	return os.str();
}

std::vector<SampleRecord> collect_spectra(const EnsembleSpec &spec, int samples, std::uint64_t master_seed,
                                          int workers) {
	spec.validate();
	std::vector<SampleRecord> out(samples);
	parallel_for(samples, workers, [&](std::size_t i) {
		try {
			auto m = sample_wigner(spec, master_seed, i);
			SampleRecord r;
			r.spectra = spectral_sample(m);
			r.row_norm_sq = std::visit([](const auto &h) { return h.col(0).tail(h.rows() - 1).squaredNorm(); }, m.entries);
			out[i] = std::move(r);
		} catch(const Error &e) {
			throw Error(e.kind(), "sample " + std::to_string(i) + ": " + e.what());
		}
	});
	return out;
}

XiMoments xi_moments(const EnsembleSpec &spec) {
	double kurt = 3;
	switch(spec.corner_law) {
	case Law::Gaussian:
		kurt = 3;
		break;
	case Law::Rademacher:
		kurt = 1;
		break;
	case Law::Uniform:
		kurt = 9.0 / 5.0;
		break;
	case Law::TwoPointFourth:
		throw ConfigError("two_point_fourth is not a corner law");
	}
	return {spec.s11, 0.0, kurt * spec.s11 * spec.s11};
}

namespace {

std::vector<double> column_mean_centered(const std::vector<double> &v, double &mean) {
	mean = 0;
	for(double x : v) {
		mean += x;
	}
	mean /= v.size();
	std::vector<double> out(v.size());
	for(size_t i = 0; i < v.size(); i++) {
		out[i] = v[i] - mean;
	}
	return out;
}

int jackknife_blocks(int samples) {
	return std::min(samples, 200);
}

Verdict z_verdict(std::string name, Estimate obs, double expected, double k = 5) {
	Verdict v;
	v.name = std::move(name);
	v.observed = obs.value;
	v.expected = expected;
	v.se = obs.se;
	double diff = obs.value - expected;
	v.z = obs.se > 0 ? diff / obs.se : (diff == 0 ? 0 : std::copysign(INFINITY, diff));
	v.tolerance = std::to_string(static_cast<int>(k)) + " SE";
	v.pass = std::abs(diff) <= k * obs.se + 1e-12 * std::max(1.0, std::abs(expected));
	return v;
}

}

StatisticAnalysis analyze_statistic(std::vector<double> centered, std::vector<double> xi, int n, double omega,
                                    double var_theory, double v_f_total, double coef_theory, double s11) {
	StatisticAnalysis a;
	a.omega = omega;
	a.var_theory = var_theory;
	a.v_f_total = v_f_total;
	a.coef_theory = coef_theory;
	a.n = n;
	a.samples = static_cast<int>(centered.size());
	int m = a.samples;
	int blocks = jackknife_blocks(m);

	double ybar, xbar;
	auto y = column_mean_centered(centered, ybar);
	auto x = column_mean_centered(xi, xbar);
	std::vector<double> yx(m);
	for(int i = 0; i < m; i++) {
		yx[i] = y[i] * x[i];
	}

	auto cov_fn = [](const std::vector<double> &mu, double k) { return (mu[2] - mu[0] * mu[1]) * k / (k - 1); };
	a.cov_xi = MeanJackknife({y, x, yx}, blocks)(cov_fn);

	// sign of the xi coefficient from the data
	SignReport &s = a.sign;
	s.direct_integral = coef_theory;
	s.negated = -coef_theory;
	s.empirical_sign = a.cov_xi.value > 0 ? 1 : (a.cov_xi.value < 0 ? -1 : 0);
	s.cov_z = a.cov_xi.se > 0 ? a.cov_xi.value / a.cov_xi.se : 0;
	s.used = s.empirical_sign != 0 ? s.empirical_sign * std::abs(coef_theory) : coef_theory;
	if(coef_theory == 0 || std::abs(s.cov_z) <= 3) {
		s.supported = "undetermined";
	} else {
		s.supported = (s.empirical_sign > 0) == (coef_theory > 0) ? "direct_integral" : "negated";
	}

	std::vector<double> resid(m);
	for(int i = 0; i < m; i++) {
		resid[i] = centered[i] - s.used * xi[i];
		a.max_abs_residual = std::max(a.max_abs_residual, std::abs(resid[i]));
	}
	double rbar;
	auto r = column_mean_centered(resid, rbar);

	std::vector<double> y2(m), y3(m), y4(m), x2(m), r2(m), rx(m);
	for(int i = 0; i < m; i++) {
		y2[i] = y[i] * y[i];
		y3[i] = y2[i] * y[i];
		y4[i] = y2[i] * y2[i];
		x2[i] = x[i] * x[i];
		r2[i] = r[i] * r[i];
		rx[i] = r[i] * x[i];
	}
	// 0:y 1:y2 2:y3 3:y4 4:x 5:x2 6:r 7:r2 8:rx
	MeanJackknife jk({y, y2, y3, y4, x, x2, r, r2, rx}, blocks);
	auto central = [](const std::vector<double> &mu, int k) {
		double e1 = mu[0], e2 = mu[1], e3 = mu[2], e4 = mu[3];
		if(k == 2) {
			return e2 - e1 * e1;
		}
		if(k == 3) {
			return e3 - 3 * e1 * e2 + 2 * e1 * e1 * e1;
		}
		return e4 - 4 * e1 * e3 + 6 * e1 * e1 * e2 - 3 * e1 * e1 * e1 * e1;
	};
	a.mean = jk([&](const std::vector<double> &mu, double) { return ybar + mu[0]; });
	a.variance = jk([&](const std::vector<double> &mu, double k) { return central(mu, 2) * k / (k - 1); });
	a.m3 = jk([&](const std::vector<double> &mu, double) { return central(mu, 3); });
	a.m4 = jk([&](const std::vector<double> &mu, double) { return central(mu, 4); });
	a.skewness = jk([&](const std::vector<double> &mu, double) {
		double m2 = central(mu, 2);
		return m2 > 0 ? central(mu, 3) / std::pow(m2, 1.5) : 0.0;
	});
	a.kurtosis = jk([&](const std::vector<double> &mu, double) {
		double m2 = central(mu, 2);
		return m2 > 0 ? central(mu, 4) / (m2 * m2) : 0.0;
	});
	a.residual_variance = jk([](const std::vector<double> &mu, double k) { return (mu[7] - mu[6] * mu[6]) * k / (k - 1); });

	a.exact = v_f_total < 1e-12;
	double res_var = a.residual_variance.value;
	double xi_var = jk([](const std::vector<double> &mu, double) { return mu[5] - mu[4] * mu[4]; }).value;
	if(!a.exact && res_var > 0 && xi_var > 0) {
		a.residual_xi_corr = jk([](const std::vector<double> &mu, double) {
			double c = mu[8] - mu[6] * mu[4];
			double vr = mu[7] - mu[6] * mu[6];
			double vx = mu[5] - mu[4] * mu[4];
			return c / std::sqrt(vr * vx);
		});
	}

	// (a) mean
	{
		Verdict v;
		v.name = "mean";
		v.observed = a.mean.value;
		v.expected = 0;
		v.se = a.mean.se;
		v.z = a.mean.se > 0 ? a.mean.value / a.mean.se : 0;
		double bias = 3 * std::pow(n, -2.0 / 3.0) * std::sqrt(static_cast<double>(n));
		v.tolerance = "5 SE + 3 N^(-2/3) (in sqrt(N) units)";
		v.pass = std::abs(a.mean.value) <= 5 * a.mean.se + bias;
		a.verdicts.push_back(v);
	}
	// (b) total variance
	a.verdicts.push_back(z_verdict("variance", a.variance, var_theory));
	// (c) covariance with xi
	a.verdicts.push_back(z_verdict("cov_xi", a.cov_xi, s.used * s11));
	// (d) residual
	if(a.exact) {
		Verdict v;
		v.name = "exact: residual 0";
		v.observed = a.max_abs_residual;
		v.expected = 0;
		v.tolerance = "1e-6";
		v.pass = a.max_abs_residual <= 1e-6;
		a.verdicts.push_back(v);
	} else {
		a.verdicts.push_back(z_verdict("residual_variance", a.residual_variance, v_f_total));
		Verdict v;
		v.name = "independence";
		v.observed = a.residual_xi_corr.value;
		v.expected = 0;
		v.se = a.residual_xi_corr.se;
		v.z = v.se > 0 ? v.observed / v.se : 0;
		v.tolerance = "|r| < 5/sqrt(M)";
		v.pass = std::abs(v.observed) < 5 / std::sqrt(static_cast<double>(m));
		a.verdicts.push_back(v);
	}
	a.all_pass = true;
	for(const auto &v : a.verdicts) {
		a.all_pass &= v.pass;
	}
	a.centered = std::move(centered);
	a.xi = std::move(xi);
	return a;
}

MomentDiagnostics moment_diagnostics(const StatisticAnalysis &record, double v_f_total, double coef,
                                     const XiMoments &xi) {
	MomentDiagnostics d;
	d.v = v_f_total;
	d.c = coef;
	d.xi = xi;
	double c2 = coef * coef;
	d.predicted_m3 = c2 * coef * xi.m3;
	d.predicted_m4 = 3 * d.v * d.v + 6 * d.v * c2 * xi.m2 + c2 * c2 * xi.m4;
	d.observed_m3 = record.m3;
	d.observed_m4 = record.m4;
	d.z3 = record.m3.se > 0 ? (record.m3.value - d.predicted_m3) / record.m3.se : 0;
	d.z4 = record.m4.se > 0 ? (record.m4.value - d.predicted_m4) / record.m4.se : 0;
	double g = d.v + c2 * xi.m2;
	d.gaussian_m4 = 3 * g * g;
	d.predicted_excess = c2 * c2 * (xi.m4 - 3 * xi.m2 * xi.m2);
	d.observed_excess = {record.m4.value - d.gaussian_m4, record.m4.se};
	d.z_excess = record.m4.se > 0 ? (d.observed_excess.value - d.predicted_excess) / record.m4.se : 0;
	d.skewness = record.skewness;
	d.kurtosis = record.kurtosis;
	return d;
}

namespace {

nlohmann::json local_law_diagnostics(const ExperimentConfig &c, int workers, bool &pass) {
	int n = c.ensemble.n;
	std::vector<std::vector<LocalLawRow>> rows(c.samples);
	parallel_for(c.samples, workers, [&](std::size_t i) {
		auto m = sample_wigner(c.ensemble, c.master_seed, i);
		rows[i] = local_law_residuals(m.entries, c.eta_grid, c.x);
	});
	nlohmann::json out = nlohmann::json::array();
	pass = true;
	double slack_pow = std::pow(static_cast<double>(n), 0.05);
	for(size_t k = 0; k < c.eta_grid.size(); k++) {
		double eta = c.eta_grid[k];
		double scale = 1 / std::sqrt(n * eta);
		std::vector<double> off, diag, mn;
		int within10 = 0, within_pow = 0, mn_within = 0;
		for(const auto &r : rows) {
			off.push_back(r[k].max_offdiag);
			diag.push_back(r[k].max_diag);
			mn.push_back(r[k].mn_deviation);
			within10 += r[k].max_offdiag <= 10 * scale;
			within_pow += r[k].max_offdiag <= slack_pow * scale;
			mn_within += r[k].mn_deviation <= 10 / (n * eta);
		}
		double frac10 = static_cast<double>(within10) / c.samples;
		double frac_mn = static_cast<double>(mn_within) / c.samples;
		bool ok = frac10 >= 0.9 && frac_mn >= 0.9;
		pass &= ok;
		out.push_back({{"eta", eta},
		               {"scale", scale},
		               {"max_offdiag", {{"median", median(off)}, {"q90", quantile(off, 0.9)}, {"q95", quantile(off, 0.95)}}},
		               {"max_diag", {{"median", median(diag)}, {"q90", quantile(diag, 0.9)}, {"q95", quantile(diag, 0.95)}}},
		               {"mn_deviation", {{"median", median(mn)}, {"q90", quantile(mn, 0.9)}, {"q95", quantile(mn, 0.95)}}},
		               {"fraction_offdiag_within_10", frac10},
		               {"fraction_offdiag_within_npow", static_cast<double>(within_pow) / c.samples},
		               {"fraction_mn_within_10_over_n_eta", frac_mn},
		               {"pass", ok}});
	}
	return out;
}

}

ExperimentRecord analyze_samples(const ExperimentConfig &config, const std::vector<SampleRecord> &samples) {
	config.validate();
	if(config.mode != Mode::LinearStat && config.mode != Mode::Diagram) {
		throw ConfigError("analyze_samples handles linear_stat and diagram modes");
	}
	if(static_cast<int>(samples.size()) != config.samples) {
		throw DimensionError("sample count does not match config");
	}
	const auto &ens = config.ensemble;
	int n = ens.n;
	double rn = std::sqrt(static_cast<double>(n));
	ExperimentRecord rec;
	rec.config = config;
	rec.hash = config_hash(config);
	std::vector<double> xi(samples.size());
	for(size_t i = 0; i < samples.size(); i++) {
		if(samples[i].spectra.n != n) {
			throw DimensionError("sample dimension does not match config");
		}
		xi[i] = rn * samples[i].spectra.h11;
	}

	if(config.mode == Mode::LinearStat) {
		const auto &f = *config.f;
		auto t = variance_components(f, ens.sigma2, ens.sigma4, ens.s11);
		rec.theory = t;
		std::vector<double> centered(samples.size());
		rec.raw_values.resize(samples.size());
		for(size_t i = 0; i < samples.size(); i++) {
			rec.raw_values[i] = linear_statistic_diff(f, samples[i].spectra, config.shifted);
			centered[i] = rn * (rec.raw_values[i] - t.omega_f);
		}
		double var = config.shifted ? t.var_total_wtilde : t.var_total_w;
		double coef = config.shifted ? t.coef_wtilde : t.coef_w;
		rec.analysis = analyze_statistic(std::move(centered), xi, n, t.omega_f, var, t.v_f_total, coef, ens.s11);
		rec.moments = moment_diagnostics(*rec.analysis, t.v_f_total, rec.analysis->sign.used, xi_moments(ens));
		rec.all_pass = rec.analysis->all_pass;
		return rec;
	}

	rec.diagram_curves.resize(samples.size());
	for(size_t i = 0; i < samples.size(); i++) {
		rec.diagram_curves[i] = rectangular_diagram(samples[i].spectra, config.E_grid, config.shifted).values;
	}
	rec.all_pass = true;
	for(size_t k = 0; k < config.E_grid.size(); k++) {
		DiagramPointResult p;
		p.E = config.E_grid[k];
		p.theory = young_variance(p.E, ens.sigma2, ens.sigma4, ens.s11);
		double om = vksl_curve(p.E);
		std::vector<double> centered(samples.size());
		for(size_t i = 0; i < samples.size(); i++) {
			centered[i] = rn * (rec.diagram_curves[i][k] - om);
		}
		double var = config.shifted ? p.theory.var_total_wtilde : p.theory.var_total_w;
		double coef = config.shifted ? p.theory.coef_wtilde : p.theory.coef_w;
		p.analysis = analyze_statistic(std::move(centered), xi, n, om, var, p.theory.V, coef, ens.s11);
		rec.all_pass &= p.analysis.all_pass;
		rec.diagram.push_back(std::move(p));
	}
	return rec;
}

ExperimentRecord run_clt_experiment(const ExperimentConfig &config, int workers) {
	config.validate();
	if(config.mode == Mode::LinearStat || config.mode == Mode::Diagram) {
		auto samples = collect_spectra(config.ensemble, config.samples, config.master_seed, workers);
		auto rec = analyze_samples(config, samples);
		rec.workers = workers;
		return rec;
	}
	ExperimentRecord rec;
	rec.config = config;
	rec.hash = config_hash(config);
	rec.workers = workers;
	if(config.mode == Mode::LocalLaw) {
		bool pass = false;
		rec.diagnostics = local_law_diagnostics(config, workers, pass);
		rec.all_pass = pass;
	} else {
		auto r = paired_trace_check(config.samples, config.ensemble, config.z, config.zp, config.master_seed, workers);
		rec.diagnostics = to_json(r, true);
		rec.all_pass = r.fraction_within_trgg >= 0.9 && r.fraction_within_trggt >= 0.9;
	}
	return rec;
}

nlohmann::json to_json(const Verdict &v) {
	return {{"name", v.name}, {"observed", v.observed}, {"expected", v.expected}, {"se", v.se},
	        {"z", std::isfinite(v.z) ? nlohmann::json(v.z) : nlohmann::json(nullptr)},
	        {"tolerance", v.tolerance}, {"pass", v.pass}};
}

nlohmann::json to_json(const StatisticAnalysis &a, bool per_sample) {
	nlohmann::json verdicts = nlohmann::json::array();
	for(const auto &v : a.verdicts) {
		verdicts.push_back(to_json(v));
	}
	nlohmann::json j{
	    {"omega", a.omega},
	    {"var_theory", a.var_theory},
	    {"v_f_total", a.v_f_total},
	    {"n", a.n},
	    {"samples", a.samples},
	    {"coefficient",
	     {{"direct_integral", a.sign.direct_integral},
	      {"negated", a.sign.negated},
	      {"empirical_sign", a.sign.empirical_sign},
	      {"cov_z", a.sign.cov_z},
	      {"supported", a.sign.supported},
	      {"used", a.sign.used}}},
	    {"estimators",
	     {{"mean", to_json(a.mean)},
	      {"variance", to_json(a.variance)},
	      {"cov_xi", to_json(a.cov_xi)},
	      {"residual_variance", to_json(a.residual_variance)},
	      {"residual_xi_corr", to_json(a.residual_xi_corr)},
	      {"m3", to_json(a.m3)},
	      {"m4", to_json(a.m4)},
	      {"skewness", to_json(a.skewness)},
	      {"kurtosis", to_json(a.kurtosis)}}},
	    {"max_abs_residual", a.max_abs_residual},
	    {"exact", a.exact},
	    {"verdicts", verdicts},
	    {"all_pass", a.all_pass}};
	if(per_sample) {
		j["per_sample"] = {{"centered", a.centered}, {"xi", a.xi}};
	}
	return j;
}

nlohmann::json to_json(const MomentDiagnostics &m) {
	return {{"v", m.v},
	        {"c", m.c},
	        {"xi_moments", {m.xi.m2, m.xi.m3, m.xi.m4}},
	        {"predicted_m3", m.predicted_m3},
	        {"observed_m3", to_json(m.observed_m3)},
	        {"z3", m.z3},
	        {"predicted_m4", m.predicted_m4},
	        {"observed_m4", to_json(m.observed_m4)},
	        {"z4", m.z4},
	        {"gaussian_m4", m.gaussian_m4},
	        {"predicted_excess", m.predicted_excess},
	        {"observed_excess", to_json(m.observed_excess)},
	        {"z_excess", m.z_excess},
	        {"skewness", to_json(m.skewness)},
	        {"kurtosis", to_json(m.kurtosis)}};
}

nlohmann::json to_json(const ExperimentRecord &r) {
	nlohmann::json j{{"config_hash", r.hash},
	                 {"config", to_json(r.config)},
	                 {"mode", to_string(r.config.mode)},
	                 {"n", r.config.ensemble.n},
	                 {"samples", r.config.samples},
	                 {"master_seed", r.config.master_seed},
	                 {"all_pass", r.all_pass}};
	if(r.theory) {
		j["theory"] = to_json(*r.theory);
		j["statistic"] = r.config.shifted ? "f_tilde_N" : "f_N";
	}
	if(r.analysis) {
		j["analysis"] = to_json(*r.analysis);
	}
	if(r.moments) {
		j["moments"] = to_json(*r.moments);
	}
	if(!r.diagram.empty()) {
		auto &arr = j["diagram"] = nlohmann::json::array();
		for(const auto &p : r.diagram) {
			arr.push_back({{"E", p.E}, {"theory", to_json(p.theory)}, {"analysis", to_json(p.analysis, false)}});
		}
	}
	if(!r.diagnostics.is_null()) {
		j["diagnostics"] = r.diagnostics;
	}
	return j;
}

std::vector<std::string> write_experiment(const ExperimentRecord &r, const std::string &dir) {
	namespace fs = std::filesystem;
	std::error_code ec;
	fs::create_directories(dir, ec);
	if(ec) {
		throw IoError("cannot create output directory " + dir + ": " + ec.message());
	}
	std::vector<std::string> written;
	auto open = [&](const std::string &name) {
		auto path = (fs::path(dir) / name).string();
		std::ofstream os(path);
		if(!os) {
			throw IoError("cannot write " + path);
		}
		os.imbue(std::locale::classic());
		os << std::setprecision(17);
		written.push_back(path);
		return os;
	};
	{
		auto os = open("record.json");
		os << to_json(r).dump(2) << '\n';
	}
	if(r.analysis) {
		auto os = open("samples.csv");
		os << "index,fn_value,xi11\n";
		for(size_t i = 0; i < r.raw_values.size(); i++) {
			os << i << ',' << r.raw_values[i] << ',' << r.analysis->xi[i] << '\n';
		}
	}
	if(!r.diagram.empty()) {
		int n = r.config.ensemble.n;
		{
			auto os = open("diagram_band.csv");
			os << "E,omega,mean_w,var_observed,var_theory,band_lo,band_hi\n";
			for(const auto &p : r.diagram) {
				double om = p.analysis.omega;
				double half = 2 * std::sqrt(p.analysis.var_theory / n);
				os << p.E << ',' << om << ',' << om + p.analysis.mean.value / std::sqrt(n) << ','
				   << p.analysis.variance.value << ',' << p.analysis.var_theory << ',' << om - half << ',' << om + half
				   << '\n';
			}
		}
		{
			auto os = open("diagram_curves.csv");
			size_t shown = std::min<size_t>(r.diagram_curves.size(), 10);
			os << "E,omega";
			for(size_t s = 0; s < shown; s++) {
				os << ",sample_" << s;
			}
			os << '\n';
			for(size_t k = 0; k < r.diagram.size(); k++) {
				os << r.diagram[k].E << ',' << r.diagram[k].analysis.omega;
				for(size_t s = 0; s < shown; s++) {
					os << ',' << r.diagram_curves[s][k];
				}
				os << '\n';
			}
		}
		{
			auto os = open("diagram_sample0.csv");
			DiagramCurve c{r.config.E_grid, r.diagram_curves[0], r.config.shifted};
			write_diagram_csv(os, c);
		}
	}
	return written;
}

namespace {

// mean of f by regression on controls with known expectation
Estimate control_variate_mean(const std::vector<double> &f, const std::vector<std::array<double, 3>> &u) {
	size_t m = f.size();
	double fbar = 0;
	Eigen::Vector3d ubar = Eigen::Vector3d::Zero();
	for(size_t i = 0; i < m; i++) {
		fbar += f[i];
		ubar += Eigen::Vector3d(u[i][0], u[i][1], u[i][2]);
	}
	fbar /= m;
	ubar /= m;
	Eigen::Matrix3d cuu = Eigen::Matrix3d::Zero();
	Eigen::Vector3d cuf = Eigen::Vector3d::Zero();
	for(size_t i = 0; i < m; i++) {
		Eigen::Vector3d d = Eigen::Vector3d(u[i][0], u[i][1], u[i][2]) - ubar;
		cuu += d * d.transpose();
		cuf += d * (f[i] - fbar);
	}
	Eigen::Vector3d beta = cuu.completeOrthogonalDecomposition().solve(cuf);
	double mean = fbar - beta.dot(ubar);
	double ss = 0;
	for(size_t i = 0; i < m; i++) {
		double e = f[i] - fbar - beta.dot(Eigen::Vector3d(u[i][0], u[i][1], u[i][2]) - ubar);
		ss += e * e;
	}
	double dof = std::max<double>(m - 4.0, 1.0);
	return {mean, std::sqrt(ss / dof / m)};
}

bool strictly_decreasing(const std::vector<double> &v) {
	for(size_t i = 1; i < v.size(); i++) {
		if(!(v[i] < v[i - 1])) {
			return false;
		}
	}
	return true;
}

}

ConvergenceScan convergence_scan(const ConvergenceConfig &config, int workers) {
	if(config.n_list.size() < 3) {
		throw ConfigError("convergence scan needs at least 3 values of N");
	}
	for(size_t i = 1; i < config.n_list.size(); i++) {
		if(config.n_list[i] <= config.n_list[i - 1]) {
			throw ConfigError("N list must be strictly increasing");
		}
	}
	if(config.n_list.front() < 2 || config.samples < 10) {
		throw ConfigError("convergence scan needs N >= 2 and at least 10 samples");
	}
	ConvergenceScan scan;
	scan.n_list = config.n_list;
	for(const auto &f : config.functions) {
		ConvergenceFunction cf;
		cf.f = f;
		cf.omega = omega_f(f);
		scan.functions.push_back(cf);
	}
	for(int n : config.n_list) {
		EnsembleSpec spec = config.ensemble;
		spec.n = n;
		auto samples = collect_spectra(spec, config.samples, derive_seed(config.master_seed, n), workers);
		std::vector<std::array<double, 3>> controls(samples.size());
		for(size_t i = 0; i < samples.size(); i++) {
			double h = samples[i].spectra.h11;
			controls[i] = {h, h * h - spec.s11 / n, samples[i].row_norm_sq - (n - 1.0) / n};
		}
		for(auto &cf : scan.functions) {
			std::vector<double> vals(samples.size()), dev(samples.size());
			double sum = 0, sum2 = 0;
			for(size_t i = 0; i < samples.size(); i++) {
				vals[i] = linear_statistic_diff(cf.f, samples[i].spectra, false);
				dev[i] = std::abs(vals[i] - cf.omega);
				sum += vals[i];
				sum2 += vals[i] * vals[i];
			}
			double m = static_cast<double>(samples.size());
			double mean = sum / m;
			double var = std::max((sum2 - m * mean * mean) / (m - 1), 0.0);
			ConvergencePoint p;
			p.n = n;
			p.mean_raw = {mean - cf.omega, std::sqrt(var / m)};
			auto cv = control_variate_mean(vals, controls);
			p.mean_cv = {cv.value - cf.omega, cv.se};
			p.median_abs_deviation = median(dev);
			cf.points.push_back(p);
		}
		std::vector<double> sup(samples.size());
		for(size_t i = 0; i < samples.size(); i++) {
			const auto &s = samples[i].spectra;
			sup[i] = diagram_deviation(rectangular_diagram(s, node_augmented_grid(s, true), true));
		}
		scan.median_sup_deviation.push_back(median(sup));
	}
	std::vector<double> ns(config.n_list.begin(), config.n_list.end());
	for(auto &cf : scan.functions) {
		std::vector<double> bias, med;
		bool zero = false;
		for(const auto &p : cf.points) {
			bias.push_back(p.mean_cv.value);
			med.push_back(p.median_abs_deviation);
			zero |= p.mean_cv.value == 0;
		}
		cf.bias_slope = zero ? NAN : loglog_slope(ns, bias);
		cf.median_slope = loglog_slope(ns, med);
		cf.median_strictly_decreasing = strictly_decreasing(med);
	}
	scan.sup_slope = loglog_slope(ns, scan.median_sup_deviation);
	scan.sup_strictly_decreasing = strictly_decreasing(scan.median_sup_deviation);
	return scan;
}

ConvergenceConfig convergence_config_from_json(const nlohmann::json &j) {
	ConvergenceConfig c;
	try {
		c.ensemble = ensemble_from_json(j.at("ensemble"));
		auto &fs = j.at("functions");
		if(!fs.is_array() || fs.empty()) {
			throw ConfigError("'functions' must be a nonempty array");
		}
		for(const auto &f : fs) {
			c.functions.push_back(test_function_from_json(f));
		}
		c.n_list = j.at("n_list").get<std::vector<int>>();
		c.samples = j.value("samples", 200);
		c.master_seed = j.value("master_seed", c.master_seed);
	} catch(const nlohmann::json::exception &e) {
		throw ConfigError(std::string{"malformed convergence config: "} + e.what());
	}
	return c;
}

nlohmann::json to_json(const ConvergenceScan &s) {
	auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
	nlohmann::json fs = nlohmann::json::array();
	for(const auto &cf : s.functions) {
		nlohmann::json pts = nlohmann::json::array();
		for(const auto &p : cf.points) {
			pts.push_back({{"n", p.n},
			               {"mean_raw", to_json(p.mean_raw)},
			               {"mean_cv", to_json(p.mean_cv)},
			               {"median_abs_deviation", p.median_abs_deviation}});
		}
		fs.push_back({{"f", cf.f.describe()},
		              {"omega_f", cf.omega},
		              {"points", pts},
		              {"bias_slope", num(cf.bias_slope)},
		              {"median_slope", num(cf.median_slope)},
		              {"median_strictly_decreasing", cf.median_strictly_decreasing}});
	}
	return {{"n_list", s.n_list},
	        {"functions", fs},
	        {"median_sup_deviation", s.median_sup_deviation},
	        {"sup_slope", num(s.sup_slope)},
	        {"sup_strictly_decreasing", s.sup_strictly_decreasing}};
}

}
