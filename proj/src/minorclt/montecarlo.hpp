#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "minorclt/ensemble.hpp"
#include "minorclt/spectra.hpp"
#include "minorclt/statistics.hpp"
#include "minorclt/test_function.hpp"
#include "minorclt/theory.hpp"

namespace minorclt {

enum class Mode { LinearStat, Diagram, LocalLaw, PairedTrace };

std::string to_string(Mode m);
Mode mode_from_string(const std::string &s);

struct ExperimentConfig {
	Mode mode = Mode::LinearStat;
	EnsembleSpec ensemble;
	std::optional<TestFunction> f;
	std::vector<double> E_grid;
	bool shifted = false;
	int samples = 1000;
	std::uint64_t master_seed = 20240101;
	// LocalLaw
	std::vector<double> eta_grid;
	double x = 0;
	// PairedTrace
	std::complex<double> z{0, 2}, zp{0, 2};

	void validate() const;
};

nlohmann::json to_json(const ExperimentConfig &c);
ExperimentConfig experiment_config_from_json(const nlohmann::json &j);
std::string config_hash(const ExperimentConfig &c);

struct SampleRecord {
	SpectralSample spectra;
	double row_norm_sq = 0; // sum_{j >= 2} |h_1j|^2
};

std::vector<SampleRecord> collect_spectra(const EnsembleSpec &spec, int samples, std::uint64_t master_seed,
                                          int workers = 1);

// E xi^2, E xi^3, E xi^4 of the corner law
struct XiMoments {
	double m2 = 0, m3 = 0, m4 = 0;
};
XiMoments xi_moments(const EnsembleSpec &spec);

struct Verdict {
	std::string name;
	double observed = 0;
	double expected = 0;
	double se = 0;
	double z = 0;
	std::string tolerance;
	bool pass = false;
};

struct SignReport {
	double direct_integral = 0; // int f' rho (or int x f''/2 rho when shifted)
	double negated = 0;
	int empirical_sign = 0;
	double cov_z = 0;
	std::string supported; // "direct_integral", "negated" or "undetermined"
	double used = 0;
};

struct MomentDiagnostics {
	double v = 0, c = 0;
	XiMoments xi;
	double predicted_m3 = 0, predicted_m4 = 0;
	Estimate observed_m3, observed_m4;
	double z3 = 0, z4 = 0;
	double gaussian_m4 = 0;   // 3 (V + c^2 E xi^2)^2
	double predicted_excess = 0; // c^4 (E xi^4 - 3 (E xi^2)^2)
	Estimate observed_excess;
	double z_excess = 0;
	Estimate skewness, kurtosis;
};

struct StatisticAnalysis {
	double omega = 0;     // centering constant
	double var_theory = 0;
	double v_f_total = 0;
	double coef_theory = 0; // signed, directly evaluated
	int n = 0;
	int samples = 0;
	std::vector<double> centered; // sqrt(N) (stat - omega)
	std::vector<double> xi;       // sqrt(N) h11
	Estimate mean, variance, cov_xi, residual_variance, residual_xi_corr, m3, m4, skewness, kurtosis;
	double max_abs_residual = 0;
	bool exact = false;
	SignReport sign;
	std::vector<Verdict> verdicts;
	bool all_pass = false;
};

StatisticAnalysis analyze_statistic(std::vector<double> centered, std::vector<double> xi, int n, double omega,
                                    double var_theory, double v_f_total, double coef_theory, double s11);

MomentDiagnostics moment_diagnostics(const StatisticAnalysis &record, double v_f_total, double coef,
                                     const XiMoments &xi);

struct DiagramPointResult {
	double E = 0;
	YoungVariance theory;
	StatisticAnalysis analysis;
};

struct ExperimentRecord {
	ExperimentConfig config;
	std::string hash;
	int workers = 1;
	// LinearStat
	std::optional<TheoryValues> theory;
	std::vector<double> raw_values;
	std::optional<StatisticAnalysis> analysis;
	std::optional<MomentDiagnostics> moments;
	// Diagram
	std::vector<DiagramPointResult> diagram;
	std::vector<std::vector<double>> diagram_curves; // [sample][E]
	// LocalLaw / PairedTrace
	nlohmann::json diagnostics;
	bool all_pass = false;
};

ExperimentRecord run_clt_experiment(const ExperimentConfig &config, int workers = 1);
// analyze a pre-collected set of samples (config.ensemble must match how they were drawn)
ExperimentRecord analyze_samples(const ExperimentConfig &config, const std::vector<SampleRecord> &samples);

nlohmann::json to_json(const Verdict &v);
nlohmann::json to_json(const StatisticAnalysis &a, bool per_sample = true);
nlohmann::json to_json(const MomentDiagnostics &m);
nlohmann::json to_json(const ExperimentRecord &r);

// writes record.json and sidecar CSVs into dir; returns the list of files written
std::vector<std::string> write_experiment(const ExperimentRecord &r, const std::string &dir);

struct ConvergenceConfig {
	EnsembleSpec ensemble; // n is overridden per scan point
	std::vector<TestFunction> functions;
	std::vector<int> n_list;
	int samples = 200;
	std::uint64_t master_seed = 20240101;
};

struct ConvergencePoint {
	int n = 0;
	Estimate mean_raw;   // mean f_N - Omega_f
	Estimate mean_cv;    // control-variate mean f_N - Omega_f
	double median_abs_deviation = 0; // median over samples of |f_N - Omega_f|
};

struct ConvergenceFunction {
	TestFunction f;
	double omega = 0;
	std::vector<ConvergencePoint> points;
	double bias_slope = 0;
	double median_slope = 0;
	bool median_strictly_decreasing = false;
};

struct ConvergenceScan {
	std::vector<int> n_list;
	std::vector<ConvergenceFunction> functions;
	std::vector<double> median_sup_deviation; // median over samples of sup_E |w~_N - Omega|
	double sup_slope = 0;
	bool sup_strictly_decreasing = false;
};

ConvergenceScan convergence_scan(const ConvergenceConfig &config, int workers = 1);
ConvergenceConfig convergence_config_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ConvergenceScan &s);

}
