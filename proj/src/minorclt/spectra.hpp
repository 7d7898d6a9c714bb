#pragma once

#include <vector>

#include <json.hpp>

#include "minorclt/ensemble.hpp"

namespace minorclt {

class TestFunction;

struct SpectralSample {
	int n = 0;
	double h11 = 0;
	std::vector<double> eigs_full;
	std::vector<double> eigs_minor;
};

std::vector<double> eigenvalues(const HermitianMatrix &h);
std::vector<double> eigenvalues(const RealMatrix &h);
std::vector<double> eigenvalues(const ComplexMatrix &h);

HermitianMatrix minor(const HermitianMatrix &h);

double operator_norm_bound(const HermitianMatrix &h);

SpectralSample spectral_sample(const MatrixSample &m);

struct InterlacingReport {
	bool interlaced = true;
	double worst_violation = 0; // max over k of how far lambda_k <= mu_k <= lambda_{k+1} fails
	double trace_residual = 0;  // sum lambda - sum mu - h11
};

InterlacingReport check_interlacing(const SpectralSample &s);

// throws ValidationError when interlacing fails beyond tol (default 1e-9 * spectral scale)
void require_interlacing(const SpectralSample &s, double tol = -1);

double linear_statistic_diff(const TestFunction &f, const SpectralSample &s, bool shifted);

nlohmann::json to_json(const SpectralSample &s);
SpectralSample spectral_sample_from_json(const nlohmann::json &j);

}
