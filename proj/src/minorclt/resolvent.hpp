#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "minorclt/ensemble.hpp"

namespace minorclt {

using cplx = std::complex<double>;

struct GreenEval {
	cplx z;
	ComplexMatrix G;
	cplx trace_over_n;
};

GreenEval green(const HermitianMatrix &h, cplx z);

struct SchurDelta {
	cplx z;
	cplx delta_direct; // Tr G - Tr G-hat
	cplx delta_schur;  // (1 + <h, G-hat^2 h>) / (h11 - z - <h, G-hat h>)
	double residual = 0;
	cplx delta_tilde_direct; // same at z + h11
	cplx delta_tilde_schur;
	double residual_tilde = 0;
	cplx delta_hat; // (1 + Tr G-hat^2 / N) / (-z - Tr G-hat / N)
};

// Eigendecomposition-backed evaluator for many z on one matrix
class SchurEvaluator {
public:
	explicit SchurEvaluator(const HermitianMatrix &h);
	SchurDelta operator()(cplx z) const;
	int n() const { return n_; }

private:
	int n_;
	double h11_;
	std::vector<double> full_, minor_, weight_;
};

SchurDelta schur_delta(const HermitianMatrix &h, cplx z);

struct LocalLawRow {
	double eta = 0;
	double max_offdiag = 0;
	double max_diag = 0;
	double mn_deviation = 0;
};

std::vector<LocalLawRow> local_law_residuals(const HermitianMatrix &h, const std::vector<double> &eta_grid,
                                             double x = 0);

// m(z) m(z') Phi(m(z) m(z')) for the transpose pair
cplx trggt_formula(cplx z, cplx zp, cplx sigma2);
cplx trgg_formula(cplx z, cplx zp);
double paired_trace_band(int n, double eta, double eta_p);

struct PairedTraceSample {
	cplx trgg;
	cplx trggt;
	double dev_trgg = 0;
	double dev_trggt = 0;
};

PairedTraceSample paired_trace_sample(const HermitianMatrix &h, cplx z, cplx zp);

struct PairedTraceRecord {
	int samples = 0;
	int n = 0;
	cplx z, zp;
	cplx formula_trgg, formula_trggt;
	cplx mean_trgg, mean_trggt;
	double band = 0;
	double slack = 10;
	double fraction_within_trgg = 0;
	double fraction_within_trggt = 0;
	std::vector<PairedTraceSample> per_sample;
};

PairedTraceRecord paired_trace_check(int sample_count, const EnsembleSpec &spec, cplx z, cplx zp,
                                     std::uint64_t master_seed, int workers = 1);

struct SMatrixResult {
	int n = 0;
	cplx alpha;
	cplx value;
	cplx tanh_ratio;
	double deviation = 0;
};

SMatrixResult s_matrix_resolvent(int n, cplx alpha);
// <e, S^k e>
double s_matrix_moment(int n, int k);

nlohmann::json to_json(const SchurDelta &d);
nlohmann::json to_json(const LocalLawRow &r);
nlohmann::json to_json(const PairedTraceRecord &r, bool per_sample = false);
nlohmann::json to_json(const SMatrixResult &r);

}
