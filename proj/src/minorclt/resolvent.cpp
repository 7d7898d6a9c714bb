#include "minorclt/resolvent.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "minorclt/errors.hpp"
#include "minorclt/parallel.hpp"
#include "minorclt/spectra.hpp"
#include "minorclt/theory.hpp"

namespace minorclt {

namespace {

ComplexMatrix as_complex(const HermitianMatrix &h) {
	return std::visit([](const auto &m) -> ComplexMatrix { return m.template cast<cplx>(); }, h);
}

void require_offaxis(cplx z) {
	if(std::abs(z.imag()) < 1e-12) {
		throw DomainError("resolvent is ill-conditioned for |Im z| < 1e-12");
	}
}

}

GreenEval green(const HermitianMatrix &h, cplx z) {
	require_offaxis(z);
	ComplexMatrix a = as_complex(h);
	if(!a.allFinite()) {
		throw InputError("matrix has non-finite entries");
	}
	int n = static_cast<int>(a.rows());
	a.diagonal().array() -= z;
	GreenEval g;
	g.z = z;
	g.G = a.partialPivLu().inverse();
	g.trace_over_n = n ? g.G.trace() / static_cast<double>(n) : cplx{};
	return g;
}

SchurEvaluator::SchurEvaluator(const HermitianMatrix &h) {
	n_ = std::visit([](const auto &m) { return static_cast<int>(m.rows()); }, h);
	if(n_ < 1) {
		throw DimensionError("empty matrix");
	}
	full_ = eigenvalues(h);
	std::visit(
	    [&](const auto &m) {
		    using M = std::decay_t<decltype(m)>;
		    h11_ = std::real(m(0, 0));
		    if(n_ == 1) {
			    return;
		    }
		    M hat = m.bottomRightCorner(n_ - 1, n_ - 1);
		    Eigen::SelfAdjointEigenSolver<M> es(hat);
		    if(es.info() != Eigen::Success) {
			    throw PrecisionError("eigensolver did not converge");
		    }
		    auto col = m.col(0).tail(n_ - 1);
		    auto w = (es.eigenvectors().adjoint() * col).eval();
		    minor_.assign(es.eigenvalues().data(), es.eigenvalues().data() + n_ - 1);
		    weight_.resize(n_ - 1);
		    for(int k = 0; k < n_ - 1; k++) {
			    weight_[k] = std::norm(w(k));
		    }
	    },
	    h);
}

SchurDelta SchurEvaluator::operator()(cplx z) const {
	require_offaxis(z);
	auto sums = [&](cplx w, cplx &trace_full, cplx &trace_minor, cplx &trace_minor2, cplx &q1, cplx &q2) {
		trace_full = trace_minor = trace_minor2 = q1 = q2 = 0;
		for(double l : full_) {
			trace_full += 1.0 / (l - w);
		}
		for(size_t k = 0; k < minor_.size(); k++) {
			cplx r = 1.0 / (minor_[k] - w);
			trace_minor += r;
			trace_minor2 += r * r;
			q1 += weight_[k] * r;
			q2 += weight_[k] * r * r;
		}
	};
	SchurDelta d;
	d.z = z;
	cplx tf, tm, tm2, q1, q2;
	sums(z, tf, tm, tm2, q1, q2);
	d.delta_direct = tf - tm;
	d.delta_schur = (1.0 + q2) / (h11_ - z - q1);
	d.residual = std::abs(d.delta_direct - d.delta_schur);
	d.delta_hat = (1.0 + tm2 / static_cast<double>(n_)) / (-z - tm / static_cast<double>(n_));

	sums(z + h11_, tf, tm, tm2, q1, q2);
	d.delta_tilde_direct = tf - tm;
	d.delta_tilde_schur = (1.0 + q2) / (-z - q1);
	d.residual_tilde = std::abs(d.delta_tilde_direct - d.delta_tilde_schur);
	return d;
}

SchurDelta schur_delta(const HermitianMatrix &h, cplx z) {
	return SchurEvaluator{h}(z);
}

std::vector<LocalLawRow> local_law_residuals(const HermitianMatrix &h, const std::vector<double> &eta_grid, double x) {
	auto hat = minor(h);
	int n = std::visit([](const auto &m) { return static_cast<int>(m.rows()); }, h);
	std::vector<LocalLawRow> rows;
	for(double eta : eta_grid) {
		cplx z{x, eta};
		auto g = green(hat, z);
		cplx m = semicircle_stieltjes(z);
		LocalLawRow r;
		r.eta = eta;
		for(int i = 0; i < g.G.rows(); i++) {
			for(int j = 0; j < g.G.cols(); j++) {
				if(i == j) {
					r.max_diag = std::max(r.max_diag, std::abs(g.G(i, i) - m));
				} else {
					r.max_offdiag = std::max(r.max_offdiag, std::abs(g.G(i, j)));
				}
			}
		}
		r.mn_deviation = std::abs(g.G.trace() / static_cast<double>(n) - m);
		rows.push_back(r);
	}
	return rows;
}

cplx trgg_formula(cplx z, cplx zp) {
	cplx a = semicircle_stieltjes(z) * semicircle_stieltjes(zp);
	return a * a / (1.0 - a);
}

cplx trggt_formula(cplx z, cplx zp, cplx sigma2) {
	cplx a = semicircle_stieltjes(z) * semicircle_stieltjes(zp);
	// a Phi(a) = vsigma2_kernel(a) / a
	return vsigma2_kernel(a, sigma2) / a;
}

double paired_trace_band(int n, double eta, double eta_p) {
	double nee = n * eta * eta_p;
	return 1.0 / ((eta + eta_p) * std::sqrt(nee)) * (1 / std::sqrt(eta) + 1 / std::sqrt(eta_p) + 1 / std::sqrt(nee));
}

PairedTraceSample paired_trace_sample(const HermitianMatrix &h, cplx z, cplx zp) {
	auto hat = minor(h);
	int n = std::visit([](const auto &m) { return static_cast<int>(m.rows()); }, h);
	auto g = green(hat, z);
	ComplexMatrix gp = (zp == z) ? g.G : green(hat, zp).G;
	cplx diag = g.G.diagonal().cwiseProduct(gp.diagonal()).sum();
	PairedTraceSample s;
	s.trgg = (g.G.cwiseProduct(gp.transpose()).sum() - diag) / static_cast<double>(n);
	s.trggt = (g.G.cwiseProduct(gp).sum() - diag) / static_cast<double>(n);
	return s;
}

PairedTraceRecord paired_trace_check(int sample_count, const EnsembleSpec &spec, cplx z, cplx zp,
                                     std::uint64_t master_seed, int workers) {
	if(sample_count < 1) {
		throw ConfigError("paired trace check needs at least one sample");
	}
	require_offaxis(z);
	require_offaxis(zp);
	spec.validate();
	PairedTraceRecord r;
	r.samples = sample_count;
	r.n = spec.n;
	r.z = z;
	r.zp = zp;
	r.formula_trgg = trgg_formula(z, zp);
	r.formula_trggt = trggt_formula(z, zp, spec.sigma2);
	r.band = paired_trace_band(spec.n, std::abs(z.imag()), std::abs(zp.imag()));
	r.per_sample.resize(sample_count);
	parallel_for(sample_count, workers, [&](std::size_t i) {
		auto m = sample_wigner(spec, master_seed, i);
		auto s = paired_trace_sample(m.entries, z, zp);
		s.dev_trgg = std::abs(s.trgg - r.formula_trgg);
		s.dev_trggt = std::abs(s.trggt - r.formula_trggt);
		r.per_sample[i] = s;
	});
	int in_gg = 0, in_ggt = 0;
	for(const auto &s : r.per_sample) {
		r.mean_trgg += s.trgg;
		r.mean_trggt += s.trggt;
		in_gg += s.dev_trgg <= r.slack * r.band;
		in_ggt += s.dev_trggt <= r.slack * r.band;
	}
	r.mean_trgg /= static_cast<double>(sample_count);
	r.mean_trggt /= static_cast<double>(sample_count);
	r.fraction_within_trgg = static_cast<double>(in_gg) / sample_count;
	r.fraction_within_trggt = static_cast<double>(in_ggt) / sample_count;
	return r;
}

SMatrixResult s_matrix_resolvent(int n, cplx alpha) {
	if(n < 2) {
		throw ConfigError("S matrix needs n >= 2");
	}
	int m = n - 1;
	ComplexMatrix a = ComplexMatrix::Identity(m, m);
	for(int i = 0; i < m; i++) {
		for(int j = 0; j < m; j++) {
			if(j > i) {
				a(i, j) -= alpha / static_cast<double>(n);
			} else if(j < i) {
				a(i, j) += alpha / static_cast<double>(n);
			}
		}
	}
	Eigen::VectorXcd e = Eigen::VectorXcd::Constant(m, 1.0 / std::sqrt(static_cast<double>(n)));
	Eigen::VectorXcd x = a.partialPivLu().solve(e);
	SMatrixResult r;
	r.n = n;
	r.alpha = alpha;
	r.value = e.dot(x);
	r.tanh_ratio = std::abs(alpha) < 1e-12 ? cplx{1.0} : std::tanh(alpha) / alpha;
	r.deviation = std::abs(r.value - r.tanh_ratio);
	return r;
}

double s_matrix_moment(int n, int k) {
	if(n < 2 || k < 0) {
		throw ConfigError("S moment needs n >= 2 and k >= 0");
	}
	int m = n - 1;
	Eigen::VectorXd v = Eigen::VectorXd::Constant(m, 1.0 / std::sqrt(static_cast<double>(n)));
	Eigen::VectorXd e = v;
	for(int step = 0; step < k; step++) {
		// (S v)_a = (1/n)(sum_{b>a} v_b - sum_{b<a} v_b)
		Eigen::VectorXd next(m);
		double total = v.sum();
		double before = 0;
		for(int a = 0; a < m; a++) {
			double after = total - before - v(a);
			next(a) = (after - before) / n;
			before += v(a);
		}
		v = next;
	}
	return e.dot(v);
}

nlohmann::json to_json(const SchurDelta &d) {
	auto c = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
	return {{"z", c(d.z)},
	        {"delta_direct", c(d.delta_direct)},
	        {"delta_schur", c(d.delta_schur)},
	        {"residual", d.residual},
	        {"delta_tilde_direct", c(d.delta_tilde_direct)},
	        {"delta_tilde_schur", c(d.delta_tilde_schur)},
	        {"residual_tilde", d.residual_tilde},
	        {"delta_hat", c(d.delta_hat)}};
}

nlohmann::json to_json(const LocalLawRow &r) {
	return {{"eta", r.eta}, {"max_offdiag", r.max_offdiag}, {"max_diag", r.max_diag}, {"mn_deviation", r.mn_deviation}};
}

nlohmann::json to_json(const PairedTraceRecord &r, bool per_sample) {
	auto c = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
	nlohmann::json j{{"samples", r.samples},
	                 {"n", r.n},
	                 {"z", c(r.z)},
	                 {"zp", c(r.zp)},
	                 {"formula_trgg", c(r.formula_trgg)},
	                 {"formula_trggt", c(r.formula_trggt)},
	                 {"mean_trgg", c(r.mean_trgg)},
	                 {"mean_trggt", c(r.mean_trggt)},
	                 {"band", r.band},
	                 {"slack", r.slack},
	                 {"fraction_within_trgg", r.fraction_within_trgg},
	                 {"fraction_within_trggt", r.fraction_within_trggt}};
	if(per_sample) {
		auto &arr = j["per_sample"] = nlohmann::json::array();
		for(const auto &s : r.per_sample) {
			arr.push_back({{"trgg", c(s.trgg)}, {"trggt", c(s.trggt)}, {"dev_trgg", s.dev_trgg}, {"dev_trggt", s.dev_trggt}});
		}
	}
	return j;
}

nlohmann::json to_json(const SMatrixResult &r) {
	auto c = [](cplx v) { return nlohmann::json::array({v.real(), v.imag()}); };
	return {{"n", r.n}, {"alpha", c(r.alpha)}, {"value", c(r.value)}, {"tanh_ratio", c(r.tanh_ratio)}, {"deviation", r.deviation}};
}

}
