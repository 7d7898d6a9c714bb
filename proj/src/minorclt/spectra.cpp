#include "minorclt/spectra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "minorclt/errors.hpp"
#include "minorclt/test_function.hpp"

namespace minorclt {

namespace {

template<class M>
void require_finite(const M &h) {
	if(!h.allFinite()) {
		throw InputError("matrix has non-finite entries");
	}
	if(h.rows() != h.cols()) {
		throw DimensionError("matrix is not square");
	}
}

std::vector<double> to_sorted(const Eigen::VectorXd &v) {
	std::vector<double> out(v.data(), v.data() + v.size());
	std::sort(out.begin(), out.end());
	return out;
}

double spectral_scale(const SpectralSample &s) {
	double r = std::abs(s.h11);
	if(!s.eigs_full.empty()) {
		r = std::max({r, std::abs(s.eigs_full.front()), std::abs(s.eigs_full.back())});
	}
	return std::max(r, 1.0);
}

}

std::vector<double> eigenvalues(const RealMatrix &h) {
	require_finite(h);
	if(h.rows() == 0) {
		return {};
	}
	Eigen::SelfAdjointEigenSolver<RealMatrix> es(h, Eigen::EigenvaluesOnly);
	if(es.info() != Eigen::Success) {
		throw PrecisionError("eigensolver did not converge");
	}
	return to_sorted(es.eigenvalues());
}

std::vector<double> eigenvalues(const ComplexMatrix &h) {
	require_finite(h);
	if(h.rows() == 0) {
		return {};
	}
	Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
	if(es.info() != Eigen::Success) {
		throw PrecisionError("eigensolver did not converge");
	}
	return to_sorted(es.eigenvalues());
}

std::vector<double> eigenvalues(const HermitianMatrix &h) {
	return std::visit([](const auto &m) { return eigenvalues(m); }, h);
}

HermitianMatrix minor(const HermitianMatrix &h) {
	return std::visit(
	    [](const auto &m) -> HermitianMatrix {
		    if(m.rows() < 2) {
			    throw DimensionError("minor needs N >= 2");
		    }
		    auto n = m.rows() - 1;
		    return HermitianMatrix{m.bottomRightCorner(n, n).eval()};
	    },
	    h);
}

double operator_norm_bound(const HermitianMatrix &h) {
	// Frobenius norm bounds the spectral norm
	return std::visit([](const auto &m) { return m.norm(); }, h);
}

SpectralSample spectral_sample(const MatrixSample &m) {
	SpectralSample s;
	s.n = m.n();
	s.h11 = m.h11;
	s.eigs_full = eigenvalues(m.entries);
	if(s.n >= 2) {
		s.eigs_minor = eigenvalues(minor(m.entries));
	}
	return s;
}

InterlacingReport check_interlacing(const SpectralSample &s) {
	InterlacingReport r;
	const auto &l = s.eigs_full;
	const auto &mu = s.eigs_minor;
	if(l.size() != static_cast<size_t>(s.n) || mu.size() + 1 != l.size()) {
		throw DimensionError("spectral sample sizes do not match n");
	}
	double sum = 0;
	for(size_t k = 0; k < mu.size(); k++) {
		r.worst_violation = std::max({r.worst_violation, l[k] - mu[k], mu[k] - l[k + 1]});
	}
	for(auto x : l) {
		sum += x;
	}
	for(auto x : mu) {
		sum -= x;
	}
	r.trace_residual = sum - s.h11;
	r.interlaced = r.worst_violation <= 0;
	return r;
}

void require_interlacing(const SpectralSample &s, double tol) {
	if(tol < 0) {
		tol = 1e-9 * spectral_scale(s);
	}
	auto r = check_interlacing(s);
	if(r.worst_violation > tol) {
		throw ValidationError("eigenvalues do not interlace (violation " + std::to_string(r.worst_violation) + ")");
	}
}

double linear_statistic_diff(const TestFunction &f, const SpectralSample &s, bool shifted) {
	double shift = shifted ? s.h11 : 0.0;
	double full = 0;
	for(auto x : s.eigs_full) {
		full += f.value(x - shift);
	}
	double part = 0;
	for(auto x : s.eigs_minor) {
		part += f.value(x - shift);
	}
	return full - part;
}

nlohmann::json to_json(const SpectralSample &s) {
	return {{"n", s.n}, {"h11", s.h11}, {"eigs_full", s.eigs_full}, {"eigs_minor", s.eigs_minor}};
}

SpectralSample spectral_sample_from_json(const nlohmann::json &j) {
	SpectralSample s;
	try {
		s.n = j.at("n").get<int>();
		s.h11 = j.at("h11").get<double>();
		s.eigs_full = j.at("eigs_full").get<std::vector<double>>();
		s.eigs_minor = j.at("eigs_minor").get<std::vector<double>>();
	} catch(const nlohmann::json::exception &e) {
		throw ConfigError(std::string{"malformed spectral sample: "} + e.what());
	}
	if(s.eigs_full.size() != static_cast<size_t>(s.n) || s.eigs_minor.size() + 1 != s.eigs_full.size()) {
		throw DimensionError("spectral sample sizes do not match n");
	}
	if(!std::is_sorted(s.eigs_full.begin(), s.eigs_full.end()) ||
	   !std::is_sorted(s.eigs_minor.begin(), s.eigs_minor.end())) {
		throw InputError("eigenvalues must be sorted ascending");
	}
	return s;
}

}
