#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <variant>

#include <Eigen/Dense>
#include <json.hpp>

#include "minorclt/statistics.hpp"

namespace minorclt {

enum class Symmetry { RealSymmetric, ComplexHermitian };

enum class Law { Gaussian, Rademacher, Uniform, TwoPointFourth };

struct EnsembleSpec {
	Symmetry symmetry = Symmetry::RealSymmetric;
	int n = 100;
	Law offdiag_law = Law::Gaussian;
	Law diag_law = Law::Gaussian;
	double s_diag = 2.0;
	Law corner_law = Law::Gaussian;
	double s11 = 2.0;
	std::complex<double> sigma2 = 1.0;
	double sigma4 = 3.0; // for TwoPointFourth this is the target, otherwise implied by the law

	static EnsembleSpec goe(int n);
	static EnsembleSpec gue(int n);

	// throws ConfigError
	void validate() const;

	bool is_complex() const { return symmetry == Symmetry::ComplexHermitian; }
};

// E|X|^4 of sqrt(N) h_ij implied by the law (TwoPointFourth returns the target)
double implied_sigma4(const EnsembleSpec &spec);

std::string to_string(Law law);
Law law_from_string(const std::string &name);

nlohmann::json to_json(const EnsembleSpec &spec);
EnsembleSpec ensemble_from_json(const nlohmann::json &j);

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using HermitianMatrix = std::variant<RealMatrix, ComplexMatrix>;

struct MatrixSample {
	HermitianMatrix entries;
	double h11 = 0;
	std::uint64_t seed_used = 0;

	int n() const;
};

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

// Single-entry samplers, scaled so that the returned value is sqrt(N) h
class EntrySampler {
public:
	explicit EntrySampler(const EnsembleSpec &spec);

	double corner(std::mt19937_64 &rng) const;
	double diagonal(std::mt19937_64 &rng) const;
	double offdiag_real(std::mt19937_64 &rng) const;
	std::complex<double> offdiag_complex(std::mt19937_64 &rng) const;

private:
	double real_law(Law law, double variance, std::mt19937_64 &rng) const;
	double radial_square(std::mt19937_64 &rng) const;

	EnsembleSpec spec_;
	double phase_mean_;
	double phase_mod_;
};

MatrixSample sample_wigner(const EnsembleSpec &spec, std::uint64_t master_seed, std::uint64_t index);

struct EntryMomentSummary {
	int draws = 0;
	Estimate mean_re, mean_im;
	Estimate variance;
	Estimate sigma2_re, sigma2_im;
	Estimate sigma4;
	Estimate s11;
	Estimate s_diag;
};

EntryMomentSummary entry_moment_summary(const EnsembleSpec &spec, int draws, std::uint64_t seed);
nlohmann::json to_json(const EntryMomentSummary &s);

}
