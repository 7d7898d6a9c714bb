#include "minorclt/ensemble.hpp"

#include <cmath>
#include <numbers>

#include "minorclt/errors.hpp"

namespace minorclt {

namespace {

std::uint64_t splitmix(std::uint64_t z) {
	z += 0x9e3779b97f4a7c15ULL;
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

double uniform01(std::mt19937_64 &rng) {
	return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
	return splitmix(master_seed ^ splitmix(index ^ 0xd1b54a32d192ed03ULL));
}

EnsembleSpec EnsembleSpec::goe(int n) {
	EnsembleSpec s;
	s.n = n;
	return s;
}

EnsembleSpec EnsembleSpec::gue(int n) {
	EnsembleSpec s;
	s.symmetry = Symmetry::ComplexHermitian;
	s.n = n;
	s.s_diag = 1.0;
	s.s11 = 1.0;
	s.sigma2 = 0.0;
	s.sigma4 = 2.0;
	return s;
}

double implied_sigma4(const EnsembleSpec &spec) {
	bool cplx = spec.is_complex();
	switch(spec.offdiag_law) {
	case Law::Gaussian:
		return cplx ? 2.0 : 3.0;
	case Law::Rademacher:
		return 1.0;
	case Law::Uniform:
		return cplx ? 1.4 : 1.8;
	case Law::TwoPointFourth:
		return spec.sigma4;
	}
	return spec.sigma4;
}

void EnsembleSpec::validate() const {
	if(n < 1) {
		throw ConfigError("ensemble dimension must be positive");
	}
	if(!std::isfinite(sigma2.real()) || !std::isfinite(sigma2.imag()) || std::abs(sigma2) > 1 + 1e-12) {
		throw ConfigError("|sigma2| must not exceed 1");
	}
	if(symmetry == Symmetry::RealSymmetric && std::abs(sigma2 - 1.0) > 1e-12) {
		throw ConfigError("real symmetric ensembles have sigma2 = 1");
	}
	if(!(sigma4 >= 1.0)) {
		throw ConfigError("sigma4 must be at least 1");
	}
	if(offdiag_law != Law::TwoPointFourth && std::abs(sigma4 - implied_sigma4(*this)) > 1e-9) {
		throw ConfigError("offdiagonal law " + to_string(offdiag_law) + " cannot realize sigma4 = " +
		                  std::to_string(sigma4));
	}
	if(diag_law == Law::TwoPointFourth || corner_law == Law::TwoPointFourth) {
		throw ConfigError("two_point_fourth is only available for offdiagonal entries");
	}
	if(!(s11 >= 0) || !(s_diag >= 0)) {
		throw ConfigError("diagonal variances must be nonnegative");
	}
}

std::string to_string(Law law) {
	switch(law) {
	case Law::Gaussian:
		return "gaussian";
	case Law::Rademacher:
		return "rademacher";
	case Law::Uniform:
		return "uniform";
	case Law::TwoPointFourth:
		return "two_point_fourth";
	}
	return "?";
}

Law law_from_string(const std::string &name) {
	if(name == "gaussian") {
		return Law::Gaussian;
	}
	if(name == "rademacher") {
		return Law::Rademacher;
	}
	if(name == "uniform") {
		return Law::Uniform;
	}
	if(name == "two_point_fourth") {
		return Law::TwoPointFourth;
	}
	throw ConfigError("unknown law '" + name + "'");
}

nlohmann::json to_json(const EnsembleSpec &spec) {
	return {
	    {"symmetry", spec.is_complex() ? "complex_hermitian" : "real_symmetric"},
	    {"n", spec.n},
	    {"offdiag_law", to_string(spec.offdiag_law)},
	    {"diag_law", {{"law", to_string(spec.diag_law)}, {"variance", spec.s_diag}}},
	    {"corner_law", to_string(spec.corner_law)},
	    {"sigma2_re", spec.sigma2.real()},
	    {"sigma2_im", spec.sigma2.imag()},
	    {"sigma4", spec.sigma4},
	    {"s11", spec.s11},
	};
}

EnsembleSpec ensemble_from_json(const nlohmann::json &j) {
	if(!j.is_object()) {
		throw ConfigError("ensemble must be a JSON object");
	}
	static const char *known[] = {"symmetry", "n",         "offdiag_law", "diag_law", "corner_law",
	                              "sigma2_re", "sigma2_im", "sigma4",      "s11"};
	for(auto it = j.begin(); it != j.end(); ++it) {
		bool ok = false;
		for(auto k : known) {
			ok |= it.key() == k;
		}
		if(!ok) {
			throw ConfigError("unknown ensemble field '" + it.key() + "'");
		}
	}

	EnsembleSpec s;
	try {
		std::string sym = j.value("symmetry", std::string{"real_symmetric"});
		if(sym == "real_symmetric") {
			s.symmetry = Symmetry::RealSymmetric;
		} else if(sym == "complex_hermitian") {
			s.symmetry = Symmetry::ComplexHermitian;
		} else {
			throw ConfigError("unknown symmetry '" + sym + "'");
		}
		bool cplx = s.is_complex();
		s.n = j.at("n").get<int>();
		s.offdiag_law = law_from_string(j.value("offdiag_law", std::string{"gaussian"}));

		s.s_diag = cplx ? 1.0 : 2.0;
		if(j.contains("diag_law")) {
			auto &d = j["diag_law"];
			if(d.is_string()) {
				s.diag_law = law_from_string(d.get<std::string>());
			} else {
				s.diag_law = law_from_string(d.at("law").get<std::string>());
				s.s_diag = d.value("variance", s.s_diag);
			}
		}
		s.s11 = j.value("s11", cplx ? 1.0 : 2.0);
		if(j.contains("corner_law")) {
			auto &c = j["corner_law"];
			if(c.is_string()) {
				s.corner_law = law_from_string(c.get<std::string>());
			} else {
				s.corner_law = law_from_string(c.at("law").get<std::string>());
				if(c.contains("variance")) {
					double v = c["variance"].get<double>();
					if(j.contains("s11") && std::abs(v - s.s11) > 1e-12) {
						throw ConfigError("corner_law variance disagrees with s11");
					}
					s.s11 = v;
				}
			}
		}
		s.sigma2 = {j.value("sigma2_re", cplx ? 0.0 : 1.0), j.value("sigma2_im", 0.0)};
		if(j.contains("sigma4")) {
			s.sigma4 = j["sigma4"].get<double>();
		} else if(s.offdiag_law == Law::TwoPointFourth) {
			throw ConfigError("two_point_fourth needs an explicit sigma4");
		} else {
			s.sigma4 = implied_sigma4(s);
		}
	} catch(const nlohmann::json::exception &e) {
		throw ConfigError(std::string{"malformed ensemble: "} + e.what());
	}
	s.validate();
	return s;
}

int MatrixSample::n() const {
	return std::visit([](const auto &m) { return static_cast<int>(m.rows()); }, entries);
}

EntrySampler::EntrySampler(const EnsembleSpec &spec) : spec_{spec} {
	spec_.validate();
	phase_mean_ = std::arg(spec.sigma2);
	phase_mod_ = std::abs(spec.sigma2);
}

double EntrySampler::real_law(Law law, double variance, std::mt19937_64 &rng) const {
	double sd = std::sqrt(variance);
	switch(law) {
	case Law::Gaussian:
		return sd * std::normal_distribution<double>(0.0, 1.0)(rng);
	case Law::Rademacher:
		return (rng() >> 63) ? sd : -sd;
	case Law::Uniform:
		return sd * std::uniform_real_distribution<double>(-std::sqrt(3.0), std::sqrt(3.0))(rng);
	case Law::TwoPointFourth: {
		// atoms {-a, 0, a} with a^2 = sigma4 and P(+-a) = 1/(2 sigma4)
		double a = std::sqrt(spec_.sigma4);
		double u = uniform01(rng);
		double p = 1.0 / (2.0 * spec_.sigma4);
		if(u < p) {
			return -a * sd;
		}
		if(u < 2 * p) {
			return a * sd;
		}
		return 0.0;
	}
	}
	return 0.0;
}

double EntrySampler::corner(std::mt19937_64 &rng) const {
	return real_law(spec_.corner_law, spec_.s11, rng);
}

double EntrySampler::diagonal(std::mt19937_64 &rng) const {
	return real_law(spec_.diag_law, spec_.s_diag, rng);
}

double EntrySampler::offdiag_real(std::mt19937_64 &rng) const {
	return real_law(spec_.offdiag_law, 1.0, rng);
}

double EntrySampler::radial_square(std::mt19937_64 &rng) const {
	switch(spec_.offdiag_law) {
	case Law::Gaussian:
		return std::exponential_distribution<double>(1.0)(rng);
	case Law::Rademacher:
		return 1.0;
	case Law::Uniform: {
		std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
		double a = u(rng);
		double b = u(rng);
		return 0.5 * (a * a + b * b);
	}
	case Law::TwoPointFourth:
		return uniform01(rng) < 1.0 / spec_.sigma4 ? spec_.sigma4 : 0.0;
	}
	return 1.0;
}

std::complex<double> EntrySampler::offdiag_complex(std::mt19937_64 &rng) const {
	double r = std::sqrt(radial_square(rng));
	double psi = 0;
	if(uniform01(rng) >= phase_mod_) {
		psi = 2 * std::numbers::pi * uniform01(rng);
	}
	double theta = 0.5 * (phase_mean_ + psi);
	if(rng() >> 63) {
		theta += std::numbers::pi;
	}
	return std::polar(r, theta);
}

MatrixSample sample_wigner(const EnsembleSpec &spec, std::uint64_t master_seed, std::uint64_t index) {
	EntrySampler sampler{spec};
	MatrixSample out;
	out.seed_used = derive_seed(master_seed, index);
	std::mt19937_64 rng{out.seed_used};
	int n = spec.n;
	double scale = 1.0 / std::sqrt(static_cast<double>(n));

	if(spec.is_complex()) {
		ComplexMatrix h(n, n);
		for(int i = 0; i < n; i++) {
			h(i, i) = scale * (i == 0 ? sampler.corner(rng) : sampler.diagonal(rng));
			for(int j = i + 1; j < n; j++) {
				auto v = scale * sampler.offdiag_complex(rng);
				h(i, j) = v;
				h(j, i) = std::conj(v);
			}
		}
		out.h11 = h(0, 0).real();
		out.entries = std::move(h);
	} else {
		RealMatrix h(n, n);
		for(int i = 0; i < n; i++) {
			h(i, i) = scale * (i == 0 ? sampler.corner(rng) : sampler.diagonal(rng));
			for(int j = i + 1; j < n; j++) {
				double v = scale * sampler.offdiag_real(rng);
				h(i, j) = v;
				h(j, i) = v;
			}
		}
		out.h11 = h(0, 0);
		out.entries = std::move(h);
	}
	return out;
}

namespace {

struct Accumulator {
	double sum = 0, sum2 = 0;
	long count = 0;

	void add(double x) {
		sum += x;
		sum2 += x * x;
		count++;
	}

	Estimate estimate() const {
		double mean = sum / count;
		double var = (sum2 - count * mean * mean) / (count - 1);
		return {mean, std::sqrt(std::max(var, 0.0) / count)};
	}
};

}

EntryMomentSummary entry_moment_summary(const EnsembleSpec &spec, int draws, std::uint64_t seed) {
	if(draws < 1000) {
		throw ConfigError("entry_moment_summary needs at least 1000 draws");
	}
	EntrySampler sampler{spec};
	std::mt19937_64 offdiag_rng{derive_seed(seed, 0)};
	std::mt19937_64 corner_rng{derive_seed(seed, 1)};
	std::mt19937_64 diag_rng{derive_seed(seed, 2)};

	Accumulator mre, mim, var, s2re, s2im, s4, s11, sdiag;
	for(int k = 0; k < draws; k++) {
		std::complex<double> x = spec.is_complex() ? sampler.offdiag_complex(offdiag_rng)
		                                           : std::complex<double>{sampler.offdiag_real(offdiag_rng)};
		mre.add(x.real());
		mim.add(x.imag());
		double a2 = std::norm(x);
		var.add(a2);
		auto sq = x * x;
		s2re.add(sq.real());
		s2im.add(sq.imag());
		s4.add(a2 * a2);
		double c = sampler.corner(corner_rng);
		s11.add(c * c);
		double d = sampler.diagonal(diag_rng);
		sdiag.add(d * d);
	}

	EntryMomentSummary out;
	out.draws = draws;
	out.mean_re = mre.estimate();
	out.mean_im = mim.estimate();
	out.variance = var.estimate();
	out.sigma2_re = s2re.estimate();
	out.sigma2_im = s2im.estimate();
	out.sigma4 = s4.estimate();
	out.s11 = s11.estimate();
	out.s_diag = sdiag.estimate();
	return out;
}

nlohmann::json to_json(const EntryMomentSummary &s) {
	auto e = [](const Estimate &x) { return nlohmann::json{{"value", x.value}, {"se", x.se}}; };
	return {
	    {"draws", s.draws},         {"mean_re", e(s.mean_re)},     {"mean_im", e(s.mean_im)},
	    {"variance", e(s.variance)}, {"sigma2_re", e(s.sigma2_re)}, {"sigma2_im", e(s.sigma2_im)},
	    {"sigma4", e(s.sigma4)},    {"s11", e(s.s11)},             {"s_diag", e(s.s_diag)},
	};
}

}
