#include "minorclt/minorclt.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "minorclt/diagram.hpp"
#include "minorclt/ensemble.hpp"
#include "minorclt/errors.hpp"
#include "minorclt/gff.hpp"
#include "minorclt/hs.hpp"
#include "minorclt/montecarlo.hpp"
#include "minorclt/spectra.hpp"
#include "minorclt/theory.hpp"
#include "minorclt/verify.hpp"

using namespace minorclt;

struct mclt_ensemble {
	EnsembleSpec spec;
};
struct mclt_function {
	TestFunction f;
};
struct mclt_sample {
	SpectralSample s;
};

namespace {

thread_local std::string last_error;

mclt_status fail(mclt_status code, const std::string &msg) {
	last_error = msg;
	return code;
}

template<class Fn>
mclt_status guarded(Fn &&fn) {
	try {
		fn();
		last_error.clear();
		return MCLT_OK;
	} catch(const Error &e) {
		return fail(static_cast<mclt_status>(e.kind()), e.what());
	} catch(const nlohmann::json::exception &e) {
		return fail(MCLT_ERR_CONFIG, std::string{"JSON error: "} + e.what());
	} catch(const std::bad_alloc &) {
		return fail(MCLT_ERR_INTERNAL, "out of memory");
	} catch(const std::exception &e) {
		return fail(MCLT_ERR_INTERNAL, e.what());
	}
}

char *dup_string(const std::string &s) {
	char *p = static_cast<char *>(std::malloc(s.size() + 1));
	if(!p) {
		throw std::bad_alloc();
	}
	std::memcpy(p, s.c_str(), s.size() + 1);
	return p;
}

nlohmann::json parse_json(const char *text) {
	try {
		return nlohmann::json::parse(text);
	} catch(const nlohmann::json::parse_error &e) {
		throw ConfigError(std::string{"invalid JSON: "} + e.what());
	}
}

std::complex<double> read_sigma2(const nlohmann::json &j) {
	if(!j.contains("sigma2")) {
		return 1.0;
	}
	const auto &v = j["sigma2"];
	if(v.is_number()) {
		return v.get<double>();
	}
	auto a = v.get<std::vector<double>>();
	if(a.size() != 2) {
		throw ConfigError("sigma2 must be a number or [re, im]");
	}
	return {a[0], a[1]};
}

nlohmann::json theory_request(const nlohmann::json &req) {
	auto sigma2 = read_sigma2(req);
	double sigma4 = req.value("sigma4", 3.0);
	double s11 = req.value("s11", 2.0);
	nlohmann::json out{{"sigma2", {sigma2.real(), sigma2.imag()}}, {"sigma4", sigma4}, {"s11", s11}};
	bool has_f = req.contains("f"), has_e = req.contains("E");
	if(has_f == has_e) {
		throw ConfigError("theory request needs exactly one of 'f' or 'E'");
	}
	if(has_e) {
		double E = req["E"].get<double>();
		out["young"] = to_json(young_variance(E, sigma2, sigma4, s11));
		out["omega"] = vksl_curve(E);
		return out;
	}
	auto f = test_function_from_json(req["f"]);
	out["f"] = f.describe();
	out["theory"] = to_json(variance_components(f, sigma2, sigma4, s11));
	if(req.value("gff", false)) {
		out["gff"] = to_json(gff_derivative_variance(f, sigma4, s11));
	}
	return out;
}

}

extern "C" {

const char *mclt_last_error(void) {
	return last_error.c_str();
}

const char *mclt_status_name(mclt_status status) {
	switch(status) {
	case MCLT_OK:
		return "ok";
	case MCLT_ERR_INTERNAL:
		return "internal error";
	case MCLT_ERR_CONFIG:
		return "config error";
	case MCLT_ERR_PRECISION:
		return "precision error";
	case MCLT_ERR_DOMAIN:
		return "domain error";
	case MCLT_ERR_VALIDATION:
		return "validation error";
	case MCLT_ERR_DIMENSION:
		return "dimension error";
	case MCLT_ERR_INPUT:
		return "input error";
	case MCLT_ERR_IO:
		return "io error";
	case MCLT_ERR_NULL_ARGUMENT:
		return "null argument";
	}
	return "unknown";
}

const char *mclt_version(void) {
	return "0.1.0";
}

void mclt_string_free(char *s) {
	std::free(s);
}

#define MCLT_REQUIRE(p)                                                                                          \
	do {                                                                                                         \
		if(!(p)) {                                                                                               \
			return fail(MCLT_ERR_NULL_ARGUMENT, "null argument: " #p);                                           \
		}                                                                                                        \
	} while(0)

mclt_status mclt_ensemble_goe(int n, mclt_ensemble **out) {
	MCLT_REQUIRE(out);
	return guarded([&] {
		auto spec = EnsembleSpec::goe(n);
		spec.validate();
		*out = new mclt_ensemble{spec};
	});
}

mclt_status mclt_ensemble_gue(int n, mclt_ensemble **out) {
	MCLT_REQUIRE(out);
	return guarded([&] {
		auto spec = EnsembleSpec::gue(n);
		spec.validate();
		*out = new mclt_ensemble{spec};
	});
}

mclt_status mclt_ensemble_from_json(const char *json, mclt_ensemble **out) {
	MCLT_REQUIRE(json);
	MCLT_REQUIRE(out);
	return guarded([&] { *out = new mclt_ensemble{ensemble_from_json(parse_json(json))}; });
}

mclt_status mclt_ensemble_to_json(const mclt_ensemble *e, char **out) {
	MCLT_REQUIRE(e);
	MCLT_REQUIRE(out);
	return guarded([&] { *out = dup_string(to_json(e->spec).dump()); });
}

void mclt_ensemble_free(mclt_ensemble *e) {
	delete e;
}

mclt_status mclt_function_parse(const char *text, mclt_function **out) {
	MCLT_REQUIRE(text);
	MCLT_REQUIRE(out);
	return guarded([&] { *out = new mclt_function{TestFunction::parse(text)}; });
}

mclt_status mclt_function_from_json(const char *json, mclt_function **out) {
	MCLT_REQUIRE(json);
	MCLT_REQUIRE(out);
	return guarded([&] { *out = new mclt_function{test_function_from_json(parse_json(json))}; });
}

mclt_status mclt_function_eval(const mclt_function *f, double x, double *value) {
	MCLT_REQUIRE(f);
	MCLT_REQUIRE(value);
	return guarded([&] { *value = f->f.value(x); });
}

void mclt_function_free(mclt_function *f) {
	delete f;
}

mclt_status mclt_sample_draw(const mclt_ensemble *e, uint64_t master_seed, uint64_t index, mclt_sample **out) {
	MCLT_REQUIRE(e);
	MCLT_REQUIRE(out);
	return guarded([&] { *out = new mclt_sample{spectral_sample(sample_wigner(e->spec, master_seed, index))}; });
}

mclt_status mclt_sample_size(const mclt_sample *s, int *n) {
	MCLT_REQUIRE(s);
	MCLT_REQUIRE(n);
	*n = s->s.n;
	return MCLT_OK;
}

mclt_status mclt_sample_h11(const mclt_sample *s, double *h11) {
	MCLT_REQUIRE(s);
	MCLT_REQUIRE(h11);
	*h11 = s->s.h11;
	return MCLT_OK;
}

mclt_status mclt_sample_eigenvalues(const mclt_sample *s, int which, double *buffer, size_t length) {
	MCLT_REQUIRE(s);
	MCLT_REQUIRE(buffer);
	if(which != 0 && which != 1) {
		return fail(MCLT_ERR_CONFIG, "which must be 0 (full) or 1 (minor)");
	}
	const auto &v = which == 0 ? s->s.eigs_full : s->s.eigs_minor;
	if(length < v.size()) {
		return fail(MCLT_ERR_DIMENSION, "buffer too small: need " + std::to_string(v.size()));
	}
	std::copy(v.begin(), v.end(), buffer);
	return MCLT_OK;
}

mclt_status mclt_sample_linear_statistic(const mclt_sample *s, const mclt_function *f, int shifted, double *value) {
	MCLT_REQUIRE(s);
	MCLT_REQUIRE(f);
	MCLT_REQUIRE(value);
	return guarded([&] { *value = linear_statistic_diff(f->f, s->s, shifted != 0); });
}

mclt_status mclt_sample_to_json(const mclt_sample *s, char **out) {
	MCLT_REQUIRE(s);
	MCLT_REQUIRE(out);
	return guarded([&] { *out = dup_string(to_json(s->s).dump()); });
}

mclt_status mclt_sample_diagram_csv(const mclt_sample *s, int shifted, double lo, double hi, int points, char **out) {
	MCLT_REQUIRE(s);
	MCLT_REQUIRE(out);
	return guarded([&] {
		auto grid = points > 0 ? default_grid(points, lo, hi) : node_augmented_grid(s->s, shifted != 0);
		std::ostringstream os;
		write_diagram_csv(os, rectangular_diagram(s->s, grid, shifted != 0));
		*out = dup_string(os.str());
	});
}

void mclt_sample_free(mclt_sample *s) {
	delete s;
}

mclt_status mclt_hs_functional(const mclt_function *f, const double *eigenvalues, size_t count, double eta0,
                               double *value) {
	MCLT_REQUIRE(f);
	MCLT_REQUIRE(value);
	if(count > 0) {
		MCLT_REQUIRE(eigenvalues);
	}
	return guarded([&] {
		std::vector<double> e(eigenvalues, eigenvalues + count);
		*value = hs_functional(f->f, e, eta0);
	});
}

mclt_status mclt_theory(const char *request_json, char **out) {
	MCLT_REQUIRE(request_json);
	MCLT_REQUIRE(out);
	return guarded([&] { *out = dup_string(theory_request(parse_json(request_json)).dump(2)); });
}

mclt_status mclt_experiment_run(const char *config_json, const char *out_dir, int has_seed, uint64_t seed_override,
                                int workers, char **record_json) {
	MCLT_REQUIRE(config_json);
	MCLT_REQUIRE(record_json);
	return guarded([&] {
		auto j = parse_json(config_json);
		if(workers < 1) {
			throw ConfigError("workers must be at least 1");
		}
		if(has_seed) {
			j["master_seed"] = seed_override;
		}
		if(j.value("mode", std::string{}) == "convergence") {
			auto cfg = convergence_config_from_json(j);
			auto out = to_json(convergence_scan(cfg, workers));
			out["mode"] = "convergence";
			out["master_seed"] = cfg.master_seed;
			if(out_dir) {
				std::error_code ec;
				std::filesystem::create_directories(out_dir, ec);
				auto path = std::filesystem::path(out_dir) / "convergence.json";
				std::ofstream os(path);
				if(ec || !os) {
					throw IoError("cannot write " + path.string());
				}
				os << out.dump(2) << '\n';
			}
			*record_json = dup_string(out.dump(2));
			return;
		}
		auto cfg = experiment_config_from_json(j);
		auto rec = run_clt_experiment(cfg, workers);
		auto out = to_json(rec);
		if(out_dir) {
			out["files"] = write_experiment(rec, out_dir);
		}
		*record_json = dup_string(out.dump(2));
	});
}

mclt_status mclt_verify(const char *suite, const char *options_json, int workers, char **report_json, int *passed) {
	MCLT_REQUIRE(suite);
	MCLT_REQUIRE(report_json);
	MCLT_REQUIRE(passed);
	return guarded([&] {
		nlohmann::json options = options_json ? parse_json(options_json) : nlohmann::json::object();
		auto rep = run_verify_suite(suite, options, std::max(workers, 1));
		*passed = rep["pass"].get<bool>() ? 1 : 0;
		*report_json = dup_string(rep.dump(2));
	});
}

}
