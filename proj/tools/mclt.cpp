// Command-line front end; uses only the C interface.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minorclt/minorclt.h"

namespace {

using json = nlohmann::json;

// exit codes: 0 ok, 1 verification failed, 2 config error, 3 precision error, 4 other library error
int exit_code(mclt_status st) {
	switch(st) {
	case MCLT_OK:
		return 0;
	case MCLT_ERR_CONFIG:
	case MCLT_ERR_NULL_ARGUMENT:
		return 2;
	case MCLT_ERR_PRECISION:
		return 3;
	default:
		return 4;
	}
}

int report(mclt_status st) {
	std::cerr << "error (" << mclt_status_name(st) << "): " << mclt_last_error() << "\n";
	return exit_code(st);
}

// owns a string returned by the library
struct CString {
	char *p = nullptr;
	~CString() { mclt_string_free(p); }
	std::string str() const { return p ? p : ""; }
};

std::string read_file(const std::string &path) {
	std::ifstream is(path);
	if(!is) {
		throw std::runtime_error("cannot read " + path);
	}
	std::stringstream ss;
	ss << is.rdbuf();
	return ss.str();
}

bool write_file(const std::string &path, const std::string &text) {
	std::ofstream os(path);
	os << text;
	return static_cast<bool>(os);
}

json parse_sigma2(const std::string &s) {
	auto comma = s.find(',');
	if(comma == std::string::npos) {
		return std::stod(s);
	}
	return json::array({std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))});
}

struct EnsembleOpts {
	int n = 400;
	bool gue = false;
	std::string config;
};

void add_ensemble_opts(CLI::App *cmd, EnsembleOpts &o) {
	cmd->add_option("--n", o.n, "matrix size");
	cmd->add_flag("--gue", o.gue, "complex Hermitian (default real symmetric)");
	cmd->add_option("--config", o.config, "ensemble JSON file (overrides --n/--gue)");
}

mclt_status make_ensemble(const EnsembleOpts &o, mclt_ensemble **e) {
	if(!o.config.empty()) {
		return mclt_ensemble_from_json(read_file(o.config).c_str(), e);
	}
	return o.gue ? mclt_ensemble_gue(o.n, e) : mclt_ensemble_goe(o.n, e);
}

void print_summary(const json &rec) {
	std::printf("mode %s  N=%d  M=%d  seed=%llu  hash=%s\n", rec.value("mode", "").c_str(), rec.value("n", 0),
	            rec.value("samples", 0), static_cast<unsigned long long>(rec.value("master_seed", 0ULL)),
	            rec.value("config_hash", "").c_str());
	auto table = [](const json &a, const std::string &label) {
		if(!label.empty()) {
			std::printf("%s\n", label.c_str());
		}
		for(const auto &v : a["verdicts"]) {
			std::printf("  %-20s observed %12.6g  expected %12.6g  se %10.3g  %s\n", v["name"].get<std::string>().c_str(),
			            v["observed"].get<double>(), v["expected"].get<double>(), v["se"].get<double>(),
			            v["pass"].get<bool>() ? "pass" : "FAIL");
		}
		std::printf("  coefficient sign supported: %s\n", a["coefficient"]["supported"].get<std::string>().c_str());
	};
	if(rec.contains("analysis")) {
		table(rec["analysis"], "");
	}
	if(rec.contains("diagram")) {
		for(const auto &p : rec["diagram"]) {
			char buf[64];
			std::snprintf(buf, sizeof buf, "E = %g", p["E"].get<double>());
			table(p["analysis"], buf);
		}
	}
	std::printf("overall: %s\n", rec.value("all_pass", false) ? "pass" : "FAIL");
}

}

int main(int argc, char **argv) {
	CLI::App app{"Fluctuations of eigenvalues of Wigner matrices and their minors"};
	app.require_subcommand(1);
	app.set_version_flag("--version", mclt_version());

	// theory
	auto *theory = app.add_subcommand("theory", "limiting variance components");
	std::string f_spec;
	std::optional<double> E;
	bool goe = false, gue_params = false, gff = false;
	std::string sigma2 = "1";
	double sigma4 = 3, s11 = 2;
	theory->add_option("--f", f_spec, "test function: poly:c0,c1,..., abs:E, cheb:k or a JSON object");
	theory->add_option("--E", E, "Young diagram point");
	theory->add_flag("--goe", goe, "GOE parameters (sigma2=1, sigma4=3, s11=2)");
	theory->add_flag("--gue", gue_params, "GUE parameters (sigma2=0, sigma4=2, s11=1)");
	theory->add_option("--sigma2", sigma2, "E X^2 of off-diagonal entries, 're' or 're,im'");
	theory->add_option("--sigma4", sigma4, "E|X|^4 of off-diagonal entries");
	theory->add_option("--s11", s11, "variance of sqrt(N) h11");
	theory->add_flag("--gff", gff, "also evaluate the nested-minor derivative variance");

	// experiment
	auto *experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment from a JSON config");
	std::string config, out_dir = "out";
	std::optional<std::uint64_t> seed;
	int workers = 1;
	experiment->add_option("--config", config, "experiment JSON")->required()->check(CLI::ExistingFile);
	experiment->add_option("--out", out_dir, "output directory");

	// verify
	auto *verify = app.add_subcommand("verify", "run a named verification suite");
	std::string suite, options;
	verify->add_option("suite", suite, "schur, locallaw, trgg, tanh, hs or gff")->required();
	verify->add_option("--options", options, "suite options as a JSON object");

	// diagram
	auto *diagram = app.add_subcommand("diagram", "export a rectangular Young diagram as CSV");
	EnsembleOpts dens;
	add_ensemble_opts(diagram, dens);
	std::uint64_t index = 0;
	bool shifted = false;
	std::vector<double> grid;
	std::string csv_out;
	diagram->add_option("--index", index, "sample index in the seed stream");
	diagram->add_flag("--shifted", shifted, "shifted diagram (h11 subtracted from the minor)");
	diagram->add_option("--grid", grid, "lo hi points (default: refined at eigenvalues)")->expected(3);
	diagram->add_option("--out", csv_out, "CSV path (default stdout)");

	// sample
	auto *sample = app.add_subcommand("sample", "draw one matrix and print its spectra as JSON");
	EnsembleOpts sens;
	add_ensemble_opts(sample, sens);
	sample->add_option("--index", index, "sample index in the seed stream");
	std::string sample_out;
	sample->add_option("--out", sample_out, "JSON path (default stdout)");

	for(auto *cmd : {experiment, verify, diagram, sample}) {
		cmd->add_option("--seed", seed, "master seed (default 20240101)");
		cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
	}

	try {
		app.parse(argc, argv);
	} catch(const CLI::ParseError &e) {
		int rc = app.exit(e);
		return rc == 0 ? 0 : 2;
	}

	try {
		if(theory->parsed()) {
			json req;
			if(gue_params) {
				req = {{"sigma2", 0}, {"sigma4", 2}, {"s11", 1}};
			} else if(goe) {
				req = {{"sigma2", 1}, {"sigma4", 3}, {"s11", 2}};
			} else {
				req = {{"sigma2", parse_sigma2(sigma2)}, {"sigma4", sigma4}, {"s11", s11}};
			}
			if(!f_spec.empty()) {
				req["f"] = f_spec.front() == '{' ? json::parse(f_spec) : json(f_spec);
			}
			if(E) {
				req["E"] = *E;
			}
			req["gff"] = gff;
			CString out;
			auto st = mclt_theory(req.dump().c_str(), &out.p);
			if(st != MCLT_OK) {
				return report(st);
			}
			std::cout << out.str() << "\n";
			return 0;
		}

		if(experiment->parsed()) {
			CString out;
			auto st = mclt_experiment_run(read_file(config).c_str(), out_dir.c_str(), seed.has_value(), seed.value_or(0),
			                              workers, &out.p);
			if(st != MCLT_OK) {
				return report(st);
			}
			auto rec = json::parse(out.str());
			if(rec.value("mode", "") == "convergence") {
				std::cout << rec.dump(2) << "\n";
			} else {
				print_summary(rec);
			}
			std::printf("written to %s\n", out_dir.c_str());
			return 0;
		}

		if(verify->parsed()) {
			json opts = options.empty() ? json::object() : json::parse(options);
			if(seed) {
				opts["seed"] = *seed;
			}
			CString out;
			int passed = 0;
			auto st = mclt_verify(suite.c_str(), opts.dump().c_str(), workers, &out.p, &passed);
			if(st != MCLT_OK) {
				return report(st);
			}
			auto rep = json::parse(out.str());
			for(const auto &c : rep["checks"]) {
				std::printf("  %-60s %14.6g  %-12s %s\n", c["name"].get<std::string>().c_str(), c["value"].get<double>(),
				            c["threshold"].get<std::string>().c_str(), c["pass"].get<bool>() ? "pass" : "FAIL");
			}
			std::printf("%s: %s\n", suite.c_str(), passed ? "PASS" : "FAIL");
			return passed ? 0 : 1;
		}

		EnsembleOpts &eo = diagram->parsed() ? dens : sens;
		mclt_ensemble *ens = nullptr;
		auto st = make_ensemble(eo, &ens);
		if(st != MCLT_OK) {
			return report(st);
		}
		mclt_sample *smp = nullptr;
		st = mclt_sample_draw(ens, seed.value_or(20240101), index, &smp);
		mclt_ensemble_free(ens);
		if(st != MCLT_OK) {
			return report(st);
		}
		CString out;
		if(diagram->parsed()) {
			st = grid.empty() ? mclt_sample_diagram_csv(smp, shifted, 0, 0, 0, &out.p)
			                  : mclt_sample_diagram_csv(smp, shifted, grid[0], grid[1], static_cast<int>(grid[2]), &out.p);
		} else {
			st = mclt_sample_to_json(smp, &out.p);
		}
		mclt_sample_free(smp);
		if(st != MCLT_OK) {
			return report(st);
		}
		const std::string &path = diagram->parsed() ? csv_out : sample_out;
		if(path.empty()) {
			std::cout << out.str();
			if(!diagram->parsed()) {
				std::cout << "\n";
			}
		} else if(!write_file(path, out.str())) {
			std::cerr << "error: cannot write " << path << "\n";
			return 4;
		}
		return 0;
	} catch(const std::exception &e) {
		std::cerr << "error: " << e.what() << "\n";
		return 2;
	}
}
