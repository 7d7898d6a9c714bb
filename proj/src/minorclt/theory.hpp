#pragma once

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "minorclt/test_function.hpp"

namespace minorclt {

double semicircle_density(double x);

// Stieltjes transform of the semicircle law; throws DomainError for real z in [-2,2]
std::complex<double> semicircle_stieltjes(std::complex<double> z);
// m(x + i0) (side = +1) or m(x - i0) (side = -1)
std::complex<double> semicircle_stieltjes_boundary(double x, int side);

// (2/pi) int_0^pi g(2cos t) sin^2 t dt, i.e. int g rho over [-2,2]
template<class G>
double semicircle_integral(G &&g, const std::vector<double> &breaks = {});
// (1/pi) int_0^pi g(2cos t) dt, i.e. the arcsine mean of g
template<class G>
double arcsine_integral(G &&g, const std::vector<double> &breaks = {});

double omega_f(const TestFunction &f);

struct TheoryValues {
	double omega_f = 0;
	double v_f1 = 0;
	double v_f2 = 0;
	double v_sigma2 = 0;
	double coef_w = 0;
	double coef_wtilde = 0;
	double v_f_total = 0;
	double var_total_w = 0;
	double var_total_wtilde = 0;
};

nlohmann::json to_json(const TheoryValues &t);
TheoryValues theory_values_from_json(const nlohmann::json &j);

TheoryValues variance_components(const TestFunction &f, std::complex<double> sigma2, double sigma4, double s11);

struct VSigma2Detail {
	double value = 0;
	std::vector<double> eta;
	std::vector<double> raw;
	double richardson = 0;
	double fit = 0;
};

// Kernel a^2 Phi(a) of the sigma2 correction
std::complex<double> vsigma2_kernel(std::complex<double> a, std::complex<double> sigma2);
// Value of the double integral at fixed eta0
double v_sigma2_at(const TestFunction &f, std::complex<double> sigma2, double eta0);
VSigma2Detail v_sigma2_detail(const TestFunction &f, std::complex<double> sigma2);
double v_sigma2(const TestFunction &f, std::complex<double> sigma2);

struct YoungVariance {
	double E = 0;
	double V = 0;
	double V1 = 0;
	double V2 = 0;
	double v_sigma2 = 0;
	double coef_w = 0;
	double coef_wtilde = 0;
	double var_total_w = 0;
	double var_total_wtilde = 0;
};

nlohmann::json to_json(const YoungVariance &y);

YoungVariance young_variance(double E, std::complex<double> sigma2, double sigma4, double s11);

// Limit shape Omega(E) of the rectangular diagrams
double vksl_curve(double E);

}

#include "minorclt/theory_impl.hpp"
