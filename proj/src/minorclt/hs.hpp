#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <vector>

#include "minorclt/test_function.hpp"

namespace minorclt {

struct HsGrid {
	int nx = 400;    // quadrature nodes in x over [-10, 10]
	int n_eta = 400; // quadrature nodes in eta over [eta0, 10]
	double eta0 = 1e-3;
};

// C^2 cutoff: 1 on [-5,5], 0 outside [-10,10]
double hs_cutoff(double t);
double hs_cutoff_d1(double t);
double hs_cutoff_d2(double t);

struct AlmostAnalytic {
	HsGrid spec;
	static constexpr int panel_order = 8;
	// x nodes: panel_order Gauss-Legendre points in each panel [edges[p], edges[p+1]]
	std::vector<double> edges;
	std::vector<double> x;
	std::vector<double> eta;
	std::vector<double> eta_weight;
	// row-major [eta][x]
	std::vector<std::complex<double>> fc;
	std::vector<std::complex<double>> dbar;
	// AbsShift: the f'' point mass 2 delta_E contributes (i eta / 2) chi(eta) 2 chi(E) on the line x = E
	std::optional<double> kink;
	double kink_weight = 0;

	std::complex<double> fc_at(int j, int i) const { return fc[static_cast<size_t>(j) * x.size() + i]; }
	std::complex<double> dbar_at(int j, int i) const { return dbar[static_cast<size_t>(j) * x.size() + i]; }
};

// closed-form dbar f_C at x + i eta (regular part only for AbsShift)
std::complex<double> dbar_extension(const TestFunction &f, double x, double eta);

AlmostAnalytic almost_analytic(const TestFunction &f, const HsGrid &grid = {});

double hs_functional(const AlmostAnalytic &a, const std::vector<double> &eigenvalues);
double hs_functional(const TestFunction &f, const std::vector<double> &eigenvalues, double eta0,
                     HsGrid grid = {});

void write_dbar_csv(std::ostream &os, const AlmostAnalytic &a);

}
