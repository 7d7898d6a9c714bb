#include "minorclt/hs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

#include "minorclt/errors.hpp"

namespace minorclt {

using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

constexpr double cut_lo = 5, cut_hi = 10, x_range = 10, eta_top = 10;

// quintic smoothstep 6s^5 - 15s^4 + 10s^3 and its derivatives in s
double step(double s) {
	return s * s * s * (10 - 15 * s + 6 * s * s);
}
double step_d1(double s) {
	return 30 * s * s * (1 - s) * (1 - s);
}
double step_d2(double s) {
	return 60 * s * (1 - s) * (1 - 2 * s);
}

double cut_param(double t) {
	return (std::abs(t) - cut_lo) / (cut_hi - cut_lo);
}

}

double hs_cutoff(double t) {
	double a = std::abs(t);
	if(a <= cut_lo) {
		return 1;
	}
	if(a >= cut_hi) {
		return 0;
	}
	return 1 - step(cut_param(t));
}

double hs_cutoff_d1(double t) {
	double a = std::abs(t);
	if(a <= cut_lo || a >= cut_hi) {
		return 0;
	}
	double sign = t > 0 ? 1 : -1;
	return -sign * step_d1(cut_param(t)) / (cut_hi - cut_lo);
}

double hs_cutoff_d2(double t) {
	double a = std::abs(t);
	if(a <= cut_lo || a >= cut_hi) {
		return 0;
	}
	double w = cut_hi - cut_lo;
	return -step_d2(cut_param(t)) / (w * w);
}

namespace {

struct Chi {
	double f, f1, f2; // f_chi and its first two derivatives (regular part)
};

Chi chi_product(const TestFunction &f, double x) {
	double c = hs_cutoff(x), c1 = hs_cutoff_d1(x), c2 = hs_cutoff_d2(x);
	double v = f.value(x), d1 = f.derivative(x), d2 = f.second_derivative(x);
	return {v * c, d1 * c + v * c1, d2 * c + 2 * d1 * c1 + v * c2};
}

}

cplx dbar_extension(const TestFunction &f, double x, double eta) {
	auto p = chi_product(f, x);
	cplx i{0, 1};
	return i * eta / 2.0 * hs_cutoff(eta) * p.f2 + i / 2.0 * hs_cutoff_d1(eta) * (p.f + i * eta * p.f1);
}

namespace {

constexpr int order = AlmostAnalytic::panel_order;

struct PanelRule {
	std::array<double, order> t, w;
	// row k maps node values to the k-th monomial coefficient of the interpolant
	Eigen::Matrix<double, order, order> vinv;
};

const PanelRule &panel_rule() {
	static const PanelRule rule = [] {
		PanelRule r;
		using GL = boost::math::quadrature::gauss<double, order>;
		const auto &a = GL::abscissa();
		const auto &w = GL::weights();
		int h = order / 2;
		for(int k = 0; k < h; k++) {
			r.t[h - 1 - k] = -a[k];
			r.w[h - 1 - k] = w[k];
			r.t[h + k] = a[k];
			r.w[h + k] = w[k];
		}
		Eigen::Matrix<double, order, order> v;
		for(int k = 0; k < order; k++) {
			for(int p = 0; p < order; p++) {
				v(k, p) = std::pow(r.t[k], p);
			}
		}
		r.vinv = v.inverse();
		return r;
	}();
	return rule;
}

// panels of roughly equal width on [lo, hi] with the given interior edges
void add_panels(std::vector<double> &edges, double lo, double hi, int count) {
	for(int p = 0; p < count; p++) {
		edges.push_back(lo + (hi - lo) * p / count);
	}
}

}

AlmostAnalytic almost_analytic(const TestFunction &f, const HsGrid &grid) {
	if(grid.nx < 400 || grid.n_eta < 400) {
		throw PrecisionError("Helffer-Sjostrand grid must be at least 400 x 400");
	}
	if(!(grid.eta0 > 0 && grid.eta0 < 1)) {
		throw ConfigError("eta0 must lie in (0, 1)");
	}
	const auto &rule = panel_rule();
	AlmostAnalytic a;
	a.spec = grid;

	// x panels: a multiple of 4 so that +-5 are edges
	int panels = (grid.nx + order - 1) / order;
	panels = (panels + 3) / 4 * 4;
	add_panels(a.edges, -x_range, x_range, panels);
	a.edges.push_back(x_range);
	if(auto E = f.kink(); E && std::abs(*E) < x_range) {
		auto it = std::lower_bound(a.edges.begin(), a.edges.end(), *E);
		if(std::abs(*it - *E) > 1e-12) {
			a.edges.insert(it, *E);
		}
	}
	for(size_t p = 0; p + 1 < a.edges.size(); p++) {
		double c = 0.5 * (a.edges[p] + a.edges[p + 1]), h = 0.5 * (a.edges[p + 1] - a.edges[p]);
		for(int k = 0; k < order; k++) {
			a.x.push_back(c + h * rule.t[k]);
		}
	}

	// eta panels: log-spaced on [eta0, 1], uniform on [1, 5] and on the cutoff ramp [5, 10]
	int eta_panels = (grid.n_eta + order - 1) / order;
	int n_log = eta_panels / 2;
	int n_mid = (eta_panels - n_log) / 2;
	int n_top = eta_panels - n_log - n_mid;
	double l0 = std::log(grid.eta0);
	for(int p = 0; p < n_log; p++) {
		double u0 = l0 * (1 - double(p) / n_log), u1 = l0 * (1 - double(p + 1) / n_log);
		double c = 0.5 * (u0 + u1), h = 0.5 * (u1 - u0);
		for(int k = 0; k < order; k++) {
			double e = std::exp(c + h * rule.t[k]);
			a.eta.push_back(e);
			a.eta_weight.push_back(h * rule.w[k] * e);
		}
	}
	auto linear = [&](double lo, double hi, int count) {
		for(int p = 0; p < count; p++) {
			double e0 = lo + (hi - lo) * p / count, e1 = lo + (hi - lo) * (p + 1) / count;
			double c = 0.5 * (e0 + e1), h = 0.5 * (e1 - e0);
			for(int k = 0; k < order; k++) {
				a.eta.push_back(c + h * rule.t[k]);
				a.eta_weight.push_back(h * rule.w[k]);
			}
		}
	};
	linear(1, cut_lo, n_mid);
	linear(cut_lo, eta_top, n_top);

	std::vector<Chi> px(a.x.size());
	for(size_t i = 0; i < a.x.size(); i++) {
		px[i] = chi_product(f, a.x[i]);
	}
	cplx I{0, 1};
	a.fc.resize(a.eta.size() * a.x.size());
	a.dbar.resize(a.fc.size());
	for(size_t j = 0; j < a.eta.size(); j++) {
		double eta = a.eta[j];
		double c = hs_cutoff(eta), c1 = hs_cutoff_d1(eta);
		for(size_t i = 0; i < a.x.size(); i++) {
			size_t k = j * a.x.size() + i;
			const auto &p = px[i];
			a.fc[k] = (p.f + I * eta * p.f1) * c;
			a.dbar[k] = I * eta / 2.0 * c * p.f2 + I / 2.0 * c1 * (p.f + I * eta * p.f1);
		}
	}
	if(auto E = f.kink()) {
		a.kink = *E;
		a.kink_weight = 2 * hs_cutoff(*E);
	}
	return a;
}

double hs_functional(const AlmostAnalytic &a, const std::vector<double> &eigenvalues) {
	const auto &rule = panel_rule();
	cplx I{0, 1};
	size_t nx = a.x.size();
	size_t panels = a.edges.size() - 1;
	double total = 0;
	for(double lam : eigenvalues) {
		if(!(std::abs(lam) <= cut_lo)) {
			throw DomainError("eigenvalue outside [-5, 5]");
		}
		double acc = 0;
		for(size_t j = 0; j < a.eta.size(); j++) {
			cplx c{lam, -a.eta[j]};
			const cplx *d = &a.dbar[j * nx];
			cplx row = 0;
			for(size_t p = 0; p < panels; p++) {
				double mid = 0.5 * (a.edges[p] + a.edges[p + 1]), h = 0.5 * (a.edges[p + 1] - a.edges[p]);
				cplx w = (c - mid) / h;
				const cplx *dp = d + p * order;
				if(std::abs(w) > 4) {
					for(int k = 0; k < order; k++) {
						row += rule.w[k] * dp[k] / (w - rule.t[k]);
					}
					continue;
				}
				// product rule: moments of 1/(w - t) against t^k on [-1, 1]
				std::array<cplx, order> m;
				m[0] = std::log(w + 1.0) - std::log(w - 1.0);
				for(int k = 1; k < order; k++) {
					m[k] = w * m[k - 1] - (k % 2 ? 2.0 / k : 0.0);
				}
				for(int k = 0; k < order; k++) {
					cplx weight = 0;
					for(int q = 0; q < order; q++) {
						weight += m[q] * rule.vinv(q, k);
					}
					row += weight * dp[k];
				}
			}
			if(a.kink) {
				row += I * a.eta[j] / 2.0 * hs_cutoff(a.eta[j]) * a.kink_weight / (c - *a.kink);
			}
			acc += a.eta_weight[j] * row.real();
		}
		total += 2 / pi * acc;
	}
	return total;
}

double hs_functional(const TestFunction &f, const std::vector<double> &eigenvalues, double eta0, HsGrid grid) {
	if(!(eta0 >= 1e-4 && eta0 <= 1e-1)) {
		throw ConfigError("eta0 must lie in [1e-4, 1e-1]");
	}
	for(double lam : eigenvalues) {
		if(!(std::abs(lam) <= cut_lo)) {
			throw DomainError("eigenvalue outside [-5, 5]");
		}
	}
	grid.eta0 = eta0;
	return hs_functional(almost_analytic(f, grid), eigenvalues);
}

void write_dbar_csv(std::ostream &os, const AlmostAnalytic &a) {
	os << std::setprecision(17) << "x,eta,re_fc,im_fc,re_dbar,im_dbar\n";
	for(size_t j = 0; j < a.eta.size(); j++) {
		for(size_t i = 0; i < a.x.size(); i++) {
			auto fc = a.fc_at(static_cast<int>(j), static_cast<int>(i));
			auto d = a.dbar_at(static_cast<int>(j), static_cast<int>(i));
			os << a.x[i] << ',' << a.eta[j] << ',' << fc.real() << ',' << fc.imag() << ',' << d.real() << ','
			   << d.imag() << '\n';
		}
	}
}

}
