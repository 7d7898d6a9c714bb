#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace minorclt::quad {

// Globally adaptive Gauss-Kronrod (31 points) on [a,b], split at the given interior points.
// Stops when the summed error estimate is below rel_tol times the L1 norm of the integrand, or when the
// error still open to refinement is small next to the error of pieces already at max_depth.
template<class F>
double integrate(F &&f, double a, double b, std::vector<double> breaks = {}, double rel_tol = 1e-12,
                 unsigned max_depth = 20, double *abs_error = nullptr) {
	using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
	struct Piece {
		double a, b, value, err, l1;
		unsigned depth;
		bool operator<(const Piece &o) const { return err < o.err; }
	};
	auto eval = [&](double lo, double hi, unsigned depth) {
		Piece p{lo, hi, 0, 0, 0, depth};
		p.value = GK::integrate(f, lo, hi, 0, 0, &p.err, &p.l1);
		return p;
	};

	std::vector<double> pts{a};
	std::sort(breaks.begin(), breaks.end());
	for(double p : breaks) {
		if(p > a && p < b && p - pts.back() > 1e-14 * (1 + std::abs(p))) {
			pts.push_back(p);
		}
	}
	pts.push_back(b);

	std::priority_queue<Piece> open;
	std::vector<Piece> done;
	double value = 0, err = 0, l1 = 0, stuck = 0;
	for(size_t i = 0; i + 1 < pts.size(); i++) {
		auto p = eval(pts[i], pts[i + 1], 0);
		value += p.value;
		err += p.err;
		l1 += p.l1;
		open.push(p);
	}
	const size_t max_pieces = 2000 + 50 * pts.size();
	size_t pieces = open.size();
	while(!open.empty() && err > rel_tol * l1 && err > std::numeric_limits<double>::min() && pieces < max_pieces &&
	      err - stuck > 0.05 * stuck) {
		Piece p = open.top();
		open.pop();
		if(p.depth >= max_depth) {
			stuck += p.err;
			done.push_back(p);
			continue;
		}
		double mid = 0.5 * (p.a + p.b);
		auto left = eval(p.a, mid, p.depth + 1);
		auto right = eval(mid, p.b, p.depth + 1);
		value += left.value + right.value - p.value;
		err += left.err + right.err - p.err;
		l1 += left.l1 + right.l1 - p.l1;
		open.push(left);
		open.push(right);
		pieces++;
	}
	if(abs_error) {
		*abs_error = std::max(err, 0.0);
	}
	return value;
}

}
