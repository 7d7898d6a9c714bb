#include "minorclt/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "minorclt/errors.hpp"
#include "minorclt/theory.hpp"

namespace minorclt {

namespace {

// sum_k |v_k - E| using sorted v and its prefix sums
class AbsSum {
public:
	explicit AbsSum(const std::vector<double> &v) : v_{v}, prefix_(v.size() + 1, 0.0) {
		for(size_t i = 0; i < v.size(); i++) {
			prefix_[i + 1] = prefix_[i] + v[i];
		}
	}

	double operator()(double E) const {
		size_t k = std::lower_bound(v_.begin(), v_.end(), E) - v_.begin();
		double below = k * E - prefix_[k];
		double above = (prefix_.back() - prefix_[k]) - (v_.size() - k) * E;
		return below + above;
	}

private:
	const std::vector<double> &v_;
	std::vector<double> prefix_;
};

}

std::vector<double> default_grid(int points, double lo, double hi) {
	if(points < 2 || !(hi > lo)) {
		throw ConfigError("grid needs at least two points and hi > lo");
	}
	std::vector<double> g(points);
	for(int i = 0; i < points; i++) {
		g[i] = lo + (hi - lo) * i / (points - 1);
	}
	return g;
}

std::vector<double> node_augmented_grid(const SpectralSample &s, bool shifted, int points, double lo, double hi) {
	auto g = default_grid(points, lo, hi);
	double shift = shifted ? s.h11 : 0.0;
	for(const auto *v : {&s.eigs_full, &s.eigs_minor}) {
		for(double x : *v) {
			double e = x - shift;
			if(e >= lo && e <= hi) {
				g.push_back(e);
			}
		}
	}
	std::sort(g.begin(), g.end());
	g.erase(std::unique(g.begin(), g.end()), g.end());
	return g;
}

DiagramCurve rectangular_diagram(const SpectralSample &s, const std::vector<double> &grid, bool shifted) {
	require_interlacing(s);
	DiagramCurve c;
	c.grid = grid;
	c.shifted = shifted;
	c.values.resize(grid.size());
	AbsSum full{s.eigs_full}, part{s.eigs_minor};
	double shift = shifted ? s.h11 : 0.0;
	for(size_t i = 0; i < grid.size(); i++) {
		double E = grid[i] + shift;
		c.values[i] = full(E) - part(E);
	}
	return c;
}

double diagram_deviation(const DiagramCurve &c) {
	double sup = 0;
	for(size_t i = 0; i < c.grid.size(); i++) {
		sup = std::max(sup, std::abs(c.values[i] - vksl_curve(c.grid[i])));
	}
	return sup;
}

void write_diagram_csv(std::ostream &os, const DiagramCurve &c) {
	std::ostringstream buf;
	buf.imbue(std::locale::classic());
	buf << std::setprecision(17);
	buf << "E,w,omega,residual\n";
	for(size_t i = 0; i < c.grid.size(); i++) {
		double om = vksl_curve(c.grid[i]);
		buf << c.grid[i] << ',' << c.values[i] << ',' << om << ',' << c.values[i] - om << '\n';
	}
	os << buf.str();
}

DiagramCurve read_diagram_csv(std::istream &is) {
	DiagramCurve c;
	std::string line;
	if(!std::getline(is, line) || line.rfind("E,w,omega,residual", 0) != 0) {
		throw InputError("diagram CSV header missing");
	}
	while(std::getline(is, line)) {
		if(line.empty()) {
			continue;
		}
		std::istringstream ls{line};
		ls.imbue(std::locale::classic());
		double e, w, om, res;
		char comma;
		if(!(ls >> e >> comma >> w >> comma >> om >> comma >> res)) {
			throw InputError("malformed diagram CSV row: " + line);
		}
		c.grid.push_back(e);
		c.values.push_back(w);
	}
	return c;
}

}
