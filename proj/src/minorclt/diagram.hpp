#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "minorclt/spectra.hpp"

namespace minorclt {

struct DiagramCurve {
	std::vector<double> grid;
	std::vector<double> values;
	bool shifted = false;
};

std::vector<double> default_grid(int points = 1401, double lo = -3.5, double hi = 3.5);
// grid plus every lambda, lambda-hat (shifted by -h11 for shifted curves) inside [lo, hi]
std::vector<double> node_augmented_grid(const SpectralSample &s, bool shifted, int points = 1401, double lo = -3.5,
                                        double hi = 3.5);

DiagramCurve rectangular_diagram(const SpectralSample &s, const std::vector<double> &grid, bool shifted);

double diagram_deviation(const DiagramCurve &c);

void write_diagram_csv(std::ostream &os, const DiagramCurve &c);
DiagramCurve read_diagram_csv(std::istream &is);

}
