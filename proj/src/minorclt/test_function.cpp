#include "minorclt/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "minorclt/errors.hpp"

namespace minorclt {

TestFunction TestFunction::polynomial(std::vector<double> coefficients) {
	if(coefficients.empty()) {
		coefficients.push_back(0.0);
	}
	TestFunction f;
	f.kind_ = Kind::Polynomial;
	f.coef_ = std::move(coefficients);
	f.order_ = static_cast<int>(f.coef_.size()) - 1;
	return f;
}

TestFunction TestFunction::abs_shift(double E) {
	if(!std::isfinite(E)) {
		throw ConfigError("abs_shift needs a finite E");
	}
	TestFunction f;
	f.kind_ = Kind::AbsShift;
	f.shift_ = E;
	return f;
}

TestFunction TestFunction::chebyshev(int k) {
	if(k < 0 || k > 40) {
		throw ConfigError("chebyshev order must be in [0, 40]");
	}
	// P_k(x) = T_k(x/2): P_0 = 1, P_1 = x/2, P_{k+1} = x P_k - P_{k-1}
	std::vector<double> prev{1.0}, cur{0.0, 0.5};
	if(k == 0) {
		cur = prev;
	}
	for(int j = 1; j < k; j++) {
		std::vector<double> next(cur.size() + 1, 0.0);
		for(size_t i = 0; i < cur.size(); i++) {
			next[i + 1] += cur[i];
		}
		for(size_t i = 0; i < prev.size(); i++) {
			next[i] -= prev[i];
		}
		prev = std::move(cur);
		cur = std::move(next);
	}
	TestFunction f;
	f.kind_ = Kind::Chebyshev;
	f.coef_ = std::move(cur);
	f.order_ = k;
	return f;
}

TestFunction TestFunction::tabulated(std::vector<double> x, std::vector<double> fv, std::vector<double> df) {
	if(x.size() < 2 || x.size() != fv.size() || x.size() != df.size()) {
		throw ConfigError("tabulated function needs matching x, f, df arrays with at least 2 points");
	}
	for(size_t i = 0; i + 1 < x.size(); i++) {
		if(!(x[i + 1] > x[i])) {
			throw ConfigError("tabulated grid must be strictly increasing");
		}
	}
	TestFunction f;
	f.kind_ = Kind::Tabulated;
	f.tx_ = std::move(x);
	f.tf_ = std::move(fv);
	f.tdf_ = std::move(df);
	return f;
}

TestFunction TestFunction::parse(const std::string &text) {
	auto colon = text.find(':');
	if(colon == std::string::npos) {
		throw ConfigError("test function must look like poly:..., abs:E or cheb:k");
	}
	std::string head = text.substr(0, colon);
	std::string rest = text.substr(colon + 1);
	try {
		if(head == "poly") {
			std::vector<double> c;
			std::stringstream ss{rest};
			std::string item;
			while(std::getline(ss, item, ',')) {
				c.push_back(std::stod(item));
			}
			if(c.empty()) {
				throw ConfigError("poly: needs at least one coefficient");
			}
			return polynomial(c);
		}
		if(head == "abs") {
			return abs_shift(std::stod(rest));
		}
		if(head == "cheb") {
			return chebyshev(std::stoi(rest));
		}
	} catch(const std::logic_error &) {
		throw ConfigError("cannot parse test function '" + text + "'");
	}
	throw ConfigError("unknown test function kind '" + head + "'");
}

size_t TestFunction::cell(double x) const {
	if(x < tx_.front() || x > tx_.back()) {
		throw DomainError("tabulated function evaluated outside [" + std::to_string(tx_.front()) + ", " +
		                  std::to_string(tx_.back()) + "]");
	}
	auto it = std::upper_bound(tx_.begin(), tx_.end(), x);
	size_t i = static_cast<size_t>(it - tx_.begin());
	return std::min(i == 0 ? 0 : i - 1, tx_.size() - 2);
}

double TestFunction::value(double x) const {
	switch(kind_) {
	case Kind::Polynomial:
	case Kind::Chebyshev: {
		double r = 0;
		for(auto it = coef_.rbegin(); it != coef_.rend(); ++it) {
			r = r * x + *it;
		}
		return r;
	}
	case Kind::AbsShift:
		return std::abs(x - shift_);
	case Kind::Tabulated: {
		size_t i = cell(x);
		double h = tx_[i + 1] - tx_[i];
		double t = (x - tx_[i]) / h;
		double t2 = t * t, t3 = t2 * t;
		return (2 * t3 - 3 * t2 + 1) * tf_[i] + (t3 - 2 * t2 + t) * h * tdf_[i] + (-2 * t3 + 3 * t2) * tf_[i + 1] +
		       (t3 - t2) * h * tdf_[i + 1];
	}
	}
	return 0;
}

double TestFunction::derivative(double x) const {
	switch(kind_) {
	case Kind::Polynomial:
	case Kind::Chebyshev: {
		double r = 0;
		for(size_t k = coef_.size(); k-- > 1;) {
			r = r * x + k * coef_[k];
		}
		return r;
	}
	case Kind::AbsShift:
		return x > shift_ ? 1.0 : (x < shift_ ? -1.0 : 0.0);
	case Kind::Tabulated: {
		size_t i = cell(x);
		double h = tx_[i + 1] - tx_[i];
		double t = (x - tx_[i]) / h;
		double t2 = t * t;
		return ((6 * t2 - 6 * t) * tf_[i] + (-6 * t2 + 6 * t) * tf_[i + 1]) / h + (3 * t2 - 4 * t + 1) * tdf_[i] +
		       (3 * t2 - 2 * t) * tdf_[i + 1];
	}
	}
	return 0;
}

double TestFunction::second_derivative(double x) const {
	switch(kind_) {
	case Kind::Polynomial:
	case Kind::Chebyshev: {
		double r = 0;
		for(size_t k = coef_.size(); k-- > 2;) {
			r = r * x + k * (k - 1) * coef_[k];
		}
		return r;
	}
	case Kind::AbsShift:
		return 0.0;
	case Kind::Tabulated: {
		size_t i = cell(x);
		double h = tx_[i + 1] - tx_[i];
		double t = (x - tx_[i]) / h;
		return ((12 * t - 6) * tf_[i] + (-12 * t + 6) * tf_[i + 1]) / (h * h) +
		       ((6 * t - 4) * tdf_[i] + (6 * t - 2) * tdf_[i + 1]) / h;
	}
	}
	return 0;
}

std::optional<double> TestFunction::kink() const {
	if(kind_ == Kind::AbsShift) {
		return shift_;
	}
	return std::nullopt;
}

std::vector<double> TestFunction::breakpoints() const {
	if(kind_ == Kind::AbsShift) {
		return {shift_};
	}
	if(kind_ == Kind::Tabulated) {
		return tx_;
	}
	return {};
}

double TestFunction::domain_min() const {
	return kind_ == Kind::Tabulated ? tx_.front() : -std::numeric_limits<double>::infinity();
}

double TestFunction::domain_max() const {
	return kind_ == Kind::Tabulated ? tx_.back() : std::numeric_limits<double>::infinity();
}

int TestFunction::nodes_in(double a, double b) const {
	int count = 0;
	for(auto x : tx_) {
		count += (x >= a && x <= b);
	}
	return count;
}

std::string TestFunction::describe() const {
	std::ostringstream os;
	os.precision(17);
	switch(kind_) {
	case Kind::Polynomial:
		os << "poly:";
		for(size_t i = 0; i < coef_.size(); i++) {
			os << (i ? "," : "") << coef_[i];
		}
		break;
	case Kind::AbsShift:
		os << "abs:" << shift_;
		break;
	case Kind::Chebyshev:
		os << "cheb:" << order_;
		break;
	case Kind::Tabulated:
		os << "tabulated:" << tx_.size();
		break;
	}
	return os.str();
}

nlohmann::json to_json(const TestFunction &f) {
	switch(f.kind()) {
	case TestFunction::Kind::Polynomial:
		return {{"kind", "polynomial"}, {"coefficients", f.coefficients()}};
	case TestFunction::Kind::AbsShift:
		return {{"kind", "abs_shift"}, {"E", f.shift()}};
	case TestFunction::Kind::Chebyshev:
		return {{"kind", "chebyshev"}, {"k", f.degree()}};
	case TestFunction::Kind::Tabulated:
		return {{"kind", "tabulated"}, {"x", f.nodes()}, {"f", f.node_values()}, {"df", f.node_derivatives()}};
	}
	return {};
}

TestFunction test_function_from_json(const nlohmann::json &j) {
	if(j.is_string()) {
		return TestFunction::parse(j.get<std::string>());
	}
	try {
		std::string kind = j.at("kind").get<std::string>();
		if(kind == "polynomial") {
			return TestFunction::polynomial(j.at("coefficients").get<std::vector<double>>());
		}
		if(kind == "abs_shift") {
			return TestFunction::abs_shift(j.at("E").get<double>());
		}
		if(kind == "chebyshev") {
			return TestFunction::chebyshev(j.at("k").get<int>());
		}
		if(kind == "tabulated") {
			return TestFunction::tabulated(j.at("x").get<std::vector<double>>(), j.at("f").get<std::vector<double>>(),
			                               j.at("df").get<std::vector<double>>());
		}
		throw ConfigError("unknown test function kind '" + kind + "'");
	} catch(const nlohmann::json::exception &e) {
		throw ConfigError(std::string{"malformed test function: "} + e.what());
	}
}

}
