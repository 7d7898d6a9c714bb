#pragma once

#include <stdexcept>
#include <string>

namespace minorclt {

enum class ErrorKind {
	Config = 2,
	Precision = 3,
	Domain = 4,
	Validation = 5,
	Dimension = 6,
	Input = 7,
	Io = 8,
};

class Error : public std::runtime_error {
public:
	Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
	ErrorKind kind() const noexcept { return kind_; }

private:
	ErrorKind kind_;
};

#define MINORCLT_ERROR_TYPE(Name, Kind)                                                            \
	class Name : public Error {                                                                    \
	public:                                                                                        \
		explicit Name(const std::string &what) : Error(ErrorKind::Kind, what) {}                   \
	};

MINORCLT_ERROR_TYPE(ConfigError, Config)
MINORCLT_ERROR_TYPE(PrecisionError, Precision)
MINORCLT_ERROR_TYPE(DomainError, Domain)
MINORCLT_ERROR_TYPE(ValidationError, Validation)
MINORCLT_ERROR_TYPE(DimensionError, Dimension)
MINORCLT_ERROR_TYPE(InputError, Input)
MINORCLT_ERROR_TYPE(IoError, Io)

#undef MINORCLT_ERROR_TYPE

}
