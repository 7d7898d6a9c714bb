#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace minorclt {

// Named numerical checks: schur, locallaw, trgg, tanh, hs, gff.
// Returns {"suite", "pass", "checks": [{"name", "value", "threshold", "pass"}, ...], ...}
nlohmann::json run_verify_suite(const std::string &suite, const nlohmann::json &options = {}, int workers = 1);

const std::vector<std::string> &verify_suite_names();

}
