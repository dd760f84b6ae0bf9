#pragma once

#include <stdexcept>
#include <string>

namespace ruloff {

// Error hierarchy maps onto CLI exit codes:
//   parse_error       -> 2 (file / format problems)
//   geometry_error    -> 3 (bad inputs or degenerate configurations)
//   convergence_error -> 4 (optimizer failed to reach its target)
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};

struct geometry_error : error {
    explicit geometry_error(const std::string& msg) : error(msg) {}
};

struct convergence_error : error {
    explicit convergence_error(const std::string& msg, double best_value)
        : error(msg), best_value(best_value) {}
    double best_value;
};

} // namespace ruloff
