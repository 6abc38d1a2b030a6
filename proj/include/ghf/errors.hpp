#ifndef GHF_ERRORS_HPP
#define GHF_ERRORS_HPP

#include <numbers>
#include <string>
#include <stdexcept>

namespace ghf {

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct linalg_error : std::runtime_error {
    int index = -1;
    linalg_error(const std::string& what, int idx) : std::runtime_error(what), index(idx) {}
};

inline constexpr double pi = std::numbers::pi;

} // namespace ghf

#endif // GHF_ERRORS_HPP
