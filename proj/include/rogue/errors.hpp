#pragma once

#include <stdexcept>
#include <string>

namespace rogue {

// Error taxonomy shared across the library.  CLI maps ConfigError to exit
// code 2 and InfeasibleDesign to exit code 3; everything else is exit 1.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a required exploration floor exceeds 1/n_arms, i.e. no valid
// probability vector can satisfy it.
struct InfeasibleDesign : std::runtime_error {
    double p_min = 0.0;
    explicit InfeasibleDesign(const std::string& what, double pmin = 0.0)
        : std::runtime_error(what), p_min(pmin) {}
};

// Singular or near-singular regression design (e.g. a single pull).
struct SingularDesign : std::runtime_error {
    explicit SingularDesign(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Probability vector malformed (negative entries, wrong sum, empty).
struct InvalidDistribution : std::runtime_error {
    explicit InvalidDistribution(const std::string& what) : std::runtime_error(what) {}
};

struct NoDataError : std::runtime_error {
    explicit NoDataError(const std::string& what) : std::runtime_error(what) {}
};

// Parameter fitting cannot identify the model on any grid point.
struct UnidentifiableModel : std::runtime_error {
    explicit UnidentifiableModel(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rogue
