#ifndef ELAX_ERRORS_HPP
#define ELAX_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include "elax/scalars.hpp"

namespace elax {

struct invalid_modulus_error : std::runtime_error {
    explicit invalid_modulus_error(const std::string& what) : std::runtime_error(what) {}
};

struct unsupported_order_error : std::invalid_argument {
    explicit unsupported_order_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a pole-bearing evaluation lands inside the lattice guard.
/// Carries the offending argument.
struct pole_proximity_error : std::runtime_error {
    cplx argument;
    pole_proximity_error(const std::string& what, cplx arg)
        : std::runtime_error(what + " (argument " + std::to_string(arg.real()) + (arg.imag() < 0 ? "-" : "+") +
                             std::to_string(std::abs(arg.imag())) + "i)"),
          argument(arg) {}
};

struct sampler_exhausted_error : std::runtime_error {
    explicit sampler_exhausted_error(const std::string& what) : std::runtime_error(what) {}
};

struct degenerate_weight_error : std::runtime_error {
    explicit degenerate_weight_error(const std::string& what) : std::runtime_error(what) {}
};

struct inversion_refused_error : std::runtime_error {
    explicit inversion_refused_error(const std::string& what) : std::runtime_error(what) {}
};

struct coinciding_spectral_parameters_error : std::runtime_error {
    explicit coinciding_spectral_parameters_error(const std::string& what) : std::runtime_error(what) {}
};

struct guard_violation_error : std::runtime_error {
    double time;
    guard_violation_error(const std::string& what, double t) : std::runtime_error(what), time(t) {}
};

struct step_underflow_error : std::runtime_error {
    explicit step_underflow_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace elax

#endif
