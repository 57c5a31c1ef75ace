#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace vfl {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Integer lattice arithmetic would leave the 2^62-safe range.
struct capacity_error : error { using error::error; };

// A named configuration inequality was violated; `constraint` holds its name.
struct config_error : error {
    config_error(std::string constraint_, const std::string& what)
        : error(what), constraint(std::move(constraint_)) {}
    std::string constraint;
};

struct quadrature_error : error { using error::error; };
struct contract_error : error { using error::error; };
struct degenerate_error : error { using error::error; };
struct margin_error : error { using error::error; };
struct tail_error : error { using error::error; };
struct fit_error : error { using error::error; };
struct io_error : error { using error::error; };

} // namespace vfl
