#pragma once

#include <functional>
#include <vector>

#include "vfl/errors.hpp"

namespace vfl {

struct QuadratureNode {
    double x;
    double w;
};

// Gauss-Legendre rule on [-1, 1]; nodes are cached per order.
const std::vector<QuadratureNode>& gauss_legendre(int order);

// Composite Gauss-Legendre integral of f over [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order = 32, int panels = 1);

// tanh-sinh (double exponential) integral of f over [a, b]. Converges
// exponentially even with algebraic endpoint singularities of the integrand's
// derivatives. Throws quadrature_error if the level-to-level difference does
// not fall below rel_tol by max_level.
double integrate_de(const std::function<double(double)>& f, double a, double b,
                    int max_level = 10, double rel_tol = 1e-13);

} // namespace vfl
