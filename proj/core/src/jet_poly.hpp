#pragma once

#include "poly.hpp"

namespace varmult::detail {

Poly total_derivative(const Poly& p, int m);
Poly d_pow(const Poly& p, int m, int k);
Poly euler_op(const Poly& p, int m, int n);

}  // namespace varmult::detail
