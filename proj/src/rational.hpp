#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace xilimit {

// Integer-coefficient polynomial, coefficients in increasing degree.
using IntPoly = std::vector<std::int64_t>;

IntPoly poly_add(const IntPoly& a, const IntPoly& b);
IntPoly poly_mul(const IntPoly& a, const IntPoly& b);
IntPoly poly_scale(const IntPoly& a, std::int64_t c);
IntPoly poly_derivative(const IntPoly& a);
std::complex<double> poly_eval(const IntPoly& a, std::complex<double> x);
int poly_degree(const IntPoly& a);

// numerator / (X - 1)^pole_order, with the denominator also kept expanded.
struct RationalFunction {
  IntPoly numerator;
  IntPoly denominator;
  int pole_order = 0;

  // Evaluates the denominator in factored form for accuracy near X = 1.
  std::complex<double> operator()(std::complex<double> x) const;
};

inline constexpr int kMaxRAlpha = 12;

// R_alpha = (X d/dX)^alpha (X + 1)/(X - 1), by exact coefficient arithmetic:
// N_0 = X + 1, N_{a+1} = X ((X - 1) N_a' - (a + 1) N_a), denominator (X-1)^{a+1}.
RationalFunction r_alpha(int alpha);

}  // namespace xilimit
