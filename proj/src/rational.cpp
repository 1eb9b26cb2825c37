#include "rational.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace xilimit {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::InvalidArgument, "R_alpha coefficient overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::InvalidArgument, "R_alpha coefficient overflow");
  return r;
}

void trim(IntPoly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

}  // namespace

IntPoly poly_add(const IntPoly& a, const IntPoly& b) {
  IntPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_add(out[i], a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = checked_add(out[i], b[i]);
  trim(out);
  return out;
}

IntPoly poly_mul(const IntPoly& a, const IntPoly& b) {
  if (a.empty() || b.empty()) return {0};
  IntPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
  trim(out);
  return out;
}

IntPoly poly_scale(const IntPoly& a, std::int64_t c) {
  IntPoly out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = checked_mul(a[i], c);
  trim(out);
  return out;
}

IntPoly poly_derivative(const IntPoly& a) {
  if (a.size() <= 1) return {0};
  IntPoly out(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = checked_mul(a[i], static_cast<std::int64_t>(i));
  trim(out);
  return out;
}

std::complex<double> poly_eval(const IntPoly& a, std::complex<double> x) {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + static_cast<double>(*it);
  return acc;
}

int poly_degree(const IntPoly& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

std::complex<double> RationalFunction::operator()(std::complex<double> x) const {
  return poly_eval(numerator, x) / std::pow(x - 1.0, pole_order);
}

RationalFunction r_alpha(int alpha) {
  if (alpha < 0 || alpha > kMaxRAlpha)
    fail(ErrorCode::InvalidArgument, "r_alpha supports 0 <= alpha <= " + std::to_string(kMaxRAlpha));
  const IntPoly x_minus_1{-1, 1};
  const IntPoly x{0, 1};
  IntPoly num{1, 1};
  for (int a = 0; a < alpha; ++a) {
    const IntPoly inner =
        poly_add(poly_mul(x_minus_1, poly_derivative(num)), poly_scale(num, -(a + 1)));
    num = poly_mul(x, inner);
  }
  RationalFunction r;
  r.numerator = std::move(num);
  r.pole_order = alpha + 1;
  IntPoly den{1};
  for (int i = 0; i < r.pole_order; ++i) den = poly_mul(den, x_minus_1);
  r.denominator = std::move(den);
  return r;
}

}  // namespace xilimit
