#ifndef SUBORD_EXTENDED_HPP
#define SUBORD_EXTENDED_HPP

// Extended-precision real type for the real-axis inversion route: IEEE binary128
// through libquadmath where GCC provides it, otherwise long double.

#include <cmath>

#if defined(__SIZEOF_FLOAT128__) && defined(__GNUC__) && !defined(__clang__) && !defined(SUBORD_NO_QUADMATH)
#define SUBORD_HAVE_QUADMATH 1
extern "C" {
#include <quadmath.h>
}
#endif

namespace subord {

#ifdef SUBORD_HAVE_QUADMATH

using extended = __float128;
inline constexpr int extended_digits = 33;

inline extended ext_exp(extended x) { return expq(x); }
inline extended ext_expm1(extended x) { return expm1q(x); }
inline extended ext_log(extended x) { return logq(x); }
inline extended ext_log1p(extended x) { return log1pq(x); }
inline extended ext_pow(extended x, extended y) { return powq(x, y); }
inline extended ext_sqrt(extended x) { return sqrtq(x); }
inline extended ext_abs(extended x) { return fabsq(x); }

#else

using extended = long double;
inline constexpr int extended_digits = 18;

inline extended ext_exp(extended x) { return std::exp(x); }
inline extended ext_expm1(extended x) { return std::expm1(x); }
inline extended ext_log(extended x) { return std::log(x); }
inline extended ext_log1p(extended x) { return std::log1p(x); }
inline extended ext_pow(extended x, extended y) { return std::pow(x, y); }
inline extended ext_sqrt(extended x) { return std::sqrt(x); }
inline extended ext_abs(extended x) { return std::fabs(x); }

#endif

inline extended ext_ln2() { return ext_log(static_cast<extended>(2)); }

}  // namespace subord

#endif  // SUBORD_EXTENDED_HPP
