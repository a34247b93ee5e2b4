#ifndef CLUSTERDYN_MATH_UTIL_HPP
#define CLUSTERDYN_MATH_UTIL_HPP

#include <array>
#include <cmath>

namespace clusterdyn {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// Deformations below this size are evaluated in the exact z=0 limit.
inline constexpr double kSmallZ = 1e-12;

// sinh(z*x)/z, continuous limit x at z=0.
inline double sinhc_z(double z, double x) {
    if (std::abs(z) < kSmallZ) return x;
    return std::sinh(z * x) / z;
}

// (1 - exp(-2*z*x)) / (2*z), continuous limit x at z=0.
inline double expm1_ratio(double z, double x) {
    if (std::abs(z) < kSmallZ) return x;
    return -std::expm1(-2.0 * z * x) / (2.0 * z);
}

// log(cosh(x)) without overflow for large |x|.
inline double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094; // ln 2
}

inline Vec3 mat3_apply(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return r;
}

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
    return r;
}

} // namespace clusterdyn

#endif
