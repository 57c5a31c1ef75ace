#include "vfl/geometry.hpp"

namespace vfl {

double unit_ball_volume(int n) {
    // omega_0 = 1, omega_1 = 2, omega_n = omega_{n-2} * 2*pi/n
    assert(n >= 0);
    double even = 1.0, odd = 2.0;
    if (n == 0) return even;
    if (n == 1) return odd;
    double v = (n % 2 == 0) ? even : odd;
    for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) v *= 2.0 * M_PI / k;
    return v;
}

double unit_ball_volume_real(double s) {
    return std::pow(M_PI, s / 2.0) / std::tgamma(s / 2.0 + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

} // namespace vfl
