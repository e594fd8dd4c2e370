#pragma once

// Test-only reference computations. Nothing here calls into the spectrum or
// phasematch modules; they are rebuilt from the formulas directly.

#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double c_light = 299792458.0;
inline constexpr double pi = std::numbers::pi;

// Kato & Takaoka KTP n_z in its published form (l in um).
inline double kato_nz(double l_um) {
    const double l2 = l_um * l_um;
    return std::sqrt(4.59423 + 0.06206 / (l2 - 0.04763) + 110.80672 / (l2 - 86.12171));
}

// Emanueli & Arie thermo-optic shift for KTP n_z (l in um).
inline double emanueli_dn(double l_um, double temp_c) {
    const double dt = temp_c - 25.0;
    const double n1 = 9.9587e-6 + 9.9228e-6 / l_um - 8.9603e-6 / (l_um * l_um) + 4.1010e-6 / (l_um * l_um * l_um);
    const double n2 = -1.1882e-8 + 10.459e-8 / l_um - 9.8136e-8 / (l_um * l_um) + 3.1481e-8 / (l_um * l_um * l_um);
    return n1 * dt + n2 * dt * dt;
}

inline double ktp_index(double lambda_m, double temp_c) {
    const double l_um = lambda_m * 1e6;
    return kato_nz(l_um) + emanueli_dn(l_um, temp_c);
}

struct Setup {
    double omega_p;  // rad/s
    double w0;       // m
    double length;   // m, already at temperature
    double period;   // m, already at temperature
    double temp_c;
};

struct Waves {
    double ks, ki, kp, weight;
};

inline Waves waves(const Setup& s, double omega_s) {
    const double omega_i = s.omega_p - omega_s;
    const double n_s = ktp_index(2 * pi * c_light / omega_s, s.temp_c);
    const double n_i = ktp_index(2 * pi * c_light / omega_i, s.temp_c);
    const double n_p = ktp_index(2 * pi * c_light / s.omega_p, s.temp_c);
    return {omega_s * n_s / c_light, omega_i * n_i / c_light, s.omega_p * n_p / c_light,
            omega_i * omega_s / ((n_i * n_s) * (n_i * n_s))};
}

// |Lambda|^2 without the global constant, straight from the three-wave
// mismatch; the index is the published-form KTP model above.
inline double integrand(const Setup& s, const Waves& w, double qix, double qiy, double qsx, double qsy) {
    const double qpx = qix + qsx, qpy = qiy + qsy;
    const double ri = w.ki * w.ki - qix * qix - qiy * qiy;
    const double rs = w.ks * w.ks - qsx * qsx - qsy * qsy;
    const double rp = w.kp * w.kp - qpx * qpx - qpy * qpy;
    if (ri < 0 || rs < 0 || rp < 0) return 0.0;
    const double dk = std::sqrt(ri) + std::sqrt(rs) - std::sqrt(rp);
    const double x = (dk + 2 * pi / s.period) * s.length / 2;
    const double sinc = x == 0 ? 1.0 : std::sin(x) / x;
    const double pump = std::exp(-s.w0 * s.w0 * (qpx * qpx + qpy * qpy) / 4);
    return w.weight * pump * pump * sinc * sinc;
}

// Midpoint Riemann sum of the idler-momentum integral on a square box of
// half-width `halfwidth` centred at -q_s, `points` cells per axis.
inline double riemann_density(const Setup& s, double omega_s, double qs, double halfwidth, int points) {
    const Waves w = waves(s, omega_s);
    if (qs >= w.ks) return 0.0;
    const double h = 2 * halfwidth / points;
    double total = 0.0;
    for (int a = 0; a < points; ++a) {
        const double qix = -qs - halfwidth + (a + 0.5) * h;
        double row = 0.0;
        for (int b = 0; b < points; ++b) {
            const double qiy = -halfwidth + (b + 0.5) * h;
            row += integrand(s, w, qix, qiy, qs, 0.0);
        }
        total += row;
    }
    return total * h * h;
}

} // namespace oracle
