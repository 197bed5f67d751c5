#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "bottom_profile.hpp"
#include "fe_space.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

namespace paraxfem {

using complexd = std::complex<double>;

/// Time/space coefficient callables of the strip-transformed problems.
/// Wedge-derived sets satisfy a = 1/(2 s^2) > 0 and delta = s s_dot / 2.
struct CoefficientSet {
    std::function<double(double)> a;                  // real, nonzero
    std::function<complexd(double, double)> beta;     // beta_R + i beta_I
    std::function<double(double)> mu;                 // s_dot / s
    std::function<double(double)> S;                  // s^2 / (1 + s_dot^2)
    std::function<complexd(double)> G;                // g S + i (S delta_dot - s^2)
    std::function<double(double)> delta;              // s s_dot / 2
    std::function<double(double)> delta_dot;          // (s_dot^2 + s s_ddot) / 2
    std::function<complexd(double, double)> f;        // interior forcing
    std::function<complexd(double)> f1;               // boundary forcing
    std::function<complexd(double)> g;                // bottom admittance term
};

/// Wedge environment in physical units (meters, Hz).
struct WedgeEnvironment {
    double f0 = 25.0;       // source frequency [Hz]
    double c0 = 1500.0;     // reference sound speed [m/s]
    double zs = 100.0;      // source depth [m]
    std::function<double(double)> ell;       // bathymetry l(r) [m]
    std::function<double(double)> ell_dot;   // dl/dr
    std::function<double(double)> ell_ddot;  // d2l/dr2
    double range_max = 3339.0;               // [m]
    complexd gB{0.0, 0.0};                   // bottom admittance parameter [1/m]
    // Optional index-of-refraction term gamma(t, y) in nondimensional
    // variables; zero for a homogeneous water column.
    std::function<complexd(double, double)> gamma;

    double k0() const {
        const double k = 2.0 * std::acos(-1.0) * f0 / c0;
        if (!(k > 0.0)) throw std::invalid_argument("WedgeEnvironment: k0 must be positive");
        return k;
    }

    /// Nondimensional time horizon t = k0 * range.
    double t_final() const { return k0() * range_max; }

    /// Nondimensional admittance g(t) = g_B(t/k0) / k0, so that
    /// g_B = i k0 gives the dimensionless g = i.
    complexd g_nondim() const { return gB / k0(); }
};

/// ASA wedge bathymetries: upsloping l(r) = 200 - 0.05 r with the source
/// at 100 m, downsloping l(r) = 33.05 + 0.05 r with the source at 25 m.
inline WedgeEnvironment asa_wedge_environment(bool upsloping) {
    WedgeEnvironment env;
    env.f0 = 25.0;
    env.c0 = 1500.0;
    env.range_max = 3339.0;
    if (upsloping) {
        env.zs = 100.0;
        env.ell = [](double r) { return 200.0 - 0.05 * r; };
        env.ell_dot = [](double) { return -0.05; };
    } else {
        env.zs = 25.0;
        env.ell = [](double r) { return 33.05 + 0.05 * r; };
        env.ell_dot = [](double) { return 0.05; };
    }
    env.ell_ddot = [](double) { return 0.0; };
    env.gB = complexd(0.0, env.k0());
    env.gamma = [](double, double) { return complexd(0.0, 0.0); };
    return env;
}

/// s(t) = k0 * l(t / k0) and derivatives in the nondimensional range t.
inline BottomProfile wedge_profile(const WedgeEnvironment& env) {
    const double k0 = env.k0();
    BottomProfile p;
    p.s = [ell = env.ell, k0](double t) { return k0 * ell(t / k0); };
    p.s_dot = [ell_dot = env.ell_dot, k0](double t) { return ell_dot(t / k0); };
    p.s_ddot = [ell_ddot = env.ell_ddot, k0](double t) { return ell_ddot(t / k0) / k0; };
    return p;
}

/// Coefficients of the strip-transformed problems for a given bottom,
/// index-of-refraction term gamma(t,y) and admittance g(t).
inline CoefficientSet wedge_coefficients(const BottomProfile& profile,
                                         std::function<complexd(double, double)> gamma,
                                         std::function<complexd(double)> g) {
    if (!gamma) gamma = [](double, double) { return complexd(0.0); };
    if (!g) g = [](double) { return complexd(0.0); };
    CoefficientSet c;
    const BottomProfile p = profile;
    c.a = [p](double t) {
        p.check_smooth_at(t);
        const double s = p.s(t);
        return 1.0 / (2.0 * s * s);
    };
    c.beta = [p, gamma](double t, double x) {
        p.check_smooth_at(t);
        const double s = p.s(t), sd = p.s_dot(t), sdd = p.s_ddot(t);
        const complexd gv = gamma(t, x * s);
        return complexd(gv.real() - 0.5 * sdd * s * x * x, gv.imag() + 0.5 * sd / s);
    };
    c.mu = [p](double t) {
        p.check_smooth_at(t);
        return p.s_dot(t) / p.s(t);
    };
    c.S = [p](double t) {
        p.check_smooth_at(t);
        const double s = p.s(t), sd = p.s_dot(t);
        return s * s / (1.0 + sd * sd);
    };
    c.delta = [p](double t) {
        p.check_smooth_at(t);
        return 0.5 * p.s_dot(t) * p.s(t);
    };
    c.delta_dot = [p](double t) {
        p.check_smooth_at(t);
        const double sd = p.s_dot(t);
        return 0.5 * (sd * sd + p.s(t) * p.s_ddot(t));
    };
    c.G = [p, g](double t) {
        p.check_smooth_at(t);
        const double s = p.s(t), sd = p.s_dot(t);
        const double S = s * s / (1.0 + sd * sd);
        const double ddot = 0.5 * (sd * sd + s * p.s_ddot(t));
        return g(t) * S + complexd(0.0, 1.0) * (S * ddot - s * s);
    };
    c.f = [](double, double) { return complexd(0.0); };
    c.f1 = [](double) { return complexd(0.0); };
    c.g = g;
    return c;
}

/// Gaussian image source of the ASA benchmark; vanishes at the surface.
inline std::function<double(double)> asa_source(const WedgeEnvironment& env) {
    const double k0 = env.k0();
    const double zs = env.zs;
    if (!(zs > 0.0) || !(zs < env.ell(0.0)))
        throw std::invalid_argument("asa_source: source depth outside the water column");
    return [k0, zs](double z) {
        const double q = k0 * k0 / 4.0;
        return std::sqrt(k0 / 2.0) *
               (std::exp(-(z - zs) * (z - zs) * q) - std::exp(-(z + zs) * (z + zs) * q));
    };
}

/// d/dz of the ASA source.
inline std::function<double(double)> asa_source_derivative(const WedgeEnvironment& env) {
    const double k0 = env.k0();
    const double zs = env.zs;
    return [k0, zs](double z) {
        const double q = k0 * k0 / 4.0;
        return std::sqrt(k0 / 2.0) *
               (-2.0 * q * (z - zs) * std::exp(-(z - zs) * (z - zs) * q) +
                2.0 * q * (z + zs) * std::exp(-(z + zs) * (z + zs) * q));
    };
}

/// Reference amplitude max|psi0| sampled on the quadrature grid of a mesh
/// mapped to the initial water column.
inline double reference_amplitude(const WedgeEnvironment& env, const Mesh1D& mesh) {
    const auto psi0 = asa_source(env);
    const double ell0 = env.ell(0.0);
    const QuadratureRule rule = gauss_legendre(4);
    double m = 0.0;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const double h = mesh.element_length(e);
        const double xl = mesh.element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q)
            m = std::max(m, std::abs(psi0((xl + h * rule.points[q]) * ell0)));
    }
    return m;
}

/// Initial strip field u0(x) = exp(-i delta(0) x^2) w0(x s(0)).
/// The modulus of w0 is preserved pointwise.
template <typename W0>
std::function<complexd(double)> transform_initial(const BottomProfile& profile, W0 w0) {
    const double s0 = profile.s(0.0);
    const double delta0 = 0.5 * profile.s_dot(0.0) * s0;
    return [s0, delta0, w0](double x) {
        return std::exp(complexd(0.0, -delta0 * x * x)) * complexd(w0(x * s0));
    };
}

/// Physical field sample psi(r, z) recovered from the strip solution at
/// nondimensional time t = k0 r.
inline complexd recover_field(const DofField<complexd>& u, const BottomProfile& profile,
                              const WedgeEnvironment& env, double psi_ref, double r, double z) {
    const double k0 = env.k0();
    const double t = k0 * r;
    const double ell = env.ell(r);
    if (z < 0.0 || z > ell)
        throw std::domain_error("recover_field: depth outside the water column");
    const double x = z / ell;
    const double delta = 0.5 * profile.s_dot(t) * profile.s(t);
    return psi_ref * std::exp(complexd(0.0, delta * x * x)) * u.value(x);
}

/// Transmission loss in dB; a vanishing field is recorded as a clipped
/// sentinel value.
constexpr double kTransmissionLossClip = 999.0;

inline double transmission_loss(double psi_abs, double r) {
    if (!(r > 0.0)) throw std::domain_error("transmission_loss: r must be positive");
    if (psi_abs <= 0.0) return kTransmissionLossClip;
    const double tl = -20.0 * std::log10(psi_abs) + 10.0 * std::log10(r);
    return std::min(tl, kTransmissionLossClip);
}

} // namespace paraxfem
