#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "acoustics.hpp"
#include "bottom_profile.hpp"
#include "parabolic.hpp"
#include "schrodinger.hpp"

namespace paraxfem {

/// Exact-solution test problem for the Schrodinger steppers: the quartic
/// profile u(t,x) = -x(x-1)^3 + sin(t) x driven by derived forcing so that
/// u solves the strong problem exactly.
struct SchrodingerManufactured {
    CoefficientSet coeffs;                         // includes derived f, f1
    std::function<complexd(double, double)> exact;
    std::function<complexd(double, double)> exact_t;
    std::function<complexd(double, double)> exact_x;
    std::function<complexd(double, double)> exact_xx;
    std::function<double(double)> u0;
    std::function<double(double)> u0_prime;
};

inline SchrodingerManufactured make_manufactured(int case_id, BoundaryMode mode) {
    const BottomProfile profile = convergence_case_profile(case_id);
    SchrodingerManufactured mp;

    auto u = [](double t, double x) {
        return complexd(-x * std::pow(x - 1.0, 3) + std::sin(t) * x, 0.0);
    };
    auto ut = [](double t, double x) { return complexd(std::cos(t) * x, 0.0); };
    auto ux = [](double t, double x) {
        return complexd(-std::pow(x - 1.0, 3) - 3.0 * x * std::pow(x - 1.0, 2) + std::sin(t), 0.0);
    };
    auto uxx = [](double, double x) { return complexd(-6.0 * (x - 1.0) * (2.0 * x - 1.0), 0.0); };

    mp.exact = u;
    mp.exact_t = ut;
    mp.exact_x = ux;
    mp.exact_xx = uxx;
    mp.u0 = [u](double x) { return u(0.0, x).real(); };
    mp.u0_prime = [ux](double x) { return ux(0.0, x).real(); };

    CoefficientSet c = wedge_coefficients(profile, nullptr, nullptr);
    // beta(t,x) = x t + i (3x + t^2), overriding the wedge-derived value.
    c.beta = [](double t, double x) { return complexd(x * t, 3.0 * x + t * t); };
    const complexd iu(0.0, 1.0);

    auto a = c.a;
    auto beta = c.beta;
    c.f = [=](double t, double x) {
        return ut(t, x) - iu * a(t) * uxx(t, x) - iu * beta(t, x) * u(t, x);
    };
    if (mode == BoundaryMode::NeumannDynamical) {
        auto mu = c.mu;
        auto S = c.S;
        auto G = c.G;
        c.f1 = [=](double t) {
            return ux(t, 1.0) - mu(t) * (S(t) * ut(t, 1.0) + G(t) * u(t, 1.0));
        };
    } else {
        c.f1 = [=](double t) { return ux(t, 1.0); };
    }
    mp.coeffs = c;
    return mp;
}

/// Max residual of the exact solution in the strong equation and boundary
/// condition over random (t,x) samples.
inline double manufactured_residual(const SchrodingerManufactured& mp, BoundaryMode mode,
                                    int samples = 1000, unsigned seed = 12345) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dt(0.0, 1.0), dx(0.0, 1.0);
    const complexd iu(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = dt(rng), x = dx(rng);
        const complexd pde = mp.exact_t(t, x) - iu * mp.coeffs.a(t) * mp.exact_xx(t, x) -
                             iu * mp.coeffs.beta(t, x) * mp.exact(t, x) - mp.coeffs.f(t, x);
        worst = std::max(worst, std::abs(pde));
        complexd bc = mp.exact_x(t, 1.0) - mp.coeffs.f1(t);
        if (mode == BoundaryMode::NeumannDynamical)
            bc -= mp.coeffs.mu(t) *
                  (mp.coeffs.S(t) * mp.exact_t(t, 1.0) + mp.coeffs.G(t) * mp.exact(t, 1.0));
        worst = std::max(worst, std::abs(bc));
    }
    return worst;
}

/// Exact-solution problem for the real parabolic steppers.
struct ParabolicManufactured {
    ParabolicCoeffs coeffs;
    std::function<double(double, double)> exact;
    std::function<double(double, double)> exact_t;
    std::function<double(double, double)> exact_x;
    std::function<double(double, double)> exact_xx;
    std::function<double(double)> u0, u0_prime, u0_second;
};

/// Dissipative case: u = -x(x-1)^3 + sin(t) x with a = 1, beta = x t,
/// eps = -1, delta = -1, and forcing derived from the strong equations.
inline ParabolicManufactured make_parabolic_dissipative() {
    ParabolicManufactured mp;
    auto u = [](double t, double x) { return -x * std::pow(x - 1.0, 3) + std::sin(t) * x; };
    auto ut = [](double t, double x) { return std::cos(t) * x; };
    auto ux = [](double t, double x) {
        return -std::pow(x - 1.0, 3) - 3.0 * x * std::pow(x - 1.0, 2) + std::sin(t);
    };
    auto uxx = [](double, double x) { return -6.0 * (x - 1.0) * (2.0 * x - 1.0); };
    mp.exact = u; mp.exact_t = ut; mp.exact_x = ux; mp.exact_xx = uxx;
    mp.u0 = [u](double x) { return u(0.0, x); };
    mp.u0_prime = [ux](double x) { return ux(0.0, x); };
    mp.u0_second = [uxx](double x) { return uxx(0.0, x); };
    ParabolicCoeffs& c = mp.coeffs;
    c.a = [](double) { return 1.0; };
    c.beta = [](double t, double x) { return x * t; };
    c.beta_x = [](double t, double) { return t; };
    c.eps = [](double) { return -1.0; };
    c.delta = [](double) { return -1.0; };
    c.f = [=](double t, double x) { return ut(t, x) - uxx(t, x) - t * x * u(t, x); };
    c.f_x = nullptr;
    c.g = [=](double t) { return ux(t, 1.0) + ut(t, 1.0) + u(t, 1.0); };
    return mp;
}

/// Reactive case: u = sin(t) x + x^3 with a = 1, beta = x + t, eps = +1,
/// delta = 1. The solution lies in the cubic space, so the spatial error
/// vanishes and the k^2 term is isolated.
inline ParabolicManufactured make_parabolic_reactive() {
    ParabolicManufactured mp;
    auto u = [](double t, double x) { return std::sin(t) * x + x * x * x; };
    auto ut = [](double t, double x) { return std::cos(t) * x; };
    auto ux = [](double t, double x) { return std::sin(t) + 3.0 * x * x; };
    auto uxx = [](double, double x) { return 6.0 * x; };
    mp.exact = u; mp.exact_t = ut; mp.exact_x = ux; mp.exact_xx = uxx;
    mp.u0 = [u](double x) { return u(0.0, x); };
    mp.u0_prime = [ux](double x) { return ux(0.0, x); };
    mp.u0_second = [uxx](double x) { return uxx(0.0, x); };
    ParabolicCoeffs& c = mp.coeffs;
    c.a = [](double) { return 1.0; };
    c.beta = [](double t, double x) { return x + t; };
    c.beta_x = [](double, double) { return 1.0; };
    c.eps = [](double) { return 1.0; };
    c.delta = [](double) { return 1.0; };
    c.f = [=](double t, double x) { return ut(t, x) - uxx(t, x) - (x + t) * u(t, x); };
    c.f_x = [=](double t, double x) {
        return std::cos(t) - 6.0 - (u(t, x) + (x + t) * ux(t, x));
    };
    c.g = [=](double t) { return ux(t, 1.0) - ut(t, 1.0) - u(t, 1.0); };
    return mp;
}

/// Reactive variant with u = sin(t) x + x^3 + x^2: u_xx(t,0) != 0, so the
/// f(t,0) chi'(0) boundary term is exercised.
inline ParabolicManufactured make_parabolic_reactive_variant() {
    ParabolicManufactured mp;
    auto u = [](double t, double x) { return std::sin(t) * x + x * x * x + x * x; };
    auto ut = [](double t, double x) { return std::cos(t) * x; };
    auto ux = [](double t, double x) { return std::sin(t) + 3.0 * x * x + 2.0 * x; };
    auto uxx = [](double, double x) { return 6.0 * x + 2.0; };
    mp.exact = u; mp.exact_t = ut; mp.exact_x = ux; mp.exact_xx = uxx;
    mp.u0 = [u](double x) { return u(0.0, x); };
    mp.u0_prime = [ux](double x) { return ux(0.0, x); };
    mp.u0_second = [uxx](double x) { return uxx(0.0, x); };
    ParabolicCoeffs& c = mp.coeffs;
    c.a = [](double) { return 1.0; };
    c.beta = [](double t, double x) { return x + t; };
    c.beta_x = [](double, double) { return 1.0; };
    c.eps = [](double) { return 1.0; };
    c.delta = [](double) { return 1.0; };
    c.f = [=](double t, double x) { return ut(t, x) - uxx(t, x) - (x + t) * u(t, x); };
    c.f_x = [=](double t, double x) {
        return std::cos(t) - 6.0 - (u(t, x) + (x + t) * ux(t, x));
    };
    c.g = [=](double t) { return ux(t, 1.0) - ut(t, 1.0) - u(t, 1.0); };
    return mp;
}

/// Max residual of a parabolic manufactured solution in the strong
/// equation and boundary condition over random samples.
inline double parabolic_residual(const ParabolicManufactured& mp, int samples = 1000,
                                 unsigned seed = 2468) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dt(0.0, 1.0), dx(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = dt(rng), x = dx(rng);
        const double pde = mp.exact_t(t, x) - mp.coeffs.a(t) * mp.exact_xx(t, x) -
                           mp.coeffs.beta(t, x) * mp.exact(t, x) - mp.coeffs.f(t, x);
        const double bc = mp.coeffs.a(t) * mp.exact_x(t, 1.0) -
                          mp.coeffs.eps(t) * mp.exact_t(t, 1.0) -
                          mp.coeffs.delta(t) * mp.exact(t, 1.0) - mp.coeffs.g(t);
        worst = std::max({worst, std::abs(pde), std::abs(bc)});
    }
    return worst;
}

/// Cross-check the analytic derivative callables against high-order finite
/// differences of the exact solution; guards the hand algebra.
inline double manufactured_derivative_check(const SchrodingerManufactured& mp,
                                            int samples = 200, unsigned seed = 54321) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dt(0.05, 0.95), dx(0.05, 0.95);
    double worst = 0.0;
    const double h = 1e-3;
    auto fd_t = [&](double t, double x) {
        return (mp.exact(t - 2 * h, x) - 8.0 * mp.exact(t - h, x) + 8.0 * mp.exact(t + h, x) -
                mp.exact(t + 2 * h, x)) / (12.0 * h);
    };
    auto fd_x = [&](double t, double x) {
        return (mp.exact(t, x - 2 * h) - 8.0 * mp.exact(t, x - h) + 8.0 * mp.exact(t, x + h) -
                mp.exact(t, x + 2 * h)) / (12.0 * h);
    };
    auto fd_xx = [&](double t, double x) {
        return (-mp.exact(t, x - 2 * h) + 16.0 * mp.exact(t, x - h) - 30.0 * mp.exact(t, x) +
                16.0 * mp.exact(t, x + h) - mp.exact(t, x + 2 * h)) / (12.0 * h * h);
    };
    for (int i = 0; i < samples; ++i) {
        const double t = dt(rng), x = dx(rng);
        worst = std::max(worst, std::abs(mp.exact_t(t, x) - fd_t(t, x)));
        worst = std::max(worst, std::abs(mp.exact_x(t, x) - fd_x(t, x)));
        worst = std::max(worst, std::abs(mp.exact_xx(t, x) - fd_xx(t, x)));
    }
    return worst;
}

} // namespace paraxfem
