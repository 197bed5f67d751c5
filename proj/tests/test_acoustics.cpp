#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "paraxfem/acoustics.hpp"
#include "paraxfem/bottom_profile.hpp"
#include "paraxfem/projection.hpp"

using namespace paraxfem;
using cplx = std::complex<double>;

namespace {

BottomProfile flat_profile() {
    BottomProfile p;
    p.s = [](double) { return 1.0; };
    p.s_dot = [](double) { return 0.0; };
    p.s_ddot = [](double) { return 0.0; };
    return p;
}

} // namespace

TEST(WedgeCoefficients, FlatBottomSubstitution) {
    auto c = wedge_coefficients(flat_profile(), nullptr, nullptr);
    EXPECT_DOUBLE_EQ(c.a(0.3), 0.5);
    EXPECT_EQ(c.beta(0.3, 0.7), cplx(0.0, 0.0));
    EXPECT_DOUBLE_EQ(c.mu(0.3), 0.0);
    EXPECT_DOUBLE_EQ(c.S(0.3), 1.0);
    EXPECT_EQ(c.G(0.3), cplx(0.0, -1.0)); // G = i (S delta_dot - s^2) = -i
}

TEST(WedgeCoefficients, ExponentialBottomAtZero) {
    // s = e^{-t}: a = 1/2, mu = -1, S = 1/2, beta_I = -1/2 at t = 0.
    auto c = wedge_coefficients(growth_profile('b'), nullptr, nullptr);
    EXPECT_DOUBLE_EQ(c.a(0.0), 0.5);
    EXPECT_DOUBLE_EQ(c.mu(0.0), -1.0);
    EXPECT_DOUBLE_EQ(c.S(0.0), 0.5);
    EXPECT_DOUBLE_EQ(c.beta(0.0, 0.4).imag(), -0.5);
    // beta_R = -s_ddot s x^2 / 2 with gamma = 0.
    EXPECT_DOUBLE_EQ(c.beta(0.0, 0.4).real(), -0.5 * 0.4 * 0.4);
}

TEST(WedgeCoefficients, FlatSlopeReducesToAkCoefficients) {
    // With s_dot = 0, mu vanishes identically: the dynamical term is gone,
    // while a and beta agree with the AK reduction by construction.
    auto c = wedge_coefficients(flat_profile(), nullptr, nullptr);
    for (int i = 0; i <= 10; ++i) EXPECT_EQ(c.mu(0.1 * i), 0.0);
}

TEST(WedgeCoefficients, KinkEvaluationRejected) {
    auto c = wedge_coefficients(growth_profile('f'), nullptr, nullptr);
    EXPECT_THROW(c.a(0.5), std::domain_error);
    EXPECT_NO_THROW(c.a(0.5 - 1.0 / 1600.0)); // half-steps never hit the kink
}

TEST(WedgeCoefficients, DeltaDotMatchesFiniteDifference) {
    auto c = wedge_coefficients(growth_profile('h'), nullptr, nullptr);
    const double dt = 1e-5;
    for (double t : {0.1, 0.37, 0.62, 0.9}) {
        const double fd = (c.delta(t + dt) - c.delta(t - dt)) / (2.0 * dt);
        EXPECT_NEAR(c.delta_dot(t), fd, 1e-6);
    }
}

TEST(UpslopingClassifier, AgreesWithSlopeSign) {
    EXPECT_TRUE(is_upsloping(growth_profile('b'), 1.0));
    EXPECT_TRUE(is_upsloping(growth_profile('e'), 1.0));
    EXPECT_FALSE(is_upsloping(growth_profile('a'), 1.0));
    EXPECT_FALSE(is_upsloping(growth_profile('g'), 1.0));
    EXPECT_FALSE(is_upsloping(growth_profile('c'), 1.0)); // trench in s-dot sign
    EXPECT_TRUE(is_upsloping(convergence_case_profile(1), 1.0));
    EXPECT_FALSE(is_upsloping(convergence_case_profile(2), 1.0));
}

TEST(AsaSource, SurfaceValueIsExactlyZero) {
    auto env = asa_wedge_environment(true);
    auto psi0 = asa_source(env);
    EXPECT_EQ(psi0(0.0), 0.0);
}

TEST(AsaSource, ValueAtSourceDepth) {
    auto env = asa_wedge_environment(true);
    auto psi0 = asa_source(env);
    const double k0 = env.k0();
    const double expected = std::sqrt(k0 / 2.0) * (1.0 - std::exp(-env.zs * env.zs * k0 * k0));
    EXPECT_NEAR(psi0(env.zs), expected, 1e-15);
}

TEST(AsaSource, WaveNumberAndPeakLocation) {
    auto env = asa_wedge_environment(true);
    const double k0 = env.k0();
    EXPECT_NEAR(k0, std::acos(-1.0) / 30.0, 1e-15);
    auto psi0 = asa_source(env);
    // Peak near z = zs.
    double zbest = 0.0, vbest = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double z = 200.0 * i / 2000.0;
        if (std::abs(psi0(z)) > vbest) { vbest = std::abs(psi0(z)); zbest = z; }
    }
    EXPECT_NEAR(zbest, env.zs, 2.0);
}

TEST(TransformInitial, FlatStartIsPureComposition) {
    auto profile = flat_profile();
    auto u0 = transform_initial(profile, [](double y) { return std::sin(y); });
    for (double x : {0.0, 0.25, 0.5, 1.0})
        EXPECT_NEAR(std::abs(u0(x) - cplx(std::sin(x))), 0.0, 1e-15);
}

TEST(TransformInitial, ModulusPreserved) {
    auto profile = growth_profile('a'); // delta(0) != 0
    auto w0 = [](double y) { return y * std::exp(-y); };
    auto u0 = transform_initial(profile, w0);
    const double s0 = profile.s(0.0);
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        EXPECT_NEAR(std::abs(u0(x)), std::abs(w0(x * s0)), 1e-14);
    }
}

TEST(TransformInitial, AsaSourceComposition) {
    auto env = asa_wedge_environment(true);
    auto profile = wedge_profile(env);
    const double k0 = env.k0();
    EXPECT_NEAR(profile.s(0.0), k0 * 200.0, 1e-12);

    Mesh1D mesh = Mesh1D::uniform(64);
    const double psi_ref = reference_amplitude(env, mesh);
    auto psi0 = asa_source(env);
    auto w0 = [&](double y) { return psi0(y / k0) / psi_ref; };
    auto u0 = transform_initial(profile, w0);
    const double s0 = profile.s(0.0);
    const double d0 = 0.5 * profile.s_dot(0.0) * s0;
    for (int i = 0; i <= 50; ++i) {
        const double x = i / 50.0;
        const cplx direct = std::exp(cplx(0.0, -d0 * x * x)) * w0(x * s0);
        EXPECT_NEAR(std::abs(u0(x) - direct), 0.0, 1e-14);
    }
}

TEST(RecoverField, FlatBottomAndPhaseInvariance) {
    auto env = asa_wedge_environment(true);
    env.ell = [](double) { return 200.0; };
    env.ell_dot = [](double) { return 0.0; };
    auto profile = wedge_profile(env);
    FeSpace space(Mesh1D::uniform(32), FeFamily::LagrangeLinear);
    auto u = l2_project(space, [](double x) { return cplx(x * (1.0 - 0.3 * x), 0.2 * x); });
    const double psi_ref = 0.87;
    const double r = 500.0, z = 90.0;
    const cplx psi = recover_field(u, profile, env, psi_ref, r, z);
    // delta = 0 on a flat bottom: psi = psi_ref * u(z/ell).
    EXPECT_NEAR(std::abs(psi - psi_ref * u.value(z / 200.0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(psi), psi_ref * std::abs(u.value(z / 200.0)), 1e-14);
    EXPECT_THROW(recover_field(u, profile, env, psi_ref, r, 250.0), std::domain_error);
}

TEST(RecoverField, RoundTripAtInitialRange) {
    auto env = asa_wedge_environment(true);
    auto profile = wedge_profile(env);
    const double k0 = env.k0();
    Mesh1D mesh = Mesh1D::uniform(512);
    FeSpace space(mesh, FeFamily::LagrangeLinear);
    const double psi_ref = reference_amplitude(env, mesh);
    auto psi0 = asa_source(env);
    auto w0 = [&](double y) { return psi0(y / k0) / psi_ref; };
    auto u0fn = transform_initial(profile, w0);
    // Interpolate u0 so nodal values are exact, then recover psi at nodes.
    auto u0 = interpolate<cplx>(space, [&](double x) { return u0fn(x); });
    for (std::size_t m = 1; m < mesh.node_count(); ++m) {
        const double z = mesh.node(m) * env.ell(0.0);
        const cplx psi = recover_field(u0, profile, env, psi_ref, 0.0, z);
        EXPECT_NEAR(std::abs(psi - psi0(z)), 0.0, 1e-12);
    }
}

TEST(TransmissionLoss, Arithmetic) {
    EXPECT_NEAR(transmission_loss(1.0, 1.0), 0.0, 1e-14);
    EXPECT_NEAR(transmission_loss(0.1, 100.0), 40.0, 1e-12);
    EXPECT_NEAR(transmission_loss(1.0, 10.0), 10.0, 1e-13);
    EXPECT_EQ(transmission_loss(0.0, 10.0), kTransmissionLossClip);
    EXPECT_THROW(transmission_loss(1.0, 0.0), std::domain_error);
}
