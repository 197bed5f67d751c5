#pragma once

#include <complex>
#include <cstddef>
#include <type_traits>
#include <vector>

#include "banded.hpp"
#include "fe_space.hpp"
#include "quadrature.hpp"

namespace paraxfem {

namespace detail {

/// Element loop driving all banded assemblies. The kernel maps
/// (x, shape_j, shape_l) to the integrand of entry (l, j).
template <typename Scalar, typename Kernel>
BandedSystem<Scalar> assemble_banded(const FeSpace& space, Kernel&& kernel,
                                     const QuadratureRule& rule) {
    BandedSystem<Scalar> A(space.dof_count(), space.bandwidth(), space.bandwidth());
    const std::size_t nl = space.local_dof_count();
    for (std::size_t e = 0; e < space.element_count(); ++e) {
        const double h = space.mesh().element_length(e);
        const double xl = space.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double xi = rule.points[q];
            const double x = xl + h * xi;
            const double w = rule.weights[q] * h;
            ShapeValue sv[4];
            for (std::size_t l = 0; l < nl; ++l) sv[l] = space.shape(e, l, xi);
            for (std::size_t l = 0; l < nl; ++l) {
                const long gl = space.global_dof(e, l);
                if (gl < 0) continue;
                for (std::size_t j = 0; j < nl; ++j) {
                    const long gj = space.global_dof(e, j);
                    if (gj < 0) continue;
                    A.add(static_cast<std::size_t>(gl), static_cast<std::size_t>(gj),
                          Scalar(kernel(x, sv[j], sv[l])) * w);
                }
            }
        }
    }
    return A;
}

} // namespace detail

/// Mass matrix (phi_j, phi_l).
template <typename Scalar = double>
BandedSystem<Scalar> assemble_mass(const FeSpace& space) {
    return detail::assemble_banded<Scalar>(
        space, [](double, const ShapeValue& a, const ShapeValue& b) { return a.v * b.v; },
        space.assembly_rule());
}

/// Weighted mass matrix (w(x) phi_j, phi_l); the weight may be complex.
template <typename Weight>
auto assemble_weighted_mass(const FeSpace& space, Weight&& w)
    -> BandedSystem<std::decay_t<decltype(w(0.0))>> {
    using Scalar = std::decay_t<decltype(w(0.0))>;
    return detail::assemble_banded<Scalar>(
        space,
        [&](double x, const ShapeValue& a, const ShapeValue& b) { return w(x) * (a.v * b.v); },
        space.assembly_rule());
}

/// Stiffness matrix B(phi_j, phi_l) = (phi_j', phi_l').
template <typename Scalar = double>
BandedSystem<Scalar> assemble_stiffness(const FeSpace& space) {
    return detail::assemble_banded<Scalar>(
        space, [](double, const ShapeValue& a, const ShapeValue& b) { return a.d1 * b.d1; },
        space.assembly_rule());
}

/// B*(phi_j, phi_l) = (phi_j'', phi_l''); Hermite cubics only.
template <typename Scalar = double>
BandedSystem<Scalar> assemble_bstar(const FeSpace& space) {
    if (space.family() != FeFamily::HermiteCubic)
        throw std::invalid_argument("assemble_bstar: requires a HermiteCubic space");
    return detail::assemble_banded<Scalar>(
        space, [](double, const ShapeValue& a, const ShapeValue& b) { return a.d2 * b.d2; },
        space.assembly_rule());
}

/// B(w phi_j, phi_l) = ((w phi_j)', phi_l'); needs the analytic w_x.
template <typename Weight, typename WeightX>
auto assemble_weighted_bform(const FeSpace& space, Weight&& w, WeightX&& wx)
    -> BandedSystem<std::decay_t<decltype(w(0.0))>> {
    using Scalar = std::decay_t<decltype(w(0.0))>;
    return detail::assemble_banded<Scalar>(
        space,
        [&](double x, const ShapeValue& a, const ShapeValue& b) {
            return (wx(x) * a.v + w(x) * a.d1) * b.d1;
        },
        space.assembly_rule());
}

/// Convection-type matrix (w(x) phi_j', phi_l).
template <typename Weight>
auto assemble_convection(const FeSpace& space, Weight&& w)
    -> BandedSystem<std::decay_t<decltype(w(0.0))>> {
    using Scalar = std::decay_t<decltype(w(0.0))>;
    return detail::assemble_banded<Scalar>(
        space,
        [&](double x, const ShapeValue& a, const ShapeValue& b) { return w(x) * a.d1 * b.v; },
        space.assembly_rule());
}

/// Load vector (f, phi_l), integrated with a high-order fixed rule so that
/// data-side quadrature stays below the projection tolerances.
template <typename F>
auto assemble_load(const FeSpace& space, F&& f, int qpoints = 12)
    -> std::vector<std::decay_t<decltype(f(0.0))>> {
    using Scalar = std::decay_t<decltype(f(0.0))>;
    const QuadratureRule rule = gauss_legendre(qpoints);
    std::vector<Scalar> b(space.dof_count(), Scalar(0));
    for (std::size_t e = 0; e < space.element_count(); ++e) {
        const double h = space.mesh().element_length(e);
        const double xl = space.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double x = xl + h * rule.points[q];
            const Scalar fv = f(x);
            for (std::size_t l = 0; l < space.local_dof_count(); ++l) {
                const long gl = space.global_dof(e, l);
                if (gl < 0) continue;
                b[static_cast<std::size_t>(gl)] +=
                    fv * space.shape(e, l, rule.points[q]).v * rule.weights[q] * h;
            }
        }
    }
    return b;
}

/// Gradient-form load (g, phi_l') for a callable g (e.g. v' or f_x).
template <typename G>
auto assemble_load_grad(const FeSpace& space, G&& g, int qpoints = 12)
    -> std::vector<std::decay_t<decltype(g(0.0))>> {
    using Scalar = std::decay_t<decltype(g(0.0))>;
    const QuadratureRule rule = gauss_legendre(qpoints);
    std::vector<Scalar> b(space.dof_count(), Scalar(0));
    for (std::size_t e = 0; e < space.element_count(); ++e) {
        const double h = space.mesh().element_length(e);
        const double xl = space.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double x = xl + h * rule.points[q];
            const Scalar gv = g(x);
            for (std::size_t l = 0; l < space.local_dof_count(); ++l) {
                const long gl = space.global_dof(e, l);
                if (gl < 0) continue;
                b[static_cast<std::size_t>(gl)] +=
                    gv * space.shape(e, l, rule.points[q]).d1 * rule.weights[q] * h;
            }
        }
    }
    return b;
}

/// Curvature-form load (g, phi_l'') for a callable g (e.g. v'').
template <typename G>
auto assemble_load_curv(const FeSpace& space, G&& g, int qpoints = 12)
    -> std::vector<std::decay_t<decltype(g(0.0))>> {
    using Scalar = std::decay_t<decltype(g(0.0))>;
    const QuadratureRule rule = gauss_legendre(qpoints);
    std::vector<Scalar> b(space.dof_count(), Scalar(0));
    for (std::size_t e = 0; e < space.element_count(); ++e) {
        const double h = space.mesh().element_length(e);
        const double xl = space.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double x = xl + h * rule.points[q];
            const Scalar gv = g(x);
            for (std::size_t l = 0; l < space.local_dof_count(); ++l) {
                const long gl = space.global_dof(e, l);
                if (gl < 0) continue;
                b[static_cast<std::size_t>(gl)] +=
                    gv * space.shape(e, l, rule.points[q]).d2 * rule.weights[q] * h;
            }
        }
    }
    return b;
}

/// Integrals of the basis functions, int_0^1 phi_j dx.
inline std::vector<double> basis_integrals(const FeSpace& space) {
    const QuadratureRule rule = space.assembly_rule();
    std::vector<double> w(space.dof_count(), 0.0);
    for (std::size_t e = 0; e < space.element_count(); ++e) {
        const double h = space.mesh().element_length(e);
        for (std::size_t q = 0; q < rule.size(); ++q)
            for (std::size_t l = 0; l < space.local_dof_count(); ++l) {
                const long gl = space.global_dof(e, l);
                if (gl < 0) continue;
                w[static_cast<std::size_t>(gl)] +=
                    space.shape(e, l, rule.points[q]).v * rule.weights[q] * h;
            }
    }
    return w;
}

} // namespace paraxfem
