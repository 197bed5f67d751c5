#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "assembly.hpp"
#include "banded.hpp"
#include "fe_space.hpp"

namespace paraxfem {

/// L2 projection P_h f: (P_h f, phi) = (f, phi) for all phi in the space.
template <typename F>
auto l2_project(const FeSpace& space, F&& f, int qpoints = 12)
    -> DofField<std::decay_t<decltype(f(0.0))>> {
    using Scalar = std::decay_t<decltype(f(0.0))>;
    auto M = assemble_mass<Scalar>(space);
    auto b = assemble_load(space, std::forward<F>(f), qpoints);
    M.factor_nopivot();
    return DofField<Scalar>(space, M.solve(b));
}

/// Elliptic (Ritz) projection R_h v: B(R_h v, phi) = B(v, phi).
/// Boundary-exact at x=1: R_h v(1) = v(1). Requires the analytic v'.
template <typename V, typename DV>
auto elliptic_project(const FeSpace& space, V&&, DV&& vprime, int qpoints = 12)
    -> DofField<std::decay_t<decltype(vprime(0.0))>> {
    using Scalar = std::decay_t<decltype(vprime(0.0))>;
    if (!space.constrained())
        throw std::invalid_argument("elliptic_project: stiffness form needs the constrained space");
    auto K = assemble_stiffness<Scalar>(space);
    auto b = assemble_load_grad(space, std::forward<DV>(vprime), qpoints);
    K.factor_nopivot();
    return DofField<Scalar>(space, K.solve(b));
}

/// Elliptic projection for the H1-type method:
/// gamma*(R*_h v, chi) = gamma*(v, chi) with gamma*(v,w) = (v'',w'') + (v',w').
/// Hermite cubics only; requires analytic v' and v''.
template <typename V, typename DV, typename D2V>
auto elliptic_project_star(const FeSpace& space, V&&, DV&& vprime, D2V&& vsecond,
                           int qpoints = 12)
    -> DofField<std::decay_t<decltype(vprime(0.0))>> {
    using Scalar = std::decay_t<decltype(vprime(0.0))>;
    if (space.family() != FeFamily::HermiteCubic)
        throw std::invalid_argument("elliptic_project_star: requires a HermiteCubic space");
    auto G = assemble_bstar<Scalar>(space);
    {
        auto K = assemble_stiffness<Scalar>(space);
        for (std::size_t i = 0; i < G.order(); ++i) {
            const std::size_t j0 = (i > G.lower_bw()) ? i - G.lower_bw() : 0;
            const std::size_t j1 = std::min(G.order() - 1, i + G.upper_bw());
            for (std::size_t j = j0; j <= j1; ++j) G.at(i, j) += K.get(i, j);
        }
    }
    auto b = assemble_load_curv(space, std::forward<D2V>(vsecond), qpoints);
    auto b1 = assemble_load_grad(space, std::forward<DV>(vprime), qpoints);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += b1[i];
    G.factor_nopivot();
    return DofField<Scalar>(space, G.solve(b));
}

} // namespace paraxfem
