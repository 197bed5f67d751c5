#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "banded.hpp"
#include "fe_space.hpp"
#include "projection.hpp"
#include "time_grid.hpp"

namespace paraxfem {

/// Real coefficients of the parabolic problem with the dynamical boundary
/// condition a u_x(t,1) = eps u_t(t,1) + delta u(t,1) + g(t).
/// The reactive scheme additionally needs the analytic x-derivatives of
/// beta and f (its right-hand data enter through the gradient form).
struct ParabolicCoeffs {
    std::function<double(double)> a;                 // a(t) >= a_* > 0
    std::function<double(double, double)> beta;
    std::function<double(double, double)> beta_x;    // reactive only
    std::function<double(double, double)> f;
    std::function<double(double, double)> f_x;       // reactive only
    std::function<double(double)> eps;
    std::function<double(double)> delta;
    std::function<double(double)> g;
};

struct ParabolicHistory {
    std::vector<double> times;
    std::vector<double> l2_norms;
    std::vector<double> boundary_values;
    std::size_t steps_completed = 0;
};

/// Crank-Nicolson-Galerkin stepper for the dissipative case (eps <= 0) on
/// linear elements; the time-derivative pairing is the L2 inner product.
class DissipativeCnContext {
public:
    DissipativeCnContext(const FeSpace& space, ParabolicCoeffs coeffs, TimeGrid grid)
        : space_(&space), coeffs_(std::move(coeffs)), grid_(std::move(grid)),
          mass_(assemble_mass<double>(space)), stiffness_(assemble_stiffness<double>(space)) {
        if (space.family() != FeFamily::LagrangeLinear || !space.constrained())
            throw std::invalid_argument("DissipativeCnContext: expects the constrained linear space");
    }

    const FeSpace& space() const { return *space_; }
    const TimeGrid& grid() const { return grid_; }

    /// U^0 = R_h u0.
    template <typename U0, typename DU0>
    DofField<double> init(U0&& u0, DU0&& du0) const {
        return elliptic_project(*space_, std::forward<U0>(u0), std::forward<DU0>(du0));
    }

    DofField<double> step(const DofField<double>& u_prev, std::size_t n) const {
        const double th = grid_.t_half(n);
        const double kn = grid_.k(n);
        const double eps = coeffs_.eps(th);
        if (eps > 0.0)
            throw std::invalid_argument("dissipative step: requires eps(t) <= 0 (got eps > 0)");
        const double a = coeffs_.a(th);
        const double delta = coeffs_.delta(th);
        const std::size_t N = space_->dof_count();
        const std::size_t bdof = space_->boundary_value_dof();

        auto W = assemble_weighted_mass(*space_, [&](double x) { return coeffs_.beta(th, x); });
        BandedSystem<double> left(N, 1, 1), right(N, 1, 1);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = (i > 0 ? i - 1 : 0); j <= std::min(N - 1, i + 1); ++j) {
                const double m = mass_.get(i, j);
                const double half = 0.5 * kn * (a * stiffness_.get(i, j) - W.get(i, j));
                left.at(i, j) = m + half;
                right.at(i, j) = m - half;
            }
        left.at(bdof, bdof) += -eps - 0.5 * kn * delta;
        right.at(bdof, bdof) += -eps + 0.5 * kn * delta;

        std::vector<double> rhs = right.apply(u_prev.coeffs());
        if (coeffs_.f) {
            auto b = assemble_load(*space_, [&](double x) { return coeffs_.f(th, x); });
            for (std::size_t i = 0; i < N; ++i) rhs[i] += kn * b[i];
        }
        if (coeffs_.g) rhs[bdof] += kn * coeffs_.g(th);

        try {
            left.factor();
        } catch (const std::runtime_error&) {
            throw std::runtime_error("step-size condition violated: singular step matrix at t=" +
                                     std::to_string(th));
        }
        return DofField<double>(*space_, left.solve(rhs));
    }

    double mass_norm(const DofField<double>& u) const {
        const auto Mu = mass_.apply(u.coeffs());
        double s = 0.0;
        for (std::size_t i = 0; i < Mu.size(); ++i) s += u.coeffs()[i] * Mu[i];
        return std::sqrt(std::max(0.0, s));
    }

    ParabolicHistory run(const DofField<double>& u0) const {
        ParabolicHistory hist;
        DofField<double> u = u0;
        hist.times.push_back(grid_.time(0));
        hist.l2_norms.push_back(mass_norm(u));
        hist.boundary_values.push_back(u.boundary_value());
        for (std::size_t n = 1; n <= grid_.steps(); ++n) {
            u = step(u, n);
            hist.times.push_back(grid_.time(n));
            hist.l2_norms.push_back(mass_norm(u));
            hist.boundary_values.push_back(u.boundary_value());
            hist.steps_completed = n;
        }
        return hist;
    }

private:
    const FeSpace* space_;
    ParabolicCoeffs coeffs_;
    TimeGrid grid_;
    BandedSystem<double> mass_;
    BandedSystem<double> stiffness_;
};

/// H1-type Crank-Nicolson-Galerkin stepper for the reactive case (eps > 0)
/// on C^1 Hermite cubics. The boundary condition is first rewritten with
/// the equation so that u_xx(t,1) appears, and the scheme pairs the time
/// derivative with the stiffness form B instead of the L2 inner product;
/// boundary data attach to chi'(1) and chi'(0).
class ReactiveCnContext {
public:
    ReactiveCnContext(const FeSpace& space, ParabolicCoeffs coeffs, TimeGrid grid)
        : space_(&space), coeffs_(std::move(coeffs)), grid_(std::move(grid)),
          mass_(assemble_mass<double>(space)), stiffness_(assemble_stiffness<double>(space)),
          bstar_(assemble_bstar<double>(space)) {
        if (space.family() != FeFamily::HermiteCubic || !space.constrained())
            throw std::invalid_argument("ReactiveCnContext: expects the constrained Hermite space");
        if (!coeffs_.beta_x || !coeffs_.f_x)
            throw std::invalid_argument("ReactiveCnContext: beta_x and f_x are required");
    }

    const FeSpace& space() const { return *space_; }
    const TimeGrid& grid() const { return grid_; }

    /// U^0 = R*_h u0 (the gamma*-projection initialization).
    template <typename U0, typename DU0, typename D2U0>
    DofField<double> init(U0&& u0, DU0&& du0, D2U0&& d2u0) const {
        return elliptic_project_star(*space_, std::forward<U0>(u0), std::forward<DU0>(du0),
                                     std::forward<D2U0>(d2u0));
    }

    DofField<double> step(const DofField<double>& u_prev, std::size_t n) const {
        const double th = grid_.t_half(n);
        const double kn = grid_.k(n);
        const double eps = coeffs_.eps(th);
        if (eps <= 0.0)
            throw std::invalid_argument("reactive step: requires eps(t) > 0 (got eps <= 0)");
        const double a = coeffs_.a(th);
        const double delta = coeffs_.delta(th);
        const double beta1 = coeffs_.beta(th, 1.0);
        const std::size_t N = space_->dof_count();
        const std::size_t vdof = space_->boundary_value_dof();
        const std::size_t ddof = space_->boundary_deriv_dof();
        const std::size_t d0dof = 0; // derivative DOF at x=0

        auto Wb = assemble_weighted_bform(*space_, [&](double x) { return coeffs_.beta(th, x); },
                                          [&](double x) { return coeffs_.beta_x(th, x); });

        // L(c) = (a/eps) c'(1) d - (delta/eps + beta(1)) c(1) d - a B* c + Wb c,
        // with d the chi'(1) selector; left = K - (k/2) L, right = K + (k/2) L.
        BandedSystem<double> left(N, 3, 3), right(N, 3, 3);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = (i > 3 ? i - 3 : 0); j <= std::min(N - 1, i + 3); ++j) {
                const double K = stiffness_.get(i, j);
                const double L = -a * bstar_.get(i, j) + Wb.get(i, j);
                left.at(i, j) = K - 0.5 * kn * L;
                right.at(i, j) = K + 0.5 * kn * L;
            }
        left.at(ddof, ddof) -= 0.5 * kn * (a / eps);
        right.at(ddof, ddof) += 0.5 * kn * (a / eps);
        left.at(ddof, vdof) -= 0.5 * kn * (-(delta / eps + beta1));
        right.at(ddof, vdof) += 0.5 * kn * (-(delta / eps + beta1));

        std::vector<double> rhs = right.apply(u_prev.coeffs());
        auto bf = assemble_load_grad(*space_, [&](double x) { return coeffs_.f_x(th, x); });
        for (std::size_t i = 0; i < N; ++i) rhs[i] += kn * bf[i];
        const double gv = coeffs_.g ? coeffs_.g(th) : 0.0;
        rhs[ddof] += kn * (-(gv / eps + coeffs_.f(th, 1.0)));
        rhs[d0dof] += kn * coeffs_.f(th, 0.0);

        try {
            left.factor();
        } catch (const std::runtime_error&) {
            throw std::runtime_error("step-size condition violated: singular step matrix at t=" +
                                     std::to_string(th));
        }
        return DofField<double>(*space_, left.solve(rhs));
    }

    double mass_norm(const DofField<double>& u) const {
        const auto Mu = mass_.apply(u.coeffs());
        double s = 0.0;
        for (std::size_t i = 0; i < Mu.size(); ++i) s += u.coeffs()[i] * Mu[i];
        return std::sqrt(std::max(0.0, s));
    }

    ParabolicHistory run(const DofField<double>& u0) const {
        ParabolicHistory hist;
        DofField<double> u = u0;
        hist.times.push_back(grid_.time(0));
        hist.l2_norms.push_back(mass_norm(u));
        hist.boundary_values.push_back(u.boundary_value());
        for (std::size_t n = 1; n <= grid_.steps(); ++n) {
            u = step(u, n);
            hist.times.push_back(grid_.time(n));
            hist.l2_norms.push_back(mass_norm(u));
            hist.boundary_values.push_back(u.boundary_value());
            hist.steps_completed = n;
        }
        return hist;
    }

private:
    const FeSpace* space_;
    ParabolicCoeffs coeffs_;
    TimeGrid grid_;
    BandedSystem<double> mass_;
    BandedSystem<double> stiffness_;
    BandedSystem<double> bstar_;
};

} // namespace paraxfem
