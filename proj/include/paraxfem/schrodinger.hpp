#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acoustics.hpp"
#include "assembly.hpp"
#include "banded.hpp"
#include "fe_space.hpp"
#include "projection.hpp"
#include "time_grid.hpp"

namespace paraxfem {

/// Bottom boundary treatment: the dynamical Neumann condition keeps the
/// rank-one boundary coupling; the Abrahamsson-Kreiss condition drops it.
enum class BoundaryMode { NeumannDynamical, AbrahamssonKreiss };

/// Per-run record: scalar monitors every step, field snapshots on request.
struct FieldHistory {
    std::vector<double> times;
    std::vector<double> l2_norms;
    std::vector<complexd> boundary_values;
    std::vector<std::pair<std::size_t, DofField<complexd>>> snapshots;
    std::vector<std::string> warnings;
    bool flagged_unstable = false;
    std::size_t steps_completed = 0;
};

/// Crank-Nicolson-Galerkin stepper for the strip-transformed Schrodinger
/// problems, with variable step lengths and half-step coefficients.
class CnStepContext {
public:
    CnStepContext(const FeSpace& space, CoefficientSet coeffs, TimeGrid grid,
                  BoundaryMode mode)
        : space_(&space), coeffs_(std::move(coeffs)), grid_(std::move(grid)), mode_(mode),
          mass_(assemble_mass<double>(space)), stiffness_(assemble_stiffness<double>(space)) {
        if (space.family() != FeFamily::LagrangeLinear || !space.constrained())
            throw std::invalid_argument("CnStepContext: expects the constrained linear space");
    }

    const FeSpace& space() const { return *space_; }
    const TimeGrid& grid() const { return grid_; }
    const CoefficientSet& coeffs() const { return coeffs_; }
    BoundaryMode mode() const { return mode_; }

    /// U^0 = R_h u0 (the elliptic projection initialization).
    template <typename U0, typename DU0>
    DofField<complexd> init_elliptic(U0&& u0, DU0&& du0) const {
        return elliptic_project(*space_, std::forward<U0>(u0), std::forward<DU0>(du0));
    }

    /// U^0 = P_h u0, the alternative initialization for the AK problem.
    template <typename U0>
    DofField<complexd> init_l2(U0&& u0) const {
        return l2_project(*space_, std::forward<U0>(u0));
    }

    /// One Crank-Nicolson step U^{n-1} -> U^n, n in 1..N.
    DofField<complexd> step(const DofField<complexd>& u_prev, std::size_t n) const {
        if (n < 1 || n > grid_.steps())
            throw std::out_of_range("CnStepContext::step: step index");
        const double th = grid_.t_half(n);
        const double kn = grid_.k(n);
        const std::size_t N = space_->dof_count();
        const std::size_t bdof = space_->boundary_value_dof();
        const complexd iu(0.0, 1.0);

        const double a = coeffs_.a(th);
        auto W = assemble_weighted_mass(*space_, [&](double x) { return coeffs_.beta(th, x); });

        // Left grows +(k/2)(i a B - i W - boundary), right mirrors with -(k/2).
        BandedSystem<complexd> left(N, 1, 1), right(N, 1, 1);
        for (std::size_t i = 0; i < N; ++i) {
            const std::size_t j0 = (i > 0) ? i - 1 : 0;
            const std::size_t j1 = std::min(N - 1, i + 1);
            for (std::size_t j = j0; j <= j1; ++j) {
                const complexd m(mass_.get(i, j), 0.0);
                const complexd half = 0.5 * kn *
                    (iu * a * stiffness_.get(i, j) - iu * W.get(i, j));
                left.at(i, j) = m + half;
                right.at(i, j) = m - half;
            }
        }
        if (mode_ == BoundaryMode::NeumannDynamical) {
            const double mu = coeffs_.mu(th);
            const double S = coeffs_.S(th);
            const complexd G = coeffs_.G(th);
            const complexd dyn = iu * a * mu * S;
            const complexd amp = 0.5 * kn * iu * a * mu * G;
            left.at(bdof, bdof) += -dyn - amp;
            right.at(bdof, bdof) += -dyn + amp;
        }

        std::vector<complexd> rhs = right.apply(u_prev.coeffs());
        if (coeffs_.f) {
            auto b = assemble_load(*space_, [&](double x) { return coeffs_.f(th, x); });
            for (std::size_t i = 0; i < N; ++i) rhs[i] += kn * b[i];
        }
        if (coeffs_.f1) {
            // Boundary flux forcing enters as +i a f1 conj(chi(1)), matching
            // the homogeneous boundary terms of the weak form.
            rhs[bdof] += kn * iu * a * coeffs_.f1(th);
        }

        try {
            left.factor();
        } catch (const std::runtime_error&) {
            throw std::runtime_error(
                "step-size condition violated: singular step matrix at t=" +
                std::to_string(th) + "; reduce the time step (or k/h)");
        }
        return DofField<complexd>(*space_, left.solve(rhs));
    }

    /// L2 norm through the cached (real) mass matrix.
    double mass_norm(const DofField<complexd>& u) const {
        const auto& c = u.coeffs();
        const std::size_t N = c.size();
        double s = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            complexd mi(0.0);
            for (std::size_t j = (i > 0 ? i - 1 : 0); j <= std::min(N - 1, i + 1); ++j)
                mi += mass_.get(i, j) * c[j];
            s += (std::conj(c[i]) * mi).real();
        }
        return std::sqrt(std::max(0.0, s));
    }

    /// Run all steps, recording per-step monitors. A run whose norm exceeds
    /// instability_factor times the initial norm stops early, flagged.
    FieldHistory run(const DofField<complexd>& u0,
                     const std::set<std::size_t>& snapshot_steps = {},
                     double instability_factor = 1e6) const {
        FieldHistory hist;
        const std::size_t N = grid_.steps();
        hist.times.reserve(N + 1);
        hist.l2_norms.reserve(N + 1);
        hist.boundary_values.reserve(N + 1);

        if (mode_ == BoundaryMode::NeumannDynamical) {
            bool down = false;
            for (std::size_t n = 1; n <= N && !down; ++n)
                if (coeffs_.mu(grid_.t_half(n)) > 0.0) down = true;
            if (down)
                hist.warnings.push_back(
                    "downsloping bottom: the dynamical-boundary scheme is analyzed "
                    "only for s_dot <= 0");
        }

        DofField<complexd> u = u0;
        const double norm0 = mass_norm(u);
        hist.times.push_back(grid_.time(0));
        hist.l2_norms.push_back(norm0);
        hist.boundary_values.push_back(u.boundary_value());
        if (snapshot_steps.count(0)) hist.snapshots.emplace_back(0, u);

        for (std::size_t n = 1; n <= N; ++n) {
            try {
                u = step(u, n);
            } catch (const std::exception& e) {
                throw std::runtime_error("run: step " + std::to_string(n) + ": " + e.what());
            }
            const double norm = mass_norm(u);
            hist.times.push_back(grid_.time(n));
            hist.l2_norms.push_back(norm);
            hist.boundary_values.push_back(u.boundary_value());
            if (snapshot_steps.count(n)) hist.snapshots.emplace_back(n, u);
            hist.steps_completed = n;
            if (norm0 > 0.0 && norm > instability_factor * norm0) {
                hist.flagged_unstable = true;
                break;
            }
        }
        return hist;
    }

private:
    const FeSpace* space_;
    CoefficientSet coeffs_;
    TimeGrid grid_;
    BoundaryMode mode_;
    BandedSystem<double> mass_;
    BandedSystem<double> stiffness_;
};

} // namespace paraxfem
