#pragma once

#include <cmath>
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
#include "bottom_profile.hpp"
#include "fe_space.hpp"
#include "time_grid.hpp"

namespace paraxfem {

/// Stabilizing-phase coefficients of the depth-differentiated formulation.
/// zeta = (i/2)(sigma - 1) s_dot s x^2 vanishes on upsloping bottoms; on
/// downsloping ones sigma = 2(1 + s_dot^2)/s_dot^2 + eps_sigma.
class ZetaCoefficients {
public:
    ZetaCoefficients(BottomProfile profile,
                     std::function<complexd(double, double)> gamma,
                     std::function<complexd(double, double)> gamma_y,
                     std::function<complexd(double)> g, double eps_sigma = 0.1)
        : profile_(std::move(profile)), gamma_(std::move(gamma)),
          gamma_y_(std::move(gamma_y)), g_(std::move(g)), eps_sigma_(eps_sigma) {
        if (!(eps_sigma_ > 0.0))
            throw std::invalid_argument("ZetaCoefficients: eps_sigma must be positive");
        if (!g_) g_ = [](double) { return complexd(0.0); };
        gamma_zero_ = !gamma_;
        if (!gamma_) {
            gamma_ = [](double, double) { return complexd(0.0); };
            gamma_y_ = [](double, double) { return complexd(0.0); };
        } else if (!gamma_y_) {
            throw std::invalid_argument("ZetaCoefficients: gamma_y required with a nonzero gamma");
        }
    }

    const BottomProfile& profile() const { return profile_; }
    double eps_sigma() const { return eps_sigma_; }

    double sigma(double t) const {
        const double sd = sdot_checked(t);
        if (sd < 0.0) return 1.0;
        return 2.0 * (1.0 + sd * sd) / (sd * sd) + eps_sigma_;
    }

    /// q = (sigma - 1) s_dot s; zeta = (i/2) q x^2.
    double q(double t) const {
        const double sd = sdot_checked(t);
        if (sd < 0.0) return 0.0;
        return (sigma(t) - 1.0) * sd * profile_.s(t);
    }

    double q_dot(double t) const {
        const double sd = sdot_checked(t);
        if (sd < 0.0) return 0.0;
        const double s = profile_.s(t), sdd = profile_.s_ddot(t);
        // d/dt [ (2/sd + (1+eps) sd) s ] with eps = eps_sigma.
        return 2.0 - 2.0 * s * sdd / (sd * sd) + (1.0 + eps_sigma_) * (sdd * s + sd * sd);
    }

    complexd zeta(double t, double x) const { return complexd(0.0, 0.5 * q(t) * x * x); }
    complexd zeta_x(double t, double x) const { return complexd(0.0, q(t) * x); }
    complexd zeta_xx(double t) const { return complexd(0.0, q(t)); }
    complexd zeta_t(double t, double x) const { return complexd(0.0, 0.5 * q_dot(t) * x * x); }

    double A(double t) const {
        const double s = profile_.s(t);
        return 2.0 * s * s;
    }

    /// B(t,x) = x (s_dot/s) sigma, real-valued; B_x = B(t,1).
    double B(double t, double x) const {
        return x * (profile_.s_dot(t) / profile_.s(t)) * sigma(t);
    }
    double B1(double t) const { return B(t, 1.0); }

    complexd G(double t, double x) const {
        const double s = profile_.s(t), sd = profile_.s_dot(t);
        const double qq = q(t);
        const double bracket = 0.5 * q_dot(t) - (sd / s) * qq - qq * qq / (2.0 * s * s);
        return complexd(qq / (2.0 * s * s), x * x * bracket) + complexd(0, 1) * gamma_(t, x * s);
    }

    complexd G_x(double t, double x) const {
        const double s = profile_.s(t), sd = profile_.s_dot(t);
        const double qq = q(t);
        const double bracket = 0.5 * q_dot(t) - (sd / s) * qq - qq * qq / (2.0 * s * s);
        return complexd(0.0, 2.0 * x * bracket) + complexd(0, 1) * gamma_y_(t, x * s) * s;
    }

    double R1(double t) const {
        const double sd = sdot_checked(t);
        return sd * profile_.s(t) / (1.0 + sd * sd);
    }

    complexd R2(double t) const {
        return (g_(t) - zeta_t(t, 1.0)) * R1(t) + zeta_x(t, 1.0);
    }

    /// True when the cumulative volume coupling (G_x theta, phi) vanishes:
    /// zero gamma and an upsloping bottom.
    bool gx_vanishes(double t) const { return gamma_zero_ && profile_.s_dot(t) < 0.0; }

private:
    double sdot_checked(double t) const {
        profile_.check_smooth_at(t);
        const double sd = profile_.s_dot(t);
        if (sd == 0.0)
            throw std::domain_error(
                "ZetaCoefficients: s_dot(t) = 0 at t=" + std::to_string(t) +
                "; the formulation requires a strictly monotone bottom");
        return sd;
    }

    BottomProfile profile_;
    std::function<complexd(double, double)> gamma_;
    std::function<complexd(double, double)> gamma_y_;
    std::function<complexd(double)> g_;
    double eps_sigma_;
    bool gamma_zero_ = false;
};

/// Initial data p0 of the depth-differentiated problem, interpolated into
/// the free linear space (the x=0 condition is natural here). Uses
/// int_0^x w0'(xi s0) dxi = w0(x s0)/s0.
template <typename W0, typename DW0>
DofField<complexd> build_p_initial(const FeSpace& space, const ZetaCoefficients& zc,
                                   W0&& w0, DW0&& w0_prime) {
    if (space.constrained() || space.family() != FeFamily::LagrangeLinear)
        throw std::invalid_argument("build_p_initial: expects the free linear space");
    const double s0 = zc.profile().s(0.0);
    return interpolate<complexd>(space, [&](double x) {
        const complexd inner = complexd(w0_prime(x * s0)) + zc.zeta_x(0.0, x) * complexd(w0(x * s0)) / s0;
        return s0 * std::exp(zc.zeta(0.0, x)) * inner;
    });
}

/// Cumulative integral theta(x) = int_0^x p of a piecewise-linear field;
/// elementwise trapezoid is exact.
class CumulativeIntegral {
public:
    explicit CumulativeIntegral(const DofField<complexd>& p)
        : space_(&p.space()), nodal_(p.coeffs()) {
        // Free linear space: dof index == node index.
        const Mesh1D& mesh = space_->mesh();
        prefix_.assign(mesh.node_count(), complexd(0.0));
        for (std::size_t e = 0; e < mesh.element_count(); ++e)
            prefix_[e + 1] = prefix_[e] + 0.5 * mesh.element_length(e) * (nodal_[e] + nodal_[e + 1]);
    }

    complexd at(double x) const {
        const Mesh1D& mesh = space_->mesh();
        const std::size_t e = mesh.locate(x);
        const double h = mesh.element_length(e);
        const double xi = (x - mesh.element_left(e)) / h;
        const complexd a = nodal_[e], b = nodal_[e + 1];
        return prefix_[e] + h * (a * xi + 0.5 * (b - a) * xi * xi);
    }

    complexd at_one() const { return prefix_.back(); }

private:
    const FeSpace* space_;
    std::vector<complexd> nodal_;
    std::vector<complexd> prefix_;
};

struct PFormHistory {
    std::vector<double> times;
    std::vector<double> l2_norms;
    std::vector<std::pair<std::size_t, DofField<complexd>>> snapshots;
    bool flagged_unstable = false;
    std::size_t steps_completed = 0;
};

/// Crank-Nicolson stepper for the depth-differentiated problem. The step
/// matrix is banded plus a rank-one boundary coupling through theta(1),
/// solved by Sherman-Morrison on the banded factorization. When the
/// cumulative volume coupling (G_x theta, phi) is active, the operator is
/// lower-triangular dense but separable away from the diagonal
/// (theta of a basis function is constant beyond its support); prefix
/// unknowns y_m = sum_{j<=m} c_j x_j turn it into a banded system of
/// doubled size, keeping the step cost linear in the DOF count.
class PStepContext {
public:
    PStepContext(const FeSpace& space, ZetaCoefficients zc, TimeGrid grid)
        : space_(&space), zc_(std::move(zc)), grid_(std::move(grid)),
          mass_(assemble_mass<double>(space)), stiffness_(assemble_stiffness<double>(space)),
          wvec_(basis_integrals(space)) {
        if (space.constrained() || space.family() != FeFamily::LagrangeLinear)
            throw std::invalid_argument("PStepContext: expects the free linear space");
    }

    const FeSpace& space() const { return *space_; }
    const TimeGrid& grid() const { return grid_; }
    const ZetaCoefficients& zc() const { return zc_; }

    /// Integral of the basis function phi_j up to x (piecewise quadratic).
    double theta_basis(std::size_t j, double x) const {
        const Mesh1D& mesh = space_->mesh();
        double acc = 0.0;
        if (j > 0) {
            const double xl = mesh.node(j - 1), h = mesh.node(j) - xl;
            if (x >= mesh.node(j)) acc += 0.5 * h;
            else if (x > xl) acc += (x - xl) * (x - xl) / (2.0 * h);
        }
        if (j < mesh.node_count() - 1) {
            const double xj = mesh.node(j), h = mesh.node(j + 1) - xj;
            if (x >= mesh.node(j + 1)) acc += 0.5 * h;
            else if (x > xj) {
                const double d = x - xj;
                acc += d - d * d / (2.0 * h);
            }
        }
        return acc;
    }

    DofField<complexd> step(const DofField<complexd>& p_prev, std::size_t n) const {
        const double th = grid_.t_half(n);
        const double kn = grid_.k(n);
        check_monotone(n);

        const std::size_t N = space_->dof_count();
        const std::size_t bdof = space_->boundary_value_dof();
        const complexd iu(0.0, 1.0);
        const double A = zc_.A(th);
        const double B1 = zc_.B1(th);
        const double R1 = zc_.R1(th);
        if (std::abs(1.0 - R1 * B1) < 1e-10)
            throw std::runtime_error("PStepContext: 1 - R1 B(t,1) vanishes at t=" + std::to_string(th));
        const double alpha = (1.0 - R1 * B1) / R1;
        const complexd gamma_b = (R1 * zc_.G(th, 1.0) + zc_.R2(th)) / R1;

        // Banded part of L: -(i/A) K + (B p_x, phi) + ((B_x + G) p, phi).
        auto conv = assemble_convection(*space_, [&](double x) { return zc_.B(th, x); });
        auto wmass = assemble_weighted_mass(
            *space_, [&](double x) { return complexd(B1, 0.0) + zc_.G(th, x); });
        BandedSystem<complexd> left(N, 1, 1), right(N, 1, 1);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = (i > 0 ? i - 1 : 0); j <= std::min(N - 1, i + 1); ++j) {
                const complexd L = -(iu / A) * stiffness_.get(i, j) + conv.get(i, j) + wmass.get(i, j);
                left.at(i, j) = mass_.get(i, j) - 0.5 * kn * L;
                right.at(i, j) = mass_.get(i, j) + 0.5 * kn * L;
            }

        // Rank-one boundary row: [alpha p(1) - gamma_b theta(1)] conj(phi(1)).
        std::vector<complexd> r(N);
        for (std::size_t j = 0; j < N; ++j) r[j] = -gamma_b * wvec_[j];
        r[bdof] += alpha;

        // Right-hand side: (M + (k/2) L) c + (k/2)[rank-one + cumulative].
        std::vector<complexd> rhs = right.apply(p_prev.coeffs());
        {
            complexd rc(0.0);
            for (std::size_t j = 0; j < N; ++j) rc += r[j] * p_prev.coeffs()[j];
            rhs[bdof] += 0.5 * kn * rc;
        }
        const bool dense_needed = !zc_.gx_vanishes(th);
        if (dense_needed) {
            auto dterm = cumulative_load(p_prev, th);
            for (std::size_t i = 0; i < N; ++i) rhs[i] += 0.5 * kn * dterm[i];
        }

        if (!dense_needed) {
            left.factor();
            std::vector<complexd> u(N, complexd(0.0));
            u[bdof] = -0.5 * kn;
            return DofField<complexd>(*space_, solve_rank_one_update(left, u, r, rhs));
        }

        // Cumulative-coupling path. Split D_{lj} = (G_x Theta phi_j, phi_l)
        // into d_l c_j for j <= l-2 (Theta phi_j is constant there) plus a
        // tridiagonal remainder; eliminate the separable part with prefix
        // unknowns y_m interleaved with x.
        const QuadratureRule rule = space_->assembly_rule();
        std::vector<complexd> dvec(N, complexd(0.0)); // d_l = int G_x phi_l
        for (std::size_t e = 0; e < space_->element_count(); ++e) {
            const double h = space_->mesh().element_length(e);
            const double xl = space_->mesh().element_left(e);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = xl + h * rule.points[q];
                const complexd gw = zc_.G_x(th, x) * rule.weights[q] * h;
                for (std::size_t l = 0; l < 2; ++l)
                    dvec[static_cast<std::size_t>(space_->global_dof(e, l))] +=
                        gw * space_->shape(e, l, rule.points[q]).v;
            }
        }

        BandedSystem<complexd> aug(2 * N, 3, 2);
        for (std::size_t l = 0; l < N; ++l) {
            const std::size_t row = 2 * l;
            for (std::size_t j = (l > 0 ? l - 1 : 0); j <= std::min(N - 1, l + 1); ++j) {
                complexd v = left.get(l, j);
                // Tridiagonal remainder of the cumulative coupling.
                complexd e_lj(0.0);
                for (std::size_t e = (l > 0 ? l - 1 : 0); e <= std::min(space_->element_count() - 1, l); ++e) {
                    const double h = space_->mesh().element_length(e);
                    const double xl = space_->mesh().element_left(e);
                    for (std::size_t q = 0; q < rule.size(); ++q) {
                        const double x = xl + h * rule.points[q];
                        double phi_l = 0.0;
                        for (std::size_t lc = 0; lc < 2; ++lc)
                            if (static_cast<std::size_t>(space_->global_dof(e, lc)) == l)
                                phi_l = space_->shape(e, lc, rule.points[q]).v;
                        e_lj += zc_.G_x(th, x) * phi_l * theta_basis(j, x) * rule.weights[q] * h;
                    }
                }
                v -= 0.5 * kn * e_lj;
                aug.at(row, 2 * j) = v;
            }
            if (l >= 2) aug.at(row, 2 * (l - 2) + 1) = -0.5 * kn * dvec[l];
            const std::size_t yrow = 2 * l + 1;
            aug.at(yrow, yrow) = complexd(1.0);
            if (l >= 1) aug.at(yrow, yrow - 2) = complexd(-1.0);
            aug.at(yrow, 2 * l) = complexd(-wvec_[l]);
        }
        std::vector<complexd> rhs_aug(2 * N, complexd(0.0));
        for (std::size_t l = 0; l < N; ++l) rhs_aug[2 * l] = rhs[l];
        std::vector<complexd> u(2 * N, complexd(0.0)), v(2 * N, complexd(0.0));
        u[2 * bdof] = -0.5 * kn;
        for (std::size_t j = 0; j < N; ++j) v[2 * j] = r[j];
        aug.factor();
        auto z = solve_rank_one_update(aug, u, v, rhs_aug);
        std::vector<complexd> x(N);
        for (std::size_t l = 0; l < N; ++l) x[l] = z[2 * l];
        return DofField<complexd>(*space_, x);
    }

    double mass_norm(const DofField<complexd>& p) const {
        const auto& c = p.coeffs();
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

    PFormHistory run(const DofField<complexd>& p0,
                     const std::set<std::size_t>& snapshot_steps = {},
                     double instability_factor = 1e6) const {
        PFormHistory hist;
        DofField<complexd> p = p0;
        const double norm0 = mass_norm(p);
        hist.times.push_back(grid_.time(0));
        hist.l2_norms.push_back(norm0);
        if (snapshot_steps.count(0)) hist.snapshots.emplace_back(0, p);
        for (std::size_t n = 1; n <= grid_.steps(); ++n) {
            p = step(p, n);
            const double norm = mass_norm(p);
            hist.times.push_back(grid_.time(n));
            hist.l2_norms.push_back(norm);
            if (snapshot_steps.count(n)) hist.snapshots.emplace_back(n, p);
            hist.steps_completed = n;
            if (norm0 > 0.0 && norm > instability_factor * norm0) {
                hist.flagged_unstable = true;
                break;
            }
        }
        return hist;
    }

    /// w(t, x s(t)) recovered from the p-field: exp(-zeta) theta_h(t,x).
    complexd recover_w(const DofField<complexd>& p, double t, double x) const {
        CumulativeIntegral theta(p);
        return std::exp(-zc_.zeta(t, x)) * theta.at(x);
    }

private:
    void check_monotone(std::size_t n) const {
        const BottomProfile& prof = zc_.profile();
        const double s0 = prof.s_dot(grid_.time(n - 1));
        const double sm = prof.s_dot(grid_.t_half(n));
        const double s1 = prof.s_dot(grid_.time(n));
        if (s0 == 0.0 || sm == 0.0 || s1 == 0.0 || (s0 > 0) != (sm > 0) || (sm > 0) != (s1 > 0))
            throw std::domain_error(
                "PStepContext: bottom slope must keep one sign across step " + std::to_string(n));
    }

    /// Entries (G_x theta_p, phi_l) for a given field, used on the
    /// right-hand side without forming the dense block.
    std::vector<complexd> cumulative_load(const DofField<complexd>& p, double th) const {
        CumulativeIntegral theta(p);
        const QuadratureRule rule = space_->assembly_rule();
        const std::size_t N = space_->dof_count();
        std::vector<complexd> out(N, complexd(0.0));
        for (std::size_t e = 0; e < space_->element_count(); ++e) {
            const double h = space_->mesh().element_length(e);
            const double xl = space_->mesh().element_left(e);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = xl + h * rule.points[q];
                const complexd val = zc_.G_x(th, x) * theta.at(x) * rule.weights[q] * h;
                for (std::size_t l = 0; l < 2; ++l) {
                    const std::size_t gi = static_cast<std::size_t>(space_->global_dof(e, l));
                    out[gi] += val * space_->shape(e, l, rule.points[q]).v;
                }
            }
        }
        return out;
    }

    const FeSpace* space_;
    ZetaCoefficients zc_;
    TimeGrid grid_;
    BandedSystem<double> mass_;
    BandedSystem<double> stiffness_;
    std::vector<double> wvec_;
};

} // namespace paraxfem
