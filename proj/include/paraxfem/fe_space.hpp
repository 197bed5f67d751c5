#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mesh.hpp"
#include "quadrature.hpp"

namespace paraxfem {

enum class FeFamily { LagrangeLinear, HermiteCubic };

/// Essential boundary treatment at x=0. The solver spaces eliminate the
/// value DOF at x=0 (functions vanish there); the p-formulation space
/// keeps it, since its x=0 condition is natural.
enum class EssentialBc { ValueAtZero, None };

/// Values of one local shape function at a point: (value, d/dx, d2/dx2).
struct ShapeValue {
    double v, d1, d2;
};

/// Finite element space on a Mesh1D: continuous piecewise linears
/// (S_h, r=1) or C^1 Hermite cubics (r=3).
class FeSpace {
public:
    FeSpace(Mesh1D mesh, FeFamily family, EssentialBc bc = EssentialBc::ValueAtZero)
        : mesh_(std::move(mesh)), family_(family), bc_(bc) {}

    const Mesh1D& mesh() const { return mesh_; }
    FeFamily family() const { return family_; }
    EssentialBc essential_bc() const { return bc_; }
    bool constrained() const { return bc_ == EssentialBc::ValueAtZero; }

    std::size_t element_count() const { return mesh_.element_count(); }

    std::size_t dof_count() const {
        const std::size_t m = mesh_.element_count();
        if (family_ == FeFamily::LagrangeLinear) return constrained() ? m : m + 1;
        return constrained() ? 2 * m + 1 : 2 * m + 2;
    }

    std::size_t bandwidth() const {
        return family_ == FeFamily::LagrangeLinear ? 1 : 3;
    }

    std::size_t local_dof_count() const {
        return family_ == FeFamily::LagrangeLinear ? 2 : 4;
    }

    /// Global index of local DOF l on element e, or -1 if eliminated.
    long global_dof(std::size_t e, std::size_t l) const {
        if (family_ == FeFamily::LagrangeLinear) {
            const long base = static_cast<long>(e) + static_cast<long>(l);
            return constrained() ? base - 1 : base;
        }
        // Hermite local order: value-left, deriv-left, value-right, deriv-right.
        const long base = 2 * static_cast<long>(e) + static_cast<long>(l);
        return constrained() ? base - 1 : base;
    }

    /// Index of the value DOF at x=1.
    std::size_t boundary_value_dof() const { return dof_count() - (family_ == FeFamily::LagrangeLinear ? 1 : 2); }

    /// Index of the derivative DOF at x=1 (HermiteCubic only).
    std::size_t boundary_deriv_dof() const {
        if (family_ != FeFamily::HermiteCubic)
            throw std::logic_error("boundary_deriv_dof: no derivative DOF on linear elements");
        return dof_count() - 1;
    }

    /// Local shape function l at reference coordinate xi in element e.
    ShapeValue shape(std::size_t e, std::size_t l, double xi) const {
        const double h = mesh_.element_length(e);
        if (family_ == FeFamily::LagrangeLinear) {
            if (l == 0) return {1.0 - xi, -1.0 / h, 0.0};
            return {xi, 1.0 / h, 0.0};
        }
        const double x2 = xi * xi, x3 = x2 * xi;
        switch (l) {
            case 0: return {1.0 - 3.0 * x2 + 2.0 * x3, (-6.0 * xi + 6.0 * x2) / h, (-6.0 + 12.0 * xi) / (h * h)};
            case 1: return {h * (xi - 2.0 * x2 + x3), 1.0 - 4.0 * xi + 3.0 * x2, (-4.0 + 6.0 * xi) / h};
            case 2: return {3.0 * x2 - 2.0 * x3, (6.0 * xi - 6.0 * x2) / h, (6.0 - 12.0 * xi) / (h * h)};
            default: return {h * (x3 - x2), 3.0 * x2 - 2.0 * xi, (6.0 * xi - 2.0) / h};
        }
    }

    /// Default fixed assembly rule: 4-point Gauss for linears, 6-point
    /// for Hermite cubics.
    QuadratureRule assembly_rule() const {
        return gauss_legendre(family_ == FeFamily::LagrangeLinear ? 4 : 6);
    }

private:
    Mesh1D mesh_;
    FeFamily family_;
    EssentialBc bc_;
};

/// A finite-element function: coefficient vector over a space.
template <typename Scalar>
class DofField {
public:
    DofField(const FeSpace& space, std::vector<Scalar> coeffs)
        : space_(&space), c_(std::move(coeffs)) {
        if (c_.size() != space.dof_count())
            throw std::invalid_argument("DofField: coefficient count mismatch");
    }

    explicit DofField(const FeSpace& space)
        : space_(&space), c_(space.dof_count(), Scalar(0)) {}

    const FeSpace& space() const { return *space_; }
    const std::vector<Scalar>& coeffs() const { return c_; }
    std::vector<Scalar>& coeffs() { return c_; }

    Scalar value(double x) const { return eval(x, 0); }
    Scalar derivative(double x) const { return eval(x, 1); }

    /// Value at x=1 read off the boundary DOF.
    Scalar boundary_value() const { return c_[space_->boundary_value_dof()]; }

private:
    Scalar eval(double x, int deriv) const {
        const std::size_t e = space_->mesh().locate(x);
        const double h = space_->mesh().element_length(e);
        const double xi = (x - space_->mesh().element_left(e)) / h;
        Scalar s(0);
        for (std::size_t l = 0; l < space_->local_dof_count(); ++l) {
            const long g = space_->global_dof(e, l);
            if (g < 0) continue;
            const ShapeValue sv = space_->shape(e, l, xi);
            s += c_[static_cast<std::size_t>(g)] * (deriv == 0 ? sv.v : sv.d1);
        }
        return s;
    }

    const FeSpace* space_;
    std::vector<Scalar> c_;
};

/// (value, derivative) at x=1. The derivative is the DOF for Hermite
/// cubics and the last-element slope for linears.
template <typename Scalar>
std::pair<Scalar, Scalar> boundary_eval(const DofField<Scalar>& field) {
    const FeSpace& sp = field.space();
    const Scalar v = field.coeffs()[sp.boundary_value_dof()];
    Scalar d;
    if (sp.family() == FeFamily::HermiteCubic) {
        d = field.coeffs()[sp.boundary_deriv_dof()];
    } else {
        const std::size_t e = sp.element_count() - 1;
        const double h = sp.mesh().element_length(e);
        const long gl = sp.global_dof(e, 0);
        const Scalar left = gl < 0 ? Scalar(0) : field.coeffs()[static_cast<std::size_t>(gl)];
        d = (v - left) / h;
    }
    return {v, d};
}

/// Nodal interpolant. Hermite cubics also need the derivative callable.
template <typename Scalar, typename F, typename DF>
DofField<Scalar> interpolate(const FeSpace& space, F&& f, DF&& df) {
    std::vector<Scalar> c(space.dof_count(), Scalar(0));
    const Mesh1D& mesh = space.mesh();
    const bool con = space.constrained();
    if (space.family() == FeFamily::LagrangeLinear) {
        for (std::size_t m = con ? 1 : 0; m < mesh.node_count(); ++m)
            c[m - (con ? 1 : 0)] = f(mesh.node(m));
    } else {
        for (std::size_t m = 0; m < mesh.node_count(); ++m) {
            const long vdof = 2 * static_cast<long>(m) - (con ? 1 : 0);
            if (vdof >= 0) c[static_cast<std::size_t>(vdof)] = f(mesh.node(m));
            c[static_cast<std::size_t>(vdof + 1)] = df(mesh.node(m));
        }
    }
    return DofField<Scalar>(space, std::move(c));
}

template <typename Scalar, typename F>
DofField<Scalar> interpolate(const FeSpace& space, F&& f) {
    return interpolate<Scalar>(space, std::forward<F>(f), [](double) { return Scalar(0); });
}

namespace detail {
inline double abs2(double v) { return v * v; }
inline double abs2(const std::complex<double>& v) { return std::norm(v); }
} // namespace detail

/// L2 norm by element quadrature (exact for the piecewise polynomial).
template <typename Scalar>
double l2_norm(const DofField<Scalar>& u) {
    const FeSpace& sp = u.space();
    const QuadratureRule rule = sp.assembly_rule();
    double acc = 0.0;
    for (std::size_t e = 0; e < sp.element_count(); ++e) {
        const double h = sp.mesh().element_length(e);
        const double xl = sp.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Scalar v = u.value(xl + h * rule.points[q]);
            acc += rule.weights[q] * h * detail::abs2(v);
        }
    }
    return std::sqrt(acc);
}

/// H1 seminorm |u|_1 = ||u'||.
template <typename Scalar>
double h1_seminorm(const DofField<Scalar>& u) {
    const FeSpace& sp = u.space();
    const QuadratureRule rule = sp.assembly_rule();
    double acc = 0.0;
    for (std::size_t e = 0; e < sp.element_count(); ++e) {
        const double h = sp.mesh().element_length(e);
        const double xl = sp.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Scalar v = u.derivative(xl + h * rule.points[q]);
            acc += rule.weights[q] * h * detail::abs2(v);
        }
    }
    return std::sqrt(acc);
}

/// ||u - f||_L2 against an exact callable, with a high-order fixed rule.
template <typename Scalar, typename F>
double l2_error(const DofField<Scalar>& u, F&& f, int qpoints = 12) {
    const FeSpace& sp = u.space();
    const QuadratureRule rule = gauss_legendre(qpoints);
    double acc = 0.0;
    for (std::size_t e = 0; e < sp.element_count(); ++e) {
        const double h = sp.mesh().element_length(e);
        const double xl = sp.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double x = xl + h * rule.points[q];
            acc += rule.weights[q] * h * detail::abs2(u.value(x) - Scalar(f(x)));
        }
    }
    return std::sqrt(acc);
}

/// |u - f|_1 against an exact derivative callable.
template <typename Scalar, typename DF>
double h1_semi_error(const DofField<Scalar>& u, DF&& df, int qpoints = 12) {
    const FeSpace& sp = u.space();
    const QuadratureRule rule = gauss_legendre(qpoints);
    double acc = 0.0;
    for (std::size_t e = 0; e < sp.element_count(); ++e) {
        const double h = sp.mesh().element_length(e);
        const double xl = sp.mesh().element_left(e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double x = xl + h * rule.points[q];
            acc += rule.weights[q] * h * detail::abs2(u.derivative(x) - Scalar(df(x)));
        }
    }
    return std::sqrt(acc);
}

/// Discrete nodal l2 error sqrt(h_max * sum_j |u(x_j) - f(x_j)|^2).
template <typename Scalar, typename F>
double nodal_l2_error(const DofField<Scalar>& u, F&& f) {
    const Mesh1D& mesh = u.space().mesh();
    double acc = 0.0;
    for (std::size_t m = 0; m < mesh.node_count(); ++m) {
        const double x = mesh.node(m);
        acc += detail::abs2(u.value(x) - Scalar(f(x)));
    }
    return std::sqrt(mesh.h_max() * acc);
}

} // namespace paraxfem
