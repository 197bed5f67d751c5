#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace paraxfem {

/// Banded matrix over real or complex scalars with in-place LU.
///
/// Assembly writes into the band (kl, ku); factorization copies into
/// LAPACK-style extended storage (kl extra superdiagonals for pivoting
/// fill-in), so the assembled matrix remains available for products.
template <typename Scalar>
class BandedSystem {
public:
    enum class State { Unfactored, Lu };

    BandedSystem(std::size_t order, std::size_t lower_bw, std::size_t upper_bw)
        : n_(order), kl_(lower_bw), ku_(upper_bw),
          band_((kl_ + ku_ + 1) * n_, Scalar(0)) {
        if (order == 0) throw std::invalid_argument("BandedSystem: empty system");
    }

    std::size_t order() const { return n_; }
    std::size_t lower_bw() const { return kl_; }
    std::size_t upper_bw() const { return ku_; }
    State state() const { return state_; }

    bool in_band(std::size_t i, std::size_t j) const {
        return (j <= i + ku_) && (i <= j + kl_);
    }

    /// Mutable access to an in-band entry.
    Scalar& at(std::size_t i, std::size_t j) {
        if (!in_band(i, j))
            throw std::out_of_range("BandedSystem::at outside band");
        return band_[j * (kl_ + ku_ + 1) + (ku_ + i - j)];
    }

    /// Entry value; zero outside the band.
    Scalar get(std::size_t i, std::size_t j) const {
        if (i >= n_ || j >= n_) throw std::out_of_range("BandedSystem::get");
        if (!in_band(i, j)) return Scalar(0);
        return band_[j * (kl_ + ku_ + 1) + (ku_ + i - j)];
    }

    void add(std::size_t i, std::size_t j, Scalar v) { at(i, j) += v; }

    void set_zero() {
        std::fill(band_.begin(), band_.end(), Scalar(0));
        state_ = State::Unfactored;
        fact_.clear();
        pivots_.clear();
    }

    /// y = A x using the assembled band.
    std::vector<Scalar> apply(const std::vector<Scalar>& x) const {
        if (x.size() != n_) throw std::invalid_argument("BandedSystem::apply size");
        std::vector<Scalar> y(n_, Scalar(0));
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t i0 = (j > ku_) ? j - ku_ : 0;
            const std::size_t i1 = std::min(n_ - 1, j + kl_);
            for (std::size_t i = i0; i <= i1; ++i)
                y[i] += band_[j * (kl_ + ku_ + 1) + (ku_ + i - j)] * x[j];
        }
        return y;
    }

    /// LU with partial pivoting (band grows by kl superdiagonals).
    /// Throws on a zero pivot, which signals a singular step matrix.
    void factor() { factor_impl(true); }

    /// LU without pivoting; intended for symmetric positive definite forms.
    void factor_nopivot() { factor_impl(false); }

    /// Solve A x = b after factor()/factor_nopivot().
    std::vector<Scalar> solve(const std::vector<Scalar>& b) const {
        if (state_ != State::Lu)
            throw std::logic_error("BandedSystem::solve before factorization");
        if (b.size() != n_) throw std::invalid_argument("BandedSystem::solve size");
        const std::size_t kuf = ku_ + kl_; // fill-in band
        const std::size_t ld = 2 * kl_ + ku_ + 1;
        std::vector<Scalar> x = b;
        // L solve (unit diagonal, multipliers stored below the diagonal).
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t p = pivots_[j];
            if (p != j) std::swap(x[j], x[p]);
            const std::size_t i1 = std::min(n_ - 1, j + kl_);
            for (std::size_t i = j + 1; i <= i1; ++i)
                x[i] -= fact_[j * ld + (kuf + i - j)] * x[j];
        }
        // U solve.
        for (std::size_t jj = n_; jj-- > 0;) {
            x[jj] /= fact_[jj * ld + kuf];
            const std::size_t i0 = (jj > kuf) ? jj - kuf : 0;
            for (std::size_t i = i0; i < jj; ++i)
                x[i] -= fact_[jj * ld + (kuf + i - jj)] * x[jj];
        }
        return x;
    }

private:
    void factor_impl(bool pivot) {
        const std::size_t kuf = ku_ + kl_;
        const std::size_t ld = 2 * kl_ + ku_ + 1;
        fact_.assign(ld * n_, Scalar(0));
        pivots_.assign(n_, 0);
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t i0 = (j > ku_) ? j - ku_ : 0;
            const std::size_t i1 = std::min(n_ - 1, j + kl_);
            for (std::size_t i = i0; i <= i1; ++i)
                fact_[j * ld + (kuf + i - j)] = band_[j * (kl_ + ku_ + 1) + (ku_ + i - j)];
        }
        auto F = [&](std::size_t i, std::size_t j) -> Scalar& {
            return fact_[j * ld + (kuf + i - j)];
        };
        for (std::size_t j = 0; j < n_; ++j) {
            const std::size_t km = std::min(kl_, n_ - 1 - j);
            std::size_t p = j;
            if (pivot) {
                double best = std::abs(F(j, j));
                for (std::size_t i = 1; i <= km; ++i) {
                    const double v = std::abs(F(j + i, j));
                    if (v > best) { best = v; p = j + i; }
                }
            }
            pivots_[j] = p;
            if (std::abs(F(p, j)) == 0.0) {
                state_ = State::Unfactored;
                throw std::runtime_error("BandedSystem: singular matrix (zero pivot)");
            }
            const std::size_t ju = std::min(n_ - 1, j + kuf);
            if (p != j)
                for (std::size_t c = j; c <= ju; ++c) std::swap(F(j, c), F(p, c));
            const Scalar piv = F(j, j);
            for (std::size_t i = j + 1; i <= j + km && km > 0; ++i) F(i, j) /= piv;
            for (std::size_t c = j + 1; c <= ju; ++c) {
                const Scalar ujc = F(j, c);
                if (ujc == Scalar(0)) continue;
                for (std::size_t i = j + 1; i <= j + km && km > 0; ++i)
                    F(i, c) -= F(i, j) * ujc;
            }
        }
        state_ = State::Lu;
    }

    std::size_t n_, kl_, ku_;
    std::vector<Scalar> band_;
    std::vector<Scalar> fact_;
    std::vector<std::size_t> pivots_;
    State state_ = State::Unfactored;
};

/// Solve (A + u v^T) x = b via Sherman-Morrison, with A already factored.
/// The product v^T x carries no conjugation.
template <typename Scalar>
std::vector<Scalar> solve_rank_one_update(const BandedSystem<Scalar>& A,
                                          const std::vector<Scalar>& u,
                                          const std::vector<Scalar>& v,
                                          const std::vector<Scalar>& b) {
    std::vector<Scalar> x1 = A.solve(b);
    std::vector<Scalar> x2 = A.solve(u);
    Scalar vx1(0), vx2(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        vx1 += v[i] * x1[i];
        vx2 += v[i] * x2[i];
    }
    const Scalar denom = Scalar(1) + vx2;
    if (std::abs(denom) == 0.0)
        throw std::runtime_error("solve_rank_one_update: singular update");
    const Scalar scale = vx1 / denom;
    for (std::size_t i = 0; i < x1.size(); ++i) x1[i] -= scale * x2[i];
    return x1;
}

} // namespace paraxfem
