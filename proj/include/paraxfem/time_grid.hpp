#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace paraxfem {

/// Partition 0 = t^0 < t^1 < ... < t^N = T with variable step lengths.
class TimeGrid {
public:
    explicit TimeGrid(std::vector<double> times) : t_(std::move(times)) {
        if (t_.size() < 1 || t_.front() != 0.0)
            throw std::invalid_argument("TimeGrid: need t^0 = 0");
        for (std::size_t i = 1; i < t_.size(); ++i)
            if (!(t_[i] > t_[i - 1]))
                throw std::invalid_argument("TimeGrid: times must be strictly increasing");
    }

    static TimeGrid uniform(double T, std::size_t steps) {
        if (!(T > 0.0) || steps == 0)
            throw std::invalid_argument("TimeGrid: T > 0 and steps >= 1 required");
        std::vector<double> t(steps + 1);
        for (std::size_t n = 0; n <= steps; ++n)
            t[n] = T * static_cast<double>(n) / static_cast<double>(steps);
        t[0] = 0.0;
        t[steps] = T;
        return TimeGrid(std::move(t));
    }

    std::size_t steps() const { return t_.size() - 1; }
    double final_time() const { return t_.back(); }
    double time(std::size_t n) const { return t_[n]; }

    /// Step length k_n = t^n - t^{n-1}, n = 1..N.
    double k(std::size_t n) const { return t_[n] - t_[n - 1]; }

    double k_max() const {
        double m = 0.0;
        for (std::size_t n = 1; n <= steps(); ++n) m = std::max(m, k(n));
        return m;
    }

    /// Half-step time t^{n-1/2} for step n = 1..N.
    double t_half(std::size_t n) const { return 0.5 * (t_[n - 1] + t_[n]); }

    /// Smallest C with |k_{n+1} - k_n| <= C max{k_n^2, k_{n+1}^2}; zero for
    /// uniform grids.
    double step_variation_constant() const {
        double c = 0.0;
        for (std::size_t n = 1; n + 1 <= steps(); ++n) {
            const double kn = k(n), kn1 = k(n + 1);
            c = std::max(c, std::abs(kn1 - kn) / std::max(kn * kn, kn1 * kn1));
        }
        return c;
    }

private:
    std::vector<double> t_;
};

} // namespace paraxfem
