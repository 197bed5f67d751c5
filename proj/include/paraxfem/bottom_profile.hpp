#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace paraxfem {

/// Nondimensional bottom depth s(t) with its first two derivatives.
/// Kink times mark points where s_dot fails to exist; coefficient
/// evaluation there is rejected (half-step sampling avoids them).
struct BottomProfile {
    std::function<double(double)> s;
    std::function<double(double)> s_dot;
    std::function<double(double)> s_ddot;
    std::vector<double> kinks;

    void check_smooth_at(double t) const {
        for (double k : kinks)
            if (std::abs(t - k) <= 1e-13)
                throw std::domain_error("BottomProfile: evaluation at kink t=" + std::to_string(k));
    }
};

/// Growth-study bottom catalog, labeled (a)..(h); all on t in [0,1].
inline BottomProfile growth_profile(char label) {
    BottomProfile p;
    switch (label) {
        case 'a':
            p.s = [](double t) { return std::exp(t); };
            p.s_dot = [](double t) { return std::exp(t); };
            p.s_ddot = [](double t) { return std::exp(t); };
            break;
        case 'b':
            p.s = [](double t) { return std::exp(-t); };
            p.s_dot = [](double t) { return -std::exp(-t); };
            p.s_ddot = [](double t) { return std::exp(-t); };
            break;
        case 'c':
            p.s = [](double t) { return 1.0 + (t - 0.5) * (t - 0.5); };
            p.s_dot = [](double t) { return 2.0 * (t - 0.5); };
            p.s_ddot = [](double) { return 2.0; };
            break;
        case 'd':
            p.s = [](double t) { return 1.0 - std::pow(std::abs(t - 0.5), 3); };
            p.s_dot = [](double t) { return -3.0 * (t - 0.5) * std::abs(t - 0.5); };
            p.s_ddot = [](double t) { return -6.0 * std::abs(t - 0.5); };
            break;
        case 'e':
            p.s = [](double t) { return 1.0 - std::pow(t - 0.5, 3); };
            p.s_dot = [](double t) { return -3.0 * (t - 0.5) * (t - 0.5); };
            p.s_ddot = [](double t) { return -6.0 * (t - 0.5); };
            break;
        case 'f':
            p.s = [](double t) { return 2.0 - std::abs(2.0 * t - 1.0); };
            p.s_dot = [](double t) { return t < 0.5 ? 2.0 : -2.0; };
            p.s_ddot = [](double) { return 0.0; };
            p.kinks = {0.5};
            break;
        case 'g':
            p.s = [](double t) { return 1.0 + std::pow(t - 0.5, 3); };
            p.s_dot = [](double t) { return 3.0 * (t - 0.5) * (t - 0.5); };
            p.s_ddot = [](double t) { return 6.0 * (t - 0.5); };
            break;
        case 'h':
            p.s = [](double t) { return 1.0 + t * t * t; };
            p.s_dot = [](double t) { return 3.0 * t * t; };
            p.s_ddot = [](double t) { return 6.0 * t; };
            break;
        default:
            throw std::invalid_argument("growth_profile: label must be in a..h");
    }
    return p;
}

/// Convergence-study bottoms: 1 upsloping, 2 downsloping, 3 oscillatory.
inline BottomProfile convergence_case_profile(int case_id) {
    BottomProfile p;
    switch (case_id) {
        case 1:
            p.s = [](double t) { return -0.3 * t + 0.7; };
            p.s_dot = [](double) { return -0.3; };
            p.s_ddot = [](double) { return 0.0; };
            break;
        case 2:
            p.s = [](double t) { return 0.4 * t + 0.3; };
            p.s_dot = [](double) { return 0.4; };
            p.s_ddot = [](double) { return 0.0; };
            break;
        case 3: {
            const double w = 4.0 * std::acos(-1.0);
            p.s = [w](double t) { return 0.2 * std::cos(w * t) + 0.2 * std::sin(w * t) + 0.7; };
            p.s_dot = [w](double t) { return 0.2 * w * (std::cos(w * t) - std::sin(w * t)); };
            p.s_ddot = [w](double t) { return -0.2 * w * w * (std::sin(w * t) + std::cos(w * t)); };
            break;
        }
        default:
            throw std::invalid_argument("convergence_case_profile: case must be 1, 2 or 3");
    }
    return p;
}

/// True when the bottom is upsloping (s_dot <= 0) on [0, T]; sampled at
/// 1000 times, skipping declared kinks.
inline bool is_upsloping(const BottomProfile& p, double T, int samples = 1000) {
    for (int i = 0; i <= samples; ++i) {
        const double t = T * i / samples;
        bool at_kink = false;
        for (double k : p.kinks)
            if (std::abs(t - k) <= 1e-13) at_kink = true;
        if (at_kink) continue;
        if (p.s_dot(t) > 0.0) return false;
    }
    return true;
}

} // namespace paraxfem
