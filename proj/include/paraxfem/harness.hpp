#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "acoustics.hpp"
#include "ifd_pform.hpp"
#include "manufactured.hpp"
#include "parabolic.hpp"
#include "schrodinger.hpp"

namespace paraxfem {

// ---------------------------------------------------------------------------
// Run-level concurrency: a bounded parallel-for over independent runs.
// Results land in caller-indexed slots, so the merge order is deterministic.
// ---------------------------------------------------------------------------

inline unsigned harness_thread_cap() {
    if (const char* env = std::getenv("PARAXFEM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    return 1;
}

template <typename Fn>
void parallel_runs(std::size_t count, Fn&& fn) {
    const unsigned threads = std::min<unsigned>(harness_thread_cap(),
                                                static_cast<unsigned>(count ? count : 1));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < count; i += threads) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Convergence study (manufactured solution, nodal l2 error at T=1, k=h).
// ---------------------------------------------------------------------------

struct ConvergenceLevel {
    double h = 0.0;
    double k = 0.0;
    double error = 0.0;
    std::optional<double> rate; // vs the previous halving
    bool failed = false;
    std::string message;
};

struct ConvergenceReport {
    int case_id = 0;
    BoundaryMode mode = BoundaryMode::NeumannDynamical;
    std::vector<ConvergenceLevel> levels;
};

inline double run_manufactured_level(const SchrodingerManufactured& mp, BoundaryMode mode,
                                     std::size_t level) {
    FeSpace space(Mesh1D::uniform(level), FeFamily::LagrangeLinear);
    CnStepContext ctx(space, mp.coeffs, TimeGrid::uniform(1.0, level), mode);
    auto u = ctx.init_elliptic([&](double x) { return complexd(mp.u0(x)); },
                               [&](double x) { return complexd(mp.u0_prime(x)); });
    for (std::size_t n = 1; n <= level; ++n) u = ctx.step(u, n);
    return nodal_l2_error(u, [&](double x) { return mp.exact(1.0, x); });
}

/// Convergence rates of the manufactured problem at the given levels
/// (h = k = 1/level, T = 1). A half-coarse baseline level is run first so
/// that the first requested level carries a rate.
inline ConvergenceReport convergence_study(int case_id, BoundaryMode mode,
                                           std::vector<std::size_t> levels) {
    if (levels.empty()) throw std::invalid_argument("convergence_study: no levels");
    for (std::size_t l : levels)
        if (l < 2) throw std::invalid_argument("convergence_study: level must be >= 2");
    std::sort(levels.begin(), levels.end());
    const SchrodingerManufactured mp = make_manufactured(case_id, mode);

    std::vector<std::size_t> all;
    all.push_back(levels.front() / 2);
    for (std::size_t l : levels) all.push_back(l);

    std::vector<ConvergenceLevel> rows(all.size());
    parallel_runs(all.size(), [&](std::size_t i) {
        ConvergenceLevel row;
        row.h = 1.0 / static_cast<double>(all[i]);
        row.k = row.h;
        try {
            row.error = run_manufactured_level(mp, mode, all[i]);
        } catch (const std::exception& e) {
            row.failed = true;
            row.message = e.what();
        }
        rows[i] = row;
    });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].failed || rows[i - 1].failed) continue;
        if (std::abs(rows[i - 1].h / rows[i].h - 2.0) < 1e-12 && rows[i].error > 0.0)
            rows[i].rate = std::log2(rows[i - 1].error / rows[i].error);
    }
    ConvergenceReport report;
    report.case_id = case_id;
    report.mode = mode;
    report.levels.assign(rows.begin() + 1, rows.end()); // drop the baseline row
    return report;
}

// ---------------------------------------------------------------------------
// ASA wedge runs and transmission-loss series.
// ---------------------------------------------------------------------------

enum class WedgeModel { NeumannDynamical, AbrahamssonKreiss, IfdP };

struct TransmissionLossSeries {
    std::vector<double> range_m;
    std::vector<double> tl_db;
    double depth_m = 0.0;
    std::string model;
    bool flagged_unstable = false;
    std::size_t steps_completed = 0;
    std::vector<std::string> warnings;
};

struct WedgeRunConfig {
    WedgeModel model = WedgeModel::AbrahamssonKreiss;
    bool upsloping = true;
    std::size_t mesh_elements = 1000;
    std::size_t steps = 1000;
    std::optional<double> depth_m; // default: 90 m upsloping, 25 m downsloping
    double instability_factor = 1e6;
};

inline const char* wedge_model_name(WedgeModel m) {
    switch (m) {
        case WedgeModel::NeumannDynamical: return "N";
        case WedgeModel::AbrahamssonKreiss: return "AK";
        default: return "IFDP";
    }
}

/// One wedge run: solve in the strip, sample the field at the requested
/// physical depth each step, convert to transmission loss.
inline TransmissionLossSeries asa_wedge_run(const WedgeRunConfig& cfg) {
    const WedgeEnvironment env = asa_wedge_environment(cfg.upsloping);
    const BottomProfile profile = wedge_profile(env);
    const double k0 = env.k0();
    const double depth = cfg.depth_m.value_or(cfg.upsloping ? 90.0 : 25.0);

    Mesh1D mesh = Mesh1D::uniform(cfg.mesh_elements);
    const double psi_ref = reference_amplitude(env, mesh);
    auto psi0 = asa_source(env);
    auto dpsi0 = asa_source_derivative(env);
    auto w0 = [&](double y) { return psi0(y / k0) / psi_ref; };
    auto dw0 = [&](double y) { return dpsi0(y / k0) / (k0 * psi_ref); };

    TransmissionLossSeries out;
    out.depth_m = depth;
    out.model = wedge_model_name(cfg.model);

    TimeGrid grid = TimeGrid::uniform(env.t_final(), cfg.steps);

    if (cfg.model == WedgeModel::IfdP) {
        FeSpace space(mesh, FeFamily::LagrangeLinear, EssentialBc::None);
        ZetaCoefficients zc(profile, nullptr, nullptr, [&](double) { return env.g_nondim(); });
        PStepContext ctx(space, zc, grid);
        auto p = build_p_initial(space, zc, w0, dw0);
        const double norm0 = ctx.mass_norm(p);
        for (std::size_t n = 1; n <= cfg.steps; ++n) {
            p = ctx.step(p, n);
            out.steps_completed = n;
            const double t = grid.time(n);
            const double r = t / k0;
            const double ell = env.ell(r);
            if (depth <= ell) {
                const double x = depth / ell;
                const complexd w = ctx.recover_w(p, t, x);
                out.range_m.push_back(r);
                out.tl_db.push_back(transmission_loss(std::abs(psi_ref * w), r));
            }
            if (ctx.mass_norm(p) > cfg.instability_factor * norm0) {
                out.flagged_unstable = true;
                break;
            }
        }
        return out;
    }

    FeSpace space(mesh, FeFamily::LagrangeLinear);
    CoefficientSet coeffs = wedge_coefficients(
        profile, env.gamma, [g = env.g_nondim()](double) { return g; });
    coeffs.f = nullptr;
    coeffs.f1 = nullptr;
    const BoundaryMode mode = cfg.model == WedgeModel::NeumannDynamical
                                  ? BoundaryMode::NeumannDynamical
                                  : BoundaryMode::AbrahamssonKreiss;
    CnStepContext ctx(space, coeffs, grid, mode);
    auto u0fn = transform_initial(profile, w0);
    const double s0 = profile.s(0.0);
    const double delta0 = 0.5 * profile.s_dot(0.0) * s0;
    auto du0fn = [&](double x) {
        // d/dx [ e^{-i delta0 x^2} w0(x s0) ]
        const complexd phase = std::exp(complexd(0.0, -delta0 * x * x));
        return phase * (complexd(0.0, -2.0 * delta0 * x) * w0(x * s0) + s0 * dw0(x * s0));
    };
    auto u = ctx.init_elliptic(u0fn, du0fn);
    const double norm0 = ctx.mass_norm(u);
    if (mode == BoundaryMode::NeumannDynamical && !is_upsloping(profile, env.t_final()))
        out.warnings.push_back("downsloping bottom: outside the analyzed regime");
    for (std::size_t n = 1; n <= cfg.steps; ++n) {
        u = ctx.step(u, n);
        out.steps_completed = n;
        const double t = grid.time(n);
        const double r = t / k0;
        const double ell = env.ell(r);
        if (depth <= ell) {
            const complexd psi = recover_field(u, profile, env, psi_ref, r, depth);
            out.range_m.push_back(r);
            out.tl_db.push_back(transmission_loss(std::abs(psi), r));
        }
        if (ctx.mass_norm(u) > cfg.instability_factor * norm0) {
            out.flagged_unstable = true;
            break;
        }
    }
    return out;
}

/// Interference-smoothed transmission loss: the intensity-like quantity
/// 10^(-TL/10) is averaged over a +-half_window_m range window and mapped
/// back to dB. Nulls sharpen without bound under refinement, so raw
/// pointwise TL comparisons are dominated by null-position noise; the
/// smoothed curve is the robust comparison object.
inline std::vector<double> smoothed_tl(const TransmissionLossSeries& s, double half_window_m = 50.0) {
    const std::size_t n = s.tl_db.size();
    std::vector<double> out(n);
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (lo < n && s.range_m[lo] < s.range_m[i] - half_window_m) ++lo;
        while (hi + 1 < n && s.range_m[hi + 1] <= s.range_m[i] + half_window_m) ++hi;
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += std::pow(10.0, -s.tl_db[j] / 10.0);
        out[i] = -10.0 * std::log10(acc / static_cast<double>(hi - lo + 1));
    }
    return out;
}

/// Mask of points within guard_db of a local maximum of the smoothed
/// curve (residual modal dips, i.e. nulls), over a +-window_m window.
inline std::vector<bool> near_null_mask(const std::vector<double>& smoothed,
                                        const std::vector<double>& range_m,
                                        double guard_db = 3.0, double window_m = 100.0) {
    const std::size_t n = smoothed.size();
    std::vector<bool> mask(n, false);
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (lo < n && range_m[lo] < range_m[i] - window_m) ++lo;
        while (hi + 1 < n && range_m[hi + 1] <= range_m[i] + window_m) ++hi;
        double local_max = smoothed[lo];
        for (std::size_t j = lo; j <= hi; ++j) local_max = std::max(local_max, smoothed[j]);
        if (smoothed[i] > local_max - guard_db) mask[i] = true;
    }
    return mask;
}

/// Max |a - b| of the smoothed curves over common ranges in
/// [2*half_window, r_max], excluding points near a null of either curve.
/// Series must share their range grid or be a 2:1 refinement of it.
inline double tl_difference_away_from_nulls(const TransmissionLossSeries& a,
                                            const TransmissionLossSeries& b,
                                            double r_max = 1e300,
                                            double half_window_m = 50.0) {
    const auto sa = smoothed_tl(a, half_window_m);
    const auto sb = smoothed_tl(b, half_window_m);
    const auto mask_a = near_null_mask(sa, a.range_m);
    const auto mask_b = near_null_mask(sb, b.range_m);
    double worst = 0.0;
    std::size_t jb = 0;
    for (std::size_t ia = 0; ia < a.range_m.size(); ++ia) {
        if (a.range_m[ia] > r_max) break;
        if (a.range_m[ia] < 2.0 * half_window_m) continue;
        while (jb < b.range_m.size() && b.range_m[jb] < a.range_m[ia] - 1e-9) ++jb;
        if (jb >= b.range_m.size()) break;
        if (std::abs(b.range_m[jb] - a.range_m[ia]) > 1e-9) continue;
        if (mask_a[ia] || mask_b[jb]) continue;
        worst = std::max(worst, std::abs(sa[ia] - sb[jb]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Growth study over the bottom catalog.
// ---------------------------------------------------------------------------

struct GrowthReport {
    char profile_id = '?';
    std::vector<double> times;
    std::vector<double> l2_norms;
    double peak = 0.0;
    std::optional<double> onset_time; // first t with norm > 10x initial
    bool flagged_unstable = false;
};

/// Coefficients of the growth experiments: beta = f = g = 0, the dynamical
/// boundary data determined by the bottom alone.
inline CoefficientSet growth_coefficients(const BottomProfile& profile) {
    CoefficientSet c = wedge_coefficients(profile, nullptr, nullptr);
    c.beta = [p = profile](double t, double) {
        p.check_smooth_at(t);
        return complexd(0.0, 0.0);
    };
    c.f = nullptr;
    c.f1 = nullptr;
    return c;
}

inline GrowthReport growth_study(char profile_id, std::size_t level,
                                 double instability_factor = 1e12) {
    const BottomProfile profile = growth_profile(profile_id);
    FeSpace space(Mesh1D::uniform(level), FeFamily::LagrangeLinear);
    CnStepContext ctx(space, growth_coefficients(profile), TimeGrid::uniform(1.0, level),
                      BoundaryMode::NeumannDynamical);
    auto u0 = ctx.init_elliptic([](double x) { return complexd(-x * std::pow(x - 1.0, 3)); },
                                [](double x) {
                                    return complexd(-std::pow(x - 1.0, 3) -
                                                    3.0 * x * std::pow(x - 1.0, 2));
                                });
    auto hist = ctx.run(u0, {}, instability_factor);
    GrowthReport rep;
    rep.profile_id = profile_id;
    rep.times = hist.times;
    rep.l2_norms = hist.l2_norms;
    rep.flagged_unstable = hist.flagged_unstable;
    const double norm0 = hist.l2_norms.front();
    for (std::size_t i = 0; i < hist.l2_norms.size(); ++i) {
        rep.peak = std::max(rep.peak, hist.l2_norms[i]);
        if (!rep.onset_time && hist.l2_norms[i] > 10.0 * norm0)
            rep.onset_time = hist.times[i];
    }
    return rep;
}

} // namespace paraxfem
