#include "aportrait/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace aportrait {

namespace {

constexpr double kTimeAccuracy = 1e-10;
constexpr double kGrazeTol = 1e-8;
constexpr double kEquilibriumTol = 1e-9;
constexpr int kSubSamples = 4;  // interior section samples per integration step

double section_value(const SectionSpec& s, const Vec& y) { return s.normal.dot(y - s.anchor); }

// Walks the dense trajectory, brackets oriented sign changes of the section
// function (strictly negative to non-negative after orientation flip), and
// refines each to kTimeAccuracy. `slope_at` supplies d(section)/dt for the
// grazing filter. Crossings at or before t_skip are ignored, so a trajectory
// launched exactly on the section does not report its own start.
void scan_for_crossings(const Trajectory& traj, const SectionSpec& section, double t_skip,
                        const std::function<double(double, const Vec&)>& slope_at,
                        CrossingScan& out) {
    const double sign = section.orientation >= 0 ? 1.0 : -1.0;
    auto g = [&](double t) { return sign * section_value(section, traj.state_at(t)); };

    double t_prev = traj.start_time();
    double g_prev = g(t_prev);
    const auto& times = traj.times();
    for (size_t i = 1; i < times.size(); ++i) {
        for (int k = 1; k <= kSubSamples; ++k) {
            const double t =
                (k == kSubSamples) ? times[i]
                                   : times[i - 1] + (times[i] - times[i - 1]) * k / kSubSamples;
            const double gt = g(t);
            if (g_prev < 0.0 && gt >= 0.0 && t > t_skip) {
                double lo = t_prev, hi = t;
                while (hi - lo > kTimeAccuracy) {
                    const double mid = 0.5 * (lo + hi);
                    (g(mid) < 0.0 ? lo : hi) = mid;
                }
                const double tc = 0.5 * (lo + hi);
                const Vec yc = traj.state_at(tc);
                if (std::fabs(slope_at(tc, yc)) < kGrazeTol)
                    ++out.grazing_skipped;
                else if (tc > t_skip)
                    out.crossings.push_back({tc, yc});
            }
            t_prev = t;
            g_prev = gt;
        }
    }
}

double dense_section_slope(const Trajectory& traj, const SectionSpec& section, double tc) {
    const double dt = std::max(1e-7, 1e-9 * traj.span());
    const double ta = std::max(tc - dt, traj.start_time());
    const double tb = std::min(tc + dt, traj.end_time());
    return (section_value(section, traj.state_at(tb)) -
            section_value(section, traj.state_at(ta))) / (tb - ta);
}

}  // namespace

const char* orbit_class_name(OrbitClass c) {
    switch (c) {
        case OrbitClass::equilibrium: return "equilibrium";
        case OrbitClass::closed_orbit: return "closed orbit";
        case OrbitClass::aperiodic: return "aperiodic/unresolved";
    }
    return "?";
}

CrossingScan find_crossings(const Trajectory& traj, const SectionSpec& section) {
    if (std::fabs(section.normal.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("section normal must be a unit vector");
    CrossingScan scan;
    scan_for_crossings(
        traj, section, traj.start_time() - 1.0,
        [&](double tc, const Vec&) { return dense_section_slope(traj, section, tc); }, scan);
    return scan;
}

OrbitDiagnosis detect_period(const SystemDefinition& sys, const Vec& seed,
                             const PeriodSearch& search) {
    if (!(search.closure_tol > 0)) throw std::invalid_argument("closure tolerance must be positive");

    const double t_ref = search.transient;
    const Vec y_ref = search.transient > 0
                          ? advance(sys, seed, 0.0, search.transient, search.control)
                          : seed;

    OrbitDiagnosis diag;
    diag.reference_point = y_ref;

    const Vec f_ref = eval_field(sys, y_ref, t_ref);
    if (f_ref.norm() < kEquilibriumTol) {
        diag.classification = OrbitClass::equilibrium;
        return diag;
    }

    const SectionSpec section{y_ref, f_ref.normalized(), 1};
    const auto field_slope = [&](double tc, const Vec& yc) {
        return section.normal.dot(eval_field(sys, yc, tc));
    };

    const double chunk = std::min(50.0, search.max_time);
    Vec y = y_ref;
    double t = t_ref;
    CrossingScan scan;
    while (t - t_ref < search.max_time) {
        const double t_next = std::min(t + chunk, t_ref + search.max_time);
        const Trajectory traj = integrate(sys, y, t, t_next, search.control);
        const size_t before = scan.crossings.size();
        scan_for_crossings(traj, section, t_ref + 1e-7, field_slope, scan);
        for (size_t i = before; i < scan.crossings.size(); ++i) {
            const Crossing& c = scan.crossings[i];
            const double residual = c.state.distance(y_ref);
            if (residual <= search.closure_tol) {
                diag.classification = OrbitClass::closed_orbit;
                diag.period = c.time - t_ref;
                diag.rotation_number = static_cast<int>(i) + 1;
                diag.closure_residual = residual;
                diag.crossings.assign(scan.crossings.begin(), scan.crossings.begin() + i + 1);
                diag.grazing_skipped = scan.grazing_skipped;
                return diag;
            }
        }
        y = traj.back();
        t = t_next;
    }

    diag.classification = OrbitClass::aperiodic;
    diag.crossings = scan.crossings;
    diag.grazing_skipped = scan.grazing_skipped;
    diag.closure_residual = std::numeric_limits<double>::infinity();
    return diag;
}

namespace {

// Loop sampled at fixed phases for cycle clustering.
std::vector<Vec> sample_loop(const SystemDefinition& sys, const OrbitDiagnosis& diag,
                             double t0, const ToleranceSettings& control, int count) {
    const Trajectory traj = integrate(sys, diag.reference_point, t0, t0 + diag.period, control);
    std::vector<Vec> pts;
    pts.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        pts.push_back(traj.state_at(t0 + diag.period * i / count));
    return pts;
}

double hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    auto one_sided = [](const std::vector<Vec>& p, const std::vector<Vec>& q) {
        double worst = 0;
        for (const Vec& x : p) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec& y : q) best = std::min(best, x.distance(y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace

CycleCensus count_distinct_cycles(const SystemDefinition& sys, const std::vector<Vec>& seeds,
                                  double match_tol, const PeriodSearch& search) {
    constexpr int kLoopSamples = 256;
    CycleCensus census;
    census.seed_cluster.assign(seeds.size(), -1);

    std::vector<std::vector<Vec>> cluster_loops;
    for (size_t si = 0; si < seeds.size(); ++si) {
        OrbitDiagnosis diag = detect_period(sys, seeds[si], search);
        if (diag.classification != OrbitClass::closed_orbit) {
            census.excluded_seeds.push_back(si);
            continue;
        }
        const auto loop = sample_loop(sys, diag, search.transient, search.control, kLoopSamples);
        int assigned = -1;
        for (size_t c = 0; c < cluster_loops.size(); ++c) {
            if (hausdorff(loop, cluster_loops[c]) < match_tol) {
                assigned = static_cast<int>(c);
                break;
            }
        }
        if (assigned < 0) {
            assigned = static_cast<int>(cluster_loops.size());
            cluster_loops.push_back(loop);
            census.representatives.push_back(std::move(diag));
        }
        census.seed_cluster[si] = assigned;
    }
    census.count = static_cast<int>(cluster_loops.size());
    return census;
}

void write_crossings_csv(const std::vector<Crossing>& crossings, int dimension,
                         std::ostream& out) {
    out << "time";
    const char* names[] = {"c1", "c2", "c3"};
    for (int i = 0; i < dimension; ++i) out << "," << names[i];
    out << "\n";
    char buf[64];
    for (const Crossing& c : crossings) {
        std::snprintf(buf, sizeof buf, "%.6g", c.time);
        out << buf;
        for (int i = 0; i < dimension; ++i) {
            std::snprintf(buf, sizeof buf, "%.6g", c.state[i]);
            out << "," << buf;
        }
        out << "\n";
    }
}

}  // namespace aportrait
