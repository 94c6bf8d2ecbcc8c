#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "aportrait/integrator.hpp"
#include "aportrait/smalleig.hpp"
#include "aportrait/systems.hpp"

namespace aportrait {

// Equal-length window partition of a long run: after discarding the
// transient, [t_start, t_start + m*T] is split into m windows of length T.
struct WindowPlan {
    double t_start = 0;
    double window_length = 0;  // T > 0
    int window_count = 1;      // m >= 1
    double transient = 0;

    void validate() const;
};

enum class Method { LE_J, LE_O, LE_V, GFE };

const char* method_name(Method m);

struct MethodResult {
    std::vector<std::array<double, 3>> per_window;  // sorted descending, dimension entries
    std::array<double, 3> average{};
};

struct ExponentReport {
    std::string system;
    std::vector<std::pair<std::string, double>> parameters;
    int dimension = 0;
    WindowPlan plan;
    std::vector<Method> methods;  // requested order
    std::map<Method, MethodResult> results;
    std::vector<double> per_window_trace;  // (1/T) integral of trace J per window
    double trace_average = 0;
    double zero_star_threshold = 5e-3;

    std::string signature(Method m) const;
};

// Per-window engines. The trajectory must be dense-queryable over [a, b].
std::array<double, 3> window_le_j(const SystemDefinition& sys, const Trajectory& traj,
                                  double a, double b);
std::array<double, 3> window_le_o(const SystemDefinition& sys, const Trajectory& traj,
                                  double a, double b);
std::array<double, 3> window_le_v(const SystemDefinition& sys, const Trajectory& traj,
                                  double a, double b);
std::array<double, 3> window_gfe(const SystemDefinition& sys, const Vec& y_start, double t_start,
                                 double T, const ToleranceSettings& control = {});

// Runs all requested methods over the window partition and averages the
// k-th components across windows (descending sort within each window).
ExponentReport exponent_suite(const SystemDefinition& sys, const Vec& y0, const WindowPlan& plan,
                              const std::vector<Method>& methods,
                              const ToleranceSettings& control = {});

// Maps averaged components onto {+, 0*, -} against the near-zero threshold.
std::string sign_signature(const std::array<double, 3>& components, int dimension,
                           double zero_star_threshold);

void write_report_csv(const ExponentReport& report, std::ostream& out);
void write_report_json(const ExponentReport& report, std::ostream& out);

}  // namespace aportrait
