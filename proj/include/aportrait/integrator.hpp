#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aportrait/linalg.hpp"
#include "aportrait/systems.hpp"

namespace aportrait {

struct ToleranceSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double escape_bound = 1e6;  // any state component beyond this is a blow-up
    double max_step = 0;        // 0 means span length
};

// Thrown when a solution component escapes the configured bound.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(double t, double bound)
        : std::runtime_error("blow-up at t=" + std::to_string(t) + " (|y| > " +
                             std::to_string(bound) + ")"),
          time(t) {}
    double time;
};

// Thrown when the adaptive step size underflows.
class StiffnessError : public std::runtime_error {
public:
    explicit StiffnessError(double t)
        : std::runtime_error("stiffness failure: step underflow at t=" + std::to_string(t)),
          time(t) {}
    double time;
};

// Dense solution of an initial value problem over [t0, t1]. Stores the
// accepted step endpoints plus the order-4 interpolation coefficients of
// each step, so any interior time can be queried.
class Trajectory {
public:
    Trajectory(int dimension, double t0, const Vec& y0);

    int dimension() const { return n_; }
    int interpolation_order() const { return 4; }
    double start_time() const { return times_.front(); }
    double end_time() const { return times_.back(); }
    double span() const { return end_time() - start_time(); }
    size_t sample_count() const { return times_.size(); }

    const std::vector<double>& times() const { return times_; }
    Vec state(size_t i) const;
    Vec front() const { return state(0); }
    Vec back() const { return state(times_.size() - 1); }

    // Dense-output query; t is clamped to the covered span within a
    // small tolerance and rejected beyond it.
    Vec state_at(double t) const;

    void append_step(double h, const Vec& y_new, const double* rcont, int stride);

private:
    int n_;
    std::vector<double> times_;
    std::vector<double> states_;                  // flat, n_ per sample
    struct DenseStep {
        double t0, h;
        std::array<double, 15> c;                 // 5 coefficient vectors, n_ each
    };
    std::vector<DenseStep> dense_;
};

// Principal fundamental matrix of the variational equation over [t0, t1].
struct FundamentalMatrix {
    double t0 = 0;
    double t1 = 0;
    Mat Phi;
};

// Adaptive Dormand-Prince 5(4) with dense output.
Trajectory integrate(const SystemDefinition& sys, const Vec& y0, double t0, double t1,
                     const ToleranceSettings& control = {});

// Integrates the state together with dPhi/dt = J(y(t)) Phi, Phi(t0) = I, as
// one augmented system of n + n^2 equations.
std::pair<Trajectory, FundamentalMatrix> integrate_with_fundamental(
    const SystemDefinition& sys, const Vec& y0, double t0, double t1,
    const ToleranceSettings& control = {});

// Endpoint-only integration; no dense storage.
Vec advance(const SystemDefinition& sys, const Vec& y0, double t0, double t1,
            const ToleranceSettings& control = {});

// |ln det Phi - integral of trace J along the trajectory|, an integration
// quality diagnostic based on the Liouville volume identity.
double liouville_check(const SystemDefinition& sys, const Trajectory& traj,
                       const FundamentalMatrix& Phi);

// Classical fixed-step RK4, kept as an independent cross-check for the
// adaptive integrator. Calls the observer after every step when given.
Vec rk4_advance(const SystemDefinition& sys, const Vec& y0, double t0, double t1, long steps,
                const std::function<void(double, const Vec&)>& observer = nullptr);

}  // namespace aportrait
