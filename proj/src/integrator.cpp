#include "aportrait/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "aportrait/quadrature.hpp"

namespace aportrait {

namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner, DOPRI5).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafe = 0.9;
constexpr double kBeta = 0.04;
constexpr double kFacMin = 0.2;   // max growth of 1/h per step
constexpr double kFacMax = 10.0;  // max growth of h per step
constexpr int kMaxComponents = 12;

using Buf = std::array<double, kMaxComponents>;

// One augmented right-hand side: state field plus, optionally, the
// variational columns dPhi/dt = J(y) Phi laid out row-major after the state.
struct OdeSystem {
    const SystemDefinition* sys;
    bool variational;
    int n;  // phase-space dimension
    int m;  // total component count

    void operator()(double t, const double* u, double* du) const {
        const Vec y = Vec::from(u, n);
        const Vec f = eval_field(*sys, y, t);
        for (int i = 0; i < n; ++i) du[i] = f[i];
        if (!variational) return;
        const Mat J = eval_jacobian(*sys, y, t);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += J(i, k) * u[n + k * n + j];
                du[n + i * n + j] = s;
            }
    }
};

double error_norm(int m, const double* err, const double* y0, const double* y1,
                  const ToleranceSettings& c) {
    double s = 0;
    for (int i = 0; i < m; ++i) {
        const double sk = c.abs_tol + c.rel_tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
        const double q = err[i] / sk;
        s += q * q;
    }
    return std::sqrt(s / m);
}

// Standard Hairer starting-step estimate.
double initial_step(const OdeSystem& f, double t0, const double* y, const double* f0, double span,
                    const ToleranceSettings& c) {
    const int m = f.m;
    double dnf = 0, dny = 0;
    for (int i = 0; i < m; ++i) {
        const double sk = c.abs_tol + c.rel_tol * std::fabs(y[i]);
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, span);

    Buf y1, f1;
    for (int i = 0; i < m; ++i) y1[i] = y[i] + h * f0[i];
    f(t0 + h, y1.data(), f1.data());
    double der2 = 0;
    for (int i = 0; i < m; ++i) {
        const double sk = c.abs_tol + c.rel_tol * std::fabs(y[i]);
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;

    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, span});
}

// Core adaptive loop. The sink receives every accepted step:
// sink(t_old, h, y_new, rcont) with 5 contiguous coefficient blocks of m
// doubles each in rcont.
template <typename Sink>
void integrate_core(const OdeSystem& f, Buf& y, double t0, double t1,
                    const ToleranceSettings& control, Sink&& sink) {
    const int m = f.m;
    const int n = f.n;
    const double span = t1 - t0;
    if (!(span > 0)) throw std::invalid_argument("integration span must be positive");
    const double hmax = control.max_step > 0 ? control.max_step : span;

    Buf k1, k2, k3, k4, k5, k6, k7, ytmp, ynew, err;
    std::array<double, 5 * kMaxComponents> rcont{};

    double t = t0;
    f(t, y.data(), k1.data());
    double h = initial_step(f, t, y.data(), k1.data(), span, control);
    double facold = 1e-4;
    bool last = false;
    bool rejected = false;

    while (!last) {
        if (t + 1.01 * h >= t1) {
            h = t1 - t;
            last = true;
        }
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(t), 1.0))
            throw StiffnessError(t);

        for (int i = 0; i < m; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp.data(), k2.data());
        for (int i = 0; i < m; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp.data(), k3.data());
        for (int i = 0; i < m; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp.data(), k4.data());
        for (int i = 0; i < m; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp.data(), k5.data());
        for (int i = 0; i < m; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(t + h, ytmp.data(), k6.data());
        for (int i = 0; i < m; ++i)
            ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] +
                                  a76 * k6[i]);
        f(t + h, ynew.data(), k7.data());
        for (int i = 0; i < m; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);

        const double errn = error_norm(m, err.data(), y.data(), ynew.data(), control);
        const double fac11 = std::pow(errn, 0.2);

        if (errn <= 1.0) {
            // accepted
            facold = std::max(errn, 1e-4);
            for (int i = 0; i < m; ++i) {
                const double ydiff = ynew[i] - y[i];
                const double bspl = h * k1[i] - ydiff;
                rcont[i] = y[i];
                rcont[m + i] = ydiff;
                rcont[2 * m + i] = bspl;
                rcont[3 * m + i] = ydiff - h * k7[i] - bspl;
                rcont[4 * m + i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                        d6 * k6[i] + d7 * k7[i]);
            }
            const double t_old = t;
            t += h;
            for (int i = 0; i < n; ++i)
                if (std::fabs(ynew[i]) > control.escape_bound)
                    throw BlowUpError(t, control.escape_bound);
            sink(t_old, h, ynew.data(), rcont.data());
            y = ynew;
            k1 = k7;  // first-same-as-last

            double fac = fac11 / std::pow(facold, kBeta);
            fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafe));
            double hnew = h / fac;
            if (rejected) hnew = std::min(hnew, h);
            h = std::min(hnew, hmax);
            rejected = false;
        } else {
            rejected = true;
            last = false;
            h /= std::min(1.0 / kFacMin, fac11 / kSafe);
        }
    }
}

}  // namespace

Trajectory::Trajectory(int dimension, double t0, const Vec& y0) : n_(dimension) {
    times_.push_back(t0);
    for (int i = 0; i < n_; ++i) states_.push_back(y0[i]);
}

Vec Trajectory::state(size_t i) const { return Vec::from(&states_[i * n_], n_); }

void Trajectory::append_step(double h, const Vec& y_new, const double* rcont, int stride) {
    DenseStep step;
    step.t0 = times_.back();
    step.h = h;
    for (int b = 0; b < 5; ++b)
        for (int i = 0; i < n_; ++i) step.c[b * n_ + i] = rcont[b * stride + i];
    dense_.push_back(step);
    times_.push_back(step.t0 + h);
    for (int i = 0; i < n_; ++i) states_.push_back(y_new[i]);
}

Vec Trajectory::state_at(double t) const {
    const double lo = start_time(), hi = end_time();
    const double slack = 1e-9 * std::max(1.0, std::fabs(hi - lo));
    if (t < lo - slack || t > hi + slack)
        throw std::out_of_range("time " + std::to_string(t) + " outside trajectory span [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (t <= lo) return front();
    if (t >= hi) return back();

    // times_ is strictly increasing; find the step containing t.
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    size_t idx = static_cast<size_t>(it - times_.begin());
    idx = std::min(std::max<size_t>(idx, 1), dense_.size()) - 1;
    const DenseStep& s = dense_[idx];
    const double theta = (t - s.t0) / s.h;
    const double theta1 = 1.0 - theta;
    Vec r = Vec::zero(n_);
    for (int i = 0; i < n_; ++i) {
        const double* c = s.c.data();
        r[i] = c[i] + theta * (c[n_ + i] +
                               theta1 * (c[2 * n_ + i] +
                                         theta * (c[3 * n_ + i] + theta1 * c[4 * n_ + i])));
    }
    return r;
}

Trajectory integrate(const SystemDefinition& sys, const Vec& y0, double t0, double t1,
                     const ToleranceSettings& control) {
    if (!y0.finite()) throw std::invalid_argument("initial state must be finite");
    const int n = sys.dimension();
    if (y0.size() != n) throw std::invalid_argument("seed dimension mismatch");
    OdeSystem f{&sys, false, n, n};
    Buf u{};
    for (int i = 0; i < n; ++i) u[i] = y0[i];
    Trajectory traj(n, t0, y0);
    integrate_core(f, u, t0, t1, control, [&](double, double h, const double* ynew,
                                              const double* rcont) {
        traj.append_step(h, Vec::from(ynew, n), rcont, n);
    });
    return traj;
}

std::pair<Trajectory, FundamentalMatrix> integrate_with_fundamental(
    const SystemDefinition& sys, const Vec& y0, double t0, double t1,
    const ToleranceSettings& control) {
    if (!y0.finite()) throw std::invalid_argument("initial state must be finite");
    const int n = sys.dimension();
    if (y0.size() != n) throw std::invalid_argument("seed dimension mismatch");
    if (t1 == t0)  // zero-width window: Phi is the initial condition
        return {Trajectory(n, t0, y0), FundamentalMatrix{t0, t0, Mat::identity(n)}};
    OdeSystem f{&sys, true, n, n + n * n};
    Buf u{};
    for (int i = 0; i < n; ++i) u[i] = y0[i];
    for (int i = 0; i < n; ++i) u[n + i * n + i] = 1.0;

    Trajectory traj(n, t0, y0);
    integrate_core(f, u, t0, t1, control, [&](double, double h, const double* ynew,
                                              const double* rcont) {
        traj.append_step(h, Vec::from(ynew, n), rcont, f.m);
    });

    FundamentalMatrix fm;
    fm.t0 = t0;
    fm.t1 = t1;
    fm.Phi = Mat(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) fm.Phi(i, j) = u[n + i * n + j];
    return {std::move(traj), fm};
}

Vec advance(const SystemDefinition& sys, const Vec& y0, double t0, double t1,
            const ToleranceSettings& control) {
    if (t1 == t0) return y0;
    const int n = sys.dimension();
    OdeSystem f{&sys, false, n, n};
    Buf u{};
    for (int i = 0; i < n; ++i) u[i] = y0[i];
    integrate_core(f, u, t0, t1, control, [](double, double, const double*, const double*) {});
    return Vec::from(u.data(), n);
}

double liouville_check(const SystemDefinition& sys, const Trajectory& traj,
                       const FundamentalMatrix& Phi) {
    const double a = traj.start_time(), b = traj.end_time();
    if (a == b) return std::fabs(std::log(Phi.Phi.det()));
    const double integral = quad::simpson(a, b, quad::panels_for_span(b - a), [&](double s) {
        return eval_jacobian(sys, traj.state_at(s), s).trace();
    });
    return std::fabs(std::log(Phi.Phi.det()) - integral);
}

Vec rk4_advance(const SystemDefinition& sys, const Vec& y0, double t0, double t1, long steps,
                const std::function<void(double, const Vec&)>& observer) {
    if (steps <= 0) throw std::invalid_argument("rk4_advance needs a positive step count");
    const double h = (t1 - t0) / static_cast<double>(steps);
    Vec y = y0;
    for (long i = 0; i < steps; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        const Vec k1 = eval_field(sys, y, t);
        const Vec k2 = eval_field(sys, y + k1 * (h / 2), t + h / 2);
        const Vec k3 = eval_field(sys, y + k2 * (h / 2), t + h / 2);
        const Vec k4 = eval_field(sys, y + k3 * h, t + h);
        y = y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if (observer) observer(t + h, y);
    }
    return y;
}

}  // namespace aportrait
