#include "aportrait/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "aportrait/quadrature.hpp"
#include "json.hpp"

namespace aportrait {

namespace {

Mat average_jacobian(const SystemDefinition& sys, const Trajectory& traj, double a, double b) {
    const int n = sys.dimension();
    const int panels = quad::panels_for_span(b - a);
    const double h = (b - a) / (2.0 * panels);
    Mat acc(n);
    for (int i = 0; i <= 2 * panels; ++i) {
        const double s = a + i * h;
        const double w = (i == 0 || i == 2 * panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        acc = acc + eval_jacobian(sys, traj.state_at(s), s) * w;
    }
    return acc * (h / (3.0 * (b - a)));
}

std::array<double, 3> sorted_desc(std::array<double, 3> v, int n) {
    std::sort(v.begin(), v.begin() + n, std::greater<double>());
    return v;
}

}  // namespace

void WindowPlan::validate() const {
    if (!(window_length > 0)) throw std::invalid_argument("window length T must be positive");
    if (window_count < 1) throw std::invalid_argument("window count m must be at least 1");
    if (transient < 0) throw std::invalid_argument("transient discard must be non-negative");
}

const char* method_name(Method m) {
    switch (m) {
        case Method::LE_J: return "LE_J";
        case Method::LE_O: return "LE_O";
        case Method::LE_V: return "LE_V";
        case Method::GFE: return "GFE";
    }
    return "?";
}

std::string ExponentReport::signature(Method m) const {
    const auto it = results.find(m);
    if (it == results.end()) throw std::invalid_argument("method not computed");
    return sign_signature(it->second.average, dimension, zero_star_threshold);
}

std::array<double, 3> window_le_j(const SystemDefinition& sys, const Trajectory& traj,
                                  double a, double b) {
    return eigen_real_parts(average_jacobian(sys, traj, a, b));
}

std::array<double, 3> window_le_o(const SystemDefinition& sys, const Trajectory& traj,
                                  double a, double b) {
    const Mat A = average_jacobian(sys, traj, a, b);
    return eigen_real_parts((A + A.transpose()) * 0.5);
}

namespace {

// Eigenvalue branches along a window. The integral of Eq.-(3')-style
// node eigenvalues is only well defined when the k-th value follows a
// continuous branch, so a conjugate pair is kept a pair across nodes and a
// type switch (pair splitting into two reals, or two reals colliding into a
// pair) hands values to the branches nearest the collision.
class BranchTracker {
public:
    explicit BranchTracker(int n) : n_(n) {}

    // Returns the branch-ordered real parts for this node.
    std::array<double, 3> assign(const std::array<std::complex<double>, 3>& values) {
        std::array<double, 3> re{};
        int pair_lead = -1;  // index into the sorted values of the +im member
        for (int i = 0; i < n_; ++i) {
            re[static_cast<size_t>(i)] = values[static_cast<size_t>(i)].real();
            if (values[static_cast<size_t>(i)].imag() > 0.0) pair_lead = i;
        }

        std::array<double, 3> out{};
        if (!started_) {
            started_ = true;
            for (int i = 0; i < n_; ++i) cur_[static_cast<size_t>(i)] = re[static_cast<size_t>(i)];
            if (pair_lead >= 0) {
                pair_a_ = pair_lead;
                pair_b_ = pair_lead + 1;
            }
            return cur_;
        }

        if (pair_lead >= 0) {
            const double pr = re[static_cast<size_t>(pair_lead)];
            double real_root = 0;
            for (int i = 0; i < n_; ++i)
                if (values[static_cast<size_t>(i)].imag() == 0.0) real_root = re[static_cast<size_t>(i)];
            if (pair_a_ < 0) {
                // two real branches just collided; continue the two nearest it
                int ia = 0, ib = 1;
                double best = std::numeric_limits<double>::infinity();
                for (int i = 0; i < n_; ++i)
                    for (int j = i + 1; j < n_; ++j) {
                        const double d = std::fabs(cur_[static_cast<size_t>(i)] - pr) +
                                         std::fabs(cur_[static_cast<size_t>(j)] - pr);
                        if (d < best) {
                            best = d;
                            ia = i;
                            ib = j;
                        }
                    }
                pair_a_ = ia;
                pair_b_ = ib;
            }
            for (int i = 0; i < n_; ++i) out[static_cast<size_t>(i)] = real_root;
            out[static_cast<size_t>(pair_a_)] = pr;
            out[static_cast<size_t>(pair_b_)] = pr;
        } else if (pair_a_ >= 0) {
            // pair split into two reals: the adjacent sorted pair nearest the
            // old pair value continues those branches
            const double prev = cur_[static_cast<size_t>(pair_a_)];
            int k = 0;  // split between re[k], re[k+1]
            if (n_ == 3)
                k = std::fabs(0.5 * (re[0] + re[1]) - prev) <=
                            std::fabs(0.5 * (re[1] + re[2]) - prev)
                        ? 0
                        : 1;
            const int real_slot = 3 - pair_a_ - pair_b_;
            if (n_ == 3) out[static_cast<size_t>(real_slot)] = re[static_cast<size_t>(k == 0 ? 2 : 0)];
            out[static_cast<size_t>(std::min(pair_a_, pair_b_))] = re[static_cast<size_t>(k)];
            out[static_cast<size_t>(std::max(pair_a_, pair_b_))] = re[static_cast<size_t>(k + 1)];
            pair_a_ = pair_b_ = -1;
        } else {
            // all real on both sides: monotone match in branch-value order
            std::array<int, 3> order{0, 1, 2};
            std::sort(order.begin(), order.begin() + n_, [&](int i, int j) {
                return cur_[static_cast<size_t>(i)] > cur_[static_cast<size_t>(j)];
            });
            for (int r = 0; r < n_; ++r) out[static_cast<size_t>(order[static_cast<size_t>(r)])] = re[static_cast<size_t>(r)];
        }
        cur_ = out;
        return out;
    }

private:
    int n_;
    bool started_ = false;
    std::array<double, 3> cur_{};
    int pair_a_ = -1, pair_b_ = -1;  // branch slots occupied by the conjugate pair
};

}  // namespace

std::array<double, 3> window_le_v(const SystemDefinition& sys, const Trajectory& traj,
                                  double a, double b) {
    const int n = sys.dimension();
    const int panels = quad::panels_for_span(b - a);
    const double h = (b - a) / (2.0 * panels);
    BranchTracker tracker(n);
    std::array<double, 3> acc{};
    for (int i = 0; i <= 2 * panels; ++i) {
        const double s = a + i * h;
        const double w = (i == 0 || i == 2 * panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const auto branch_re = tracker.assign(eigen_values(eval_jacobian(sys, traj.state_at(s), s)));
        for (int k = 0; k < n; ++k) acc[static_cast<size_t>(k)] += w * branch_re[static_cast<size_t>(k)];
    }
    std::array<double, 3> out{};
    for (int k = 0; k < n; ++k) out[static_cast<size_t>(k)] = acc[static_cast<size_t>(k)] * h / (3.0 * (b - a));
    return sorted_desc(out, n);
}

std::array<double, 3> window_gfe(const SystemDefinition& sys, const Vec& y_start, double t_start,
                                 double T, const ToleranceSettings& control) {
    if (!(T > 0)) throw std::invalid_argument("GFE window length must be positive");
    const auto [traj, fm] = integrate_with_fundamental(sys, y_start, t_start, t_start + T, control);
    return floquet_from_monodromy(fm).real_parts;
}

ExponentReport exponent_suite(const SystemDefinition& sys, const Vec& y0, const WindowPlan& plan,
                              const std::vector<Method>& methods,
                              const ToleranceSettings& control) {
    plan.validate();
    if (!y0.finite()) throw std::invalid_argument("seed state must be finite");
    const int n = sys.dimension();
    const double T = plan.window_length;
    const int m = plan.window_count;

    ExponentReport report;
    report.system = sys.name();
    report.parameters = sys.parameters();
    report.dimension = n;
    report.plan = plan;
    report.methods = methods;
    for (Method mm : methods) report.results[mm].per_window.reserve(static_cast<size_t>(m));

    bool need_gfe = false;
    for (Method mm : methods) need_gfe |= (mm == Method::GFE);

    const double t_begin = plan.t_start + plan.transient;
    Vec y = (t_begin > 0) ? advance(sys, y0, 0.0, t_begin, control) : y0;

    double trace_acc = 0;
    for (int k = 0; k < m; ++k) {
        const double a = t_begin + k * T;
        const double b = a + T;

        Trajectory traj(n, a, y);
        Mat Phi = Mat::identity(n);
        if (need_gfe) {
            auto [tr, fm] = integrate_with_fundamental(sys, y, a, b, control);
            traj = std::move(tr);
            Phi = fm.Phi;
        } else {
            traj = integrate(sys, y, a, b, control);
        }
        y = traj.back();

        for (Method mm : methods) {
            std::array<double, 3> comp{};
            switch (mm) {
                case Method::LE_J: comp = window_le_j(sys, traj, a, b); break;
                case Method::LE_O: comp = window_le_o(sys, traj, a, b); break;
                case Method::LE_V: comp = window_le_v(sys, traj, a, b); break;
                case Method::GFE:
                    comp = floquet_from_monodromy({a, b, Phi}).real_parts;
                    break;
            }
            report.results[mm].per_window.push_back(comp);
        }
        const double window_trace = quad::simpson(a, b, quad::panels_for_span(T), [&](double s) {
            return eval_jacobian(sys, traj.state_at(s), s).trace();
        }) / T;
        report.per_window_trace.push_back(window_trace);
        trace_acc += window_trace;
    }
    report.trace_average = trace_acc / m;

    for (Method mm : methods) {
        auto& res = report.results[mm];
        for (const auto& w : res.per_window)
            for (int k = 0; k < n; ++k) res.average[static_cast<size_t>(k)] += w[static_cast<size_t>(k)];
        for (int k = 0; k < n; ++k) res.average[static_cast<size_t>(k)] /= m;
    }
    return report;
}

std::string sign_signature(const std::array<double, 3>& components, int dimension,
                           double zero_star_threshold) {
    std::string out = "(";
    for (int k = 0; k < dimension; ++k) {
        if (k) out += ", ";
        const double c = components[static_cast<size_t>(k)];
        if (std::fabs(c) < zero_star_threshold)
            out += "0*";
        else
            out += (c > 0 ? "+" : "-");
    }
    out += ")";
    return out;
}

void write_report_csv(const ExponentReport& report, std::ostream& out) {
    out << "window,method";
    for (int k = 1; k <= report.dimension; ++k) out << ",c" << k;
    out << "\n";
    char buf[64];
    for (size_t w = 0; w < static_cast<size_t>(report.plan.window_count); ++w) {
        for (Method mm : report.methods) {
            const auto& res = report.results.at(mm);
            out << w << "," << method_name(mm);
            for (int k = 0; k < report.dimension; ++k) {
                std::snprintf(buf, sizeof buf, "%.6g", res.per_window[w][static_cast<size_t>(k)]);
                out << "," << buf;
            }
            out << "\n";
        }
    }
}

void write_report_json(const ExponentReport& report, std::ostream& out) {
    nlohmann::json j;
    j["system"] = report.system;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : report.parameters) params[k] = v;
    j["parameters"] = params;
    j["plan"] = {{"T", report.plan.window_length},
                 {"m", report.plan.window_count},
                 {"t_start", report.plan.t_start},
                 {"transient", report.plan.transient}};
    j["trace_average"] = report.trace_average;
    j["zero_star_threshold"] = report.zero_star_threshold;
    nlohmann::json methods = nlohmann::json::object();
    for (Method mm : report.methods) {
        const auto& res = report.results.at(mm);
        nlohmann::json avg = nlohmann::json::array();
        for (int k = 0; k < report.dimension; ++k) avg.push_back(res.average[static_cast<size_t>(k)]);
        methods[method_name(mm)] = {{"average", avg}, {"signature", report.signature(mm)}};
    }
    j["methods"] = methods;
    out << j.dump(2) << "\n";
}

}  // namespace aportrait
