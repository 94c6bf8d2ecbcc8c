// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Run with no arguments for all criteria, or pass criterion numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "aportrait/exponents.hpp"
#include "aportrait/orbit.hpp"
#include "aportrait/portrait.hpp"
#include "aportrait/systems.hpp"
#include "oracles.hpp"

using namespace aportrait;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void check_close(Outcome& out, const char* label, double got, double want, double tol) {
    out.require(std::fabs(got - want) <= tol,
                std::string(label) + " = " + fmt(got) + ", want " + fmt(want) + " +- " + fmt(tol));
}

// 1. Rosenbrock oracle: GFE {2,-13} within 1e-6, LE_V {-1,-10} within 1e-8,
// LE_J {-5.5,-5.5} within 1e-6 over T = pi/3.
Outcome criterion1() {
    Outcome out;
    auto rb = lookup_system("rosenbrock");
    WindowPlan plan{0.0, kPi / 3, 1, 0.0};
    const auto rep = exponent_suite(rb, Vec(1.0, 0.0), plan,
                                    {Method::LE_J, Method::LE_V, Method::GFE});
    const auto& gfe = rep.results.at(Method::GFE).average;
    check_close(out, "GFE c1", gfe[0], 2.0, 1e-6);
    check_close(out, "GFE c2", gfe[1], -13.0, 1e-6);
    const auto& lev = rep.results.at(Method::LE_V).average;
    check_close(out, "LE_V c1", lev[0], -1.0, 1e-8);
    check_close(out, "LE_V c2", lev[1], -10.0, 1e-8);
    const auto& lej = rep.results.at(Method::LE_J).average;
    check_close(out, "LE_J c1", lej[0], -5.5, 1e-6);
    check_close(out, "LE_J c2", lej[1], -5.5, 1e-6);
    return out;
}

// 2. Circle-system oracle: period 2*pi +- 1e-6, rotation 1, GFE {0,-2}
// within 1e-6, LE_V {-1,-1} within 1e-8.
Outcome criterion2() {
    Outcome out;
    auto circle = lookup_system("circle");
    PeriodSearch search;
    search.transient = 50;
    search.max_time = 100;
    search.control = ToleranceSettings{.abs_tol = 1e-14, .rel_tol = 1e-13};
    const auto diag = detect_period(circle, Vec(2.0, 0.0), search);
    out.require(diag.classification == OrbitClass::closed_orbit, "orbit did not close");
    if (!out.ok) return out;
    check_close(out, "period", diag.period, 2 * kPi, 1e-6);
    out.require(diag.rotation_number == 1,
                "rotation " + std::to_string(diag.rotation_number) + ", want 1");

    WindowPlan plan{0.0, diag.period, 1, 0.0};
    const auto rep = exponent_suite(circle, diag.reference_point, plan,
                                    {Method::LE_V, Method::GFE}, search.control);
    const auto& gfe = rep.results.at(Method::GFE).average;
    check_close(out, "GFE c1", gfe[0], 0.0, 1e-6);
    check_close(out, "GFE c2", gfe[1], -2.0, 1e-6);
    const auto& lev = rep.results.at(Method::LE_V).average;
    check_close(out, "LE_V c1", lev[0], -1.0, 1e-8);
    check_close(out, "LE_V c2", lev[1], -1.0, 1e-8);
    return out;
}

void check_table_row(Outcome& out, const ExponentReport& rep, Method m,
                     const std::array<double, 3>& want, double tol) {
    const auto& avg = rep.results.at(m).average;
    for (int k = 0; k < 3; ++k)
        check_close(out, (std::string(method_name(m)) + " c" + std::to_string(k + 1)).c_str(),
                    avg[static_cast<size_t>(k)], want[static_cast<size_t>(k)], tol);
}

// 3. Silnikov (n1), a=1, b=0.8: period 6.2848 +- 0.01, all four methods
// within +-0.02 of the table, GFE signature (0*, -, -).
Outcome criterion3() {
    Outcome out;
    auto sil = lookup_system("silnikov", {{"a", 1.0}, {"b", 0.8}});
    const auto diag = detect_period(sil, Vec(0.1, 0, 0), {.transient = 500, .max_time = 2000});
    out.require(diag.classification == OrbitClass::closed_orbit, "orbit did not close");
    if (!out.ok) return out;
    check_close(out, "period", diag.period, 6.2848, 0.01);

    WindowPlan plan{0.0, diag.period, 1, 0.0};
    const auto rep = exponent_suite(sil, diag.reference_point, plan,
                                    {Method::LE_J, Method::LE_O, Method::LE_V, Method::GFE});
    check_table_row(out, rep, Method::LE_J, {-0.0701, -0.0701, -0.6600}, 0.02);
    check_table_row(out, rep, Method::LE_O, {0.5347, -0.4003, -0.9345}, 0.02);
    check_table_row(out, rep, Method::LE_V, {-0.0935, -0.0935, -0.6130}, 0.02);
    check_table_row(out, rep, Method::GFE, {0.0002, -0.1456, -0.6542}, 0.02);
    out.require(rep.signature(Method::GFE) == "(0*, -, -)",
                "GFE signature " + rep.signature(Method::GFE));
    return out;
}

// 4. Silnikov spot checks: (n2) b=0.6 all methods +-0.02; (n5) b=0.5 GFE
// +-0.02; (n10) b=0.392 period 12.7176 +- 0.02, rotation 2, GFE +-0.05.
Outcome criterion4() {
    Outcome out;
    {
        auto sil = lookup_system("silnikov", {{"b", 0.6}});
        const auto diag = detect_period(sil, Vec(0.1, 0, 0), {.transient = 500, .max_time = 2000});
        out.require(diag.classification == OrbitClass::closed_orbit, "(n2) orbit did not close");
        if (diag.classification == OrbitClass::closed_orbit) {
            WindowPlan plan{0.0, diag.period, 1, 0.0};
            const auto rep =
                exponent_suite(sil, diag.reference_point, plan,
                               {Method::LE_J, Method::LE_O, Method::LE_V, Method::GFE});
            check_table_row(out, rep, Method::LE_J, {-0.1929, -0.1929, -0.2142}, 0.02);
            check_table_row(out, rep, Method::LE_O, {0.5044, -0.4654, -0.6390}, 0.02);
            check_table_row(out, rep, Method::LE_V, {-0.1958, -0.1958, -0.2085}, 0.02);
            check_table_row(out, rep, Method::GFE, {0.0003, -0.2136, -0.3860}, 0.02);
        }
    }
    {
        // convergence to the b = 0.5 cycle is slow (second exponent -0.0185)
        auto sil = lookup_system("silnikov", {{"b", 0.5}});
        const auto diag = detect_period(sil, Vec(0.1, 0, 0), {.transient = 3000, .max_time = 2000});
        out.require(diag.classification == OrbitClass::closed_orbit, "(n5) orbit did not close");
        if (diag.classification == OrbitClass::closed_orbit) {
            WindowPlan plan{0.0, diag.period, 1, 0.0};
            const auto rep = exponent_suite(sil, diag.reference_point, plan, {Method::GFE});
            check_table_row(out, rep, Method::GFE, {0.0000, -0.0185, -0.4815}, 0.02);
        }
    }
    {
        auto sil = lookup_system("silnikov", {{"b", 0.392}});
        const auto diag = detect_period(sil, Vec(0.1, 0, 0), {.transient = 500, .max_time = 2000});
        out.require(diag.classification == OrbitClass::closed_orbit, "(n10) orbit did not close");
        if (diag.classification == OrbitClass::closed_orbit) {
            check_close(out, "(n10) period", diag.period, 12.7176, 0.02);
            out.require(diag.rotation_number == 2,
                        "(n10) rotation " + std::to_string(diag.rotation_number) + ", want 2");
            WindowPlan plan{0.0, diag.period, 1, 0.0};
            const auto rep = exponent_suite(sil, diag.reference_point, plan, {Method::GFE});
            check_table_row(out, rep, Method::GFE, {0.0000, -0.1960, -0.1960}, 0.05);
        }
    }
    return out;
}

// 5. Bifurcation localization: one cycle at b=0.6, two at b=0.48; the finer
// boundary is bracketed inside 0.48925 +- 0.001.
Outcome criterion5() {
    Outcome out;
    const std::vector<Vec> seeds = {Vec(0.1, 0, 0), Vec(-0.1, 0, 0)};
    auto count_at = [&](double b, double transient, double closure_tol) {
        auto sil = lookup_system("silnikov", {{"b", b}});
        PeriodSearch search;
        search.transient = transient;
        search.closure_tol = closure_tol;
        search.max_time = 3000;
        return count_distinct_cycles(sil, seeds, 1e-3, search).count;
    };
    const int at06 = count_at(0.6, 500, 1e-6);
    out.require(at06 == 1, "b=0.6 cycle count " + std::to_string(at06) + ", want 1");
    const int at048 = count_at(0.48, 500, 1e-6);
    out.require(at048 == 2, "b=0.48 cycle count " + std::to_string(at048) + ", want 2");
    // boundary attempt at +-0.001 around the reference value 0.48925
    const int above = count_at(0.4902, 3000, 1e-5);
    const int below = count_at(0.4883, 3000, 1e-5);
    out.require(above == 1, "b=0.4902 cycle count " + std::to_string(above) + ", want 1");
    out.require(below == 2, "b=0.4883 cycle count " + std::to_string(below) + ", want 2");
    return out;
}

// 6. Sum identity: on lorenz (T=0.4, m=100) and silnikov b=0.8 (T=period)
// every component sum equals the trace average within 1e-4; the lorenz trace
// average is -41/3 within 1e-6.
Outcome criterion6() {
    Outcome out;
    const std::vector<Method> all = {Method::LE_J, Method::LE_O, Method::LE_V, Method::GFE};
    {
        auto lor = lookup_system("lorenz");
        WindowPlan plan{0.0, 0.4, 100, 200.0};
        const auto rep = exponent_suite(lor, Vec(1, 1, 1), plan, all);
        check_close(out, "lorenz trace average", rep.trace_average, -41.0 / 3.0, 1e-6);
        for (Method m : all) {
            const auto& a = rep.results.at(m).average;
            check_close(out, (std::string("lorenz ") + method_name(m) + " sum").c_str(),
                        a[0] + a[1] + a[2], rep.trace_average, 1e-4);
        }
    }
    {
        auto sil = lookup_system("silnikov", {{"b", 0.8}});
        const auto diag = detect_period(sil, Vec(0.1, 0, 0), {.transient = 500, .max_time = 2000});
        out.require(diag.classification == OrbitClass::closed_orbit,
                    "silnikov orbit did not close");
        if (diag.classification == OrbitClass::closed_orbit) {
            WindowPlan plan{0.0, diag.period, 1, 0.0};
            const auto rep = exponent_suite(sil, diag.reference_point, plan, all);
            for (Method m : all) {
                const auto& a = rep.results.at(m).average;
                check_close(out, (std::string("silnikov ") + method_name(m) + " sum").c_str(),
                            a[0] + a[1] + a[2], rep.trace_average, 1e-4);
            }
        }
    }
    return out;
}

// 7. Aperiodic case (n13), b=0.314, T=20, m=400: GFE within +-0.05 of
// (0.1457, -0.0378, -0.4219), signature (+, -, -).
Outcome criterion7() {
    Outcome out;
    auto sil = lookup_system("silnikov", {{"b", 0.314}});
    WindowPlan plan{0.0, 20.0, 400, 200.0};
    const auto rep = exponent_suite(sil, Vec(0.1, 0, 0), plan, {Method::GFE});
    check_table_row(out, rep, Method::GFE, {0.1457, -0.0378, -0.4219}, 0.05);
    out.require(rep.signature(Method::GFE) == "(+, -, -)",
                "GFE signature " + rep.signature(Method::GFE));
    return out;
}

// 8. Van der Pol portrait property: every portrait sample on the detected
// limit cycle with |x| < 0.3 has only positive eigenvalue real parts.
Outcome criterion8() {
    Outcome out;
    auto vdp = lookup_system("vanderpol");
    const auto diag = detect_period(vdp, Vec(2.0, 0.0), {.transient = 200, .max_time = 100});
    out.require(diag.classification == OrbitClass::closed_orbit, "orbit did not close");
    if (!out.ok) return out;

    WindowPlan plan{0.0, diag.period / 1000, 1000, 0.0};
    const auto doc = build_portrait(vdp, diag.reference_point, plan);
    int checked = 0;
    double worst = 1e300;
    Vec worst_at;
    for (const auto& s : doc.samples) {
        if (std::fabs(s.point[0]) >= 0.3) continue;
        ++checked;
        for (int k = 0; k < 2; ++k)
            if (s.spectrum_real_parts[static_cast<size_t>(k)] < worst) {
                worst = s.spectrum_real_parts[static_cast<size_t>(k)];
                worst_at = s.point;
            }
    }
    out.require(checked > 0, "no samples landed in |x| < 0.3");
    out.require(worst > 0.0, "min eigenvalue real part " + fmt(worst) + " at (" +
                                 fmt(worst_at[0]) + ", " + fmt(worst_at[1]) +
                                 ") across " + std::to_string(checked) +
                                 " samples, want > 0");
    return out;
}

// 9. Lorenz portrait at E1 settings: 5001 sample groups, per-group real-part
// sums equal -41/3 within 1e-9, both polarities occur, deterministic SVG.
Outcome criterion9() {
    Outcome out;
    auto lor = lookup_system("lorenz");
    WindowPlan plan{0.0, 0.4, 5000, 200.0};
    const auto doc = build_portrait(lor, Vec(1, 1, 1), plan);
    out.require(doc.samples.size() == 5001,
                "sample groups " + std::to_string(doc.samples.size()) + ", want 5001");
    double worst = 0;
    int attract = 0, repel = 0;
    for (const auto& s : doc.samples) {
        const double sum =
            s.spectrum_real_parts[0] + s.spectrum_real_parts[1] + s.spectrum_real_parts[2];
        worst = std::max(worst, std::fabs(sum - (-41.0 / 3.0)));
        for (const auto& seg : s.segments) {
            if (seg.polarity == Polarity::attract) ++attract;
            if (seg.polarity == Polarity::repel) ++repel;
        }
    }
    out.require(worst <= 1e-9, "worst real-part sum deviation " + fmt(worst));
    out.require(attract > 0 && repel > 0, "polarities: attract " + std::to_string(attract) +
                                              ", repel " + std::to_string(repel));

    const auto doc2 = build_portrait(lor, Vec(1, 1, 1), plan);
    const auto svg1 = render_svg(doc, named_view("xy"));
    const auto svg2 = render_svg(doc2, named_view("xy"));
    out.require(svg1 == svg2, "SVG output is not deterministic");
    return out;
}

// 10. Nose-Hoover eps=0.42: the two torus seeds stay bounded over [0, 8000];
// portraits build for both tori and the limit cycle.
Outcome criterion10() {
    Outcome out;
    auto nh = lookup_system("nosehoover_new");
    for (const Vec seed : {Vec(-2.25, 0, 0), Vec(2.53, 0, 0)}) {
        double max_comp = 0;
        Vec y = seed;
        double t = 0;
        while (t < 8000.0) {
            const Trajectory traj = integrate(nh, y, t, t + 200.0);
            for (size_t i = 0; i < traj.sample_count(); ++i)
                max_comp = std::max(max_comp, traj.state(i).norm_inf());
            y = traj.back();
            t += 200.0;
        }
        out.require(max_comp < 10.0, "seed (" + fmt(seed[0]) + ",0,0) max component " +
                                         fmt(max_comp) + ", want < 10");
        WindowPlan plan{0.0, 1.0, 8000, 0.0};
        const auto doc = build_portrait(nh, seed, plan);
        out.require(doc.samples.size() == 8001, "torus portrait incomplete");
    }
    const auto cyc = detect_period(nh, Vec(0.1, 0.1, 0.1),
                                   {.transient = 30000, .closure_tol = 1e-6, .max_time = 2000});
    out.require(cyc.classification == OrbitClass::closed_orbit, "limit cycle did not close");
    if (cyc.classification == OrbitClass::closed_orbit) {
        WindowPlan plan{0.0, cyc.period / 200, 200, 0.0};
        const auto doc = build_portrait(nh, cyc.reference_point, plan);
        out.require(doc.samples.size() == 201, "limit-cycle portrait incomplete");
    }
    return out;
}

// 11. Property suites: eigen vs bisection oracle (1e3 matrices, 1e-9),
// Liouville identity (1e-6 * span, all systems), monodromy composition
// (1e-8), finite-difference jacobians (1e-6).
Outcome criterion11() {
    Outcome out;
    {
        std::mt19937 rng(20240612);
        double worst = 0;
        for (int k = 0; k < 1000; ++k) {
            const Mat M = testing::random_matrix(rng, 3);
            const auto got = eigen(M);
            const auto want = testing::bisection_oracle(M);
            for (int i = 0; i < 3; ++i)
                worst = std::max(worst, std::abs(got.values[static_cast<size_t>(i)] -
                                                 want[static_cast<size_t>(i)]) /
                                            std::max(1.0, std::abs(want[static_cast<size_t>(i)])));
        }
        out.require(worst <= 1e-9, "eigen vs oracle worst deviation " + fmt(worst));
    }
    {
        double worst_ratio = 0;
        const double span = 0.5;
        for (const auto& name : registered_systems()) {
            auto sys = lookup_system(name);
            const auto [traj, fm] = integrate_with_fundamental(sys, default_seed(sys), 0.0, span);
            worst_ratio = std::max(worst_ratio, liouville_check(sys, traj, fm) / span);
        }
        out.require(worst_ratio <= 1e-6, "Liouville worst deviation/span " + fmt(worst_ratio));
    }
    {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(0.2, 0.8);
        const ToleranceSettings tight{.abs_tol = 1e-12, .rel_tol = 1e-11};
        double worst = 0;
        for (const char* name : {"lorenz", "silnikov"}) {
            auto sys = lookup_system(name);
            const Vec y0 = default_seed(sys);
            for (int k = 0; k < 3; ++k) {
                const double t1 = u(rng);
                const auto [wt, whole] = integrate_with_fundamental(sys, y0, 0.0, 1.0, tight);
                const auto [at, first] = integrate_with_fundamental(sys, y0, 0.0, t1, tight);
                const auto [bt, second] =
                    integrate_with_fundamental(sys, at.back(), t1, 1.0, tight);
                const Mat got = second.Phi * first.Phi;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        worst = std::max(worst, std::fabs(got(i, j) - whole.Phi(i, j)));
            }
        }
        out.require(worst <= 1e-8, "monodromy composition worst deviation " + fmt(worst));
    }
    {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const double h = 1e-5;
        double worst = 0;
        for (const auto& name : registered_systems()) {
            auto sys = lookup_system(name);
            const int n = sys.dimension();
            for (int k = 0; k < 1000; ++k) {
                Vec y = n == 3 ? Vec(u(rng), u(rng), u(rng)) : Vec(u(rng), u(rng));
                const double t = u(rng);
                const Mat J = eval_jacobian(sys, y, t);
                for (int j = 0; j < n; ++j) {
                    Vec yp = y, ym = y;
                    yp[j] += h;
                    ym[j] -= h;
                    const Vec fp = eval_field(sys, yp, t);
                    const Vec fm = eval_field(sys, ym, t);
                    for (int i = 0; i < n; ++i)
                        worst = std::max(worst,
                                         std::fabs((fp[i] - fm[i]) / (2 * h) - J(i, j)));
                }
            }
        }
        out.require(worst <= 1e-6, "finite-difference jacobian worst deviation " + fmt(worst));
    }
    return out;
}

struct Criterion {
    int number;
    const char* title;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "rosenbrock oracle (GFE, LE_V, LE_J)", criterion1},
    {2, "circle-system oracle (period, GFE, LE_V)", criterion2},
    {3, "silnikov table (n1), b=0.8", criterion3},
    {4, "silnikov spot checks (n2), (n5), (n10)", criterion4},
    {5, "bifurcation localization near b=0.4892", criterion5},
    {6, "four-method sum identity (lorenz, silnikov)", criterion6},
    {7, "aperiodic case (n13), b=0.314", criterion7},
    {8, "van der Pol repel-only window |x| < 0.3", criterion8},
    {9, "lorenz portrait, 5001 groups", criterion9},
    {10, "nose-hoover boundedness and portraits", criterion10},
    {11, "property suites (oracle, liouville, composition, jacobians)", criterion11},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), c.number) == selected.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.ok = false;
            out.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %2d [%5.1fs]: %s%s%s\n", out.ok ? "PASS" : "FAIL", c.number,
                    secs, c.title, out.detail.empty() ? "" : " -- ", out.detail.c_str());
        if (!out.ok) ++failures;
    }
    return failures;
}
