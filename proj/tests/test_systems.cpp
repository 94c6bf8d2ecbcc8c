#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "aportrait/systems.hpp"

using namespace aportrait;

TEST_CASE("registry lookup with defaults and overrides") {
    auto lor = lookup_system("lorenz");
    CHECK(lor.dimension() == 3);
    CHECK(lor.parameter("sigma") == doctest::Approx(10.0));
    CHECK(lor.parameter("beta") == doctest::Approx(8.0 / 3.0));
    CHECK(lor.parameter("rho") == doctest::Approx(28.0));

    auto sil = lookup_system("silnikov", {{"a", 1.0}, {"b", 0.8}});
    CHECK(sil.dimension() == 3);
    CHECK(sil.autonomous());
    CHECK(sil.parameter("b") == doctest::Approx(0.8));

    auto rb = lookup_system("rosenbrock");
    CHECK(rb.dimension() == 2);
    CHECK_FALSE(rb.autonomous());

    CHECK_THROWS_AS((void)lookup_system("roessler"), std::invalid_argument);
    CHECK_THROWS_AS((void)lookup_system("lorenz", {{"gamma", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS((void)lookup_system("lorenz", {{"rho", std::nan("")}}), std::invalid_argument);
}

TEST_CASE("field values at pinned points") {
    auto sil = lookup_system("silnikov");
    Vec f0 = eval_field(sil, Vec(0, 0, 0), 0);
    CHECK(f0.norm() == doctest::Approx(0.0));  // origin is an equilibrium

    auto circle = lookup_system("circle");
    Vec fc = eval_field(circle, Vec(1.0, 0.0), 0);
    CHECK(fc[0] == doctest::Approx(0.0));
    CHECK(fc[1] == doctest::Approx(-1.0));

    auto lor = lookup_system("lorenz");
    Vec fl = eval_field(lor, Vec(1, 1, 1), 0);
    CHECK(fl[0] == doctest::Approx(0.0));
    CHECK(fl[1] == doctest::Approx(26.0));
    CHECK(fl[2] == doctest::Approx(1.0 - 8.0 / 3.0));

    CHECK_THROWS_AS((void)eval_field(lor, Vec(1.0, 2.0), 0), std::invalid_argument);
}

TEST_CASE("jacobians at pinned points") {
    auto sil = lookup_system("silnikov", {{"a", 1.0}, {"b", 0.8}});
    Mat J = eval_jacobian(sil, Vec(0, 0, 0), 0);
    const double want[3][3] = {{0, 1, 0}, {0, 0, 1}, {-1, -1, -0.8}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(J(i, j) == doctest::Approx(want[i][j]));

    auto rb = lookup_system("rosenbrock");
    Mat A0 = eval_jacobian(rb, Vec(0.0, 0.0), 0.0);
    CHECK(A0(0, 0) == doctest::Approx(-10.0));
    CHECK(A0(0, 1) == doctest::Approx(12.0));
    CHECK(A0(1, 0) == doctest::Approx(0.0));
    CHECK(A0(1, 1) == doctest::Approx(-1.0));

    auto vdp = lookup_system("vanderpol");
    Mat Jv = eval_jacobian(vdp, Vec(0.0, 2.0), 0);
    CHECK(Jv(0, 0) == doctest::Approx(0.0));
    CHECK(Jv(0, 1) == doctest::Approx(1.0));
    CHECK(Jv(1, 0) == doctest::Approx(-1.0));
    CHECK(Jv(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("divergence equals jacobian trace and known constants") {
    auto lor = lookup_system("lorenz");
    CHECK(eval_divergence(lor, Vec(3, -2, 7), 0) == doctest::Approx(-41.0 / 3.0));

    auto sil = lookup_system("silnikov", {{"b", 0.8}});
    CHECK(eval_divergence(sil, Vec(0.3, -1, 2), 0) == doctest::Approx(-0.8));

    auto nh = lookup_system("nosehoover_new");
    CHECK(eval_divergence(nh, Vec(0.4, -0.2, 1.7), 0) == doctest::Approx(-1.7));
    CHECK(eval_divergence(nh, Vec(0.4, -0.2, -0.6), 0) == doctest::Approx(0.6));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (const auto& name : registered_systems()) {
        auto sys = lookup_system(name);
        for (int k = 0; k < 50; ++k) {
            Vec y = sys.dimension() == 3 ? Vec(u(rng), u(rng), u(rng)) : Vec(u(rng), u(rng));
            const double t = u(rng);
            CHECK(eval_divergence(sys, y, t) == eval_jacobian(sys, y, t).trace());
        }
    }
}

TEST_CASE("analytic jacobian matches central finite differences") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    const double h = 1e-5;
    for (const auto& name : registered_systems()) {
        auto sys = lookup_system(name);
        const int n = sys.dimension();
        double worst = 0;
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
                    worst = std::max(worst, std::fabs((fp[i] - fm[i]) / (2 * h) - J(i, j)));
            }
        }
        INFO("system ", name);
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("silnikov field is odd") {
    auto sil = lookup_system("silnikov", {{"a", 1.3}, {"b", 0.45}});
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
        Vec y(u(rng), u(rng), u(rng));
        const Vec f = eval_field(sil, y, 0);
        const Vec g = eval_field(sil, -y, 0);
        CHECK((f + g).norm_inf() == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("autonomous systems ignore the time argument") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (const auto& name : registered_systems()) {
        auto sys = lookup_system(name);
        if (!sys.autonomous()) continue;
        const int n = sys.dimension();
        for (int k = 0; k < 20; ++k) {
            Vec y = n == 3 ? Vec(u(rng), u(rng), u(rng)) : Vec(u(rng), u(rng));
            const Vec f1 = eval_field(sys, y, u(rng));
            const Vec f2 = eval_field(sys, y, u(rng));
            CHECK((f1 - f2).norm_inf() == 0.0);
        }
    }
    // the rosenbrock coefficients do move with time
    auto rb = lookup_system("rosenbrock");
    CHECK((eval_field(rb, Vec(1, 1), 0.0) - eval_field(rb, Vec(1, 1), 0.1)).norm_inf() > 0.1);
}
