#include "aportrait/systems.hpp"

#include <cmath>
#include <stdexcept>

namespace aportrait {

namespace {

struct RegistryEntry {
    SystemId id;
    const char* name;
    int dim;
    bool autonomous;
    std::vector<std::pair<std::string, double>> defaults;
};

const std::vector<RegistryEntry>& registry() {
    static const std::vector<RegistryEntry> entries = {
        {SystemId::silnikov, "silnikov", 3, true, {{"a", 1.0}, {"b", 0.8}}},
        {SystemId::lorenz, "lorenz", 3, true, {{"sigma", 10.0}, {"beta", 8.0 / 3.0}, {"rho", 28.0}}},
        {SystemId::circle, "circle", 2, true, {}},
        {SystemId::vanderpol, "vanderpol", 2, true, {}},
        {SystemId::nosehoover_new, "nosehoover_new", 3, true, {{"eps", 0.42}}},
        {SystemId::nosehoover_classic, "nosehoover_classic", 3, true, {{"T", 1.0}}},
        {SystemId::rosenbrock, "rosenbrock", 2, false, {}},
    };
    return entries;
}

void check_dimension(const SystemDefinition& sys, const Vec& y) {
    if (y.size() != sys.dimension())
        throw std::invalid_argument("state dimension " + std::to_string(y.size()) +
                                    " does not match system '" + sys.name() + "' (dimension " +
                                    std::to_string(sys.dimension()) + ")");
}

// Coefficient matrix of the time-dependent linear counterexample system.
Mat rosenbrock_matrix(double t) {
    const double c = std::cos(6.0 * t);
    const double s = std::sin(6.0 * t);
    Mat A(2);
    A(0, 0) = -1.0 - 9.0 * c * c + 12.0 * s * c;
    A(0, 1) = 12.0 * c * c + 9.0 * s * c;
    A(1, 0) = -12.0 * s * s + 9.0 * s * c;
    A(1, 1) = -1.0 - 9.0 * s * s - 12.0 * s * c;
    return A;
}

}  // namespace

double SystemDefinition::parameter(const std::string& key) const {
    for (const auto& [k, v] : params_)
        if (k == key) return v;
    throw std::invalid_argument("system '" + name_ + "' has no parameter '" + key + "'");
}

SystemDefinition lookup_system(const std::string& name,
                               const std::map<std::string, double>& overrides) {
    const RegistryEntry* entry = nullptr;
    for (const auto& e : registry())
        if (name == e.name) entry = &e;
    if (!entry) throw std::invalid_argument("unknown system '" + name + "'");

    SystemDefinition sys;
    sys.id_ = entry->id;
    sys.name_ = entry->name;
    sys.dim_ = entry->dim;
    sys.autonomous_ = entry->autonomous;
    sys.params_ = entry->defaults;

    for (const auto& [key, value] : overrides) {
        if (!std::isfinite(value))
            throw std::invalid_argument("non-finite value for parameter '" + key + "'");
        bool known = false;
        for (auto& [k, v] : sys.params_)
            if (k == key) {
                v = value;
                known = true;
            }
        if (!known)
            throw std::invalid_argument("system '" + name + "' has no parameter '" + key + "'");
    }
    for (size_t i = 0; i < sys.params_.size() && i < 3; ++i) sys.p_[i] = sys.params_[i].second;
    return sys;
}

std::vector<std::string> registered_systems() {
    std::vector<std::string> names;
    for (const auto& e : registry()) names.push_back(e.name);
    return names;
}

Vec eval_field(const SystemDefinition& sys, const Vec& y, double t) {
    check_dimension(sys, y);
    switch (sys.id()) {
        case SystemId::silnikov: {
            const double a = sys.p(0), b = sys.p(1);
            return Vec(y[1], y[2], y[0] * y[0] * y[0] - a * a * y[0] - y[1] - b * y[2]);
        }
        case SystemId::lorenz: {
            const double sigma = sys.p(0), beta = sys.p(1), rho = sys.p(2);
            return Vec(sigma * (y[1] - y[0]), rho * y[0] - y[1] - y[0] * y[2],
                       y[0] * y[1] - beta * y[2]);
        }
        case SystemId::circle: {
            const double r = 1.0 - y[0] * y[0] - y[1] * y[1];
            return Vec(y[1] + y[0] * r, -y[0] + y[1] * r);
        }
        case SystemId::vanderpol:
            return Vec(y[1], -y[0] + y[1] * (1.0 - y[0] * y[0]));
        case SystemId::nosehoover_new: {
            const double eps = sys.p(0);
            return Vec(y[1], -y[0] - y[2] * y[1], y[1] * y[1] - (1.0 + eps * std::tanh(y[0])));
        }
        case SystemId::nosehoover_classic: {
            const double temp = sys.p(0);
            return Vec(y[1], -y[0] - y[2] * y[1], y[1] * y[1] - temp);
        }
        case SystemId::rosenbrock:
            return rosenbrock_matrix(t).apply(y);
    }
    throw std::logic_error("unreachable");
}

Mat eval_jacobian(const SystemDefinition& sys, const Vec& y, double t) {
    check_dimension(sys, y);
    switch (sys.id()) {
        case SystemId::silnikov: {
            const double a = sys.p(0), b = sys.p(1);
            Mat J(3);
            J(0, 1) = 1.0;
            J(1, 2) = 1.0;
            J(2, 0) = 3.0 * y[0] * y[0] - a * a;
            J(2, 1) = -1.0;
            J(2, 2) = -b;
            return J;
        }
        case SystemId::lorenz: {
            const double sigma = sys.p(0), beta = sys.p(1), rho = sys.p(2);
            Mat J(3);
            J(0, 0) = -sigma;
            J(0, 1) = sigma;
            J(1, 0) = rho - y[2];
            J(1, 1) = -1.0;
            J(1, 2) = -y[0];
            J(2, 0) = y[1];
            J(2, 1) = y[0];
            J(2, 2) = -beta;
            return J;
        }
        case SystemId::circle: {
            Mat J(2);
            J(0, 0) = 1.0 - 3.0 * y[0] * y[0] - y[1] * y[1];
            J(0, 1) = 1.0 - 2.0 * y[0] * y[1];
            J(1, 0) = -1.0 - 2.0 * y[0] * y[1];
            J(1, 1) = 1.0 - y[0] * y[0] - 3.0 * y[1] * y[1];
            return J;
        }
        case SystemId::vanderpol: {
            Mat J(2);
            J(0, 1) = 1.0;
            J(1, 0) = -1.0 - 2.0 * y[0] * y[1];
            J(1, 1) = 1.0 - y[0] * y[0];
            return J;
        }
        case SystemId::nosehoover_new: {
            const double eps = sys.p(0);
            const double sech = 1.0 / std::cosh(y[0]);
            Mat J(3);
            J(0, 1) = 1.0;
            J(1, 0) = -1.0;
            J(1, 1) = -y[2];
            J(1, 2) = -y[1];
            J(2, 0) = -eps * sech * sech;
            J(2, 1) = 2.0 * y[1];
            return J;
        }
        case SystemId::nosehoover_classic: {
            Mat J(3);
            J(0, 1) = 1.0;
            J(1, 0) = -1.0;
            J(1, 1) = -y[2];
            J(1, 2) = -y[1];
            J(2, 1) = 2.0 * y[1];
            return J;
        }
        case SystemId::rosenbrock:
            // Linear system: the coefficient matrix is its own linearization.
            return rosenbrock_matrix(t);
    }
    throw std::logic_error("unreachable");
}

double eval_divergence(const SystemDefinition& sys, const Vec& y, double t) {
    return eval_jacobian(sys, y, t).trace();
}

Vec default_seed(const SystemDefinition& sys) {
    switch (sys.id()) {
        case SystemId::silnikov: return Vec(0.1, 0.0, 0.0);
        case SystemId::lorenz: return Vec(1.0, 1.0, 1.0);
        case SystemId::circle: return Vec(2.0, 0.0);
        case SystemId::vanderpol: return Vec(2.0, 0.0);
        case SystemId::nosehoover_new: return Vec(0.1, 0.1, 0.1);
        case SystemId::nosehoover_classic: return Vec(0.1, 0.1, 0.1);
        case SystemId::rosenbrock: return Vec(1.0, 1.0);
    }
    throw std::logic_error("unreachable");
}

}  // namespace aportrait
