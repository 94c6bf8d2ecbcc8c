#pragma once

#include <map>
#include <string>
#include <vector>

#include "aportrait/linalg.hpp"

namespace aportrait {

enum class SystemId {
    silnikov,
    lorenz,
    circle,
    vanderpol,
    nosehoover_new,
    nosehoover_classic,
    rosenbrock,
};

// A benchmark vector field with analytic Jacobian. Immutable after lookup;
// safe to share across threads.
class SystemDefinition {
public:
    SystemId id() const { return id_; }
    const std::string& name() const { return name_; }
    int dimension() const { return dim_; }
    bool autonomous() const { return autonomous_; }
    const std::vector<std::pair<std::string, double>>& parameters() const { return params_; }
    double parameter(const std::string& key) const;

    // Resolved parameter slots in registry order, for hot-path evaluation.
    double p(int i) const { return p_[i]; }

private:
    friend SystemDefinition lookup_system(const std::string&,
                                          const std::map<std::string, double>&);
    SystemId id_{};
    std::string name_;
    int dim_ = 0;
    bool autonomous_ = true;
    std::vector<std::pair<std::string, double>> params_;
    std::array<double, 3> p_{};
};

// Registry lookup with per-system parameter whitelist. Throws
// std::invalid_argument on unknown names, unknown keys, or non-finite values.
SystemDefinition lookup_system(const std::string& name,
                               const std::map<std::string, double>& overrides = {});

std::vector<std::string> registered_systems();

Vec eval_field(const SystemDefinition& sys, const Vec& y, double t);
Mat eval_jacobian(const SystemDefinition& sys, const Vec& y, double t);
double eval_divergence(const SystemDefinition& sys, const Vec& y, double t);

// Conventional starting state used by the CLI when no seed is given.
Vec default_seed(const SystemDefinition& sys);

}  // namespace aportrait
