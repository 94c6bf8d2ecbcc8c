#pragma once

#include <string>
#include <vector>

#include "aportrait/integrator.hpp"
#include "aportrait/linalg.hpp"
#include "aportrait/systems.hpp"

namespace aportrait {

// Oriented plane section through an anchor point. A crossing counts when the
// trajectory passes the plane with velocity aligned to orientation * normal.
struct SectionSpec {
    Vec anchor;
    Vec normal;           // unit
    int orientation = 1;  // +1: normal-aligned velocity counts
};

struct Crossing {
    double time;
    Vec state;
};

struct CrossingScan {
    std::vector<Crossing> crossings;
    int grazing_skipped = 0;
};

// All same-orientation transversal crossings of the trajectory, each refined
// by bisection on the section function to 1e-10 time accuracy. Tangential
// grazings (|d/dt section| < 1e-8 at the crossing) are skipped and counted.
CrossingScan find_crossings(const Trajectory& traj, const SectionSpec& section);

enum class OrbitClass { equilibrium, closed_orbit, aperiodic };

const char* orbit_class_name(OrbitClass c);

struct OrbitDiagnosis {
    OrbitClass classification = OrbitClass::aperiodic;
    double period = 0;          // closed orbits only
    int rotation_number = 0;    // closed orbits only
    Vec reference_point;
    double closure_residual = 0;
    std::vector<Crossing> crossings;
    int grazing_skipped = 0;
};

struct PeriodSearch {
    double transient = 500;
    double closure_tol = 1e-6;
    double max_time = 2000;  // give up and classify aperiodic after this span
    ToleranceSettings control;
};

// Integrates past the transient, then watches same-orientation returns to the
// flow-normal section through the reference point. The first return within
// closure_tol closes the orbit; its index among the crossings is the rotation
// number.
OrbitDiagnosis detect_period(const SystemDefinition& sys, const Vec& seed,
                             const PeriodSearch& search = {});

struct CycleCensus {
    int count = 0;
    std::vector<OrbitDiagnosis> representatives;  // one per cluster
    std::vector<int> seed_cluster;                // per seed; -1 when excluded
    std::vector<size_t> excluded_seeds;           // unresolved or equilibrium
};

// Clusters the closed orbits found from the seeds by symmetric Hausdorff
// distance between sampled loops.
CycleCensus count_distinct_cycles(const SystemDefinition& sys, const std::vector<Vec>& seeds,
                                  double match_tol = 1e-3, const PeriodSearch& search = {});

void write_crossings_csv(const std::vector<Crossing>& crossings, int dimension,
                         std::ostream& out);

}  // namespace aportrait
