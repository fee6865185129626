#pragma once

#include "napde/evolve.hpp"

namespace napde {

struct GardingResult {
    double margin = 0;    ///< lambda_min of Herm(K) + omega M_I - alpha M_V
    double threshold = 0; ///< -1e-10 ||K||
    bool pass = false;
};

struct ContractionConditions {
    bool c_i = false;   ///< W_R + F*(diag(G*P1(1)G, -G*P1(0)G))F >= 0
    bool c_ii = false;  ///< Herm(P0 + GG* P1' + (1/2) GG* P1' GG*) <= 0
    bool c_iii = false; ///< P1 = P1*
    bool all() const { return c_i && c_ii && c_iii; }
};

struct EnergyReport {
    std::vector<double> times;
    std::vector<double> energy;
    double max_increase = 0; ///< largest positive relative jump
    bool monotone = false;
};

struct MRReport {
    double du_norm = 0;   ///< ||D_tau u||_{L^p(L^2)}
    double au_norm = 0;   ///< ||f - D_tau u||_{L^p(L^2)}, surrogate for ||A H u||
    double u_norm = 0;
    double data_norm = 0; ///< ||x0||_V + ||f||_{L^p(L^2)}
    double ratio = 0;
};

struct ConvergenceReport {
    std::vector<double> hs, errors_h;     ///< C(L^2) errors of the h-study
    std::vector<double> taus, errors_tau; ///< same-mesh time-refinement errors
    std::vector<double> errors_h_l2l2;
    double order_h = 0;
    double order_tau = 0;
};

/// Smooth reference solution with analytic derivatives, compatible with the
/// boundary conditions of the strong operator domain.
struct ManufacturedSolution {
    std::function<Vector(double t, double z)> value;
    std::function<Vector(double t, double z)> dt;
    std::function<Vector(double t, double z)> dz;
    std::function<Vector(double t, double z)> dzz; ///< optional
};

/// Discrete Garding inequality at the given constants.
GardingResult garding_check(const DiscreteSpace& space, const ProblemSpec& spec, double t,
                            double omega, double alpha);

ContractionConditions contraction_conditions(const ProblemSpec& spec, int nt = 33, int nz = 33);

/// Requires a trajectory computed with f = 0.
EnergyReport energy_monitor(const Trajectory& traj);

MRReport mr_functional(const DiscreteSpace& space, const ProblemSpec& spec,
                       const Trajectory& traj, double p);

/// f = du/dt - d/dz(G S d/dz(G* H u) + P1 H u) - P0 H u from the supplied
/// derivatives; throws IncompatibleBoundary if the boundary residual of the
/// strong domain exceeds 1e-8.
MatrixField manufactured_rhs(const ProblemSpec& spec, const ManufacturedSolution& u_exact);

/// Smooth reference compatible with the boundary conditions of the named
/// preset: heat-* and damped-wave-dirichlet are covered.
ManufacturedSolution manufactured_reference(const std::string& preset_name);

ConvergenceReport convergence_study(const ProblemSpec& spec, const ManufacturedSolution& u_exact,
                                    int levels, SchemeKind kind = SchemeKind::ImplicitEuler,
                                    int N0 = 8, double tau0 = 1e-2);

/// C(L^2) and L^2(L^2) errors of a trajectory against a reference solution.
std::pair<double, double> trajectory_error(const DiscreteSpace& space, const ProblemSpec& spec,
                                           const Trajectory& traj,
                                           const std::function<Vector(double, double)>& u_ref);

} // namespace napde
