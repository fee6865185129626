#pragma once

#include "napde/discretize.hpp"

namespace napde {

enum class SchemeKind { ImplicitEuler, CrankNicolson };

struct Scheme {
    SchemeKind kind = SchemeKind::ImplicitEuler;
    double tau = 1e-3;
};

/// Discrete solution of the v-formulation d/dt (H^{-1} v) + A(t) v = f,
/// v(t) = H(t) u(t). u is recovered pointwise as u = H^{-1} v.
struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> v_coeffs;  ///< reduced DOF vectors
    std::vector<double> norm_h;    ///< ||v||_{L^2}
    std::vector<double> norm_v;    ///< ||v||_V
    std::vector<double> energy;    ///< E_m = (H u | u) = v^H M_{H^-1} v
    bool x0_projected = false;     ///< initial datum violated the essential constraints

    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
};

/// One step of the scheme. Implicit Euler solves
///   (M(t+tau) + tau K(t+tau)) v_{+} = M(t) v + tau b(t+tau),
/// Crank-Nicolson the midpoint analogue. M is the H^{-1}-weighted mass.
Vector step(const DiscreteSpace& space, const ProblemSpec& spec, const Scheme& scheme,
            double t_m, const Vector& v_m);

/// Full trajectory on [t0, spec.horizon] from reduced initial coefficients
/// for v(t0) = H(t0) u(t0).
Trajectory solve_ivp(const DiscreteSpace& space, const ProblemSpec& spec, const Scheme& scheme,
                     const Vector& x0_red, const MatrixField& f, double t0 = 0.0);

/// Convenience overload interpolating the initial datum (projected onto the
/// essential constraints when necessary).
Trajectory solve_ivp(const DiscreteSpace& space, const ProblemSpec& spec, const Scheme& scheme,
                     const std::function<Vector(double)>& x0, const MatrixField& f,
                     double t0 = 0.0);

/// Product of one-step solution operators mapping v(s) to v(t) with f = 0.
Matrix discrete_propagator(const DiscreteSpace& space, const ProblemSpec& spec,
                           const Scheme& scheme, double s, double t);

/// u(t_m, zeta) = H(t_m, zeta)^{-1} v_h(t_m, zeta).
Vector u_value(const DiscreteSpace& space, const ProblemSpec& spec, const Trajectory& traj,
               std::size_t m, double zeta);

bool spec_is_autonomous(const ProblemSpec& spec);

} // namespace napde
