#include "napde/evolve.hpp"

#include <cmath>

#include <Eigen/SparseLU>

namespace napde {

namespace {

using Solver = Eigen::SparseLU<SparseMatrix>;

void factorize(Solver& lu, const SparseMatrix& A, double t) {
    lu.compute(A);
    if (lu.info() != Eigen::Success)
        throw SingularSystem("factorization failed at t=" + std::to_string(t));
}

long step_count(double t0, double T, double tau) {
    const double raw = (T - t0) / tau;
    const long m = std::lround(raw);
    if (m < 1 || std::abs(raw - double(m)) > 1e-9 * std::max(1.0, raw))
        throw GridMisaligned("tau does not divide the time interval");
    return m;
}

void check_breakpoints(const ProblemSpec& spec, double t0, double tau) {
    for (const MatrixField* f : {&spec.S, &spec.H, &spec.P0, &spec.P1, &spec.W_R, &spec.f}) {
        for (double b : f->t_breakpoints) {
            const double raw = (b - t0) / tau;
            if (std::abs(raw - std::round(raw)) > 1e-9)
                throw GridMisaligned("coefficient breakpoint t=" + std::to_string(b) +
                                     " is not a time-grid point");
        }
    }
}

} // namespace

bool spec_is_autonomous(const ProblemSpec& spec) {
    return !spec.S.time_dependent && !spec.H.time_dependent && !spec.P0.time_dependent &&
           !spec.P1.time_dependent && (spec.r == 0 || !spec.W_R.time_dependent);
}

Vector step(const DiscreteSpace& space, const ProblemSpec& spec, const Scheme& scheme,
            double t_m, const Vector& v_m) {
    const double tau = scheme.tau;
    const MatrixField Hinv = inverse_field(spec.H);
    const SparseMatrix M0 = assemble_mass(space, Hinv, t_m);
    const SparseMatrix M1 = assemble_mass(space, Hinv, t_m + tau);
    Solver lu;
    if (scheme.kind == SchemeKind::ImplicitEuler) {
        const SparseMatrix K = assemble_stiffness(space, spec, t_m + tau);
        const Vector b = assemble_load(space, spec.f, t_m + tau);
        factorize(lu, SparseMatrix(M1 + tau * K), t_m + tau);
        return lu.solve(Vector(M0 * v_m + tau * b));
    }
    const double tmid = t_m + tau / 2;
    const SparseMatrix K = assemble_stiffness(space, spec, tmid);
    const Vector b = assemble_load(space, spec.f, tmid);
    factorize(lu, SparseMatrix(M1 + (tau / 2) * K), tmid);
    return lu.solve(Vector(M0 * v_m - (tau / 2) * (K * v_m) + tau * b));
}

Trajectory solve_ivp(const DiscreteSpace& space, const ProblemSpec& spec, const Scheme& scheme,
                     const Vector& x0_red, const MatrixField& f, double t0) {
    if (scheme.tau <= 0) throw InvalidSize("tau must be positive");
    check_breakpoints(spec, t0, scheme.tau);
    const double tau = scheme.tau;
    const long msteps = step_count(t0, spec.horizon, tau);
    const bool autonomous = spec_is_autonomous(spec);
    const MatrixField Hinv = inverse_field(spec.H);

    Trajectory traj;
    traj.times.reserve(msteps + 1);
    traj.v_coeffs.reserve(msteps + 1);

    SparseMatrix M_prev = assemble_mass(space, Hinv, t0);
    const SparseMatrix MI = assemble_mass(space, identity_field(spec.n), 0.0);
    const SparseMatrix MV = assemble_vgram(space);
    SparseMatrix K_cached;
    Solver lu;
    bool factored = false;

    Vector v = x0_red;
    auto record = [&](double t, const Vector& vv, const SparseMatrix& M) {
        traj.times.push_back(t);
        traj.v_coeffs.push_back(vv);
        traj.norm_h.push_back(std::sqrt(std::max(0.0, (vv.adjoint() * (MI * vv))(0).real())));
        traj.norm_v.push_back(std::sqrt(std::max(0.0, (vv.adjoint() * (MV * vv))(0).real())));
        traj.energy.push_back(std::max(0.0, (vv.adjoint() * (M * vv))(0).real()));
    };
    record(t0, v, M_prev);

    for (long m = 0; m < msteps; ++m) {
        const double t = t0 + m * tau;
        const double t_next = t0 + (m + 1) * tau;
        const double t_assm = (scheme.kind == SchemeKind::ImplicitEuler) ? t_next : t + tau / 2;
        SparseMatrix M_next = autonomous ? M_prev : assemble_mass(space, Hinv, t_next);
        if (!factored || !autonomous) {
            K_cached = assemble_stiffness(space, spec, t_assm);
            const double w = (scheme.kind == SchemeKind::ImplicitEuler) ? tau : tau / 2;
            factorize(lu, SparseMatrix(M_next + w * K_cached), t_assm);
            factored = true;
        }
        Vector b = assemble_load(space, f, t_assm);
        Vector rhs;
        if (scheme.kind == SchemeKind::ImplicitEuler)
            rhs = M_prev * v + tau * b;
        else
            rhs = M_prev * v - (tau / 2) * (K_cached * v) + tau * b;
        v = lu.solve(rhs);
        if (lu.info() != Eigen::Success)
            throw SingularSystem("solve failed at t=" + std::to_string(t_next));
        record(t_next, v, M_next);
        M_prev.swap(M_next);
    }
    return traj;
}

Trajectory solve_ivp(const DiscreteSpace& space, const ProblemSpec& spec, const Scheme& scheme,
                     const std::function<Vector(double)>& x0, const MatrixField& f, double t0) {
    bool projected = false;
    const Vector x0_red = interpolate(space, x0, &projected);
    Trajectory traj = solve_ivp(space, spec, scheme, x0_red, f, t0);
    traj.x0_projected = projected;
    return traj;
}

Matrix discrete_propagator(const DiscreteSpace& space, const ProblemSpec& spec,
                           const Scheme& scheme, double s, double t) {
    if (t < s) throw GridMisaligned("need s <= t");
    const double tau = scheme.tau;
    auto on_grid = [tau](double x) {
        const double raw = x / tau;
        return std::abs(raw - std::round(raw)) <= 1e-9 * std::max(1.0, std::abs(raw));
    };
    if (!on_grid(s) || !on_grid(t)) throw GridMisaligned("s and t must be scheme grid points");
    const long msteps = std::lround((t - s) / tau);
    const MatrixField Hinv = inverse_field(spec.H);

    Matrix U = Matrix::Identity(space.red_dim, space.red_dim);
    SparseMatrix M_prev = assemble_mass(space, Hinv, s);
    for (long m = 0; m < msteps; ++m) {
        const double tm = s + m * tau;
        const double t_next = tm + tau;
        const double t_assm = (scheme.kind == SchemeKind::ImplicitEuler) ? t_next : tm + tau / 2;
        const SparseMatrix M_next = assemble_mass(space, Hinv, t_next);
        const SparseMatrix K = assemble_stiffness(space, spec, t_assm);
        const double w = (scheme.kind == SchemeKind::ImplicitEuler) ? tau : tau / 2;
        Solver lu;
        factorize(lu, SparseMatrix(M_next + w * K), t_assm);
        Matrix rhs = (scheme.kind == SchemeKind::ImplicitEuler)
                         ? Matrix(M_prev * U)
                         : Matrix(M_prev * U - (tau / 2) * (K * U));
        U = lu.solve(rhs);
        M_prev = M_next;
    }
    return U;
}

Vector u_value(const DiscreteSpace& space, const ProblemSpec& spec, const Trajectory& traj,
               std::size_t m, double zeta) {
    const Vector v = space.evaluate(traj.v_coeffs.at(m), zeta);
    const Matrix H = spec.H(traj.times.at(m), zeta);
    return H.ldlt().solve(v);
}

} // namespace napde
