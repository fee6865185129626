#include <doctest.h>

#include <Eigen/SparseLU>

#include "napde/evolve.hpp"
#include "napde/opsandbox.hpp"
#include "napde/presets.hpp"
#include "support/generators.hpp"

using namespace napde;

namespace {

Vector sin_profile(const DiscreteSpace& space) {
    return interpolate(space, [](double z) {
        Vector v(1);
        v(0) = std::sin(M_PI * z);
        return v;
    });
}

} // namespace

TEST_CASE("step: one implicit Euler step matches the heat decay factor") {
    const ProblemSpec spec = preset("heat-dirichlet");
    const DiscreteSpace space = build_space(build_mesh(64), spec);
    const double tau = 1e-3;
    const Vector v0 = sin_profile(space);
    const Vector v1 = step(space, spec, Scheme{SchemeKind::ImplicitEuler, tau}, 0.0, v0);
    const double ratio = v1.norm() / v0.norm();
    CHECK(std::abs(ratio - std::exp(-M_PI * M_PI * tau)) < 2e-4);
    // the nodal sine vector is an exact eigenvector of the pencil: shape kept
    CHECK((v1 - ratio * v0).norm() < 1e-12 * v0.norm());
}

TEST_CASE("step/solve_ivp: zero data stays zero") {
    const ProblemSpec spec = preset("heat-dirichlet");
    const DiscreteSpace space = build_space(build_mesh(16), spec);
    const Trajectory traj =
        solve_ivp(space, spec, Scheme{SchemeKind::ImplicitEuler, 1e-2},
                  Vector(Vector::Zero(space.red_dim)), spec.f);
    for (const Vector& v : traj.v_coeffs) CHECK(v.norm() == 0.0);
}

TEST_CASE("step: implicit Euler is unconditionally M-norm contractive") {
    const ProblemSpec spec = preset("heat-robin");
    const DiscreteSpace space = build_space(build_mesh(32), spec);
    std::mt19937_64 rng(9);
    const Vector x0 = testing::random_matrix(rng, space.red_dim, 1).col(0);
    const Trajectory traj = solve_ivp(space, spec, Scheme{SchemeKind::ImplicitEuler, 0.05},
                                      x0, spec.f);
    for (std::size_t m = 1; m < traj.energy.size(); ++m)
        CHECK(traj.energy[m] <= traj.energy[m - 1] * (1 + 1e-12));
}

TEST_CASE("solve_ivp: heat Dirichlet against the exact solution") {
    ProblemSpec spec = preset("heat-dirichlet");
    spec.horizon = 0.05;
    const DiscreteSpace space = build_space(build_mesh(100), spec);
    const Trajectory traj = solve_ivp(space, spec, Scheme{SchemeKind::ImplicitEuler, 2e-4},
                                      sin_profile(space), spec.f);
    const std::size_t m = traj.times.size() - 1;
    const double amp = std::exp(-M_PI * M_PI * spec.horizon);
    double err = 0;
    for (int i = 1; i < 100; ++i) {
        const double z = i / 100.0;
        err = std::max(err, std::abs((u_value(space, spec, traj, m, z)(0) -
                                      amp * std::sin(M_PI * z))));
    }
    CHECK(err < 2e-3);
}

TEST_CASE("solve_ivp: time-dependent H against a stiff-ODE reference") {
    ProblemSpec spec = preset("heat-dirichlet");
    spec.H = MatrixField::of_time(1, 1, [](double t) {
        Matrix m(1, 1);
        m(0, 0) = 1.0 + t;
        return m;
    });
    spec.H.time_dependent = true;
    spec.horizon = 0.5;
    const double tau = 1e-3;
    const DiscreteSpace space = build_space(build_mesh(16), spec);
    const Vector v0 = sin_profile(space);
    const Trajectory traj =
        solve_ivp(space, spec, Scheme{SchemeKind::ImplicitEuler, tau}, v0, spec.f);

    // reference: y = M(t) v solves y' = -K M(t)^{-1} y on the same V_h
    const Matrix K = Matrix(assemble_stiffness(space, spec, 0.0));
    const Matrix Mp = Matrix(assemble_mass(space, identity_field(1), 0.0));
    auto Mt = [&](double t) { return Matrix(Mp / (1.0 + t)); };
    auto rhs = [&](double t, const Vector& y) {
        return Vector(-K * Mt(t).ldlt().solve(y));
    };
    Vector y = Mt(0.0) * v0;
    double num = 0, den = 0;
    for (std::size_t m = 1; m < traj.times.size(); ++m) {
        y = ops::integrate_ode(rhs, traj.times[m - 1], y, traj.times[m]);
        const Vector v_ref = Mt(traj.times[m]).ldlt().solve(y);
        num += tau * (traj.v_coeffs[m] - v_ref).squaredNorm();
        den += tau * v_ref.squaredNorm();
    }
    CHECK(std::sqrt(num / den) < 10 * tau); // relative L2(L2) gap
}

TEST_CASE("solve_ivp: breakpoints must lie on the step grid") {
    ProblemSpec spec = preset("heat-dirichlet");
    spec.H = MatrixField::of_time(
        1, 1,
        [](double t) {
            Matrix m(1, 1);
            m(0, 0) = t < 0.3 ? 1.0 : 1.1;
            return m;
        },
        {0.3});
    const DiscreteSpace space = build_space(build_mesh(8), spec);
    const Vector x0 = sin_profile(space);
    CHECK_THROWS_AS(
        solve_ivp(space, spec, Scheme{SchemeKind::ImplicitEuler, 0.25}, x0, spec.f),
        GridMisaligned);
    CHECK_NOTHROW(
        solve_ivp(space, spec, Scheme{SchemeKind::ImplicitEuler, 0.1}, x0, spec.f));
}

TEST_CASE("discrete_propagator: identity, cocycle, autonomous power form") {
    ProblemSpec spec = preset("heat-dirichlet");
    spec.horizon = 0.4;
    const DiscreteSpace space = build_space(build_mesh(8), spec);
    const Scheme scheme{SchemeKind::ImplicitEuler, 0.1};

    const Matrix I = discrete_propagator(space, spec, scheme, 0.2, 0.2);
    CHECK((I - Matrix::Identity(space.red_dim, space.red_dim)).norm() < 1e-14);

    const Matrix U30 = discrete_propagator(space, spec, scheme, 0.0, 0.3);
    const Matrix U31 = discrete_propagator(space, spec, scheme, 0.1, 0.3);
    const Matrix U10 = discrete_propagator(space, spec, scheme, 0.0, 0.1);
    CHECK((U30 - U31 * U10).norm() < 1e-12 * U30.norm());

    // autonomous: U(t,s) = ((M + tau K)^{-1} M)^{(t-s)/tau}
    const Matrix K = Matrix(assemble_stiffness(space, spec, 0.0));
    const Matrix M = Matrix(assemble_mass(space, inverse_field(spec.H), 0.0));
    const Matrix E = (M + scheme.tau * K).partialPivLu().solve(M);
    CHECK((U30 - E * E * E).norm() < 1e-12 * U30.norm());

    CHECK_THROWS_AS(discrete_propagator(space, spec, scheme, 0.05, 0.3), GridMisaligned);
}

TEST_CASE("restart property is exact to roundoff") {
    ProblemSpec spec = preset("damped-wave-free");
    spec.horizon = 0.1;
    const DiscreteSpace space = build_space(build_mesh(16), spec);
    const Scheme scheme{SchemeKind::ImplicitEuler, 1e-3};
    std::mt19937_64 rng(4);
    const Vector x0 = testing::random_matrix(rng, space.red_dim, 1).col(0);
    const Trajectory full = solve_ivp(space, spec, scheme, x0, spec.f);

    const double s = 0.05;
    const std::size_t ms = 50;
    REQUIRE(full.times[ms] == doctest::Approx(s));
    const Trajectory tail =
        solve_ivp(space, spec, scheme, full.v_coeffs[ms], spec.f, s);
    CHECK((tail.v_coeffs.back() - full.v_coeffs.back()).norm() <=
          1e-12 * full.v_coeffs.back().norm());
}

TEST_CASE("discrete Duhamel sum reproduces the forced trajectory exactly") {
    ProblemSpec spec = preset("heat-dirichlet");
    spec.horizon = 0.05;
    spec.f = MatrixField::scalar(1.0);
    const DiscreteSpace space = build_space(build_mesh(12), spec);
    const Scheme scheme{SchemeKind::ImplicitEuler, 1e-2};
    const Vector v0 = sin_profile(space);
    const Trajectory traj = solve_ivp(space, spec, scheme, v0, spec.f);

    const Matrix K = Matrix(assemble_stiffness(space, spec, 0.0));
    const Matrix M = Matrix(assemble_mass(space, inverse_field(spec.H), 0.0));
    const Vector b = assemble_load(space, spec.f, 0.0);
    const Eigen::PartialPivLU<Matrix> lu(M + scheme.tau * K);
    const std::size_t m = traj.times.size() - 1;
    Vector acc = discrete_propagator(space, spec, scheme, 0.0, traj.times[m]) * v0;
    for (std::size_t j = 1; j <= m; ++j)
        acc += discrete_propagator(space, spec, scheme, traj.times[j], traj.times[m]) *
               lu.solve(scheme.tau * b);
    CHECK((acc - traj.v_coeffs[m]).norm() < 1e-12 * acc.norm());
}

TEST_CASE("scaling consistency of the substitution v = Hu") {
    // (H, S, P1, P0, W_R, f) -> (cH, S/c, P1/c, P0/c, W_R/c, f/c) leaves the
    // v-trajectory unchanged and rescales u by 1/c
    ProblemSpec spec = preset("heat-robin");
    spec.horizon = 0.1;
    spec.f = MatrixField::scalar(1.0);
    const double c = 3.0;
    ProblemSpec scaled = spec;
    scaled.H = MatrixField::constant(Matrix(c * Matrix::Identity(1, 1)));
    scaled.S = MatrixField::constant(Matrix(Matrix::Identity(1, 1) / c));
    scaled.W_R = MatrixField::constant(Matrix(Matrix::Identity(2, 2) / c));
    scaled.f = MatrixField::scalar(1.0 / c);

    const DiscreteSpace space = build_space(build_mesh(16), spec);
    const DiscreteSpace space2 = build_space(build_mesh(16), scaled);
    const Scheme scheme{SchemeKind::ImplicitEuler, 1e-2};
    const Vector x0 = sin_profile(space);
    const Trajectory a = solve_ivp(space, spec, scheme, x0, spec.f);
    const Trajectory bt = solve_ivp(space2, scaled, scheme, x0, scaled.f);
    const std::size_t m = a.times.size() - 1;
    CHECK((a.v_coeffs[m] - bt.v_coeffs[m]).norm() < 1e-12 * a.v_coeffs[m].norm());
    CHECK(std::abs(u_value(space, spec, a, m, 0.5)(0) -
                   c * u_value(space2, scaled, bt, m, 0.5)(0)) < 1e-12);
}

TEST_CASE("Crank-Nicolson agrees with implicit Euler to first order") {
    ProblemSpec spec = preset("heat-dirichlet");
    spec.horizon = 0.1;
    const DiscreteSpace space = build_space(build_mesh(32), spec);
    const Vector v0 = sin_profile(space);
    const Trajectory cn = solve_ivp(space, spec, Scheme{SchemeKind::CrankNicolson, 1e-3},
                                    v0, spec.f);
    const double exact = std::exp(-M_PI * M_PI * 0.1) * v0.norm();
    // CN tracks the semi-discrete decay much closer than IE at this step size
    CHECK(std::abs(cn.v_coeffs.back().norm() - exact) / exact < 5e-3);
}
