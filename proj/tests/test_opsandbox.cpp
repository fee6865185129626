#include <doctest.h>

#include "napde/discretize.hpp"
#include "napde/opsandbox.hpp"
#include "napde/presets.hpp"
#include "support/generators.hpp"

using namespace napde;
using namespace napde::ops;

TEST_CASE("accretivity_check: Hermitian, skew, and discretized Laplacian") {
    std::mt19937_64 rng(1);
    const Matrix R = testing::random_matrix(rng, 4, 4);
    const Matrix A = R * R.adjoint(); // Hermitian PSD
    const SectorCheck hc = accretivity_check(A, 0.0, M_PI / 4);
    CHECK(hc.pass);
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    CHECK(hc.margin ==
          doctest::Approx(es.eigenvalues().minCoeff() * std::cos(M_PI / 4)));

    Matrix skew(2, 2);
    skew << 0, 1, -1, 0;
    const SectorCheck sc = accretivity_check(skew, 0.0, M_PI / 4);
    CHECK_FALSE(sc.pass);
    CHECK(sc.margin == doctest::Approx(-std::sin(M_PI / 4)));

    const ProblemSpec heat = preset("heat-dirichlet");
    const DiscreteSpace space = build_space(build_mesh(32), heat);
    const Matrix K = Matrix(assemble_stiffness(space, heat, 0.0));
    const Matrix M = Matrix(assemble_mass(space, identity_field(1), 0.0));
    CHECK(accretivity_check(associated_operator(K, M), 0.0, M_PI / 4).pass);
}

TEST_CASE("accretivity margin is invariant under unitary conjugation") {
    std::mt19937_64 rng(7);
    const Matrix A = testing::random_matrix(rng, 5, 5);
    const SectorCheck base = accretivity_check(A, 0.3, 0.6);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix U = testing::random_orthonormal(rng, 5, 5);
        const SectorCheck conj = accretivity_check(Matrix(U * A * U.adjoint()), 0.3, 0.6);
        CHECK(std::abs(conj.margin - base.margin) < 1e-12 * std::max(1.0, A.norm()));
    }
}

TEST_CASE("sector_bound_check: identity passes, skew violates off the real axis") {
    std::vector<Complex> zs;
    for (double r : {0.1, 0.5, 1.0})
        for (double phi : {-0.7, 0.0, 0.7}) zs.push_back(r * std::exp(Complex(0, phi)));
    CHECK(sector_bound_check(Matrix::Identity(3, 3), 0.0, M_PI / 4, zs).pass);

    Matrix skew(2, 2);
    skew << 0, 1, -1, 0;
    std::vector<Complex> off = {Complex(0.2, 0.19)}; // near theta = pi/4 edge
    const SectorBoundReport rep = sector_bound_check(skew, 0.0, 1.55, off);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_excess > 0);
}

TEST_CASE("sector_bound_check: bound tight for Hermitian A with lambda_min = -omega") {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = -0.5;
    A(1, 1) = 2.0;
    std::vector<Complex> zs = {Complex(1e-3, 0), Complex(1e-2, 0), Complex(0.1, 0)};
    const SectorBoundReport rep = sector_bound_check(A, 0.5, M_PI / 4, zs);
    CHECK(rep.pass);
    for (std::size_t i = 0; i < zs.size(); ++i)
        CHECK(rep.norms[i] == doctest::Approx(rep.bounds[i]).epsilon(1e-9));
}

TEST_CASE("associated_operator: trivial cases and the Dirichlet spectrum") {
    std::mt19937_64 rng(2);
    const Matrix K = testing::random_matrix(rng, 4, 4);
    CHECK((associated_operator(K, Matrix::Identity(4, 4)) - K).norm() < 1e-12);

    Matrix k1(1, 1), m1(1, 1);
    k1 << 3;
    m1 << 2;
    CHECK(associated_operator(k1, m1)(0, 0).real() == doctest::Approx(1.5));

    const ProblemSpec heat = preset("heat-dirichlet");
    const DiscreteSpace space = build_space(build_mesh(50), heat);
    const Matrix Kh = Matrix(assemble_stiffness(space, heat, 0.0));
    const Matrix Mh = Matrix(assemble_mass(space, identity_field(1), 0.0));
    const Matrix A = associated_operator(Kh, Mh);
    Eigen::ComplexEigenSolver<Matrix> es(A);
    double lmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        lmin = std::min(lmin, es.eigenvalues()(i).real());
    CHECK(std::abs(lmin - M_PI * M_PI) / (M_PI * M_PI) < 0.01);

    CHECK_THROWS_AS(associated_operator(k1, Matrix::Zero(1, 1)), SingularGram);
}

TEST_CASE("weighted_product_generator: identities hold") {
    std::mt19937_64 rng(3);
    const int n = 5;
    const Matrix K = testing::random_matrix(rng, n, n);
    const Matrix MH = testing::random_spd(rng, n);
    const Matrix A = associated_operator(K, MH);

    CHECK(weighted_product_generator(A, Matrix::Identity(n, n), K, MH).pass);
    CHECK(weighted_product_generator(A, Matrix(2.0 * Matrix::Identity(n, n)), K, MH).pass);
    const Matrix B = testing::random_spd(rng, n);
    const IdentityReport rep = weighted_product_generator(A, B, K, MH);
    CHECK(rep.pass);
    CHECK(rep.defect < 1e-12);

    CHECK_THROWS_AS(weighted_product_generator(A, Matrix(K - K.adjoint()), K, MH),
                    NotSelfAdjoint);
    CHECK_THROWS_AS(
        weighted_product_generator(A, Matrix(-Matrix::Identity(n, n)), K, MH),
        NotPositive);
}

TEST_CASE("right_left_equivalence: B = I reduces to the same ODE") {
    MatrixEvolutionProblem prob = random_problem(4, 21);
    prob.B = [](double) { return Matrix(Matrix::Identity(4, 4)); };
    prob.Bdot = [](double) { return Matrix(Matrix::Zero(4, 4)); };
    const TransformReport rep = right_left_equivalence(prob, 1e-8);
    CHECK(rep.pass);
}

TEST_CASE("right_left_equivalence: scalar closed form") {
    // u' = -a(1+t)u, u(0) = x0 since B(0) = 1, so u(t) = x0 exp(-a(t + t^2/2))
    const double a = 0.8, x0 = 1.3;
    MatrixEvolutionProblem prob;
    prob.N = 1;
    prob.A = [a](double) { return Matrix(a * Matrix::Identity(1, 1)); };
    prob.B = [](double t) { return Matrix((1.0 + t) * Matrix::Identity(1, 1)); };
    prob.Bdot = [](double) { return Matrix(Matrix::Identity(1, 1)); };
    prob.x0 = Vector::Constant(1, x0);
    prob.T = 1.0;
    const TransformReport rep = right_left_equivalence(prob, 1e-8);
    CHECK(rep.pass);

    // both routes against the closed form at t = T
    auto rhs_right = [&](double t, const Vector& u) {
        return Vector(-prob.A(t) * prob.B(t) * u);
    };
    const Vector uT = integrate_ode(rhs_right, 0.0, prob.x0, prob.T);
    const double exact = x0 * std::exp(-a * (prob.T + prob.T * prob.T / 2));
    CHECK(std::abs(uT(0).real() - exact) < 1e-9);
}

TEST_CASE("right_left_equivalence: random instances with C(t)") {
    for (std::uint64_t seed : {31, 32, 33}) {
        const TransformReport rep =
            right_left_equivalence(random_problem(8, seed, /*with_C=*/true), 1e-6);
        CHECK_MESSAGE(rep.pass, "seed ", seed, " gap ", rep.max_gap);
    }
}

TEST_CASE("evolution_family_checks: autonomous semigroup case") {
    std::mt19937_64 rng(12);
    const Matrix A0 = testing::random_matrix(rng, 4, 4);
    MatrixEvolutionProblem prob = random_problem(4, 12);
    prob.A = [A0](double) { return A0; };
    prob.B = [](double) { return Matrix(Matrix::Identity(4, 4)); };
    prob.Bdot = [](double) { return Matrix(Matrix::Zero(4, 4)); };
    prob.C = nullptr;
    const EvolutionFamilyReport rep =
        evolution_family_checks(prob, {0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(rep.pass);

    // V(t,s) = e^{-(t-s)A}
    const Matrix V = propagate([A0](double) { return A0; }, 0.25, 0.75);
    CHECK((V - matrix_exponential(Matrix(-0.5 * A0))).norm() < 1e-8);
}

TEST_CASE("evolution_family_checks: constant B conjugation closed form") {
    std::mt19937_64 rng(13);
    const Matrix A0 = testing::random_matrix(rng, 3, 3);
    const Matrix B0 = testing::random_spd(rng, 3);
    MatrixEvolutionProblem prob = random_problem(3, 13);
    prob.A = [A0](double) { return A0; };
    prob.B = [B0](double) { return B0; };
    prob.Bdot = [](double) { return Matrix(Matrix::Zero(3, 3)); };
    prob.C = nullptr;
    CHECK(evolution_family_checks(prob, {0.0, 0.5, 1.0}).pass);

    // Phi(t,s) = B^{-1} e^{-(t-s)BA} B
    const Matrix V = propagate([&](double) { return Matrix(B0 * A0); }, 0.0, 0.6);
    const Matrix Phi = B0.inverse() * V * B0;
    const Matrix closed =
        B0.inverse() * matrix_exponential(Matrix(-0.6 * B0 * A0)) * B0;
    CHECK((Phi - closed).norm() < 1e-8);
}

TEST_CASE("propagate: piecewise-constant A with one switch") {
    std::mt19937_64 rng(14);
    const Matrix A1 = testing::random_matrix(rng, 3, 3);
    const Matrix A2 = testing::random_matrix(rng, 3, 3);
    auto L = [&](double t) { return t < 0.5 ? A1 : A2; };
    const Matrix V = propagate(L, 0.0, 1.0);
    const Matrix closed = matrix_exponential(Matrix(-0.5 * A2)) *
                          matrix_exponential(Matrix(-0.5 * A1));
    CHECK((V - closed).norm() < 1e-7 * std::max(1.0, closed.norm()));
}

TEST_CASE("b_derivative_identities: exponential, constant, scalar") {
    std::mt19937_64 rng(15);
    Matrix Z = testing::random_matrix(rng, 3, 3);
    Z *= 0.5 / Z.norm() * 3;
    auto B = [Z](double t) { return matrix_exponential(Matrix(t * Z)); };
    auto Bdot = [Z, B](double t) { return Matrix(Z * B(t)); };
    CHECK(b_derivative_identities(B, Bdot, 0.3).pass);

    auto Bc = [](double) { return Matrix(Matrix::Identity(2, 2) * 2.0); };
    auto Bcd = [](double) { return Matrix(Matrix::Zero(2, 2)); };
    const DerivativeReport rc = b_derivative_identities(Bc, Bcd, 0.5);
    CHECK(rc.pass);
    CHECK(rc.err_fine < 1e-12);

    auto Bs = [](double t) { return Matrix((1.0 + t) * Matrix::Identity(1, 1)); };
    auto Bsd = [](double) { return Matrix(Matrix::Identity(1, 1)); };
    CHECK(b_derivative_identities(Bs, Bsd, 0.2).pass);
}

TEST_CASE("recovered u satisfies B(0)u(0) = x0 by construction") {
    const MatrixEvolutionProblem prob = random_problem(6, 44);
    const Vector u0 = prob.B(0.0).partialPivLu().solve(prob.x0);
    CHECK((prob.B(0.0) * u0 - prob.x0).norm() < 1e-12 * prob.x0.norm());
}

TEST_CASE("integrate_ode: failure surfaces as IntegratorFailure") {
    auto blowup = [](double, const Vector& y) { return Vector(y.array().square().matrix() * 1e8); };
    CHECK_THROWS_AS(
        integrate_ode(blowup, 0.0, Vector(Vector::Constant(1, 1.0)), 10.0, 1e-12, 1e-14),
        IntegratorFailure);
}
