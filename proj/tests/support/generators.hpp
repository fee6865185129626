#pragma once

#include <random>

#include "napde/problem.hpp"

namespace napde::testing {

inline Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> g;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

/// Thin Q factor: orthonormal columns.
inline Matrix random_orthonormal(std::mt19937_64& rng, int rows, int cols) {
    if (cols == 0) return Matrix(rows, 0);
    const Matrix m = random_matrix(rng, rows, cols);
    Eigen::HouseholderQR<Matrix> qr(m);
    return Matrix(qr.householderQ() * Matrix::Identity(rows, cols));
}

/// Hermitian positive definite with eigenvalues in roughly [shift, shift+2].
inline Matrix random_spd(std::mt19937_64& rng, int dim, double shift = 0.5) {
    const Matrix r = random_matrix(rng, dim, dim);
    return Matrix(shift * Matrix::Identity(dim, dim) +
                  (r * r.adjoint()) / std::max(1.0, double(dim)));
}

/// Random spec satisfying assumptions 1-7 with P0 = 0 and a
/// coupling-compatible zeta-affine P1.
inline ProblemSpec random_admissible_spec(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ProblemSpec spec;
    spec.n = 1 + int(rng() % 3);
    spec.k = 1 + int(rng() % spec.n);
    spec.r = int(rng() % (2 * spec.k + 1));

    spec.G = random_orthonormal(rng, spec.n, spec.k);
    spec.F = random_orthonormal(rng, 2 * spec.k, spec.r);
    spec.S = MatrixField::constant(random_spd(rng, spec.k));
    spec.H = MatrixField::constant(random_spd(rng, spec.n));
    if (spec.r > 0) {
        const Matrix w = random_matrix(rng, spec.r, spec.r);
        spec.W_R = MatrixField::constant(Matrix((w * w.adjoint()) / double(spec.r)));
    } else {
        spec.W_R = MatrixField::zero(0, 0);
    }
    spec.P0 = MatrixField::zero(spec.n, spec.n);

    // P1 = GG* A1 + (I-GG*) A2 GG* satisfies (I-GG*) P1 (I-GG*) = 0
    const Matrix P = spec.gram_projector();
    const Matrix In = Matrix::Identity(spec.n, spec.n);
    const Matrix A1 = random_matrix(rng, spec.n, spec.n) / double(spec.n);
    const Matrix A2 = random_matrix(rng, spec.n, spec.n) / double(spec.n);
    const Matrix P1c = Matrix(P * A1 + (In - P) * A2 * P);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double a = 1.0 + u(rng), b = u(rng);
    spec.P1 = MatrixField::of_zeta(
        spec.n, spec.n, [P1c, a, b](double z) { return Matrix((a + b * z) * P1c); },
        [P1c, b](double) { return Matrix(b * P1c); });
    spec.P1.zeta_dependent = true;

    spec.f = MatrixField::zero(spec.n, 1);
    spec.horizon = 1.0;
    return spec;
}

} // namespace napde::testing
