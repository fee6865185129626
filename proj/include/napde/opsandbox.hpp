#pragma once

#include <functional>
#include <vector>

#include "napde/field.hpp"

namespace napde::ops {

/// Finite-dimensional (A(t), B(t), C(t), f, x0) instance for verifying the
/// abstract transform and evolution-family identities.
struct MatrixEvolutionProblem {
    int N = 1;
    std::function<Matrix(double)> A;
    std::function<Matrix(double)> B;
    std::function<Matrix(double)> Bdot;
    std::function<Matrix(double)> C; ///< optional lower-order perturbation
    std::function<Vector(double)> f; ///< optional forcing
    Vector x0;
    double T = 1.0;
    bool b_selfadjoint_positive = false;
    double beta = 0.0; ///< lower bound (Bx|x) >= beta ||x||^2 when declared
};

struct SectorCheck {
    double omega = 0;
    double theta = 0;
    double margin = 0; ///< min over +- of lambda_min(Herm(e^{+-i theta}(omega I + A)))
    bool pass = false;
};

struct SectorBoundReport {
    std::vector<Complex> z_samples;
    std::vector<double> norms;  ///< ||e^{-zA}||_2
    std::vector<double> bounds; ///< e^{omega |z|}
    double max_excess = 0;
    bool pass = false;
};

struct IdentityReport {
    double defect = 0;
    double tol = 0;
    bool pass = false;
};

struct TransformReport {
    double max_gap = 0; ///< max_t ||u(t) - B(t)^{-1} v(t)||
    double tol = 0;
    bool pass = false;
};

struct EvolutionFamilyReport {
    double cocycle_defect_V = 0;
    double cocycle_defect_Phi = 0;
    double identity_defect = 0; ///< ||Phi(t,t) - I||
    double duhamel_gap = 0;
    bool pass = false;
};

struct DerivativeReport {
    double err_coarse = 0; ///< FD error at delta
    double err_fine = 0;   ///< FD error at delta/2
    double observed_order = 0;
    bool pass = false;
};

/// Sectorial accretivity of e^{+-i theta}(omega + A), Hermitian-part spectrum.
SectorCheck accretivity_check(const Matrix& A, double omega, double theta);

/// ||e^{-zA}|| <= e^{omega |z|} (1 + 1e-8) over sector samples.
SectorBoundReport sector_bound_check(const Matrix& A, double omega, double theta,
                                     const std::vector<Complex>& z_samples);

/// A = M_H^{-1} K, the operator associated with the form matrix K under the
/// Gram matrix M_H; verifies (A u | v)_{M_H} = v* K u.
Matrix associated_operator(const Matrix& K, const Matrix& M_H);

/// BA is associated with the same form under the B^{-1}-weighted product,
/// and AB = B^{-1}(BA)B.
IdentityReport weighted_product_generator(const Matrix& A, const Matrix& Bmat,
                                          const Matrix& K, const Matrix& M_H);

/// Integrates the right problem u' + A B u (+ C u) = f, B(0)u(0) = x0, and
/// the substituted left problem v' + BAv - Bdot B^{-1} v (+ BCB^{-1} v) = Bf,
/// v(0) = x0, and compares u with B^{-1} v.
TransformReport right_left_equivalence(const MatrixEvolutionProblem& prob, double tol);

/// Cocycle and Duhamel identities of the left evolution family V(t,s) and of
/// Phi(t,s) = B^{-1}(t) V(t,s) B(s).
EvolutionFamilyReport evolution_family_checks(const MatrixEvolutionProblem& prob,
                                              const std::vector<double>& grid);

/// d/dt B(t)^{-1} x = -B^{-1} Bdot B^{-1} x, checked by central differences.
DerivativeReport b_derivative_identities(const std::function<Matrix(double)>& B,
                                         const std::function<Matrix(double)>& Bdot,
                                         double t, double delta = 1e-4, unsigned seed = 7);

/// Adaptive Dormand-Prince 5(4) pair; the reference integrator for this
/// module, independent of the PDE stepper.
Vector integrate_ode(const std::function<Vector(double, const Vector&)>& rhs, double t0,
                     const Vector& y0, double t1, double rtol = 1e-10, double atol = 1e-12);

/// Matrix propagator of y' = -L(t) y from s to t.
Matrix propagate(const std::function<Matrix(double)>& L, double s, double t,
                 double rtol = 1e-10);

/// Seeded random instance: B(t) = B0 + sin(t) B1 with B0 Hermitian positive
/// dominant, A(t) affine in t, optional constant C.
MatrixEvolutionProblem random_problem(int N, std::uint64_t seed, bool with_C = false,
                                      bool with_forcing = true);

Matrix matrix_exponential(const Matrix& A);

double operator_norm(const Matrix& A);

} // namespace napde::ops
