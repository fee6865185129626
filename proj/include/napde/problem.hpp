#pragma once

#include <string>
#include <vector>

#include "napde/field.hpp"

namespace napde {

/// Coefficient tuple of one problem instance
///   du/dt - d/dz (G S d/dz G* Hu + P1 Hu) - P0 Hu = f
/// on [0,1] with boundary conditions parameterized by (F, W_R).
struct ProblemSpec {
    int n = 1; ///< state dimension
    int k = 1; ///< rank of the diffusive block, 1 <= k <= n
    int r = 0; ///< number of free boundary directions, 0 <= r <= 2k

    Matrix G;      ///< n x k, orthonormal columns
    Matrix F;      ///< 2k x r, orthonormal columns
    MatrixField W_R; ///< r x r, t only
    MatrixField P0;  ///< n x n, zeta only
    MatrixField P1;  ///< n x n, zeta only
    MatrixField S;   ///< k x k
    MatrixField H;   ///< n x n
    MatrixField f;   ///< n x 1 forcing
    double horizon = 1.0;

    Matrix gram_projector() const { return G * G.adjoint(); } // GG*
};

struct ValidationReport {
    // one flag per assumption item
    bool g_projection = false;   ///< G*G = I, (GG*)^2 = GG*
    bool f_projection = false;   ///< F*F = I, (FF*)^2 = FF*
    bool h_positive = false;     ///< H self-adjoint, spectrum in [m1, M1], m1 > 0
    bool s_positive = false;     ///< S likewise with (m2, M2)
    bool wr_psd = false;         ///< W_R Hermitian PSD
    bool coupling = false;       ///< (I-GG*) P1 (I-GG*) = 0
    bool p0_bounded = false;     ///< P0 finite on the grid
    bool pass = false;

    double m1 = 0, M1 = 0, m2 = 0, M2 = 0;
    double L1 = 0, L2 = 0;       ///< t-Lipschitz estimates of H and S
    double kappa1 = 0, kappa2 = 0;
    double p0_sup = 0, p1_sup = 0;
    std::string first_failure;   ///< empty when pass

    std::vector<double> t_grid, z_grid;
};

struct EllipticityEstimate {
    double epsilon = 0;
    double omega = 0;
    double alpha = 0;
    double kappa_tilde = 0;
};

/// Sample-based check of the standing assumptions on a tensor (t, zeta) grid.
ValidationReport validate_spec(const ProblemSpec& spec, int nt = 33, int nz = 33);

/// Orthonormal basis Q of range(I - GG*): Q*Q = I, G*Q = 0, GG* + QQ* = I.
Matrix orthocomplement_basis(const Matrix& G);

/// R_G(zeta) = (I-GG*) P1(zeta) G and its zeta-derivative, so that
/// (I-GG*) P1 v = R_G (G*v) for v satisfying the coupling condition.
std::pair<MatrixField, MatrixField> reduced_p1_fields(const ProblemSpec& spec,
                                                      bool allow_fd_fallback = true);

/// Garding constants omega = 1 + (eps/2) kt^2 + kappa2, alpha = min{1, m2 - 1/eps}.
EllipticityEstimate ellipticity_constants(const ValidationReport& report, double p1_sup,
                                          double g_norm, double epsilon);

} // namespace napde
