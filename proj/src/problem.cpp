#include "napde/problem.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace napde {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

bool is_projection(const Matrix& P, double tol) {
    return (P * P - P).norm() <= tol * std::max(1.0, P.norm());
}

// min/max eigenvalues of the Hermitian part
std::pair<double, double> herm_eig_range(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (A + A.adjoint())));
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

bool crosses_breakpoint(double a, double b, const std::vector<double>& brk) {
    for (double t : brk)
        if (t > a + 1e-14 && t < b - 1e-14) return true;
    return false;
}

// max divided difference in t over the grid, skipping segments that cross a breakpoint
double lipschitz_estimate(const MatrixField& f, const std::vector<double>& ts,
                          const std::vector<double>& zs) {
    double L = 0;
    for (double z : zs) {
        for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
            if (crosses_breakpoint(ts[j], ts[j + 1], f.t_breakpoints)) continue;
            double dt = ts[j + 1] - ts[j];
            if (dt <= 0) continue;
            L = std::max(L, (f(ts[j + 1], z) - f(ts[j], z)).operatorNorm() / dt);
        }
    }
    return L;
}

} // namespace

MatrixField inverse_field(const MatrixField& f) {
    MatrixField g = f;
    g.eval_dz = nullptr;
    g.eval = [base = f](double t, double z) {
        Matrix m = base(t, z);
        Eigen::LDLT<Matrix> ldlt(m);
        const double dmin =
            m.rows() == 0 ? 1.0 : ldlt.vectorD().real().minCoeff();
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            dmin <= 1e-14 * std::max(1.0, m.norm()))
            throw SingularWeight("weight not positive definite at t=" + std::to_string(t) +
                                 ", zeta=" + std::to_string(z));
        return Matrix(ldlt.solve(Matrix::Identity(m.rows(), m.cols())));
    };
    return g;
}

Matrix orthocomplement_basis(const Matrix& G) {
    const auto n = G.rows();
    const auto k = G.cols();
    if ((G.adjoint() * G - Matrix::Identity(k, k)).norm() > 1e-12 * std::sqrt(double(k)))
        throw RankDeficient("G*G != I_k");
    if (k == n) return Matrix(n, 0);
    // complete G to a unitary basis and keep the trailing columns
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Qfull = qr.householderQ() * Matrix::Identity(n, n);
    Matrix Q = Qfull.rightCols(n - k);
    // HouseholderQ already has orthonormal columns orthogonal to range(G)
    return Q;
}

ValidationReport validate_spec(const ProblemSpec& spec, int nt, int nz) {
    if (nt < 2 || nz < 2) throw InvalidSize("need nt, nz >= 2");
    ValidationReport rep;
    rep.t_grid = linspace(0.0, spec.horizon, nt);
    rep.z_grid = linspace(0.0, 1.0, nz);
    const int n = spec.n, k = spec.k, r = spec.r;

    auto fail = [&rep](const std::string& what) {
        if (rep.first_failure.empty()) rep.first_failure = what;
    };

    if (spec.G.rows() != n || spec.G.cols() != k)
        throw ShapeMismatch("G must be n x k");
    if (spec.F.rows() != 2 * k || spec.F.cols() != r)
        throw ShapeMismatch("F must be 2k x r");

    const Matrix P = spec.gram_projector();
    rep.g_projection =
        (spec.G.adjoint() * spec.G - Matrix::Identity(k, k)).norm() <= 1e-12 * std::sqrt(double(k)) &&
        is_projection(P, 1e-12);
    if (!rep.g_projection) fail("Assumption 1: G*G = I_k and GG* projection");

    const Matrix FF = spec.F * spec.F.adjoint();
    rep.f_projection =
        (r == 0) ||
        ((spec.F.adjoint() * spec.F - Matrix::Identity(r, r)).norm() <= 1e-12 * std::sqrt(double(r)) &&
         is_projection(FF, 1e-12));
    if (!rep.f_projection) fail("Assumption 6: F*F = I_r and FF* projection");

    rep.m1 = std::numeric_limits<double>::infinity();
    rep.m2 = std::numeric_limits<double>::infinity();
    rep.M1 = rep.M2 = 0;
    rep.h_positive = rep.s_positive = rep.wr_psd = rep.coupling = rep.p0_bounded = true;

    const Matrix I_n = Matrix::Identity(n, n);
    for (double t : rep.t_grid) {
        for (double z : rep.z_grid) {
            Matrix H = spec.H(t, z);
            if ((H - H.adjoint()).norm() > 1e-10 * std::max(1.0, H.norm())) rep.h_positive = false;
            auto [hmin, hmax] = herm_eig_range(H);
            rep.m1 = std::min(rep.m1, hmin);
            rep.M1 = std::max(rep.M1, hmax);

            Matrix S = spec.S(t, z);
            if ((S - S.adjoint()).norm() > 1e-10 * std::max(1.0, S.norm())) rep.s_positive = false;
            auto [smin, smax] = herm_eig_range(S);
            rep.m2 = std::min(rep.m2, smin);
            rep.M2 = std::max(rep.M2, smax);
        }
        if (r > 0) {
            Matrix W = spec.W_R(t, 0.0);
            if ((W - W.adjoint()).norm() > 1e-10 * std::max(1.0, W.norm()) ||
                herm_eig_range(W).first < -1e-12 * std::max(1.0, W.norm()))
                rep.wr_psd = false;
        }
    }
    if (rep.m1 <= 0) rep.h_positive = false;
    if (rep.m2 <= 0) rep.s_positive = false;

    double coupling_defect = 0, r1 = 0, r2 = 0;
    for (double z : rep.z_grid) {
        Matrix P1 = spec.P1(0.0, z);
        Matrix P0 = spec.P0(0.0, z);
        rep.p0_sup = std::max(rep.p0_sup, P0.operatorNorm());
        rep.p1_sup = std::max(rep.p1_sup, P1.operatorNorm());
        coupling_defect = std::max(coupling_defect, ((I_n - P) * P1 * (I_n - P)).norm());
        Matrix RG = (I_n - P) * P1 * spec.G;
        Matrix dRG = (I_n - P) * spec.P1.dz(0.0, z) * spec.G;
        r1 = std::max(r1, RG.operatorNorm());
        r2 = std::max(r2, dRG.operatorNorm());
        if (!P0.allFinite() || !P1.allFinite()) rep.p0_bounded = false;
    }
    rep.coupling = coupling_defect <= 1e-12 * std::max(1.0, rep.p1_sup);
    rep.kappa1 = r1;
    // ||(I-GG*)P1 v||_{H^1} <= kappa2 ||v||_V with R_G reduction:
    // integrand <= (r1^2 + 2 r2^2)|w|^2 + 2 r1^2 |w'|^2 and |w| <= |v| pointwise.
    rep.kappa2 = std::sqrt(std::max(r1 * r1 + 2 * r2 * r2, 2 * r1 * r1));

    rep.L1 = lipschitz_estimate(spec.H, rep.t_grid, rep.z_grid);
    rep.L2 = lipschitz_estimate(spec.S, rep.t_grid, rep.z_grid);

    if (!rep.h_positive) fail("Assumption 4: H self-adjoint uniformly positive");
    if (!rep.s_positive) fail("Assumption 5: S self-adjoint uniformly positive");
    if (!rep.f_projection) fail("Assumption 6: F projection");
    if (!rep.wr_psd) fail("Assumption 7: W_R Hermitian PSD");
    if (!rep.coupling) fail("Assumption 3: coupling condition (I-GG*)P1(I-GG*) = 0");
    if (!rep.p0_bounded) fail("Assumption 2: P0 bounded");

    rep.pass = rep.g_projection && rep.f_projection && rep.h_positive && rep.s_positive &&
               rep.wr_psd && rep.coupling && rep.p0_bounded;
    return rep;
}

std::pair<MatrixField, MatrixField> reduced_p1_fields(const ProblemSpec& spec,
                                                      bool allow_fd_fallback) {
    if (!spec.P1.has_zeta_derivative() && !allow_fd_fallback)
        throw MissingDerivative("P1 lacks eval_dz and the finite-difference fallback is disabled");
    const Matrix Pi = Matrix::Identity(spec.n, spec.n) - spec.gram_projector();
    const Matrix G = spec.G;

    MatrixField R;
    R.rows = spec.n;
    R.cols = spec.k;
    R.time_dependent = spec.P1.time_dependent;
    R.zeta_dependent = spec.P1.zeta_dependent;
    R.eval = [Pi, G, P1 = spec.P1](double t, double z) { return Matrix(Pi * P1(t, z) * G); };
    R.eval_dz = [Pi, G, P1 = spec.P1](double t, double z) { return Matrix(Pi * P1.dz(t, z) * G); };

    MatrixField dR;
    dR.rows = spec.n;
    dR.cols = spec.k;
    dR.time_dependent = spec.P1.time_dependent;
    dR.zeta_dependent = spec.P1.zeta_dependent;
    dR.eval = [Pi, G, P1 = spec.P1](double t, double z) { return Matrix(Pi * P1.dz(t, z) * G); };

    return {R, dR};
}

EllipticityEstimate ellipticity_constants(const ValidationReport& report, double p1_sup,
                                          double g_norm, double epsilon) {
    if (report.m2 <= 0 || epsilon <= 1.0 / report.m2)
        throw NonCoercive("need epsilon > 1/m2 for alpha > 0");
    EllipticityEstimate e;
    e.epsilon = epsilon;
    e.kappa_tilde = p1_sup * g_norm + report.kappa2;
    e.omega = 1.0 + 0.5 * epsilon * e.kappa_tilde * e.kappa_tilde + report.kappa2;
    e.alpha = std::min(1.0, report.m2 - 1.0 / epsilon);
    return e;
}

} // namespace napde
