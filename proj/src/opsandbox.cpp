#include "napde/opsandbox.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace napde::ops {

namespace {

double herm_min_eig(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (A + A.adjoint())));
    return es.eigenvalues().minCoeff();
}

void require_selfadjoint_positive(const Matrix& B) {
    if ((B - B.adjoint()).norm() > 1e-10 * std::max(1.0, B.norm()))
        throw NotSelfAdjoint("B is not self-adjoint");
    if (herm_min_eig(B) <= 0) throw NotPositive("B is not positive definite");
}

} // namespace

double operator_norm(const Matrix& A) {
    if (A.size() == 0) return 0.0;
    return A.jacobiSvd().singularValues()(0);
}

Matrix matrix_exponential(const Matrix& A) { return A.exp(); }

SectorCheck accretivity_check(const Matrix& A, double omega, double theta) {
    if (!(theta > 0 && theta < M_PI / 2)) throw InvalidSize("theta must lie in (0, pi/2)");
    SectorCheck c;
    c.omega = omega;
    c.theta = theta;
    const Matrix shifted = omega * Matrix::Identity(A.rows(), A.cols()) + A;
    const Complex rot = std::polar(1.0, theta);
    c.margin = std::min(herm_min_eig(rot * shifted), herm_min_eig(std::conj(rot) * shifted));
    c.pass = c.margin >= -1e-12 * std::max(1.0, shifted.norm());
    return c;
}

SectorBoundReport sector_bound_check(const Matrix& A, double omega, double theta,
                                     const std::vector<Complex>& z_samples) {
    SectorBoundReport rep;
    rep.z_samples = z_samples;
    for (const Complex& z : z_samples) {
        if (std::abs(std::arg(z)) >= theta && std::abs(z) > 0)
            throw InvalidSize("sample outside the sector");
        const double nrm = operator_norm(matrix_exponential(Matrix(-z * A)));
        const double bound = std::exp(omega * std::abs(z));
        rep.norms.push_back(nrm);
        rep.bounds.push_back(bound);
        rep.max_excess = std::max(rep.max_excess, nrm / bound - 1.0);
    }
    rep.pass = rep.max_excess <= 1e-8;
    return rep;
}

Matrix associated_operator(const Matrix& K, const Matrix& M_H) {
    Eigen::LDLT<Matrix> ldlt(M_H);
    if ((M_H - M_H.adjoint()).norm() > 1e-10 * std::max(1.0, M_H.norm()) ||
        ldlt.info() != Eigen::Success || !ldlt.isPositive() || herm_min_eig(M_H) <= 0)
        throw SingularGram("Gram matrix must be Hermitian positive definite");
    Matrix A = ldlt.solve(K);
    // (A u | v)_{M_H} = v* M_H A u = v* K u for random u, v
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 4; ++trial) {
        Vector u(K.cols()), v(K.cols());
        for (int i = 0; i < K.cols(); ++i) {
            u(i) = Complex(g(rng), g(rng));
            v(i) = Complex(g(rng), g(rng));
        }
        const Complex lhs = (v.adjoint() * (M_H * (A * u)))(0);
        const Complex rhs = (v.adjoint() * (K * u))(0);
        if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs)) * K.norm() * 10)
            throw SingularGram("associated-operator identity failed");
    }
    return A;
}

IdentityReport weighted_product_generator(const Matrix& A, const Matrix& Bmat, const Matrix& K,
                                          const Matrix& M_H) {
    require_selfadjoint_positive(Bmat);
    IdentityReport rep;
    const double scale = std::max(1.0, A.norm() * Bmat.norm());
    // BA is associated with K under the Gram M_H B^{-1}: (M_H B^{-1})(BA) = K
    const Matrix Binv = Bmat.ldlt().solve(Matrix::Identity(Bmat.rows(), Bmat.cols()));
    const double assoc = (M_H * Binv * (Bmat * A) - K).norm();
    // similarity: AB = B^{-1}(BA)B
    const double sim = (A * Bmat - Binv * (Bmat * A) * Bmat).norm();
    rep.defect = std::max(assoc / std::max(1.0, K.norm()), sim / scale);
    rep.tol = 1e-12;
    rep.pass = rep.defect <= rep.tol * 100;
    return rep;
}

// ---- Dormand-Prince 5(4) ----

Vector integrate_ode(const std::function<Vector(double, const Vector&)>& rhs, double t0,
                     const Vector& y0, double t1, double rtol, double atol) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 == t0) return y0;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    double t = t0;
    Vector y = y0;
    Vector k1 = rhs(t, y);
    double h = dir * std::min(1e-3 * std::abs(t1 - t0) + 1e-8, std::abs(t1 - t0));
    long steps = 0;
    while (dir * (t1 - t) > 0) {
        if (++steps > 2000000) throw IntegratorFailure("step limit exceeded");
        if (dir * (t + h - t1) > 0) h = t1 - t;
        const Vector k2 = rhs(t + c2 * h, Vector(y + h * (a21 * k1)));
        const Vector k3 = rhs(t + c3 * h, Vector(y + h * (a31 * k1 + a32 * k2)));
        const Vector k4 = rhs(t + c4 * h, Vector(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const Vector k5 =
            rhs(t + c5 * h, Vector(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const Vector k6 =
            rhs(t + h, Vector(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const Vector y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = rhs(t + h, y5);
        const Vector err_v =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err = 0;
        if (!y5.allFinite() || !err_v.allFinite()) {
            err = std::numeric_limits<double>::infinity(); // reject and shrink
        } else {
            for (int i = 0; i < y.size(); ++i) {
                const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(y5(i)));
                err = std::max(err, std::abs(err_v(i)) / sc);
            }
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
            throw IntegratorFailure("step size underflow");
    }
    return y;
}

Matrix propagate(const std::function<Matrix(double)>& L, double s, double t, double rtol) {
    const Matrix probe = L(s);
    const int n = int(probe.rows());
    Vector y0(n * n);
    Eigen::Map<Matrix>(y0.data(), n, n) = Matrix::Identity(n, n);
    auto rhs = [&L, n](double tt, const Vector& y) {
        const Eigen::Map<const Matrix> Y(y.data(), n, n);
        Vector out(n * n);
        Eigen::Map<Matrix>(out.data(), n, n) = -L(tt) * Y;
        return out;
    };
    const Vector yT = integrate_ode(rhs, s, y0, t, rtol, rtol * 1e-2);
    return Eigen::Map<const Matrix>(yT.data(), n, n);
}

TransformReport right_left_equivalence(const MatrixEvolutionProblem& prob, double tol) {
    TransformReport rep;
    rep.tol = tol;
    const int n = prob.N;
    auto Binv = [&prob, n](double t) {
        return Matrix(prob.B(t).partialPivLu().solve(Matrix::Identity(n, n)));
    };
    auto fval = [&prob, n](double t) { return prob.f ? prob.f(t) : Vector(Vector::Zero(n)); };

    auto rhs_right = [&](double t, const Vector& u) {
        Vector r = fval(t) - prob.A(t) * (prob.B(t) * u);
        if (prob.C) r -= prob.C(t) * u;
        return r;
    };
    auto rhs_left = [&](double t, const Vector& v) {
        const Matrix Bi = Binv(t);
        Vector r = prob.B(t) * fval(t) - prob.B(t) * (prob.A(t) * v) + prob.Bdot(t) * (Bi * v);
        if (prob.C) r -= prob.B(t) * (prob.C(t) * (Bi * v));
        return r;
    };

    // the gap is pure integration error; keep the integrator well below the
    // pass threshold even for loose tolerances
    const double rtol = std::min(tol / 10, 1e-9);
    const Vector u0 = Binv(0.0) * prob.x0;
    const int checks = 16;
    Vector u = u0, v = prob.x0;
    double t = 0;
    for (int j = 1; j <= checks; ++j) {
        const double tj = prob.T * j / checks;
        u = integrate_ode(rhs_right, t, u, tj, rtol, rtol * 1e-2);
        v = integrate_ode(rhs_left, t, v, tj, rtol, rtol * 1e-2);
        t = tj;
        rep.max_gap = std::max(rep.max_gap, (u - Binv(tj) * v).norm());
    }
    rep.pass = rep.max_gap <= tol;
    return rep;
}

EvolutionFamilyReport evolution_family_checks(const MatrixEvolutionProblem& prob,
                                              const std::vector<double>& grid) {
    EvolutionFamilyReport rep;
    const int n = prob.N;
    auto Binv = [&prob, n](double t) {
        return Matrix(prob.B(t).partialPivLu().solve(Matrix::Identity(n, n)));
    };
    // generator of the left problem
    auto L = [&](double t) { return Matrix(prob.B(t) * prob.A(t) - prob.Bdot(t) * Binv(t)); };
    auto V = [&](double t, double s) { return propagate(L, s, t, 1e-11); };
    auto Phi = [&](double t, double s, const Matrix& Vts) {
        return Matrix(Binv(t) * Vts * prob.B(s));
    };

    // cocycle over consecutive grid triples, each V integrated independently
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
        const double s = grid[i], r = grid[i + 1], t = grid[i + 2];
        const Matrix Vts = V(t, s), Vtr = V(t, r), Vrs = V(r, s);
        rep.cocycle_defect_V = std::max(rep.cocycle_defect_V, (Vts - Vtr * Vrs).norm());
        const Matrix Pts = Phi(t, s, Vts), Ptr = Phi(t, r, Vtr), Prs = Phi(r, s, Vrs);
        rep.cocycle_defect_Phi = std::max(rep.cocycle_defect_Phi, (Pts - Ptr * Prs).norm());
    }
    for (double s : grid) {
        rep.identity_defect = std::max(
            rep.identity_defect,
            (Phi(s, s, Matrix::Identity(n, n)) - Matrix::Identity(n, n)).norm());
    }

    // Duhamel: u(t) = Phi(t,0) u0 + int_0^t Phi(t,r) f(r) dr vs direct integration
    auto fval = [&prob, n](double t) { return prob.f ? prob.f(t) : Vector(Vector::Zero(n)); };
    const double tEnd = grid.back();
    const int panels = 128; // Simpson
    std::vector<Matrix> W(2 * panels + 1); // V(r,0) at the quadrature nodes
    {
        Matrix cur = Matrix::Identity(n, n);
        W[0] = cur;
        for (int j = 1; j <= 2 * panels; ++j) {
            const double a = tEnd * (j - 1) / (2 * panels), b = tEnd * j / (2 * panels);
            cur = propagate(L, a, b, 1e-11) * cur;
            W[j] = cur;
        }
    }
    const Matrix VT0 = W[2 * panels];
    auto Phi_t_r = [&](int j) {
        // Phi(tEnd, r_j) = B^{-1}(tEnd) V(tEnd,0) V(r_j,0)^{-1} B(r_j)
        const double r = tEnd * j / (2 * panels);
        return Matrix(Binv(tEnd) * VT0 * W[j].partialPivLu().solve(prob.B(r)));
    };
    Vector duhamel = Phi_t_r(0) * (Binv(0.0) * prob.x0);
    Vector integral = Vector::Zero(n);
    const double hpan = tEnd / panels;
    for (int p = 0; p < panels; ++p) {
        const int j0 = 2 * p, j1 = 2 * p + 1, j2 = 2 * p + 2;
        integral += (hpan / 6.0) * (Phi_t_r(j0) * fval(tEnd * j0 / (2 * panels)) +
                                    4.0 * (Phi_t_r(j1) * fval(tEnd * j1 / (2 * panels))) +
                                    Phi_t_r(j2) * fval(tEnd * j2 / (2 * panels)));
    }
    duhamel += integral;

    auto rhs_right = [&](double t, const Vector& u) {
        return Vector(fval(t) - prob.A(t) * (prob.B(t) * u));
    };
    const Vector direct = integrate_ode(rhs_right, 0.0, Vector(Binv(0.0) * prob.x0), tEnd);
    rep.duhamel_gap = (duhamel - direct).norm();

    rep.pass = rep.cocycle_defect_V <= 1e-8 && rep.cocycle_defect_Phi <= 1e-8 &&
               rep.identity_defect <= 1e-12 && rep.duhamel_gap <= 1e-6;
    return rep;
}

DerivativeReport b_derivative_identities(const std::function<Matrix(double)>& B,
                                         const std::function<Matrix(double)>& Bdot, double t,
                                         double delta, unsigned seed) {
    DerivativeReport rep;
    const int n = int(B(t).rows());
    auto Binv = [&B, n](double s) {
        return Matrix(B(s).partialPivLu().solve(Matrix::Identity(n, n)));
    };
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 8; ++trial) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x(i) = Complex(g(rng), g(rng));
        const Vector exact = -Binv(t) * (Bdot(t) * (Binv(t) * x));
        auto fd = [&](double d) {
            return ((Binv(t + d) * x - Binv(t - d) * x) / (2 * d) - exact).norm() /
                   std::max(1.0, exact.norm());
        };
        rep.err_coarse = std::max(rep.err_coarse, fd(delta));
        rep.err_fine = std::max(rep.err_fine, fd(delta / 2));
    }
    rep.observed_order =
        std::log2(std::max(rep.err_coarse, 1e-300) / std::max(rep.err_fine, 1e-300));
    // second order up to roundoff; constant-B cases have errors at roundoff level
    rep.pass = rep.err_fine <= std::max(4.0 * delta * delta, 1e-9);
    return rep;
}

MatrixEvolutionProblem random_problem(int N, std::uint64_t seed, bool with_C,
                                      bool with_forcing) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    auto rand_matrix = [&] {
        Matrix m(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = Complex(g(rng), g(rng));
        return m;
    };

    const Matrix A0 = rand_matrix() / std::sqrt(double(N));
    const Matrix A1 = rand_matrix() / std::sqrt(double(N));
    const Matrix R = rand_matrix() / std::sqrt(double(N));
    const Matrix B0 = Matrix::Identity(N, N) + R * R.adjoint();
    Matrix B1 = rand_matrix() / std::sqrt(double(N));
    B1 = Matrix(0.5 * (B1 + B1.adjoint()));
    B1 *= 0.25 / std::max(1.0, operator_norm(B1)); // keep B(t) uniformly positive

    MatrixEvolutionProblem prob;
    prob.N = N;
    prob.A = [A0, A1](double t) { return Matrix(A0 + t * A1); };
    prob.B = [B0, B1](double t) { return Matrix(B0 + std::sin(t) * B1); };
    prob.Bdot = [B1](double t) { return Matrix(std::cos(t) * B1); };
    if (with_C) {
        const Matrix C0 = rand_matrix() / std::sqrt(double(N));
        prob.C = [C0](double) { return C0; };
    }
    if (with_forcing) {
        Vector f0(N), f1(N);
        for (int i = 0; i < N; ++i) {
            f0(i) = Complex(g(rng), g(rng));
            f1(i) = Complex(g(rng), g(rng));
        }
        prob.f = [f0, f1](double t) { return Vector(f0 + t * f1); };
    }
    prob.x0 = Vector(N);
    for (int i = 0; i < N; ++i) prob.x0(i) = Complex(g(rng), g(rng));
    prob.T = 1.0;
    prob.b_selfadjoint_positive = true;
    prob.beta = herm_min_eig(B0) - operator_norm(B1);
    return prob;
}

} // namespace napde::ops
