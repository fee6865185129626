#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "napde/errors.hpp"

namespace napde {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Matrix-valued coefficient on [0,T] x [0,1].
///
/// The scalar field is complex throughout; real-valued coefficients are
/// embedded. Inner products downstream are linear in the first slot and
/// antilinear in the second, matching (f | g) = int g^H f.
struct MatrixField {
    int rows = 0;
    int cols = 0;
    std::function<Matrix(double t, double zeta)> eval;
    /// Times where t-Lipschitz continuity may fail (piecewise coefficients).
    std::vector<double> t_breakpoints;
    /// Optional analytic d/dzeta evaluator.
    std::function<Matrix(double t, double zeta)> eval_dz;
    bool time_dependent = true;
    bool zeta_dependent = true;

    bool has_zeta_derivative() const { return static_cast<bool>(eval_dz); }

    Matrix operator()(double t, double zeta) const {
        Matrix m = eval(t, zeta);
        if (m.rows() != rows || m.cols() != cols)
            throw ShapeMismatch("field evaluated to " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", declared " +
                                std::to_string(rows) + "x" + std::to_string(cols));
        if (!m.allFinite())
            throw NonFiniteCoefficient("field value at t=" + std::to_string(t) +
                                       ", zeta=" + std::to_string(zeta));
        return m;
    }

    /// d/dzeta, analytic when available, else central differences.
    Matrix dz(double t, double zeta, double delta = 1e-6) const {
        if (eval_dz) return eval_dz(t, zeta);
        double lo = zeta - delta, hi = zeta + delta;
        if (lo < 0.0) { lo = 0.0; hi = 2 * delta; }
        if (hi > 1.0) { hi = 1.0; lo = 1.0 - 2 * delta; }
        return (eval(t, hi) - eval(t, lo)) / (hi - lo);
    }

    static MatrixField constant(const Matrix& m) {
        MatrixField f;
        f.rows = static_cast<int>(m.rows());
        f.cols = static_cast<int>(m.cols());
        f.eval = [m](double, double) { return m; };
        f.eval_dz = [m](double, double) { return Matrix::Zero(m.rows(), m.cols()); };
        f.time_dependent = false;
        f.zeta_dependent = false;
        return f;
    }

    static MatrixField scalar(double v) {
        Matrix m(1, 1);
        m(0, 0) = v;
        return constant(m);
    }

    static MatrixField zero(int rows, int cols) { return constant(Matrix::Zero(rows, cols)); }

    static MatrixField of_time(int rows, int cols, std::function<Matrix(double)> g,
                               std::vector<double> breakpoints = {}) {
        MatrixField f;
        f.rows = rows;
        f.cols = cols;
        f.eval = [g = std::move(g)](double t, double) { return g(t); };
        f.eval_dz = [rows, cols](double, double) { return Matrix::Zero(rows, cols); };
        f.t_breakpoints = std::move(breakpoints);
        f.zeta_dependent = false;
        return f;
    }

    static MatrixField of_zeta(int rows, int cols, std::function<Matrix(double)> g,
                               std::function<Matrix(double)> gprime = nullptr) {
        MatrixField f;
        f.rows = rows;
        f.cols = cols;
        f.eval = [g = std::move(g)](double, double z) { return g(z); };
        if (gprime) f.eval_dz = [gp = std::move(gprime)](double, double z) { return gp(z); };
        f.time_dependent = false;
        return f;
    }
};

/// Pointwise inverse of a Hermitian positive definite field (e.g. H^{-1}).
MatrixField inverse_field(const MatrixField& f);

inline MatrixField identity_field(int n) { return MatrixField::constant(Matrix::Identity(n, n)); }

} // namespace napde
