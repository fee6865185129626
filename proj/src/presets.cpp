#include "napde/presets.hpp"

#include <cmath>

namespace napde {

namespace {

ProblemSpec heat_base() {
    ProblemSpec s;
    s.n = s.k = 1;
    s.G = Matrix::Identity(1, 1);
    s.S = MatrixField::scalar(1.0);
    s.H = MatrixField::scalar(1.0);
    s.P0 = MatrixField::zero(1, 1);
    s.P1 = MatrixField::zero(1, 1);
    s.f = MatrixField::zero(1, 1);
    return s;
}

ProblemSpec damped_wave_base() {
    ProblemSpec s;
    s.n = 2;
    s.k = 1;
    Matrix G(2, 1);
    G << 1, 0;
    s.G = G;
    Matrix P1(2, 2);
    P1 << 0, 1, 1, 0;
    s.P1 = MatrixField::constant(P1);
    s.P0 = MatrixField::zero(2, 2);
    // H = diag(1/rho, E) with unit material parameters
    s.H = MatrixField::constant(Matrix(Eigen::Vector2cd(1.0, 1.0).asDiagonal()));
    s.S = MatrixField::scalar(1.0); // damping coefficient
    s.f = MatrixField::zero(2, 1);
    return s;
}

void dirichlet(ProblemSpec& s) {
    s.r = 0;
    s.F = Matrix(2 * s.k, 0);
    s.W_R = MatrixField::zero(0, 0);
}

void free_boundary(ProblemSpec& s, const Matrix& W) {
    s.r = 2 * s.k;
    s.F = Matrix::Identity(2 * s.k, 2 * s.k);
    s.W_R = MatrixField::constant(W);
}

void periodic(ProblemSpec& s) {
    // the normalized trace coupling w(1) = w(0)
    s.r = s.k;
    Matrix F(2 * s.k, s.k);
    F.topRows(s.k) = Matrix::Identity(s.k, s.k) / std::sqrt(2.0);
    F.bottomRows(s.k) = Matrix::Identity(s.k, s.k) / std::sqrt(2.0);
    s.F = F;
    s.W_R = MatrixField::zero(s.k, s.k);
}

} // namespace

ProblemSpec preset(const std::string& name) {
    if (name == "heat-dirichlet") {
        ProblemSpec s = heat_base();
        dirichlet(s);
        return s;
    }
    if (name == "heat-neumann") {
        ProblemSpec s = heat_base();
        free_boundary(s, Matrix::Zero(2, 2));
        return s;
    }
    if (name == "heat-robin") {
        ProblemSpec s = heat_base();
        free_boundary(s, Matrix::Identity(2, 2));
        return s;
    }
    if (name == "heat-periodic") {
        ProblemSpec s = heat_base();
        periodic(s);
        return s;
    }
    if (name == "damped-wave-dirichlet") {
        ProblemSpec s = damped_wave_base();
        dirichlet(s);
        return s;
    }
    if (name == "damped-wave-free") {
        ProblemSpec s = damped_wave_base();
        free_boundary(s, Matrix::Zero(2, 2));
        return s;
    }
    if (name == "damped-wave-periodic") {
        ProblemSpec s = damped_wave_base();
        periodic(s);
        return s;
    }
    throw UnknownPreset(name);
}

std::vector<std::string> preset_names() {
    return {"heat-dirichlet",       "heat-neumann",     "heat-robin",
            "heat-periodic",        "damped-wave-dirichlet", "damped-wave-free",
            "damped-wave-periodic"};
}

} // namespace napde
