#pragma once

#include <vector>

#include <Eigen/Sparse>

#include "napde/problem.hpp"

namespace napde {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Uniform mesh of [0,1] with a per-cell Gauss rule.
struct Mesh {
    int N = 0;
    std::vector<double> nodes;        ///< zeta_i = i/N
    std::vector<double> quad_points;  ///< reference points in (0,1)
    std::vector<double> quad_weights; ///< reference weights, sum to 1

    double h() const { return 1.0 / N; }
};

Mesh build_mesh(int N, int q = 2);

/// Mixed Galerkin space for
///   V = { v : G*v in H^1, (I-FF*) [ (G*v)(1); (G*v)(0) ] = 0 }.
/// w = G*v is continuous piecewise-linear (nodal), z = Q*v piecewise-constant
/// (per cell). The essential constraint is eliminated by parameterizing the
/// boundary traces as [w(1); w(0)] = F y, y in K^r.
struct DiscreteSpace {
    Mesh mesh;
    ProblemSpec spec;
    Matrix Q; ///< orthocomplement basis of G

    int n_w = 0;       ///< full w DOFs, k (N+1)
    int n_z = 0;       ///< full z DOFs, (n-k) N
    int full_dim = 0;  ///< n_w + n_z
    int red_dim = 0;   ///< k(N+1) + (n-k)N - (2k - r)

    SparseMatrix constraint_map; ///< full_dim x red_dim injection

    // full DOF indices
    int w_dof(int node, int comp) const { return node * spec.k + comp; }
    int z_dof(int cell, int comp) const { return n_w + cell * (spec.n - spec.k) + comp; }

    /// Full coefficient vector from reduced coefficients.
    Vector to_full(const Vector& red) const { return constraint_map * red; }

    /// Evaluate v_h at (any) zeta from a reduced coefficient vector.
    Vector evaluate(const Vector& red, double zeta) const;
};

DiscreteSpace build_space(const Mesh& mesh, const ProblemSpec& spec);

/// K[i,j] = a(t, phi_j, phi_i) on reduced DOFs, all form terms including
/// the W_R boundary block.
SparseMatrix assemble_stiffness(const DiscreteSpace& space, const ProblemSpec& spec, double t);

/// M[i,j] = (weight(t,.) phi_j | phi_i). weight = H^{-1} gives the mass of
/// the v-formulation, weight = I the plain L^2 Gram matrix.
SparseMatrix assemble_mass(const DiscreteSpace& space, const MatrixField& weight, double t);

/// Gram matrix of the V-norm, ||v||_V^2 = ||v||^2 + ||(G*v)'||^2.
SparseMatrix assemble_vgram(const DiscreteSpace& space);

/// b[i] = (f(t,.) | phi_i).
Vector assemble_load(const DiscreteSpace& space, const MatrixField& f, double t);

/// (||v_h||_{L^2}, ||v_h||_V) of a reduced coefficient vector.
std::pair<double, double> norms(const DiscreteSpace& space, const Vector& red);

/// Nodal/cellwise interpolant of a function [0,1] -> K^n into the reduced
/// space. If the boundary traces violate the essential constraint they are
/// projected; *projected (when non-null) reports whether that happened.
Vector interpolate(const DiscreteSpace& space, const std::function<Vector(double)>& v,
                   bool* projected = nullptr);

} // namespace napde
