#include "napde/discretize.hpp"

#include <cmath>

namespace napde {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// local basis data at one quadrature point: columns are the 2k w-dofs of the
// cell followed by its (n-k) z-dofs
struct LocalBasis {
    Matrix Wv; // k x L, values of w = G*phi
    Matrix Wd; // k x L, values of w'
    Matrix Uv; // n x L, values of phi
};

LocalBasis local_basis(const DiscreteSpace& sp, double xi /* reference coord */) {
    const int n = sp.spec.n, k = sp.spec.k;
    const int L = 2 * k + (n - k);
    const double h = sp.mesh.h();
    LocalBasis b;
    b.Wv = Matrix::Zero(k, L);
    b.Wd = Matrix::Zero(k, L);
    b.Uv = Matrix::Zero(n, L);
    const double psiL = 1.0 - xi, psiR = xi;
    for (int c = 0; c < k; ++c) {
        b.Wv(c, c) = psiL;
        b.Wd(c, c) = -1.0 / h;
        b.Uv.col(c) = sp.spec.G.col(c) * psiL;
        b.Wv(c, k + c) = psiR;
        b.Wd(c, k + c) = 1.0 / h;
        b.Uv.col(k + c) = sp.spec.G.col(c) * psiR;
    }
    for (int d = 0; d < n - k; ++d) b.Uv.col(2 * k + d) = sp.Q.col(d);
    return b;
}

std::vector<int> local_dofs(const DiscreteSpace& sp, int cell) {
    const int n = sp.spec.n, k = sp.spec.k;
    std::vector<int> dofs(2 * k + (n - k));
    for (int c = 0; c < k; ++c) {
        dofs[c] = sp.w_dof(cell, c);
        dofs[k + c] = sp.w_dof(cell + 1, c);
    }
    for (int d = 0; d < n - k; ++d) dofs[2 * k + d] = sp.z_dof(cell, d);
    return dofs;
}

void scatter(std::vector<Triplet>& trip, const std::vector<int>& dofs, const Matrix& loc) {
    for (int i = 0; i < loc.rows(); ++i)
        for (int j = 0; j < loc.cols(); ++j)
            if (loc(i, j) != Complex(0)) trip.emplace_back(dofs[i], dofs[j], loc(i, j));
}

SparseMatrix reduce(const DiscreteSpace& sp, const std::vector<Triplet>& trip) {
    SparseMatrix full(sp.full_dim, sp.full_dim);
    full.setFromTriplets(trip.begin(), trip.end());
    SparseMatrix red = sp.constraint_map.adjoint() * full * sp.constraint_map;
    red.makeCompressed();
    return red;
}

} // namespace

Mesh build_mesh(int N, int q) {
    if (N < 2) throw InvalidSize("mesh needs N >= 2 cells");
    if (q < 1 || q > 3) throw InvalidSize("quadrature order must be 1, 2 or 3");
    Mesh m;
    m.N = N;
    m.nodes.resize(N + 1);
    for (int i = 0; i <= N; ++i) m.nodes[i] = double(i) / N;
    switch (q) {
    case 1:
        m.quad_points = {0.5};
        m.quad_weights = {1.0};
        break;
    case 2: {
        const double d = 0.5 / std::sqrt(3.0);
        m.quad_points = {0.5 - d, 0.5 + d};
        m.quad_weights = {0.5, 0.5};
        break;
    }
    case 3: {
        const double d = 0.5 * std::sqrt(3.0 / 5.0);
        m.quad_points = {0.5 - d, 0.5, 0.5 + d};
        m.quad_weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
        break;
    }
    }
    return m;
}

DiscreteSpace build_space(const Mesh& mesh, const ProblemSpec& spec) {
    const int n = spec.n, k = spec.k, r = spec.r, N = mesh.N;
    DiscreteSpace sp;
    sp.mesh = mesh;
    sp.spec = spec;
    sp.Q = orthocomplement_basis(spec.G);
    sp.n_w = k * (N + 1);
    sp.n_z = (n - k) * N;
    sp.full_dim = sp.n_w + sp.n_z;
    sp.red_dim = k * (N + 1) + (n - k) * N - (2 * k - r);

    if (r > 0) {
        const Matrix FF = spec.F * spec.F.adjoint();
        if ((spec.F.adjoint() * spec.F - Matrix::Identity(r, r)).norm() > 1e-10 ||
            (FF * FF - FF).norm() > 1e-10)
            throw ConstraintInconsistent("F fails its projection invariants");
    }

    // reduced layout: interior w nodes, then the boundary parameter y, then z
    const int y_off = k * (N - 1);
    const int z_off = y_off + r;
    std::vector<Triplet> trip;
    for (int node = 1; node < N; ++node)
        for (int c = 0; c < k; ++c)
            trip.emplace_back(sp.w_dof(node, c), (node - 1) * k + c, Complex(1));
    // [w(1); w(0)] = F y
    for (int j = 0; j < r; ++j) {
        for (int c = 0; c < k; ++c) {
            if (spec.F(c, j) != Complex(0)) trip.emplace_back(sp.w_dof(N, c), y_off + j, spec.F(c, j));
            if (spec.F(k + c, j) != Complex(0))
                trip.emplace_back(sp.w_dof(0, c), y_off + j, spec.F(k + c, j));
        }
    }
    for (int cell = 0; cell < N; ++cell)
        for (int d = 0; d < n - k; ++d)
            trip.emplace_back(sp.z_dof(cell, d), z_off + cell * (n - k) + d, Complex(1));

    sp.constraint_map.resize(sp.full_dim, sp.red_dim);
    sp.constraint_map.setFromTriplets(trip.begin(), trip.end());
    sp.constraint_map.makeCompressed();
    return sp;
}

Vector DiscreteSpace::evaluate(const Vector& red, double zeta) const {
    const Vector full = to_full(red);
    const int N = mesh.N;
    int cell = std::min(int(zeta * N), N - 1);
    const double xi = zeta * N - cell;
    const int k = spec.k, n = spec.n;
    Vector w(k), z = Vector::Zero(n - k);
    for (int c = 0; c < k; ++c)
        w(c) = (1.0 - xi) * full(w_dof(cell, c)) + xi * full(w_dof(cell + 1, c));
    for (int d = 0; d < n - k; ++d) z(d) = full(z_dof(cell, d));
    return spec.G * w + Q * z;
}

SparseMatrix assemble_stiffness(const DiscreteSpace& sp, const ProblemSpec& spec, double t) {
    const auto [Rg, dRg] = reduced_p1_fields(spec);
    const Matrix GH = spec.G.adjoint();
    const double h = sp.mesh.h();
    std::vector<Triplet> trip;
    for (int cell = 0; cell < sp.mesh.N; ++cell) {
        const auto dofs = local_dofs(sp, cell);
        Matrix loc = Matrix::Zero(int(dofs.size()), int(dofs.size()));
        for (std::size_t q = 0; q < sp.mesh.quad_points.size(); ++q) {
            const double xi = sp.mesh.quad_points[q];
            const double z = (cell + xi) * h;
            const double wq = h * sp.mesh.quad_weights[q];
            const LocalBasis b = local_basis(sp, xi);
            const Matrix S = spec.S(t, z);
            const Matrix P1 = spec.P1(t, z);
            const Matrix P0 = spec.P0(t, z);
            const Matrix R = Rg(t, z), dR = dRg(t, z);
            loc += wq * (b.Wd.adjoint() * S * b.Wd                //
                         + b.Wd.adjoint() * (GH * P1) * b.Uv     //
                         - b.Uv.adjoint() * (dR * b.Wv + R * b.Wd) //
                         - b.Uv.adjoint() * P0 * b.Uv);
        }
        scatter(trip, dofs, loc);
    }
    // boundary block: C_d(v)^* F W_R F^* C_d(u) with C_d = [w(1); w(0)]
    if (spec.r > 0) {
        const Matrix B = spec.F * spec.W_R(t, 0.0) * spec.F.adjoint();
        const int k = spec.k;
        std::vector<int> bdofs(2 * k);
        for (int c = 0; c < k; ++c) {
            bdofs[c] = sp.w_dof(sp.mesh.N, c);
            bdofs[k + c] = sp.w_dof(0, c);
        }
        for (int i = 0; i < 2 * k; ++i)
            for (int j = 0; j < 2 * k; ++j)
                if (B(i, j) != Complex(0)) trip.emplace_back(bdofs[i], bdofs[j], B(i, j));
    }
    return reduce(sp, trip);
}

SparseMatrix assemble_mass(const DiscreteSpace& sp, const MatrixField& weight, double t) {
    if (weight.rows != sp.spec.n || weight.cols != sp.spec.n)
        throw ShapeMismatch("mass weight must be n x n");
    const double h = sp.mesh.h();
    std::vector<Triplet> trip;
    for (int cell = 0; cell < sp.mesh.N; ++cell) {
        const auto dofs = local_dofs(sp, cell);
        Matrix loc = Matrix::Zero(int(dofs.size()), int(dofs.size()));
        for (std::size_t q = 0; q < sp.mesh.quad_points.size(); ++q) {
            const double xi = sp.mesh.quad_points[q];
            const double z = (cell + xi) * h;
            const double wq = h * sp.mesh.quad_weights[q];
            const LocalBasis b = local_basis(sp, xi);
            loc += wq * (b.Uv.adjoint() * weight(t, z) * b.Uv);
        }
        scatter(trip, dofs, loc);
    }
    return reduce(sp, trip);
}

SparseMatrix assemble_vgram(const DiscreteSpace& sp) {
    const double h = sp.mesh.h();
    std::vector<Triplet> trip;
    for (int cell = 0; cell < sp.mesh.N; ++cell) {
        const auto dofs = local_dofs(sp, cell);
        Matrix loc = Matrix::Zero(int(dofs.size()), int(dofs.size()));
        for (std::size_t q = 0; q < sp.mesh.quad_points.size(); ++q) {
            const double xi = sp.mesh.quad_points[q];
            const double wq = h * sp.mesh.quad_weights[q];
            const LocalBasis b = local_basis(sp, xi);
            loc += wq * (b.Uv.adjoint() * b.Uv + b.Wd.adjoint() * b.Wd);
        }
        scatter(trip, dofs, loc);
    }
    return reduce(sp, trip);
}

Vector assemble_load(const DiscreteSpace& sp, const MatrixField& f, double t) {
    if (f.rows != sp.spec.n || f.cols != 1) throw ShapeMismatch("load must be n x 1");
    const double h = sp.mesh.h();
    Vector bfull = Vector::Zero(sp.full_dim);
    for (int cell = 0; cell < sp.mesh.N; ++cell) {
        const auto dofs = local_dofs(sp, cell);
        for (std::size_t q = 0; q < sp.mesh.quad_points.size(); ++q) {
            const double xi = sp.mesh.quad_points[q];
            const double z = (cell + xi) * h;
            const double wq = h * sp.mesh.quad_weights[q];
            const LocalBasis b = local_basis(sp, xi);
            const Vector fv = f(t, z).col(0);
            const Vector loc = wq * (b.Uv.adjoint() * fv);
            for (std::size_t i = 0; i < dofs.size(); ++i) bfull(dofs[i]) += loc(int(i));
        }
    }
    return sp.constraint_map.adjoint() * bfull;
}

std::pair<double, double> norms(const DiscreteSpace& sp, const Vector& red) {
    const SparseMatrix MI = assemble_mass(sp, identity_field(sp.spec.n), 0.0);
    const SparseMatrix MV = assemble_vgram(sp);
    const double h2 = std::max(0.0, (red.adjoint() * (MI * red))(0).real());
    const double v2 = std::max(0.0, (red.adjoint() * (MV * red))(0).real());
    return {std::sqrt(h2), std::sqrt(v2)};
}

Vector interpolate(const DiscreteSpace& sp, const std::function<Vector(double)>& v,
                   bool* projected) {
    const int N = sp.mesh.N, k = sp.spec.k, n = sp.spec.n, r = sp.spec.r;
    const int y_off = k * (N - 1), z_off = y_off + r;
    Vector red = Vector::Zero(sp.red_dim);
    for (int node = 1; node < N; ++node) {
        const Vector w = sp.spec.G.adjoint() * v(sp.mesh.nodes[node]);
        for (int c = 0; c < k; ++c) red((node - 1) * k + c) = w(c);
    }
    Vector trace(2 * k);
    trace.head(k) = sp.spec.G.adjoint() * v(1.0);
    trace.tail(k) = sp.spec.G.adjoint() * v(0.0);
    if (r > 0) red.segment(y_off, r) = sp.spec.F.adjoint() * trace;
    Vector admissible = (r > 0) ? Vector(sp.spec.F * red.segment(y_off, r)) : Vector(Vector::Zero(2 * k));
    if (projected) *projected = (trace - admissible).norm() > 1e-10 * std::max(1.0, trace.norm());
    for (int cell = 0; cell < N; ++cell) {
        const double mid = (sp.mesh.nodes[cell] + sp.mesh.nodes[cell + 1]) / 2;
        const Vector z = sp.Q.adjoint() * v(mid);
        for (int d = 0; d < n - k; ++d) red(z_off + cell * (n - k) + d) = z(d);
    }
    return red;
}

} // namespace napde
