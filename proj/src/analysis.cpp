#include "napde/analysis.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace napde {

namespace {

double herm_min_eig(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (A + A.adjoint())));
    return es.eigenvalues().minCoeff();
}

double herm_max_eig(const Matrix& A) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(0.5 * (A + A.adjoint())));
    return es.eigenvalues().maxCoeff();
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

// L^2(0,1) norm of zeta -> g(zeta) in K^n by the mesh quadrature
double l2_norm(const Mesh& mesh, const std::function<Vector(double)>& g) {
    double acc = 0;
    const double h = mesh.h();
    for (int cell = 0; cell < mesh.N; ++cell)
        for (std::size_t q = 0; q < mesh.quad_points.size(); ++q) {
            const double z = (cell + mesh.quad_points[q]) * h;
            acc += h * mesh.quad_weights[q] * g(z).squaredNorm();
        }
    return std::sqrt(acc);
}

double lp_time_norm(const std::vector<double>& vals, double tau, double p) {
    double acc = 0;
    for (double v : vals) acc += tau * std::pow(v, p);
    return std::pow(acc, 1.0 / p);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    // least-squares slope of log y vs log x
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

GardingResult garding_check(const DiscreteSpace& space, const ProblemSpec& spec, double t,
                            double omega, double alpha) {
    const Matrix K = Matrix(assemble_stiffness(space, spec, t));
    const Matrix MI = Matrix(assemble_mass(space, identity_field(spec.n), 0.0));
    const Matrix MV = Matrix(assemble_vgram(space));
    GardingResult res;
    res.margin = herm_min_eig(Matrix(0.5 * (K + K.adjoint()) + omega * MI - alpha * MV));
    res.threshold = -1e-10 * K.norm();
    res.pass = res.margin >= res.threshold;
    return res;
}

ContractionConditions contraction_conditions(const ProblemSpec& spec, int nt, int nz) {
    ContractionConditions c;
    const int k = spec.k;
    const Matrix P = spec.gram_projector();
    const auto ts = linspace(0.0, spec.horizon, nt);
    const auto zs = linspace(0.0, 1.0, nz);

    // (i): boundary dissipation, with trailing F (not the printed F*)
    c.c_i = true;
    if (spec.r > 0) {
        Matrix D = Matrix::Zero(2 * k, 2 * k);
        D.topLeftCorner(k, k) = spec.G.adjoint() * spec.P1(0.0, 1.0) * spec.G;
        D.bottomRightCorner(k, k) = -(spec.G.adjoint() * spec.P1(0.0, 0.0) * spec.G);
        for (double t : ts) {
            const Matrix W = spec.W_R(t, 0.0) + spec.F.adjoint() * D * spec.F;
            if (herm_min_eig(W) < -1e-12 * std::max(1.0, W.norm())) c.c_i = false;
        }
    }

    // (ii) and (iii) on the zeta grid
    c.c_ii = c.c_iii = true;
    for (double z : zs) {
        const Matrix P1 = spec.P1(0.0, z);
        const Matrix dP1 = spec.P1.dz(0.0, z);
        const Matrix Z = spec.P0(0.0, z) + P * dP1 + 0.5 * P * dP1 * P;
        if (herm_max_eig(Z) > 1e-10 * std::max(1.0, Z.norm()) + 1e-12) c.c_ii = false;
        if ((P1 - P1.adjoint()).norm() > 1e-10 * std::max(1.0, P1.norm())) c.c_iii = false;
    }
    return c;
}

EnergyReport energy_monitor(const Trajectory& traj) {
    EnergyReport rep;
    rep.times = traj.times;
    rep.energy = traj.energy;
    rep.monotone = true;
    const double scale = traj.energy.empty()
                             ? 1.0
                             : std::max(1.0, *std::max_element(traj.energy.begin(), traj.energy.end()));
    for (std::size_t m = 0; m + 1 < traj.energy.size(); ++m) {
        const double jump = traj.energy[m + 1] - traj.energy[m];
        rep.max_increase = std::max(rep.max_increase, jump / scale);
        if (jump > 1e-10 * scale) rep.monotone = false;
    }
    return rep;
}

MRReport mr_functional(const DiscreteSpace& space, const ProblemSpec& spec,
                       const Trajectory& traj, double p) {
    MRReport rep;
    if (traj.steps() == 0) return rep;
    const double tau = traj.times[1] - traj.times[0];
    const Mesh& mesh = space.mesh;

    auto u_at = [&](std::size_t m, double z) { return u_value(space, spec, traj, m, z); };
    std::vector<double> du, au, un, fn;
    for (std::size_t m = 1; m < traj.times.size(); ++m) {
        const double t = traj.times[m];
        du.push_back(l2_norm(mesh, [&](double z) {
            return Vector((u_at(m, z) - u_at(m - 1, z)) / tau);
        }));
        au.push_back(l2_norm(mesh, [&](double z) {
            return Vector(spec.f(t, z).col(0) - (u_at(m, z) - u_at(m - 1, z)) / tau);
        }));
        un.push_back(l2_norm(mesh, [&](double z) { return u_at(m, z); }));
        fn.push_back(l2_norm(mesh, [&](double z) { return Vector(spec.f(t, z).col(0)); }));
    }
    rep.du_norm = lp_time_norm(du, tau, p);
    rep.au_norm = lp_time_norm(au, tau, p);
    rep.u_norm = lp_time_norm(un, tau, p);
    rep.data_norm = traj.norm_v.front() + lp_time_norm(fn, tau, p);
    rep.ratio = (rep.data_norm > 0) ? (rep.du_norm + rep.au_norm + rep.u_norm) / rep.data_norm : 0.0;
    return rep;
}

MatrixField manufactured_rhs(const ProblemSpec& spec, const ManufacturedSolution& u_exact) {
    const Matrix G = spec.G;
    // g = G S d/dz(G* H u) + P1 H u; f = u_t - g' - P0 H u
    auto gfun = [spec, G, u_exact](double t, double z) {
        const Vector u = u_exact.value(t, z);
        const Vector uz = u_exact.dz(t, z);
        const Matrix H = spec.H(t, z);
        const Matrix Hz = spec.H.dz(t, z);
        const Vector dGHu = G.adjoint() * (Hz * u + H * uz);
        return Vector(G * (spec.S(t, z) * dGHu) + spec.P1(t, z) * (H * u));
    };
    // boundary residual of the strong domain at sample times
    {
        double res = 0;
        for (double t : linspace(0.0, spec.horizon, 9)) {
            Vector trace(2 * spec.k);
            trace.head(spec.k) = G.adjoint() * (spec.H(t, 1.0) * u_exact.value(t, 1.0));
            trace.tail(spec.k) = G.adjoint() * (spec.H(t, 0.0) * u_exact.value(t, 0.0));
            Vector bnd(2 * spec.k);
            bnd.head(spec.k) = G.adjoint() * gfun(t, 1.0);
            bnd.tail(spec.k) = -(G.adjoint() * gfun(t, 0.0));
            const Matrix FFh = (spec.r > 0) ? Matrix(spec.F * spec.F.adjoint())
                                            : Matrix(Matrix::Zero(2 * spec.k, 2 * spec.k));
            res = std::max(res, ((Matrix::Identity(2 * spec.k, 2 * spec.k) - FFh) * trace).norm());
            if (spec.r > 0) {
                const Vector nat = spec.F.adjoint() * bnd +
                                   spec.W_R(t, 0.0) * (spec.F.adjoint() * trace);
                res = std::max(res, nat.norm());
            }
        }
        if (res > 1e-8)
            throw IncompatibleBoundary("manufactured solution violates the boundary conditions, residual=" +
                                       std::to_string(res));
    }

    MatrixField f;
    f.rows = spec.n;
    f.cols = 1;
    f.eval = [spec, gfun, u_exact](double t, double z) {
        const double delta = 1e-5;
        double lo = z - delta, hi = z + delta;
        if (lo < 0.0) { lo = 0.0; hi = 2 * delta; }
        if (hi > 1.0) { hi = 1.0; lo = 1.0 - 2 * delta; }
        const Vector gprime = (gfun(t, hi) - gfun(t, lo)) / (hi - lo);
        const Vector u = u_exact.value(t, z);
        return Matrix(u_exact.dt(t, z) - gprime - spec.P0(t, z) * (spec.H(t, z) * u));
    };
    return f;
}

std::pair<double, double> trajectory_error(const DiscreteSpace& space, const ProblemSpec& spec,
                                           const Trajectory& traj,
                                           const std::function<Vector(double, double)>& u_ref) {
    double cmax = 0, l2acc = 0;
    const double tau = traj.times.size() > 1 ? traj.times[1] - traj.times[0] : 0.0;
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        const double t = traj.times[m];
        const double e = l2_norm(space.mesh, [&](double z) {
            return Vector(u_value(space, spec, traj, m, z) - u_ref(t, z));
        });
        cmax = std::max(cmax, e);
        l2acc += tau * e * e;
    }
    return {std::sqrt(l2acc), cmax};
}

ConvergenceReport convergence_study(const ProblemSpec& spec, const ManufacturedSolution& u_exact,
                                    int levels, SchemeKind kind, int N0, double tau0) {
    if (levels < 3) throw InvalidSize("need at least 3 refinement levels");
    ConvergenceReport rep;
    const MatrixField f = manufactured_rhs(spec, u_exact);
    auto x0 = [&](double z) { return Vector(spec.H(0.0, z) * u_exact.value(0.0, z)); };
    auto uref = [&](double t, double z) { return u_exact.value(t, z); };

    // spatial study, tau scaled with h^2 to keep the time error subdominant
    for (int l = 0; l < levels; ++l) {
        const int N = N0 << l;
        const double tau = tau0 / std::pow(4.0, l);
        const DiscreteSpace space = build_space(build_mesh(N), spec);
        const Trajectory traj = solve_ivp(space, spec, Scheme{kind, tau}, x0, f);
        auto [el2, ecl2] = trajectory_error(space, spec, traj, uref);
        rep.hs.push_back(1.0 / N);
        rep.errors_h.push_back(ecl2);
        rep.errors_h_l2l2.push_back(el2);
    }
    rep.order_h = fit_slope(rep.hs, rep.errors_h);

    // temporal study on a fixed mesh against a small-tau reference on the
    // same mesh, isolating the time-discretization order
    {
        const int Nref = 32;
        const DiscreteSpace space = build_space(build_mesh(Nref), spec);
        const double tau_min = tau0 / std::pow(2.0, levels - 1);
        const Trajectory ref =
            solve_ivp(space, spec, Scheme{kind, tau_min / 16.0}, x0, f);
        for (int l = 0; l < levels; ++l) {
            const double tau = tau0 / std::pow(2.0, l);
            const Trajectory traj = solve_ivp(space, spec, Scheme{kind, tau}, x0, f);
            // compare at final time, where both grids coincide
            const std::size_t mt = traj.times.size() - 1;
            const std::size_t mr = ref.times.size() - 1;
            const double err = l2_norm(space.mesh, [&](double z) {
                return Vector(u_value(space, spec, traj, mt, z) -
                              u_value(space, spec, ref, mr, z));
            });
            rep.taus.push_back(tau);
            rep.errors_tau.push_back(err);
        }
        rep.order_tau = fit_slope(rep.taus, rep.errors_tau);
    }
    return rep;
}

ManufacturedSolution manufactured_reference(const std::string& preset_name) {
    const double pi = M_PI;
    auto scalar = [](auto fn) {
        return [fn](double t, double z) {
            Vector v(1);
            v(0) = fn(t, z);
            return v;
        };
    };
    ManufacturedSolution u;
    if (preset_name == "heat-dirichlet") {
        u.value = scalar([pi](double t, double z) { return std::exp(-t) * std::sin(pi * z); });
        u.dt = scalar([pi](double t, double z) { return -std::exp(-t) * std::sin(pi * z); });
        u.dz = scalar([pi](double t, double z) { return pi * std::exp(-t) * std::cos(pi * z); });
        u.dzz = scalar(
            [pi](double t, double z) { return -pi * pi * std::exp(-t) * std::sin(pi * z); });
        return u;
    }
    if (preset_name == "heat-neumann") {
        u.value = scalar([pi](double t, double z) { return std::exp(-t) * std::cos(pi * z); });
        u.dt = scalar([pi](double t, double z) { return -std::exp(-t) * std::cos(pi * z); });
        u.dz = scalar([pi](double t, double z) { return -pi * std::exp(-t) * std::sin(pi * z); });
        u.dzz = scalar(
            [pi](double t, double z) { return -pi * pi * std::exp(-t) * std::cos(pi * z); });
        return u;
    }
    if (preset_name == "heat-periodic") {
        const double w = 2 * pi;
        u.value = scalar([w](double t, double z) { return std::exp(-t) * std::sin(w * z); });
        u.dt = scalar([w](double t, double z) { return -std::exp(-t) * std::sin(w * z); });
        u.dz = scalar([w](double t, double z) { return w * std::exp(-t) * std::cos(w * z); });
        u.dzz =
            scalar([w](double t, double z) { return -w * w * std::exp(-t) * std::sin(w * z); });
        return u;
    }
    if (preset_name == "heat-robin") {
        // u'(0) = u(0) and u'(1) = -u(1): Robin with unit boundary weight
        u.value = scalar([](double t, double z) { return std::exp(-t) * (-z * z + z + 1); });
        u.dt = scalar([](double t, double z) { return -std::exp(-t) * (-z * z + z + 1); });
        u.dz = scalar([](double t, double z) { return std::exp(-t) * (1 - 2 * z); });
        u.dzz = scalar([](double t, double) { return -2 * std::exp(-t); });
        return u;
    }
    if (preset_name == "damped-wave-dirichlet") {
        auto vec2 = [](auto f1, auto f2) {
            return [f1, f2](double t, double z) {
                Vector v(2);
                v(0) = f1(t, z);
                v(1) = f2(t, z);
                return v;
            };
        };
        const double p = pi;
        u.value = vec2([p](double t, double z) { return std::exp(-t) * std::sin(p * z); },
                       [p](double t, double z) { return std::exp(-t) * std::cos(p * z); });
        u.dt = vec2([p](double t, double z) { return -std::exp(-t) * std::sin(p * z); },
                    [p](double t, double z) { return -std::exp(-t) * std::cos(p * z); });
        u.dz = vec2([p](double t, double z) { return p * std::exp(-t) * std::cos(p * z); },
                    [p](double t, double z) { return -p * std::exp(-t) * std::sin(p * z); });
        u.dzz = vec2([p](double t, double z) { return -p * p * std::exp(-t) * std::sin(p * z); },
                     [p](double t, double z) { return -p * p * std::exp(-t) * std::cos(p * z); });
        return u;
    }
    throw UnknownPreset("no manufactured reference for '" + preset_name + "'");
}

} // namespace napde
