#include "morse/geometry.hpp"

#include <cmath>

namespace morse {

Vec3 project_to_surface(const Vec3& x, const ImplicitSurface& surface, const GeomConfig& cfg)
{
    if (!surface.bounding_box.contains(x))
        throw NonConvergence("project_to_surface: start point outside bounding box");

    Vec3 y = x;
    for (int it = 0; it < cfg.max_proj_iter; ++it) {
        const double g = surface.constraint(y);
        if (std::abs(g) <= cfg.proj_tol)
            return y;
        const Vec3 grad = surface.constraint_gradient(y);
        const double n2 = grad.squaredNorm();
        if (n2 < 1e-16)
            throw NonConvergence("project_to_surface: vanishing constraint gradient");
        y -= (g / n2) * grad;
    }
    if (std::abs(surface.constraint(y)) <= cfg.proj_tol)
        return y;
    throw NonConvergence("project_to_surface: Newton did not converge");
}

Vec3 riemannian_gradient(const ImplicitSurface& surface, const ScalarField& field,
                         const Vec3& x, const GeomConfig& cfg)
{
    if (std::abs(surface.constraint(x)) > cfg.proj_tol)
        throw OffSurface("riemannian_gradient: point not on surface");
    const Vec3 n = surface.unit_normal(x);
    const Vec3 g = field.gradient(x);
    return g - g.dot(n) * n;
}

TangentFrame tangent_frame_at(const ImplicitSurface& surface, const Vec3& x)
{
    const Vec3 n = surface.unit_normal(x);
    // seed with the coordinate axis least aligned with the normal
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(n[i]) < std::abs(n[k])) k = i;
    Vec3 e1 = Vec3::Unit(k);
    e1 = (e1 - e1.dot(n) * n).normalized();
    const Vec3 e2 = n.cross(e1);
    return TangentFrame{x, e1, e2};
}

Mat2 restricted_hessian(const ImplicitSurface& surface, const ScalarField& field,
                        const Vec3& x, const TangentFrame& frame, const GeomConfig& cfg)
{
    const Vec3 tg = riemannian_gradient(surface, field, x, cfg);
    if (tg.norm() > cfg.crit_tol)
        throw NotCritical("restricted_hessian: restricted gradient norm " +
                          std::to_string(tg.norm()) + " exceeds crit_tol");

    const Vec3 gG = surface.constraint_gradient(x);
    const double lambda = field.gradient(x).dot(gG) / gG.squaredNorm();
    const Mat3 H = field.hessian(x) - lambda * surface.constraint_hessian(x);

    const double h11 = frame.e1.dot(H * frame.e1);
    const double h22 = frame.e2.dot(H * frame.e2);
    const double h12 = frame.e1.dot(H * frame.e2);  // computed once, mirrored

    Mat2 out;
    out << h11, h12, h12, h22;
    return out;
}

// ---------------------------------------------------------------------------
// built-in surfaces

ImplicitSurface make_unit_sphere()
{
    ImplicitSurface s;
    s.name = "unit_sphere";
    s.constraint = [](const Vec3& x) { return x.squaredNorm() - 1.0; };
    s.constraint_gradient = [](const Vec3& x) { return Vec3(2.0 * x); };
    s.constraint_hessian = [](const Vec3&) { return Mat3(2.0 * Mat3::Identity()); };
    s.bounding_box = Box3{Vec3(-2.5, -2.5, -2.5), Vec3(2.5, 2.5, 2.5)};
    return s;
}

namespace {

// torus of revolution about the axis orthogonal to coordinates (a, b):
// G = (rho - R)^2 + w^2 - r^2 with rho = sqrt(xa^2 + xb^2), w the axis coordinate.
ImplicitSurface make_torus_about(int a, int b, int axis, double R, double r, const std::string& name)
{
    ImplicitSurface s;
    s.name = name;
    s.constraint = [=](const Vec3& x) {
        const double rho = std::hypot(x[a], x[b]);
        const double d = rho - R;
        return d * d + x[axis] * x[axis] - r * r;
    };
    s.constraint_gradient = [=](const Vec3& x) {
        const double rho = std::hypot(x[a], x[b]);
        const double u = 1.0 - R / rho;
        Vec3 g = Vec3::Zero();
        g[a] = 2.0 * u * x[a];
        g[b] = 2.0 * u * x[b];
        g[axis] = 2.0 * x[axis];
        return g;
    };
    s.constraint_hessian = [=](const Vec3& x) {
        const double rho = std::hypot(x[a], x[b]);
        const double rho3 = rho * rho * rho;
        const double u = 1.0 - R / rho;
        Mat3 h = Mat3::Zero();
        h(a, a) = 2.0 * u + 2.0 * R * x[a] * x[a] / rho3;
        h(b, b) = 2.0 * u + 2.0 * R * x[b] * x[b] / rho3;
        h(a, b) = h(b, a) = 2.0 * R * x[a] * x[b] / rho3;
        h(axis, axis) = 2.0;
        return h;
    };
    const double out = R + r + 0.5;
    Vec3 lo, hi;
    lo[a] = -out; hi[a] = out;
    lo[b] = -out; hi[b] = out;
    lo[axis] = -(r + 0.5); hi[axis] = r + 0.5;
    s.bounding_box = Box3{lo, hi};
    return s;
}

} // namespace

ImplicitSurface make_torus(double R, double r)
{
    return make_torus_about(0, 1, 2, R, r, "torus");
}

ImplicitSurface make_vertical_torus(double R, double r)
{
    // wheel in the yz-plane; the x tilt of the scenario fields breaks the
    // x -> -x symmetry that would otherwise pin saddle-saddle connections
    // to the inner equator
    return make_torus_about(1, 2, 0, R, r, "vertical_torus");
}

// ---------------------------------------------------------------------------
// built-in fields

ScalarField make_height_field()
{
    ScalarField f;
    f.name = "height";
    f.value = [](const Vec3& x) { return x.z(); };
    f.gradient = [](const Vec3&) { return Vec3(0.0, 0.0, 1.0); };
    f.hessian = [](const Vec3&) { return Mat3(Mat3::Zero()); };
    return f;
}

ScalarField make_two_peak_field()
{
    ScalarField f;
    f.name = "two_peak";
    f.value = [](const Vec3& x) { return x.z() + x.x() * x.x(); };
    f.gradient = [](const Vec3& x) { return Vec3(2.0 * x.x(), 0.0, 1.0); };
    f.hessian = [](const Vec3&) {
        Mat3 h = Mat3::Zero();
        h(0, 0) = 2.0;
        return h;
    };
    return f;
}

ScalarField make_tilted_height_field(double eps)
{
    ScalarField f;
    f.name = "tilted_height";
    f.value = [eps](const Vec3& x) { return x.z() + eps * x.x(); };
    f.gradient = [eps](const Vec3&) { return Vec3(eps, 0.0, 1.0); };
    f.hessian = [](const Vec3&) { return Mat3(Mat3::Zero()); };
    return f;
}

} // namespace morse
