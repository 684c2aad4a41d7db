#ifndef MORSE_GEOMETRY_HPP
#define MORSE_GEOMETRY_HPP

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "morse/errors.hpp"

namespace morse {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct Box3 {
    Vec3 lo{-1.0, -1.0, -1.0};
    Vec3 hi{1.0, 1.0, 1.0};

    bool contains(const Vec3& x) const
    {
        return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
    }
};

/**
 * A compact surface M = {x : constraint(x) = 0} in ambient 3-space.
 * The zero level set must be regular inside bounding_box (nonvanishing
 * constraint gradient) and entirely contained in it.  The Riemannian
 * metric on M is the one induced by the Euclidean embedding.
 */
struct ImplicitSurface {
    std::string name;
    std::function<double(const Vec3&)> constraint;
    std::function<Vec3(const Vec3&)> constraint_gradient;
    std::function<Mat3(const Vec3&)> constraint_hessian;
    Box3 bounding_box;

    // outward unit normal ∇G/|∇G|
    Vec3 unit_normal(const Vec3& x) const { return constraint_gradient(x).normalized(); }

    int dimension() const { return 2; }       // shipped engine: surfaces in R^3
    int ambient_dimension() const { return 3; }
};

/// Smooth scalar field on ambient space, restricted to M where needed.
struct ScalarField {
    std::string name;
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
    std::function<Mat3(const Vec3&)> hessian;
};

/// Orthonormal basis of the tangent plane T_xM at base_point.
struct TangentFrame {
    Vec3 base_point;
    Vec3 e1;
    Vec3 e2;
};

struct GeomConfig {
    double proj_tol = 1e-10;   // |constraint| after projection
    double crit_tol = 1e-8;    // restricted gradient norm at critical points
    int max_proj_iter = 50;
};

/// Newton projection along the constraint gradient onto M.
/// Throws NonConvergence if the iteration does not reach |G| <= proj_tol.
Vec3 project_to_surface(const Vec3& x, const ImplicitSurface& surface,
                        const GeomConfig& cfg = {});

/// Gradient of f|_M at x: tangential projection of the ambient gradient.
/// Throws OffSurface if x does not satisfy the constraint to proj_tol.
Vec3 riemannian_gradient(const ImplicitSurface& surface, const ScalarField& field,
                         const Vec3& x, const GeomConfig& cfg = {});

/// Deterministic orthonormal tangent frame at a point of M.
TangentFrame tangent_frame_at(const ImplicitSurface& surface, const Vec3& x);

/// Hessian of f|_M at a critical point x, expressed in the given frame:
/// H_ij = e_i^T (∇²f − λ∇²G) e_j with λ = (∇f·∇G)/|∇G|².
/// Only valid at critical points; throws NotCritical otherwise.
Mat2 restricted_hessian(const ImplicitSurface& surface, const ScalarField& field,
                        const Vec3& x, const TangentFrame& frame,
                        const GeomConfig& cfg = {});

// Built-in surfaces and fields, addressable by name through the scenario
// registry.  Tori use major radius R and tube radius r.
ImplicitSurface make_unit_sphere();
ImplicitSurface make_torus(double R = 2.0, double r = 1.0);           // axis of revolution = z
ImplicitSurface make_vertical_torus(double R = 2.0, double r = 1.0);  // axis of revolution = x

ScalarField make_height_field();                    // f = z
ScalarField make_two_peak_field();                  // f = z + x^2
ScalarField make_tilted_height_field(double eps);   // f = z + eps*x

} // namespace morse

#endif
