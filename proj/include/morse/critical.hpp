#ifndef MORSE_CRITICAL_HPP
#define MORSE_CRITICAL_HPP

#include <string>
#include <vector>

#include "morse/geometry.hpp"

namespace morse {

/**
 * A nondegenerate critical point of f|_M.  unstable_frame lists the
 * negative-eigenvalue eigenvectors (ambient coordinates, ascending
 * eigenvalue, deterministic sign); its ordered span fixes the
 * orientation of the unstable manifold used by the sign bookkeeping.
 */
struct CriticalPoint {
    int id = -1;
    Vec3 position = Vec3::Zero();
    double value = 0.0;
    int index = 0;                       // number of negative Hessian eigenvalues
    Vec2 hessian_eigenvalues = Vec2::Zero();  // ascending
    std::vector<Vec3> unstable_frame;

    std::string label() const { return "c" + std::to_string(id); }
};

struct CriticalConfig {
    GeomConfig geom;
    int grid_per_axis = 7;        // seed grid resolution over the bounding box
    double dedup_radius = 1e-5;
    double nondegen_tol = 1e-6;   // minimum |eigenvalue|
    int max_newton_iter = 60;
    bool verify_refined_grid = true;
};

struct CriticalSearchResult {
    std::vector<CriticalPoint> points;
    bool seed_exhaustion_warning = false;  // doubling the grid changed the answer
};

/// Locate all critical points of f|_M by Newton iteration on the Lagrange
/// system {∇f − λ∇G = 0, G = 0}, seeded from a grid over the bounding box.
/// Result is deduplicated and sorted by (value, id).
/// Throws DegenerateCritical if any converged point has an eigenvalue
/// smaller than nondegen_tol in magnitude.
CriticalSearchResult find_critical_points(const ImplicitSurface& surface,
                                          const ScalarField& field,
                                          const CriticalConfig& cfg = {});

/// Morse index: number of negative eigenvalues of the restricted Hessian.
int morse_index(const CriticalPoint& cp);

/// Newton-polish a single start point to a critical point of f|_M.
/// Returns false if the iteration fails to converge or leaves the box.
bool polish_critical_point(const ImplicitSurface& surface, const ScalarField& field,
                           Vec3& x, const CriticalConfig& cfg = {});

/// Deterministic eigenvector sign: largest-magnitude component positive,
/// ties broken by the first coordinate.
Vec3 canonical_eigvec_sign(Vec3 v);

/// Build a CriticalPoint record (Hessian data, index, unstable frame) at a
/// converged position.  id is left to the caller.
CriticalPoint classify_critical_point(const ImplicitSurface& surface,
                                      const ScalarField& field, const Vec3& position,
                                      const CriticalConfig& cfg = {});

} // namespace morse

#endif
