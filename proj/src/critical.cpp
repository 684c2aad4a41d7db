#include "morse/critical.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace morse {

Vec3 canonical_eigvec_sign(Vec3 v)
{
    int k = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
    if (v[k] < 0.0) v = -v;
    return v;
}

bool polish_critical_point(const ImplicitSurface& surface, const ScalarField& field,
                           Vec3& x, const CriticalConfig& cfg)
{
    const Vec3 gG0 = surface.constraint_gradient(x);
    if (gG0.squaredNorm() < 1e-12) return false;
    double lambda = field.gradient(x).dot(gG0) / gG0.squaredNorm();

    Vec3 y = x;
    for (int it = 0; it < cfg.max_newton_iter; ++it) {
        const Vec3 gf = field.gradient(y);
        const Vec3 gG = surface.constraint_gradient(y);
        Eigen::Vector4d F;
        F << gf - lambda * gG, surface.constraint(y);

        if (F.head<3>().norm() < 1e-13 && std::abs(F[3]) < 1e-13) {
            x = y;
            return surface.bounding_box.contains(x);
        }

        Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
        J.topLeftCorner<3, 3>() = field.hessian(y) - lambda * surface.constraint_hessian(y);
        J.topRightCorner<3, 1>() = -gG;
        J.bottomLeftCorner<1, 3>() = gG.transpose();

        const Eigen::Vector4d step = J.fullPivLu().solve(-F);
        if (!step.allFinite()) return false;
        y += step.head<3>();
        lambda += step[3];
        if (!surface.bounding_box.contains(y)) return false;
    }

    // accept if the residual still meets the critical-point tolerance
    const Vec3 gf = field.gradient(x = y);
    const Vec3 gG = surface.constraint_gradient(y);
    return std::abs(surface.constraint(y)) <= cfg.geom.proj_tol &&
           (gf - lambda * gG).norm() <= cfg.geom.crit_tol;
}

CriticalPoint classify_critical_point(const ImplicitSurface& surface,
                                      const ScalarField& field, const Vec3& position,
                                      const CriticalConfig& cfg)
{
    CriticalPoint cp;
    cp.position = position;
    cp.value = field.value(position);

    const TangentFrame frame = tangent_frame_at(surface, position);
    const Mat2 H = restricted_hessian(surface, field, position, frame, cfg.geom);
    Eigen::SelfAdjointEigenSolver<Mat2> es(H);
    cp.hessian_eigenvalues = es.eigenvalues();  // ascending

    for (int i = 0; i < 2; ++i)
        if (std::abs(cp.hessian_eigenvalues[i]) < cfg.nondegen_tol)
            throw DegenerateCritical("critical point at (" + std::to_string(position.x()) +
                                     ", " + std::to_string(position.y()) + ", " +
                                     std::to_string(position.z()) +
                                     ") has a near-zero Hessian eigenvalue: f is not Morse "
                                     "for this scenario");

    cp.index = 0;
    for (int i = 0; i < 2; ++i) {
        if (cp.hessian_eigenvalues[i] >= 0.0) continue;
        ++cp.index;
        const Vec2 v2 = es.eigenvectors().col(i);
        cp.unstable_frame.push_back(
            canonical_eigvec_sign(v2[0] * frame.e1 + v2[1] * frame.e2));
    }
    return cp;
}

namespace {

std::vector<Vec3> converged_grid_candidates(const ImplicitSurface& surface,
                                            const ScalarField& field,
                                            const CriticalConfig& cfg, int n)
{
    const Box3& box = surface.bounding_box;
    std::vector<Vec3> out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Vec3 t(n == 1 ? 0.5 : double(i) / (n - 1),
                             n == 1 ? 0.5 : double(j) / (n - 1),
                             n == 1 ? 0.5 : double(k) / (n - 1));
                Vec3 x = box.lo + t.cwiseProduct(box.hi - box.lo);
                try {
                    x = project_to_surface(x, surface, cfg.geom);
                } catch (const NonConvergence&) {
                    continue;  // seed outside the projection basin
                }
                if (polish_critical_point(surface, field, x, cfg))
                    out.push_back(x);
            }
    return out;
}

std::vector<Vec3> dedup(std::vector<Vec3> pts, double radius)
{
    std::sort(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) {
        return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
    });
    std::vector<Vec3> out;
    for (const Vec3& p : pts) {
        bool seen = false;
        for (const Vec3& q : out)
            if ((p - q).norm() <= radius) { seen = true; break; }
        if (!seen) out.push_back(p);
    }
    return out;
}

bool same_point_set(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double radius)
{
    if (a.size() != b.size()) return false;
    for (const Vec3& p : a) {
        bool hit = false;
        for (const Vec3& q : b)
            if ((p - q).norm() <= radius) { hit = true; break; }
        if (!hit) return false;
    }
    return true;
}

} // namespace

CriticalSearchResult find_critical_points(const ImplicitSurface& surface,
                                          const ScalarField& field,
                                          const CriticalConfig& cfg)
{
    CriticalSearchResult res;
    auto pts = dedup(converged_grid_candidates(surface, field, cfg, cfg.grid_per_axis),
                     cfg.dedup_radius);
    if (cfg.verify_refined_grid) {
        auto fine = dedup(converged_grid_candidates(surface, field, cfg, 2 * cfg.grid_per_axis),
                          cfg.dedup_radius);
        if (!same_point_set(pts, fine, cfg.dedup_radius)) {
            res.seed_exhaustion_warning = true;
            pts = std::move(fine);
        }
    }

    for (const Vec3& p : pts)
        res.points.push_back(classify_critical_point(surface, field, p, cfg));

    std::sort(res.points.begin(), res.points.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) {
                  if (a.value != b.value) return a.value < b.value;
                  return std::lexicographical_compare(a.position.data(), a.position.data() + 3,
                                                      b.position.data(), b.position.data() + 3);
              });
    for (std::size_t i = 0; i < res.points.size(); ++i)
        res.points[i].id = static_cast<int>(i);
    return res;
}

int morse_index(const CriticalPoint& cp)
{
    int n = 0;
    for (int i = 0; i < 2; ++i)
        if (cp.hessian_eigenvalues[i] < 0.0) ++n;
    return n;
}

} // namespace morse
