#ifndef MORSE_FLOW_HPP
#define MORSE_FLOW_HPP

#include <vector>

#include "morse/critical.hpp"
#include "morse/geometry.hpp"

namespace morse {

constexpr int kUnresolved = -1;

struct FlowConfig {
    GeomConfig geom;
    double step_tol = 1e-9;        // RK45 local error tolerance
    double initial_step = 1e-3;
    double max_step = 1.0;         // cap on the time step
    double limit_tol = 1e-6;       // gradient norm at capture
    double capture_radius = 1e-4;  // distance to a known critical point at capture
    double accept_radius = 1e-4;   // closest-approach acceptance for refined separatrices
    double cluster_radius = 1e-3;  // crossing-point clustering
    double seed_radius = 0.01;     // unstable seed offset
    int index2_seed_count = 64;    // seeds on the circle around an index-2 source
    double max_time = 1000.0;
    long max_steps = 400000;
    double level_bias = 0.5;       // position of a inside the admissible value interval
    double min_angle_window = 1e-14;  // refinement floor (radians)
    int max_refine_evals = 120;    // integration budget per separatrix refinement
};

/// One trajectory of the negative gradient flow.  Samples are time-ordered;
/// f decreases strictly along them.  Limits are critical-point ids, or
/// kUnresolved when integration ran out of time.
struct Trajectory {
    struct Sample {
        double t;
        Vec3 x;
    };
    std::vector<Sample> samples;
    int forward_limit = kUnresolved;
    int backward_limit = kUnresolved;

    bool constant() const { return samples.size() == 1; }
};

/// A flow line from source (index k) to target (index k-1), with the sign
/// assigned by the orientation bookkeeping.
struct Connection {
    int source = -1;
    int target = -1;
    Trajectory representative;
    Vec3 crossing = Vec3::Zero();  // intersection with the regular level f^{-1}(a)
    double level = 0.0;            // the regular value a
    int sign = 0;                  // ±1
    int source_branch = 0;         // ±1 for index-1 sources (unstable branch), 0 otherwise
};

/// Integrate x' = −(tangential ∇f) from x0, re-projecting to M each step.
/// Capture: gradient norm ≤ limit_tol and distance to a known critical point
/// ≤ capture_radius.  with_backward also integrates the reversed field to
/// label backward_limit (samples get negative times).
/// Throws BlowUp if a step leaves the bounding box.
Trajectory integrate_flow(const ImplicitSurface& surface, const ScalarField& field,
                          const Vec3& x0, const std::vector<CriticalPoint>& known,
                          const FlowConfig& cfg = {}, bool with_backward = true);

/// Seeds spanning the unstable directions of cp at the given radius:
/// index 0 → none; index 1 → ±radius along the unstable eigenvector;
/// index 2 → count seeds on the radius circle, ordered per the frame.
std::vector<Vec3> unstable_seeds(const ImplicitSurface& surface, const CriticalPoint& cp,
                                 double radius, int count, const GeomConfig& geom = {});

/// The regular value a used to count (p,q) flow lines: midpoint of
/// (f(q), f(p)) when that interval is free of other critical values, else
/// the bias point of the free subinterval adjacent to f(p).
double pick_regular_level(const CriticalPoint& p, const CriticalPoint& q,
                          const std::vector<CriticalPoint>& cps, double bias = 0.5);

/// All flow lines from p to q (index(p) = index(q)+1), found by sweeping
/// the unstable seeds of p forward and clustering the trajectories that
/// limit to q by their crossing on f^{-1}(a).  For index-2 sources the
/// sweep is refined deterministically around closest-approach minima so
/// the measure-zero separatrix directions are resolved.
/// Throws IndexGap when the index difference is not 1, AmbiguousCluster
/// when crossings closer than cluster_radius have different limits.
std::vector<Connection> enumerate_connections(const CriticalPoint& p, const CriticalPoint& q,
                                              const std::vector<CriticalPoint>& cps,
                                              const ImplicitSurface& surface,
                                              const ScalarField& field,
                                              const FlowConfig& cfg = {});

/// Sign of a connection per the intersection-number rule: at the crossing
/// x ∈ f^{-1}(a), the level-set basis b1 aligned with the source
/// orientation is compared against the transversal orientation that the
/// target orientation induces on its stable manifold.  Index 1→0
/// connections reduce to the unstable-branch sign.
/// Throws DegenerateFrame when the frame construction degenerates.
int connection_sign(const Connection& conn, const CriticalPoint& p, const CriticalPoint& q,
                    const ImplicitSurface& surface, const ScalarField& field,
                    const FlowConfig& cfg = {});

/// Enumerate + sign every index-adjacent pair; deterministic order
/// (sorted by source, target, crossing).  jobs > 1 parallelizes over pairs.
std::vector<Connection> enumerate_all_connections(const ImplicitSurface& surface,
                                                  const ScalarField& field,
                                                  const std::vector<CriticalPoint>& cps,
                                                  const FlowConfig& cfg = {}, int jobs = 1);

struct MorseSmaleViolation {
    int source = -1;
    int target = -1;
    Trajectory trajectory;
};

/// Order-1 Morse–Smale diagnostic: flow lines between equal-index critical
/// points (traced from saddle unstable branches) and unresolved
/// trajectories from the standard seed sweeps.
struct MorseSmaleReport {
    std::vector<MorseSmaleViolation> equal_index_connections;
    int unresolved_count = 0;
    bool clean() const { return equal_index_connections.empty() && unresolved_count == 0; }
};

MorseSmaleReport check_morse_smale(const std::vector<CriticalPoint>& cps,
                                   const ImplicitSurface& surface, const ScalarField& field,
                                   const FlowConfig& cfg = {});

/// Point where f(traj) = a, refined by Newton steps along the flow.
Vec3 level_crossing(const Trajectory& traj, double a, const ImplicitSurface& surface,
                    const ScalarField& field, const FlowConfig& cfg = {});

namespace detail {

/// Crossing-point clustering shared by the enumeration paths.  Each
/// candidate carries the trajectory's crossing and its forward limit;
/// crossings within cluster_radius must agree on the limit, otherwise
/// AmbiguousCluster is thrown.  Returns one representative index per
/// cluster, in sweep order.
struct ConnectionCandidate {
    double parameter = 0.0;  // seed angle or branch sign, for ordering
    Vec3 crossing = Vec3::Zero();
    int limit = kUnresolved;
};
std::vector<std::size_t> cluster_candidates(const std::vector<ConnectionCandidate>& cands,
                                            double cluster_radius);

} // namespace detail

} // namespace morse

#endif
