#include "morse/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

namespace morse {

namespace {

Vec3 tangential(const ImplicitSurface& surface, const Vec3& g, const Vec3& x)
{
    const Vec3 n = surface.constraint_gradient(x).normalized();
    return g - g.dot(n) * n;
}

Vec3 flow_field(const ImplicitSurface& surface, const ScalarField& field, const Vec3& x,
                double dir)
{
    return -dir * tangential(surface, field.gradient(x), x);
}

// Dormand–Prince 5(4) pair
struct DP45Step {
    Vec3 y5;
    double err;
};

template <typename F>
DP45Step dp45(const F& f, const Vec3& y, double h)
{
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const Vec3 k1 = f(y);
    const Vec3 k2 = f(y + h * (a21 * k1));
    const Vec3 k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec3 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec3 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec3 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec3 y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec3 k7 = f(y5);
    const Vec3 errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return DP45Step{y5, errv.norm()};
}

template <typename F>
Vec3 rk4(const F& f, const Vec3& y, double h)
{
    const Vec3 k1 = f(y);
    const Vec3 k2 = f(y + 0.5 * h * k1);
    const Vec3 k3 = f(y + 0.5 * h * k2);
    const Vec3 k4 = f(y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

int nearest_critical(const std::vector<CriticalPoint>& known, const Vec3& x, double* dist)
{
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& cp : known) {
        const double d = (cp.position - x).norm();
        if (d < bd) {
            bd = d;
            best = cp.id;
        }
    }
    if (dist) *dist = bd;
    return best;
}

const CriticalPoint& by_id(const std::vector<CriticalPoint>& cps, int id)
{
    for (const auto& cp : cps)
        if (cp.id == id) return cp;
    throw Error("unknown critical point id " + std::to_string(id));
}

struct RawLeg {
    std::vector<Trajectory::Sample> samples;
    int limit = kUnresolved;
};

RawLeg integrate_leg(const ImplicitSurface& surface, const ScalarField& field, const Vec3& x0,
                     const std::vector<CriticalPoint>& known, const FlowConfig& cfg, double dir)
{
    const auto vf = [&](const Vec3& y) { return flow_field(surface, field, y, dir); };

    RawLeg leg;
    Vec3 x = project_to_surface(x0, surface, cfg.geom);
    double t = 0.0;
    leg.samples.push_back({t, x});

    // a critical start point is its own limit
    {
        double d;
        const int id = nearest_critical(known, x, &d);
        if (tangential(surface, field.gradient(x), x).norm() <= cfg.limit_tol &&
            d <= cfg.capture_radius) {
            leg.limit = id;
            return leg;
        }
    }

    double h = cfg.initial_step;
    for (long step = 0; step < cfg.max_steps && t < cfg.max_time;) {
        const DP45Step s = dp45(vf, x, h);
        if (!std::isfinite(s.err)) {
            h *= 0.25;
            ++step;
            continue;
        }
        if (s.err > cfg.step_tol && h > 1e-12) {
            h = std::max(1e-12, h * std::clamp(0.9 * std::pow(cfg.step_tol / s.err, 0.2), 0.2, 1.0));
            ++step;
            continue;
        }
        if (!surface.bounding_box.contains(s.y5))
            throw BlowUp("flow stepped outside the bounding box");

        t += h;
        x = project_to_surface(s.y5, surface, cfg.geom);
        leg.samples.push_back({t, x});
        ++step;

        if (s.err > 0.0)
            h = std::min({cfg.max_step, cfg.max_time - t + 1e-9,
                          h * std::clamp(0.9 * std::pow(cfg.step_tol / s.err, 0.2), 0.2, 5.0)});

        if (tangential(surface, field.gradient(x), x).norm() <= cfg.limit_tol) {
            double d;
            const int id = nearest_critical(known, x, &d);
            if (id >= 0 && d <= cfg.capture_radius) {
                leg.limit = id;
                if (d > 0.0)
                    leg.samples.push_back({t, by_id(known, id).position});
                return leg;
            }
        }
    }
    return leg;  // unresolved
}

} // namespace

Trajectory integrate_flow(const ImplicitSurface& surface, const ScalarField& field,
                          const Vec3& x0, const std::vector<CriticalPoint>& known,
                          const FlowConfig& cfg, bool with_backward)
{
    Trajectory traj;
    RawLeg fwd = integrate_leg(surface, field, x0, known, cfg, +1.0);
    traj.forward_limit = fwd.limit;

    if (with_backward) {
        RawLeg bwd = integrate_leg(surface, field, x0, known, cfg, -1.0);
        traj.backward_limit = bwd.limit;
        for (std::size_t i = bwd.samples.size(); i-- > 1;)
            traj.samples.push_back({-bwd.samples[i].t, bwd.samples[i].x});
    } else if (fwd.limit >= 0 && fwd.samples.size() == 1) {
        traj.backward_limit = fwd.limit;  // constant trajectory
    }
    traj.samples.insert(traj.samples.end(), fwd.samples.begin(), fwd.samples.end());
    return traj;
}

std::vector<Vec3> unstable_seeds(const ImplicitSurface& surface, const CriticalPoint& cp,
                                 double radius, int count, const GeomConfig& geom)
{
    std::vector<Vec3> seeds;
    if (cp.index == 0)
        return seeds;
    if (cp.index == 1) {
        const Vec3& eu = cp.unstable_frame.at(0);
        seeds.push_back(project_to_surface(cp.position + radius * eu, surface, geom));
        seeds.push_back(project_to_surface(cp.position - radius * eu, surface, geom));
        return seeds;
    }
    const Vec3& e1 = cp.unstable_frame.at(0);
    const Vec3& e2 = cp.unstable_frame.at(1);
    seeds.reserve(count);
    for (int j = 0; j < count; ++j) {
        const double th = 2.0 * M_PI * j / count;
        seeds.push_back(project_to_surface(
            cp.position + radius * (std::cos(th) * e1 + std::sin(th) * e2), surface, geom));
    }
    return seeds;
}

double pick_regular_level(const CriticalPoint& p, const CriticalPoint& q,
                          const std::vector<CriticalPoint>& cps, double bias)
{
    const double lo = q.value, hi = p.value;
    const double tol = 1e-10 * std::max(1.0, std::abs(hi) + std::abs(lo));
    double floor_value = lo;
    for (const auto& cp : cps)
        if (cp.value > lo + tol && cp.value < hi - tol)
            floor_value = std::max(floor_value, cp.value);
    return floor_value + bias * (hi - floor_value);
}

Vec3 level_crossing(const Trajectory& traj, double a, const ImplicitSurface& surface,
                    const ScalarField& field, const FlowConfig& cfg)
{
    const auto& s = traj.samples;
    std::size_t i = 0;
    bool found = false;
    for (; i + 1 < s.size(); ++i)
        if (field.value(s[i].x) >= a && field.value(s[i + 1].x) <= a) {
            found = true;
            break;
        }
    if (!found)
        throw Error("level_crossing: trajectory does not cross the level");

    const auto vf = [&](const Vec3& y) { return flow_field(surface, field, y, +1.0); };
    Vec3 y = s[i].x;
    if (vf(y).squaredNorm() < 1e-12)
        y = s[i + 1].x;  // bracket starts at a near-critical sample
    for (int it = 0; it < 60; ++it) {
        const double df = field.value(y) - a;
        if (std::abs(df) <= 1e-12 * std::max(1.0, std::abs(a)))
            return y;
        const double v2 = vf(y).squaredNorm();
        if (v2 < 1e-18)
            throw Error("level_crossing: stalled at a critical point");
        y = project_to_surface(rk4(vf, y, df / v2), surface, cfg.geom);
    }
    return y;
}

namespace detail {

std::vector<std::size_t> cluster_candidates(const std::vector<ConnectionCandidate>& cands,
                                            double cluster_radius)
{
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        bool assigned = false;
        for (std::size_t r : reps) {
            if ((cands[i].crossing - cands[r].crossing).norm() <= cluster_radius) {
                if (cands[i].limit != cands[r].limit)
                    throw AmbiguousCluster(
                        "crossings within cluster_radius diverge to different limits "
                        "(insufficient seed density)");
                assigned = true;
                break;
            }
        }
        if (!assigned)
            reps.push_back(i);
    }
    return reps;
}

} // namespace detail

namespace {

double closest_approach(const Trajectory& traj, const Vec3& target)
{
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.samples)
        d = std::min(d, (s.x - target).norm());
    return d;
}

void truncate_at_closest(Trajectory& traj, const CriticalPoint& q)
{
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        const double d = (traj.samples[i].x - q.position).norm();
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    traj.samples.resize(best + 1);
    if (bd > 0.0)
        traj.samples.push_back({traj.samples.back().t, q.position});
    traj.forward_limit = q.id;
}

// backward extension of an accepted candidate so the representative spans
// source -> target; seed is samples.front().  Index-2 sources repel the
// backward flow from every direction, so integration reaches them; for an
// index-1 source the seed lies in the unstable eigenspace by construction
// and the source is prepended directly (backward integration would shear
// off along the stable direction of the reversed flow).
Trajectory extend_to_source(const Trajectory& fwd, const CriticalPoint& p,
                            const ImplicitSurface& surface, const ScalarField& field,
                            const std::vector<CriticalPoint>& cps, const FlowConfig& cfg)
{
    Trajectory full;
    if (p.index == 1) {
        full.samples.push_back({fwd.samples.front().t - 1.0, p.position});
        full.backward_limit = p.id;
    } else {
        RawLeg bwd = integrate_leg(surface, field, fwd.samples.front().x, cps, cfg, -1.0);
        full.backward_limit = bwd.limit;
        for (std::size_t i = bwd.samples.size(); i-- > 1;)
            full.samples.push_back({-bwd.samples[i].t, bwd.samples[i].x});
        if (full.backward_limit != p.id)
            throw Error("connection representative does not trace back to its source");
    }
    full.samples.insert(full.samples.end(), fwd.samples.begin(), fwd.samples.end());
    full.forward_limit = fwd.forward_limit;
    return full;
}

struct SweepEval {
    Trajectory traj;
    double dist = std::numeric_limits<double>::infinity();
    bool captured = false;
};

} // namespace

std::vector<Connection> enumerate_connections(const CriticalPoint& p, const CriticalPoint& q,
                                              const std::vector<CriticalPoint>& cps,
                                              const ImplicitSurface& surface,
                                              const ScalarField& field, const FlowConfig& cfg)
{
    if (p.index - q.index != 1)
        throw IndexGap("enumerate_connections: index(p) - index(q) = " +
                       std::to_string(p.index - q.index) + ", expected 1");

    const double a = pick_regular_level(p, q, cps, cfg.level_bias);

    struct Cand {
        double param;
        Trajectory traj;
        int branch;  // ±1 for index-1 sources
    };
    std::vector<Cand> raw;

    if (p.index == 1) {
        const auto seeds = unstable_seeds(surface, p, cfg.seed_radius, 2, cfg.geom);
        for (int k = 0; k < 2; ++k) {
            Trajectory t = integrate_flow(surface, field, seeds[k], cps, cfg, false);
            if (t.forward_limit >= 0)
                raw.push_back({double(k), std::move(t), k == 0 ? +1 : -1});
        }
    } else {
        // sweep the seed circle, then refine around closest-approach minima:
        // trajectories into a saddle occupy measure-zero directions
        const int n = cfg.index2_seed_count;
        const auto eval_angle = [&](double th) {
            SweepEval ev;
            const Vec3 seed = project_to_surface(
                p.position + cfg.seed_radius * (std::cos(th) * p.unstable_frame[0] +
                                                std::sin(th) * p.unstable_frame[1]),
                surface, cfg.geom);
            ev.traj = integrate_flow(surface, field, seed, cps, cfg, false);
            ev.dist = closest_approach(ev.traj, q.position);
            ev.captured = (ev.traj.forward_limit == q.id);
            return ev;
        };

        std::vector<double> dist(n);
        std::vector<bool> captured(n);
        std::vector<Trajectory> grid_traj(n);
        for (int j = 0; j < n; ++j) {
            SweepEval ev = eval_angle(2.0 * M_PI * j / n);
            dist[j] = ev.dist;
            captured[j] = ev.captured;
            grid_traj[j] = std::move(ev.traj);
        }

        for (int j = 0; j < n; ++j) {
            const double prev = dist[(j + n - 1) % n];
            const double next = dist[(j + 1) % n];
            if (!(dist[j] < prev && dist[j] <= next))
                continue;  // not a local closest-approach minimum

            if (captured[j]) {
                raw.push_back({2.0 * M_PI * j / n, grid_traj[j], 0});
                continue;
            }

            // golden-section refinement of the closest approach
            double lo = 2.0 * M_PI * (j - 1) / n;
            double hi = 2.0 * M_PI * (j + 1) / n;
            constexpr double invphi = 0.6180339887498949;
            double x1 = hi - invphi * (hi - lo);
            double x2 = lo + invphi * (hi - lo);
            SweepEval e1 = eval_angle(x1);
            SweepEval e2 = eval_angle(x2);
            int evals = 2;
            std::optional<Cand> hit;
            while (evals < cfg.max_refine_evals) {
                if (e1.captured) {
                    hit = Cand{x1, std::move(e1.traj), 0};
                    break;
                }
                if (e2.captured) {
                    hit = Cand{x2, std::move(e2.traj), 0};
                    break;
                }
                if (hi - lo <= cfg.min_angle_window)
                    break;
                if (e1.dist < e2.dist) {
                    hi = x2;
                    x2 = x1;
                    e2 = std::move(e1);
                    x1 = hi - invphi * (hi - lo);
                    e1 = eval_angle(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    e1 = std::move(e2);
                    x2 = lo + invphi * (hi - lo);
                    e2 = eval_angle(x2);
                }
                ++evals;
            }
            if (!hit) {
                SweepEval& best = (e1.dist <= e2.dist) ? e1 : e2;
                const double th = (e1.dist <= e2.dist) ? x1 : x2;
                if (best.captured) {
                    hit = Cand{th, std::move(best.traj), 0};
                } else if (best.dist <= cfg.accept_radius) {
                    // bracketed minimum that never met the strict capture rule;
                    // the bracket certifies a separatrix within accept_radius
                    const int tail = best.traj.forward_limit;
                    if (tail == kUnresolved || by_id(cps, tail).value < q.value) {
                        truncate_at_closest(best.traj, q);
                        hit = Cand{th, std::move(best.traj), 0};
                    }
                }
            }
            if (hit)
                raw.push_back(std::move(*hit));
        }
    }

    // extend candidates back to the source so each representative spans the
    // full value range, then cluster by crossing on f^{-1}(a); crossings
    // within cluster_radius must agree on the limit
    std::vector<detail::ConnectionCandidate> ccs;
    std::vector<Trajectory> extended;
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const int limit = raw[i].traj.forward_limit;
        if (limit < 0) continue;
        const double flim = by_id(cps, limit).value;
        if (flim >= a) continue;  // never reaches the counting level
        Trajectory full = extend_to_source(raw[i].traj, p, surface, field, cps, cfg);
        detail::ConnectionCandidate cc;
        cc.parameter = raw[i].param;
        cc.crossing = level_crossing(full, a, surface, field, cfg);
        cc.limit = limit;
        ccs.push_back(cc);
        extended.push_back(std::move(full));
        kept.push_back(i);
    }
    const auto reps = detail::cluster_candidates(ccs, cfg.cluster_radius);

    std::vector<Connection> out;
    for (std::size_t r : reps) {
        if (ccs[r].limit != q.id) continue;
        Connection conn;
        conn.source = p.id;
        conn.target = q.id;
        conn.level = a;
        conn.crossing = ccs[r].crossing;
        conn.source_branch = raw[kept[r]].branch;
        conn.representative = std::move(extended[r]);
        conn.sign = connection_sign(conn, p, q, surface, field, cfg);
        out.push_back(std::move(conn));
    }
    std::sort(out.begin(), out.end(), [](const Connection& a, const Connection& b) {
        return std::lexicographical_compare(a.crossing.data(), a.crossing.data() + 3,
                                            b.crossing.data(), b.crossing.data() + 3);
    });
    return out;
}

namespace {

double det3(const Vec3& a, const Vec3& b, const Vec3& c)
{
    return a.dot(b.cross(c));
}

} // namespace

int connection_sign(const Connection& conn, const CriticalPoint& p, const CriticalPoint& q,
                    const ImplicitSurface& surface, const ScalarField& field,
                    const FlowConfig& cfg)
{
    if (p.index - q.index != 1)
        throw IndexGap("connection_sign: index gap is not 1");

    if (p.index == 1) {
        // the sign is the unstable branch: + iff the flow leaves p along +e_u
        if (p.unstable_frame.empty())
            throw DegenerateFrame("connection_sign: source has no unstable direction");
        const Vec3& eu = p.unstable_frame[0];
        for (const auto& s : conn.representative.samples) {
            const Vec3 d = s.x - p.position;
            if (d.norm() < 0.5 * cfg.seed_radius) continue;
            const double pr = d.dot(eu);
            if (std::abs(pr) < 1e-6 * d.norm())
                throw DegenerateFrame("connection_sign: departure direction orthogonal to "
                                      "the unstable eigenvector");
            return pr > 0 ? +1 : -1;
        }
        throw DegenerateFrame("connection_sign: representative never leaves the source");
    }

    // index 2 -> 1, the intersection-number rule at the crossing
    const Vec3 np = surface.unit_normal(p.position);
    const double sp = det3(p.unstable_frame.at(0), p.unstable_frame.at(1), np);
    if (std::abs(sp) < 0.5)
        throw DegenerateFrame("connection_sign: source orientation frame degenerate");

    const Vec3 x = conn.crossing;
    Vec3 v = -riemannian_gradient(surface, field, x, cfg.geom);
    if (v.norm() < 1e-10)
        throw DegenerateFrame("connection_sign: crossing lies at a critical point");
    v.normalize();
    const Vec3 nx = surface.unit_normal(x);

    // b1 spans the level-set tangent; orient (−∇f, b1) positively for the
    // source orientation (positivity read against the surface normal)
    Vec3 b1 = nx.cross(v).normalized();
    if (det3(v, b1, nx) * sp < 0.0)
        b1 = -b1;

    // approach branch on the stable curve of q
    const Vec3 nq = surface.unit_normal(q.position);
    const Vec3& euq = q.unstable_frame.at(0);
    const Vec3 esq = nq.cross(euq).normalized();
    const double entry_radius = 10.0 * cfg.capture_radius;
    int branch = 0;
    for (const auto& s : conn.representative.samples) {
        const Vec3 d = s.x - q.position;
        const double dn = d.norm();
        if (dn > entry_radius || dn < 1e-12) continue;
        const double pr = d.dot(esq);
        if (std::abs(pr) < 0.1 * dn)
            throw DegenerateFrame("connection_sign: approach not aligned with the stable "
                                  "direction (transversality failure)");
        branch = pr > 0 ? +1 : -1;
        break;
    }
    if (branch == 0)
        throw DegenerateFrame("connection_sign: representative has no sample near the target");

    // transversal orientation induced by O_q, transported along the branch
    const double tau = -branch * (det3(esq, euq, nq) > 0 ? 1.0 : -1.0);
    const double positivity = det3(v, b1, nx) * tau;
    return positivity > 0 ? +1 : -1;
}

std::vector<Connection> enumerate_all_connections(const ImplicitSurface& surface,
                                                  const ScalarField& field,
                                                  const std::vector<CriticalPoint>& cps,
                                                  const FlowConfig& cfg, int jobs)
{
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : cps)
        for (const auto& q : cps)
            if (p.index == q.index + 1)
                pairs.emplace_back(p.id, q.id);
    std::sort(pairs.begin(), pairs.end());

    std::vector<std::vector<Connection>> per_pair(pairs.size());
    std::vector<std::exception_ptr> errors(pairs.size());

    const auto work = [&](std::size_t i) {
        try {
            per_pair[i] = enumerate_connections(by_id(cps, pairs[i].first),
                                                by_id(cps, pairs[i].second), cps, surface,
                                                field, cfg);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i)
            work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int nt = std::min<std::size_t>(jobs, pairs.size());
        for (int t = 0; t < nt; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < pairs.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& th : pool)
            th.join();
    }

    std::vector<Connection> out;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        for (auto& c : per_pair[i])
            out.push_back(std::move(c));
    }
    return out;
}

MorseSmaleReport check_morse_smale(const std::vector<CriticalPoint>& cps,
                                   const ImplicitSurface& surface, const ScalarField& field,
                                   const FlowConfig& cfg)
{
    MorseSmaleReport rep;
    for (const auto& p : cps) {
        if (p.index == 1) {
            for (const Vec3& seed : unstable_seeds(surface, p, cfg.seed_radius, 2, cfg.geom)) {
                Trajectory t = integrate_flow(surface, field, seed, cps, cfg, false);
                if (t.forward_limit == kUnresolved) {
                    ++rep.unresolved_count;
                } else if (by_id(cps, t.forward_limit).index == p.index) {
                    rep.equal_index_connections.push_back({p.id, t.forward_limit, std::move(t)});
                }
            }
        } else if (p.index == 2) {
            for (const Vec3& seed :
                 unstable_seeds(surface, p, cfg.seed_radius, cfg.index2_seed_count, cfg.geom)) {
                Trajectory t = integrate_flow(surface, field, seed, cps, cfg, false);
                if (t.forward_limit == kUnresolved)
                    ++rep.unresolved_count;
            }
        }
    }
    return rep;
}

} // namespace morse
