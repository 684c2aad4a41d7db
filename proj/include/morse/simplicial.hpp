#ifndef MORSE_SIMPLICIAL_HPP
#define MORSE_SIMPLICIAL_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "morse/geometry.hpp"
#include "morse/homology.hpp"

namespace morse {

/// Triangulated surface (or any 2-dimensional simplicial complex).
/// Simplex tuples are strictly increasing; edges are induced from the
/// triangles, so the complex is closed under faces by construction.
struct SimplicialComplex {
    std::size_t vertex_count = 0;
    std::vector<Vec3> positions;               // optional, size 0 or vertex_count
    std::vector<std::array<int, 2>> edges;     // sorted pairs, lexicographic order
    std::vector<std::array<int, 3>> triangles; // sorted triples, lexicographic order
    std::vector<double> vertex_values;         // optional PL sample of f
    std::vector<std::string> warnings;         // e.g. non-manifold edges

    std::array<std::size_t, 3> counts() const
    {
        return {vertex_count, edges.size(), triangles.size()};
    }
    long long euler_characteristic() const
    {
        return static_cast<long long>(vertex_count) - static_cast<long long>(edges.size()) +
               static_cast<long long>(triangles.size());
    }
};

/// Parse OFF text: header "OFF", counts "nv nf ne", nv vertex lines,
/// nf faces "3 i j k".  Throws ParseError (with line number) on malformed
/// input; records a NonManifoldWarning for edges not bordering exactly
/// two triangles.
SimplicialComplex load_mesh(const std::string& off_text,
                            const std::vector<double>& values = {});
SimplicialComplex load_mesh_file(const std::string& path,
                                 const std::string& values_path = "");

/// Value files: one real per line, vertex count lines.
std::vector<double> parse_values(const std::string& text);

/// Signed boundary matrices from the increasing-tuple orientation.
ChainComplexData simplicial_chain_data(const SimplicialComplex& sc);

HomologyProfile simplicial_homology(const SimplicialComplex& sc);

/// One round of 1→4 subdivision (new vertex per edge).
SimplicialComplex subdivide(const SimplicialComplex& sc);

/// Homology of the pair (K_hi, K_lo) of full sublevel subcomplexes on
/// {vertex value ≤ t}; t_lo empty means the empty subcomplex.
HomologyProfile sublevel_relative_homology(const SimplicialComplex& sc, double t_hi,
                                           std::optional<double> t_lo);

struct FiltrationStep {
    std::optional<double> t_lo;   // empty for the first step
    double t_hi = 0.0;
    double crossed_value = 0.0;
    std::array<std::size_t, 3> expected{};  // per-degree critical counts at this value
    std::array<std::size_t, 3> ranks{};     // computed relative betti numbers
    bool torsion_free = true;
};

struct FiltrationReport {
    std::vector<FiltrationStep> steps;
    std::array<std::size_t, 3> totals{};
    std::array<std::size_t, 3> expected_totals{};
    bool pass = false;
};

struct FiltrationConfig {
    double threshold_tol = 1e-9;   // minimum distance threshold ↔ critical value
    double value_merge_tol = 4e-9; // critical values closer than this share a step
    std::vector<double> thresholds_override;  // tests / expert use
};

/// Check the per-step relative ranks of the sublevel filtration against
/// the critical counts: crossing the critical value(s) at level c must
/// contribute rank |Crit_k at c| in degree k and nothing elsewhere.
/// crit = (value, index) pairs from the critical module.
/// Throws ThresholdOnCriticalValue if a threshold hits a critical value.
FiltrationReport sublevel_filtration_check(const SimplicialComplex& sc,
                                           const std::vector<std::pair<double, int>>& crit,
                                           const FiltrationConfig& cfg = {});

} // namespace morse

#endif
