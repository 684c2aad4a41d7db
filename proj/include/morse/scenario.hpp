#ifndef MORSE_SCENARIO_HPP
#define MORSE_SCENARIO_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morse/complex.hpp"
#include "morse/critical.hpp"
#include "morse/flow.hpp"
#include "morse/homology.hpp"
#include "morse/simplicial.hpp"

namespace morse {

/// Registry entry: how to build a scenario's surface and field, which mesh
/// backs the simplicial reference, and the golden homology profile.
struct Scenario {
    std::string name;
    std::string description;
    bool mesh_only = false;
    std::function<ImplicitSurface()> make_surface;
    std::function<ScalarField()> make_field;
    std::string mesh_asset;
    HomologyProfile expected;
    bool expect_morse_smale_clean = true;
    CriticalConfig critical;
    FlowConfig flow;
};

const std::vector<Scenario>& scenario_registry();

/// Throws UnknownScenario (message lists registered names).
const Scenario& find_scenario(const std::string& name);

struct RunOptions {
    int seeds = 0;          // index-2 seed count override (0 = scenario default)
    double tol_grad = 0.0;  // crit_tol override (0 = scenario default)
    double level_bias = 0.0;  // regular-value bias override (0 = default)
    int jobs = 1;
    std::string asset_dir;  // empty = MORSE_ASSET_DIR env or compiled default
};

struct PairCount {
    int source = -1;
    int target = -1;
    int count = 0;       // number of connections
    long long n = 0;     // signed count n(p,q)
};

struct Report {
    std::string scenario;
    bool has_morse_side = true;

    std::vector<CriticalPoint> critical_points;
    bool seed_exhaustion_warning = false;
    std::vector<Connection> connections;
    std::vector<PairCount> pairs;
    MorseComplex complex;
    bool chain_ok = true;
    int chain_fail_degree = -1;
    HomologyProfile morse_homology;

    std::string mesh_file;
    std::array<std::size_t, 3> mesh_counts{};
    long long mesh_euler = 0;
    HomologyProfile simplicial_homology;

    bool match = false;
    MorseSmaleReport morse_smale;
    std::vector<std::string> notes;
    std::map<std::string, double> timings;

    bool pass() const;  // match && chain ok && Morse–Smale clean
};

Report run_scenario(const std::string& name, const RunOptions& opts = {});

/// Filtration check for a scenario: critical values from the critical
/// module, PL values sampled from the field on the reference mesh.
FiltrationReport run_filtration(const std::string& name, const RunOptions& opts = {});

std::string report_to_json(const Report& rep, bool include_timings = true);
std::string report_summary(const Report& rep);
std::string filtration_summary(const std::string& name, const FiltrationReport& rep);

/// Asset directory: explicit option > MORSE_ASSET_DIR env > compiled default.
std::string resolve_asset_dir(const std::string& override_dir = "");

/// Mesh with per-vertex values sampled from the scenario's field.
SimplicialComplex load_scenario_mesh(const Scenario& sc, const std::string& asset_dir,
                                     bool with_values);

} // namespace morse

#endif
