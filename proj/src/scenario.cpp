#include "morse/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#ifndef MORSE_ASSET_DIR_DEFAULT
#define MORSE_ASSET_DIR_DEFAULT "assets"
#endif

namespace morse {

namespace {

HomologyProfile profile(std::initializer_list<HomologyGroup> groups)
{
    HomologyProfile p;
    p.groups = groups;
    return p;
}

std::vector<Scenario> build_registry()
{
    std::vector<Scenario> reg;

    {
        Scenario s;
        s.name = "round_sphere";
        s.description = "unit sphere, f = z";
        s.make_surface = [] { return make_unit_sphere(); };
        s.make_field = [] { return make_height_field(); };
        s.mesh_asset = "icosphere.off";
        s.expected = profile({{1, {}}, {0, {}}, {1, {}}});
        reg.push_back(std::move(s));
    }
    {
        Scenario s;
        s.name = "two_peak_sphere";
        s.description = "unit sphere, f = z + x^2 (two maxima, one saddle)";
        s.make_surface = [] { return make_unit_sphere(); };
        s.make_field = [] { return make_two_peak_field(); };
        s.mesh_asset = "icosphere.off";
        s.expected = profile({{1, {}}, {0, {}}, {1, {}}});
        reg.push_back(std::move(s));
    }
    {
        Scenario s;
        s.name = "tilted_torus";
        s.description = "vertical torus, f = z + 0.05x";
        s.make_surface = [] { return make_vertical_torus(); };
        s.make_field = [] { return make_tilted_height_field(0.05); };
        s.mesh_asset = "torus_grid.off";
        s.expected = profile({{1, {}}, {2, {}}, {1, {}}});
        reg.push_back(std::move(s));
    }
    {
        Scenario s;
        s.name = "untilted_torus";
        s.description = "vertical torus, f = z (Morse-Smale violation demo)";
        s.make_surface = [] { return make_vertical_torus(); };
        s.make_field = [] { return make_height_field(); };
        s.mesh_asset = "torus_grid.off";
        s.expected = profile({{1, {}}, {2, {}}, {1, {}}});
        s.expect_morse_smale_clean = false;
        reg.push_back(std::move(s));
    }
    {
        Scenario s;
        s.name = "projective_plane";
        s.description = "minimal RP^2 triangulation (reference engine only)";
        s.mesh_only = true;
        s.mesh_asset = "projective_plane.off";
        s.expected = profile({{1, {}}, {0, {2}}, {0, {}}});
        reg.push_back(std::move(s));
    }
    return reg;
}

} // namespace

const std::vector<Scenario>& scenario_registry()
{
    static const std::vector<Scenario> reg = build_registry();
    return reg;
}

const Scenario& find_scenario(const std::string& name)
{
    for (const auto& s : scenario_registry())
        if (s.name == name)
            return s;
    std::string names;
    for (const auto& s : scenario_registry())
        names += (names.empty() ? "" : ", ") + s.name;
    throw UnknownScenario("unknown scenario '" + name + "' (registered: " + names + ")");
}

std::string resolve_asset_dir(const std::string& override_dir)
{
    if (!override_dir.empty())
        return override_dir;
    if (const char* env = std::getenv("MORSE_ASSET_DIR"); env && *env)
        return env;
    return MORSE_ASSET_DIR_DEFAULT;
}

SimplicialComplex load_scenario_mesh(const Scenario& sc, const std::string& asset_dir,
                                     bool with_values)
{
    SimplicialComplex mesh = load_mesh_file(asset_dir + "/" + sc.mesh_asset);
    if (with_values && !sc.mesh_only) {
        const ScalarField field = sc.make_field();
        mesh.vertex_values.clear();
        mesh.vertex_values.reserve(mesh.vertex_count);
        for (const Vec3& p : mesh.positions)
            mesh.vertex_values.push_back(field.value(p));
    }
    return mesh;
}

bool Report::pass() const
{
    return match && chain_ok && morse_smale.clean();
}

namespace {

struct StageTimer {
    std::map<std::string, double>& sink;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void lap(const std::string& key)
    {
        const auto now = std::chrono::steady_clock::now();
        sink[key] = std::chrono::duration<double>(now - start).count();
        start = now;
    }
};

void apply_overrides(Scenario& sc, const RunOptions& opts)
{
    if (opts.seeds > 0)
        sc.flow.index2_seed_count = opts.seeds;
    if (opts.tol_grad > 0.0) {
        sc.critical.geom.crit_tol = opts.tol_grad;
        sc.flow.geom.crit_tol = opts.tol_grad;
    }
    if (opts.level_bias > 0.0)
        sc.flow.level_bias = opts.level_bias;
}

} // namespace

Report run_scenario(const std::string& name, const RunOptions& opts)
{
    Scenario sc = find_scenario(name);
    apply_overrides(sc, opts);

    Report rep;
    rep.scenario = sc.name;
    StageTimer timer{rep.timings};
    const std::string asset_dir = resolve_asset_dir(opts.asset_dir);

    // simplicial reference side
    {
        SimplicialComplex mesh = load_scenario_mesh(sc, asset_dir, false);
        rep.mesh_file = sc.mesh_asset;
        rep.mesh_counts = mesh.counts();
        rep.mesh_euler = mesh.euler_characteristic();
        rep.simplicial_homology = simplicial_homology(mesh);
        for (const auto& w : mesh.warnings)
            rep.notes.push_back("mesh: " + w);
        timer.lap("simplicial");
    }

    if (sc.mesh_only) {
        rep.has_morse_side = false;
        rep.match = (rep.simplicial_homology == sc.expected);
        if (!rep.match)
            rep.notes.push_back("reference homology differs from the golden profile");
        timer.lap("total");
        return rep;
    }

    const ImplicitSurface surface = sc.make_surface();
    const ScalarField field = sc.make_field();

    auto found = find_critical_points(surface, field, sc.critical);
    rep.critical_points = found.points;
    rep.seed_exhaustion_warning = found.seed_exhaustion_warning;
    if (found.seed_exhaustion_warning)
        rep.notes.push_back("seed exhaustion: grid refinement changed the critical set");
    timer.lap("critical");

    rep.morse_smale = check_morse_smale(rep.critical_points, surface, field, sc.flow);
    for (const auto& v : rep.morse_smale.equal_index_connections)
        rep.notes.push_back("Morse-Smale violation: flow line c" + std::to_string(v.source) +
                            " -> c" + std::to_string(v.target) + " (equal index)");
    if (rep.morse_smale.unresolved_count > 0)
        rep.notes.push_back("Morse-Smale check: " +
                            std::to_string(rep.morse_smale.unresolved_count) +
                            " unresolved trajectories");
    timer.lap("morse_smale");

    // connection enumeration per index-adjacent pair; a dirty scenario keeps
    // going so the report can still show the diagnostics
    std::vector<std::pair<int, int>> pair_ids;
    for (const auto& p : rep.critical_points)
        for (const auto& q : rep.critical_points)
            if (p.index == q.index + 1)
                pair_ids.emplace_back(p.id, q.id);
    std::sort(pair_ids.begin(), pair_ids.end());

    std::vector<std::vector<Connection>> per_pair(pair_ids.size());
    std::vector<std::string> pair_errors(pair_ids.size());
    const auto find_cp = [&](int id) -> const CriticalPoint& {
        for (const auto& cp : rep.critical_points)
            if (cp.id == id) return cp;
        throw Error("missing critical point");
    };
    const auto work = [&](std::size_t i) {
        try {
            per_pair[i] = enumerate_connections(find_cp(pair_ids[i].first),
                                                find_cp(pair_ids[i].second),
                                                rep.critical_points, surface, field, sc.flow);
        } catch (const Error& e) {
            pair_errors[i] = e.what();
        }
    };
    if (opts.jobs > 1 && pair_ids.size() > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < std::min<int>(opts.jobs, pair_ids.size()); ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < pair_ids.size();
                     i = next.fetch_add(1))
                    work(i);
            });
        for (auto& th : pool)
            th.join();
    } else {
        for (std::size_t i = 0; i < pair_ids.size(); ++i)
            work(i);
    }
    for (std::size_t i = 0; i < pair_ids.size(); ++i) {
        if (!pair_errors[i].empty())
            rep.notes.push_back("pair c" + std::to_string(pair_ids[i].first) + " -> c" +
                                std::to_string(pair_ids[i].second) + ": " + pair_errors[i]);
        PairCount pc;
        pc.source = pair_ids[i].first;
        pc.target = pair_ids[i].second;
        for (const auto& c : per_pair[i]) {
            ++pc.count;
            pc.n += c.sign;
            rep.connections.push_back(c);
        }
        rep.pairs.push_back(pc);
    }
    timer.lap("connections");

    rep.complex = build_morse_complex(rep.critical_points, rep.connections);
    const ChainCheck chk = verify_chain_complex(rep.complex);
    rep.chain_ok = chk.ok;
    rep.chain_fail_degree = chk.first_failing_degree;
    if (!chk.ok)
        rep.notes.push_back("chain-complex property fails at degree " +
                            std::to_string(chk.first_failing_degree));
    try {
        rep.morse_homology = homology_of_complex(to_chain_data(rep.complex));
    } catch (const NotAComplex& e) {
        rep.notes.push_back(std::string("morse homology: ") + e.what());
    }
    timer.lap("homology");

    rep.match = (rep.morse_homology == rep.simplicial_homology);
    timer.lap("total");
    return rep;
}

FiltrationReport run_filtration(const std::string& name, const RunOptions& opts)
{
    Scenario sc = find_scenario(name);
    apply_overrides(sc, opts);
    if (sc.mesh_only)
        throw Error("filtration check needs a surface scenario");

    const ImplicitSurface surface = sc.make_surface();
    const ScalarField field = sc.make_field();
    const auto found = find_critical_points(surface, field, sc.critical);

    std::vector<std::pair<double, int>> crit;
    for (const auto& cp : found.points)
        crit.emplace_back(cp.value, cp.index);

    SimplicialComplex mesh = load_scenario_mesh(sc, resolve_asset_dir(opts.asset_dir), true);
    return sublevel_filtration_check(mesh, crit);
}

// ---------------------------------------------------------------------------
// serialization

namespace {

nlohmann::json profile_json(const HomologyProfile& p)
{
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t k = 0; k < p.groups.size(); ++k)
        arr.push_back({{"degree", k},
                       {"betti", p.groups[k].betti},
                       {"torsion", p.groups[k].torsion}});
    return arr;
}

nlohmann::json matrix_json(const BigMatrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(m.at(i, j).convert_to<long long>());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::string report_to_json(const Report& rep, bool include_timings)
{
    nlohmann::json j;
    j["scenario"] = rep.scenario;
    j["match"] = rep.match;
    j["pass"] = rep.pass();
    j["simplicial_homology"] = profile_json(rep.simplicial_homology);
    j["mesh"] = {{"file", rep.mesh_file},
                 {"counts", rep.mesh_counts},
                 {"euler_characteristic", rep.mesh_euler}};
    if (rep.has_morse_side) {
        nlohmann::json cps = nlohmann::json::array();
        for (const auto& cp : rep.critical_points)
            cps.push_back({{"id", cp.id},
                           {"label", cp.label()},
                           {"position", {cp.position.x(), cp.position.y(), cp.position.z()}},
                           {"value", cp.value},
                           {"index", cp.index},
                           {"hessian_eigenvalues",
                            {cp.hessian_eigenvalues[0], cp.hessian_eigenvalues[1]}}});
        j["critical_points"] = std::move(cps);

        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& pc : rep.pairs)
            pairs.push_back({{"source", pc.source},
                             {"target", pc.target},
                             {"count", pc.count},
                             {"n", pc.n}});
        j["pairs"] = std::move(pairs);

        nlohmann::json conns = nlohmann::json::array();
        for (const auto& c : rep.connections)
            conns.push_back({{"source", c.source},
                             {"target", c.target},
                             {"sign", c.sign},
                             {"level", c.level},
                             {"crossing", {c.crossing.x(), c.crossing.y(), c.crossing.z()}}});
        j["connections"] = std::move(conns);

        nlohmann::json bnd = nlohmann::json::array();
        for (int k = 1; k <= rep.complex.dim; ++k)
            bnd.push_back(matrix_json(rep.complex.boundaries[k]));
        j["complex"] = {{"ranks", rep.complex.ranks()}, {"boundaries", std::move(bnd)}};
        j["chain_complex_ok"] = rep.chain_ok;
        j["morse_homology"] = profile_json(rep.morse_homology);

        nlohmann::json viol = nlohmann::json::array();
        for (const auto& v : rep.morse_smale.equal_index_connections)
            viol.push_back({{"source", v.source}, {"target", v.target}});
        j["morse_smale"] = {{"clean", rep.morse_smale.clean()},
                            {"equal_index_connections", std::move(viol)},
                            {"unresolved", rep.morse_smale.unresolved_count}};
    }
    j["notes"] = rep.notes;
    if (include_timings)
        j["timings"] = rep.timings;
    return j.dump(2) + "\n";
}

std::string report_summary(const Report& rep)
{
    std::ostringstream os;
    os << "scenario: " << rep.scenario << "\n";
    if (rep.has_morse_side) {
        os << "\ncritical points\n";
        os << "  id  index      f(p)            position\n";
        for (const auto& cp : rep.critical_points) {
            os << "  " << std::left << std::setw(4) << cp.label() << std::setw(5) << cp.index
               << std::right << std::fixed << std::setprecision(6) << std::setw(12) << cp.value
               << "   (" << std::setw(9) << cp.position.x() << ", " << std::setw(9)
               << cp.position.y() << ", " << std::setw(9) << cp.position.z() << ")\n";
        }
        if (!rep.pairs.empty()) {
            os << "\nconnections\n";
            os << "  pair          count   n(p,q)\n";
            for (const auto& pc : rep.pairs)
                os << "  c" << pc.source << " -> c" << pc.target << "      "
                   << std::setw(5) << pc.count << "   " << std::setw(6) << pc.n << "\n";
        }
        os << "\nchain complex: ranks (";
        const auto ranks = rep.complex.ranks();
        for (std::size_t k = 0; k < ranks.size(); ++k)
            os << (k ? ", " : "") << ranks[k];
        os << "), d∘d = 0: " << (rep.chain_ok ? "yes" : "NO") << "\n";
        os << "Morse homology:      " << rep.morse_homology.to_string() << "\n";
    }
    os << "simplicial homology: " << rep.simplicial_homology.to_string() << "\n";
    if (rep.has_morse_side)
        os << "Morse-Smale: "
           << (rep.morse_smale.clean() ? "clean"
                                       : std::to_string(
                                             rep.morse_smale.equal_index_connections.size()) +
                                             " equal-index connection(s)")
           << "\n";
    for (const auto& n : rep.notes)
        os << "note: " << n << "\n";
    os << "match: " << (rep.match ? "yes" : "NO") << "  ->  "
       << (rep.pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string filtration_summary(const std::string& name, const FiltrationReport& rep)
{
    std::ostringstream os;
    os << "sublevel filtration: " << name << "\n";
    os << "  interval                </=  crossing   ranks (H0,H1,H2)   expected\n";
    for (const auto& s : rep.steps) {
        std::ostringstream lo;
        if (s.t_lo)
            lo << std::fixed << std::setprecision(4) << *s.t_lo;
        else
            lo << "-inf";
        os << "  (" << std::setw(8) << lo.str() << ", " << std::fixed << std::setprecision(4)
           << std::setw(8) << s.t_hi << "]   " << std::setw(8) << s.crossed_value << "   ("
           << s.ranks[0] << "," << s.ranks[1] << "," << s.ranks[2] << ")"
           << "            (" << s.expected[0] << "," << s.expected[1] << "," << s.expected[2]
           << ")" << (s.torsion_free ? "" : "  [torsion!]") << "\n";
    }
    os << "  totals (" << rep.totals[0] << "," << rep.totals[1] << "," << rep.totals[2]
       << ") vs critical counts (" << rep.expected_totals[0] << "," << rep.expected_totals[1]
       << "," << rep.expected_totals[2] << ")\n";
    os << "  " << (rep.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace morse
