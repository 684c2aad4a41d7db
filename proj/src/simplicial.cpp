#include "morse/simplicial.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace morse {

namespace {

// next non-comment token stream line; returns false at EOF
bool next_line(std::istream& in, std::string& line, int& line_no)
{
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos)
            return true;
    }
    return false;
}

void derive_edges(SimplicialComplex& sc)
{
    std::set<std::array<int, 2>> edges;
    for (const auto& t : sc.triangles) {
        edges.insert({t[0], t[1]});
        edges.insert({t[0], t[2]});
        edges.insert({t[1], t[2]});
    }
    sc.edges.assign(edges.begin(), edges.end());

    std::map<std::array<int, 2>, int> border;
    for (const auto& t : sc.triangles) {
        ++border[{t[0], t[1]}];
        ++border[{t[0], t[2]}];
        ++border[{t[1], t[2]}];
    }
    for (const auto& [e, n] : border)
        if (n != 2)
            sc.warnings.push_back("non-manifold edge (" + std::to_string(e[0]) + "," +
                                  std::to_string(e[1]) + ") borders " + std::to_string(n) +
                                  " triangles");
}

} // namespace

SimplicialComplex load_mesh(const std::string& off_text, const std::vector<double>& values)
{
    std::istringstream in(off_text);
    std::string line;
    int line_no = 0;

    if (!next_line(in, line, line_no))
        throw ParseError("empty OFF input", line_no);
    {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok != "OFF")
            throw ParseError("expected OFF header, got '" + tok + "'", line_no);
    }

    long nv = -1, nf = -1, ne = -1;
    if (!next_line(in, line, line_no))
        throw ParseError("missing counts line", line_no);
    {
        std::istringstream ls(line);
        if (!(ls >> nv >> nf >> ne) || nv < 0 || nf < 0)
            throw ParseError("malformed counts line '" + line + "'", line_no);
    }

    SimplicialComplex sc;
    sc.vertex_count = static_cast<std::size_t>(nv);
    sc.positions.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_line(in, line, line_no))
            throw ParseError("unexpected end of input in vertex list", line_no);
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z))
            throw ParseError("malformed vertex line '" + line + "'", line_no);
        sc.positions.emplace_back(x, y, z);
    }

    std::set<std::array<int, 3>> tris;
    for (long i = 0; i < nf; ++i) {
        if (!next_line(in, line, line_no))
            throw ParseError("unexpected end of input in face list", line_no);
        std::istringstream ls(line);
        int k, a, b, c;
        if (!(ls >> k >> a >> b >> c) || k != 3)
            throw ParseError("expected triangular face '3 i j k', got '" + line + "'", line_no);
        for (int v : {a, b, c})
            if (v < 0 || v >= nv)
                throw ParseError("face vertex index " + std::to_string(v) + " out of range",
                                 line_no);
        std::array<int, 3> t{a, b, c};
        std::sort(t.begin(), t.end());
        if (t[0] == t[1] || t[1] == t[2])
            throw ParseError("degenerate face '" + line + "'", line_no);
        tris.insert(t);
    }
    sc.triangles.assign(tris.begin(), tris.end());
    derive_edges(sc);

    if (!values.empty()) {
        if (values.size() != sc.vertex_count)
            throw ParseError("value count " + std::to_string(values.size()) +
                                 " does not match vertex count " +
                                 std::to_string(sc.vertex_count),
                             0);
        sc.vertex_values = values;
    }
    return sc;
}

std::vector<double> parse_values(const std::string& text)
{
    std::istringstream in(text);
    std::vector<double> out;
    std::string line;
    int line_no = 0;
    while (next_line(in, line, line_no)) {
        std::istringstream ls(line);
        double v;
        if (!(ls >> v))
            throw ParseError("malformed value line '" + line + "'", line_no);
        out.push_back(v);
    }
    return out;
}

SimplicialComplex load_mesh_file(const std::string& path, const std::string& values_path)
{
    std::ifstream f(path);
    if (!f)
        throw Error("cannot open mesh file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();

    std::vector<double> values;
    if (!values_path.empty()) {
        std::ifstream vf(values_path);
        if (!vf)
            throw Error("cannot open values file: " + values_path);
        std::stringstream vbuf;
        vbuf << vf.rdbuf();
        values = parse_values(vbuf.str());
    }
    return load_mesh(buf.str(), values);
}

ChainComplexData simplicial_chain_data(const SimplicialComplex& sc)
{
    ChainComplexData cx;
    cx.ranks = {sc.vertex_count, sc.edges.size(), sc.triangles.size()};

    std::map<std::array<int, 2>, std::size_t> edge_index;
    for (std::size_t i = 0; i < sc.edges.size(); ++i)
        edge_index[sc.edges[i]] = i;

    BigMatrix d1(sc.vertex_count, sc.edges.size());
    for (std::size_t j = 0; j < sc.edges.size(); ++j) {
        d1.at(sc.edges[j][0], j) = -1;
        d1.at(sc.edges[j][1], j) = 1;
    }
    BigMatrix d2(sc.edges.size(), sc.triangles.size());
    for (std::size_t j = 0; j < sc.triangles.size(); ++j) {
        const auto& t = sc.triangles[j];
        d2.at(edge_index.at({t[1], t[2]}), j) = 1;
        d2.at(edge_index.at({t[0], t[2]}), j) = -1;
        d2.at(edge_index.at({t[0], t[1]}), j) = 1;
    }
    cx.boundaries = {BigMatrix(0, sc.vertex_count), std::move(d1), std::move(d2)};
    return cx;
}

HomologyProfile simplicial_homology(const SimplicialComplex& sc)
{
    return homology_of_complex(simplicial_chain_data(sc));
}

SimplicialComplex subdivide(const SimplicialComplex& sc)
{
    SimplicialComplex out;
    out.vertex_count = sc.vertex_count + sc.edges.size();

    const bool with_pos = !sc.positions.empty();
    const bool with_val = !sc.vertex_values.empty();
    if (with_pos) out.positions = sc.positions;
    if (with_val) out.vertex_values = sc.vertex_values;

    std::map<std::array<int, 2>, int> midpoint;
    for (std::size_t i = 0; i < sc.edges.size(); ++i) {
        midpoint[sc.edges[i]] = static_cast<int>(sc.vertex_count + i);
        if (with_pos)
            out.positions.push_back(0.5 * (sc.positions[sc.edges[i][0]] +
                                           sc.positions[sc.edges[i][1]]));
        if (with_val)
            out.vertex_values.push_back(0.5 * (sc.vertex_values[sc.edges[i][0]] +
                                               sc.vertex_values[sc.edges[i][1]]));
    }

    std::set<std::array<int, 3>> tris;
    const auto add = [&](int a, int b, int c) {
        std::array<int, 3> t{a, b, c};
        std::sort(t.begin(), t.end());
        tris.insert(t);
    };
    for (const auto& t : sc.triangles) {
        const int mab = midpoint.at({t[0], t[1]});
        const int mac = midpoint.at({t[0], t[2]});
        const int mbc = midpoint.at({t[1], t[2]});
        add(t[0], mab, mac);
        add(t[1], mab, mbc);
        add(t[2], mac, mbc);
        add(mab, mac, mbc);
    }
    out.triangles.assign(tris.begin(), tris.end());
    derive_edges(out);
    return out;
}

namespace {

// relative chain complex of full sublevel subcomplexes {value <= t}
ChainComplexData relative_chain_data(const SimplicialComplex& sc, double t_hi,
                                     std::optional<double> t_lo)
{
    if (sc.vertex_values.size() != sc.vertex_count)
        throw Error("sublevel filtration needs per-vertex values");

    const auto level = [&](int v) -> int {
        // 0 = in small subcomplex, 1 = in big only, 2 = outside
        const double x = sc.vertex_values[v];
        if (t_lo && x <= *t_lo) return 0;
        if (x <= t_hi) return 1;
        return 2;
    };
    const auto classify = [&](const int* verts, int n) -> int {
        int lv = 0;
        for (int i = 0; i < n; ++i)
            lv = std::max(lv, level(verts[i]));
        return lv;  // a simplex sits in the smallest subcomplex containing all vertices
    };

    // relative generators: simplices in big \ small
    std::vector<int> vgen;
    std::map<int, std::size_t> vslot;
    for (std::size_t v = 0; v < sc.vertex_count; ++v)
        if (level(static_cast<int>(v)) == 1) {
            vslot[static_cast<int>(v)] = vgen.size();
            vgen.push_back(static_cast<int>(v));
        }
    std::vector<std::size_t> egen;
    std::map<std::array<int, 2>, std::size_t> eslot;
    for (std::size_t e = 0; e < sc.edges.size(); ++e)
        if (classify(sc.edges[e].data(), 2) == 1) {
            eslot[sc.edges[e]] = egen.size();
            egen.push_back(e);
        }
    std::vector<std::size_t> tgen;
    for (std::size_t t = 0; t < sc.triangles.size(); ++t)
        if (classify(sc.triangles[t].data(), 3) == 1)
            tgen.push_back(t);

    ChainComplexData cx;
    cx.ranks = {vgen.size(), egen.size(), tgen.size()};
    BigMatrix d1(vgen.size(), egen.size());
    for (std::size_t j = 0; j < egen.size(); ++j) {
        const auto& e = sc.edges[egen[j]];
        if (auto it = vslot.find(e[0]); it != vslot.end()) d1.at(it->second, j) = -1;
        if (auto it = vslot.find(e[1]); it != vslot.end()) d1.at(it->second, j) = 1;
    }
    BigMatrix d2(egen.size(), tgen.size());
    for (std::size_t j = 0; j < tgen.size(); ++j) {
        const auto& t = sc.triangles[tgen[j]];
        if (auto it = eslot.find({t[1], t[2]}); it != eslot.end()) d2.at(it->second, j) = 1;
        if (auto it = eslot.find({t[0], t[2]}); it != eslot.end()) d2.at(it->second, j) = -1;
        if (auto it = eslot.find({t[0], t[1]}); it != eslot.end()) d2.at(it->second, j) = 1;
    }
    cx.boundaries = {BigMatrix(0, vgen.size()), std::move(d1), std::move(d2)};
    return cx;
}

} // namespace

HomologyProfile sublevel_relative_homology(const SimplicialComplex& sc, double t_hi,
                                           std::optional<double> t_lo)
{
    return homology_of_complex(relative_chain_data(sc, t_hi, t_lo));
}

FiltrationReport sublevel_filtration_check(const SimplicialComplex& sc,
                                           const std::vector<std::pair<double, int>>& crit,
                                           const FiltrationConfig& cfg)
{
    if (crit.empty())
        throw Error("sublevel_filtration_check: no critical values");

    // group critical points into distinct value classes
    auto sorted = crit;
    std::sort(sorted.begin(), sorted.end());
    struct Class {
        double value;
        std::array<std::size_t, 3> counts{};
    };
    std::vector<Class> classes;
    for (const auto& [v, k] : sorted) {
        if (k < 0 || k > 2)
            throw Error("sublevel_filtration_check: index outside [0,2]");
        if (classes.empty() || v - classes.back().value > cfg.value_merge_tol)
            classes.push_back({v, {}});
        ++classes.back().counts[k];
    }

    std::vector<double> thresholds;
    if (!cfg.thresholds_override.empty()) {
        thresholds = cfg.thresholds_override;
        if (thresholds.size() != classes.size())
            throw Error("sublevel_filtration_check: need one threshold per critical level");
    } else {
        for (std::size_t i = 0; i + 1 < classes.size(); ++i)
            thresholds.push_back(0.5 * (classes[i].value + classes[i + 1].value));
        thresholds.push_back(classes.back().value + 1.0);
    }
    for (double t : thresholds)
        for (const auto& [v, k] : sorted)
            if (std::abs(t - v) <= cfg.threshold_tol)
                throw ThresholdOnCriticalValue("threshold " + std::to_string(t) +
                                               " coincides with critical value " +
                                               std::to_string(v));

    FiltrationReport rep;
    rep.pass = true;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        FiltrationStep step;
        step.t_hi = thresholds[i];
        if (i > 0) step.t_lo = thresholds[i - 1];
        step.crossed_value = classes[i].value;
        step.expected = classes[i].counts;

        const HomologyProfile h = sublevel_relative_homology(sc, step.t_hi, step.t_lo);
        for (int k = 0; k < 3; ++k) {
            step.ranks[k] = h.groups[k].betti;
            if (!h.groups[k].torsion.empty())
                step.torsion_free = false;
        }
        if (step.ranks != step.expected || !step.torsion_free)
            rep.pass = false;
        for (int k = 0; k < 3; ++k) {
            rep.totals[k] += step.ranks[k];
            rep.expected_totals[k] += step.expected[k];
        }
        rep.steps.push_back(step);
    }
    if (rep.totals != rep.expected_totals)
        rep.pass = false;
    return rep;
}

} // namespace morse
