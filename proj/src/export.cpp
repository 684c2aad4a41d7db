#include "morse/export.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>

namespace morse {

namespace {

std::pair<int, int> plane_axes(const std::string& plane)
{
    if (plane == "xy") return {0, 1};
    if (plane == "xz") return {0, 2};
    if (plane == "yz") return {1, 2};
    throw Error("unknown projection plane '" + plane + "' (use xy, xz or yz)");
}

} // namespace

std::vector<std::string> write_flowlines_csv(const Report& rep, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;
    for (std::size_t i = 0; i < rep.connections.size(); ++i) {
        const auto& c = rep.connections[i];
        std::ostringstream name;
        name << rep.scenario << "_c" << c.source << "_to_c" << c.target << "_" << i << ".csv";
        const std::string path = dir + "/" + name.str();
        std::ofstream out(path);
        if (!out)
            throw Error("cannot write " + path);
        out << "time,x,y,z\n" << std::setprecision(17);
        for (const auto& s : c.representative.samples)
            out << s.t << "," << s.x.x() << "," << s.x.y() << "," << s.x.z() << "\n";
        files.push_back(path);
    }
    return files;
}

std::string write_flowlines_svg(const Report& rep, const std::string& dir,
                                const std::string& plane)
{
    const auto [ax, ay] = plane_axes(plane);
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + rep.scenario + "_flowlines.svg";

    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    const auto stretch = [&](double u, double v) {
        lo_x = std::min(lo_x, u);
        hi_x = std::max(hi_x, u);
        lo_y = std::min(lo_y, v);
        hi_y = std::max(hi_y, v);
    };
    for (const auto& c : rep.connections)
        for (const auto& s : c.representative.samples)
            stretch(s.x[ax], s.x[ay]);
    for (const auto& cp : rep.critical_points)
        stretch(cp.position[ax], cp.position[ay]);
    if (lo_x > hi_x) {
        lo_x = lo_y = -1.0;
        hi_x = hi_y = 1.0;
    }

    const double W = 640.0, H = 640.0, margin = 32.0;
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
    const double scale = (W - 2.0 * margin) / span;
    const auto px = [&](double u) { return margin + (u - lo_x) * scale; };
    const auto py = [&](double v) { return H - margin - (v - lo_y) * scale; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << std::setprecision(8);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < rep.connections.size(); ++i) {
        out << "  <polyline fill=\"none\" stroke=\"" << palette[i % 8]
            << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& s : rep.connections[i].representative.samples)
            out << px(s.x[ax]) << "," << py(s.x[ay]) << " ";
        out << "\"/>\n";
    }
    for (const auto& cp : rep.critical_points) {
        out << "  <circle cx=\"" << px(cp.position[ax]) << "\" cy=\"" << py(cp.position[ay])
            << "\" r=\"4\" fill=\"black\"/>\n";
        out << "  <text x=\"" << px(cp.position[ax]) + 6 << "\" y=\""
            << py(cp.position[ay]) - 6 << "\" font-size=\"12\">" << cp.label() << " (i"
            << cp.index << ")</text>\n";
    }
    out << "</svg>\n";
    return path;
}

} // namespace morse
