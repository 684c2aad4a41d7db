#ifndef MORSE_EXPORT_HPP
#define MORSE_EXPORT_HPP

#include <string>
#include <vector>

#include "morse/scenario.hpp"

namespace morse {

/// One CSV per connection: header "time,x,y,z", one sample per row.
/// Returns the written file paths.
std::vector<std::string> write_flowlines_csv(const Report& rep, const std::string& dir);

/// All flow lines of a report in one SVG, projected to a coordinate plane
/// ("xy", "xz" or "yz").  Critical points are drawn as markers.
std::string write_flowlines_svg(const Report& rep, const std::string& dir,
                                const std::string& plane = "xz");

} // namespace morse

#endif
