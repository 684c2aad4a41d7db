#ifndef MORSE_ERRORS_HPP
#define MORSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace morse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct NonConvergence : Error { using Error::Error; };
struct OffSurface : Error { using Error::Error; };
struct NotCritical : Error { using Error::Error; };

// critical
struct DegenerateCritical : Error { using Error::Error; };

// flow
struct BlowUp : Error { using Error::Error; };
struct IndexGap : Error { using Error::Error; };
struct AmbiguousCluster : Error { using Error::Error; };
struct DegenerateFrame : Error { using Error::Error; };

// homology
struct NotAComplex : Error { using Error::Error; };

// simplicial
struct ParseError : Error {
    ParseError(const std::string& what, int line_no)
        : Error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line;
};
struct ThresholdOnCriticalValue : Error { using Error::Error; };

// cli
struct UnknownScenario : Error { using Error::Error; };

} // namespace morse

#endif
