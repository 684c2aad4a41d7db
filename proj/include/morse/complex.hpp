#ifndef MORSE_COMPLEX_HPP
#define MORSE_COMPLEX_HPP

#include <vector>

#include "morse/critical.hpp"
#include "morse/flow.hpp"
#include "morse/homology.hpp"

namespace morse {

/// The Morse–Witten chain complex: free generators C_k(f) on index-k
/// critical points (ordered by value then id) and integer boundary
/// matrices ∂_k with entry (q,p) = Σ signs of the p→q flow lines.
struct MorseComplex {
    int dim = 2;
    std::vector<std::vector<int>> generators;  // degree -> critical point ids
    std::vector<BigMatrix> boundaries;         // boundaries[k] : C_k -> C_{k-1}

    std::vector<std::size_t> ranks() const
    {
        std::vector<std::size_t> r;
        for (const auto& g : generators) r.push_back(g.size());
        return r;
    }
};

MorseComplex build_morse_complex(const std::vector<CriticalPoint>& cps,
                                 const std::vector<Connection>& connections, int dim = 2);

/// Stored matrix of ∂_k; out-of-range degrees yield the empty matrix of
/// the correct shape.
BigMatrix boundary_matrix(const MorseComplex& cx, int k);

struct ChainCheck {
    bool ok = true;
    int first_failing_degree = -1;  // k with ∂_{k-1}∂_k ≠ 0
};

ChainCheck verify_chain_complex(const MorseComplex& cx);

ChainComplexData to_chain_data(const MorseComplex& cx);

} // namespace morse

#endif
