#include "morse/complex.hpp"

#include <algorithm>
#include <map>

namespace morse {

MorseComplex build_morse_complex(const std::vector<CriticalPoint>& cps,
                                 const std::vector<Connection>& connections, int dim)
{
    MorseComplex cx;
    cx.dim = dim;
    cx.generators.assign(dim + 1, {});

    std::vector<const CriticalPoint*> sorted;
    for (const auto& cp : cps) sorted.push_back(&cp);
    std::sort(sorted.begin(), sorted.end(), [](const CriticalPoint* a, const CriticalPoint* b) {
        if (a->index != b->index) return a->index < b->index;
        if (a->value != b->value) return a->value < b->value;
        return a->id < b->id;
    });

    std::map<int, std::size_t> slot;  // cp id -> position within its degree
    for (const CriticalPoint* cp : sorted) {
        if (cp->index < 0 || cp->index > dim)
            throw Error("build_morse_complex: index outside [0, dim]");
        slot[cp->id] = cx.generators[cp->index].size();
        cx.generators[cp->index].push_back(cp->id);
    }

    cx.boundaries.resize(dim + 1);
    cx.boundaries[0] = BigMatrix(0, cx.generators[0].size());
    for (int k = 1; k <= dim; ++k)
        cx.boundaries[k] = BigMatrix(cx.generators[k - 1].size(), cx.generators[k].size());

    std::map<int, int> index_of;
    for (const auto& cp : cps) index_of[cp.id] = cp.index;
    for (const auto& c : connections) {
        const int k = index_of.at(c.source);
        if (k != index_of.at(c.target) + 1)
            throw Error("build_morse_complex: connection is not index-adjacent");
        cx.boundaries[k].at(slot.at(c.target), slot.at(c.source)) += c.sign;
    }
    return cx;
}

BigMatrix boundary_matrix(const MorseComplex& cx, int k)
{
    if (k >= 0 && k <= cx.dim)
        return cx.boundaries[k];
    if (k == cx.dim + 1)
        return BigMatrix(cx.generators[cx.dim].size(), 0);
    return BigMatrix(0, 0);
}

ChainCheck verify_chain_complex(const MorseComplex& cx)
{
    for (int k = 2; k <= cx.dim; ++k) {
        if (!(cx.boundaries[k - 1] * cx.boundaries[k]).is_zero())
            return ChainCheck{false, k};
    }
    return ChainCheck{};
}

ChainComplexData to_chain_data(const MorseComplex& cx)
{
    return ChainComplexData{cx.ranks(), cx.boundaries};
}

} // namespace morse
