#pragma once

#include <algorithm>
#include <vector>

#include "tvcmoga/objective.hpp"

namespace tvc {

struct HypervolumeResult {
    double volume = 0.0; // dominated area w.r.t. the reference [rad^2 s^2]
    int excluded = 0;    // members that do not dominate the reference
};

// 2-D hypervolume by rectangle sweep over the staircase: sort by of1, each
// kept point owns the strip up to the next point (or the reference).
// Points failing to dominate the reference are excluded and counted.
inline HypervolumeResult hypervolume(const std::vector<ObjectivePair>& points,
                                     const ObjectivePair& ref) {
    HypervolumeResult out;
    std::vector<ObjectivePair> kept;
    kept.reserve(points.size());
    for (const ObjectivePair& p : points) {
        bool dominates_ref = p.of1 <= ref.of1 && p.of2 <= ref.of2 &&
                             (p.of1 < ref.of1 || p.of2 < ref.of2);
        if (dominates_ref)
            kept.push_back(p);
        else
            ++out.excluded;
    }
    if (kept.empty())
        return out;
    std::sort(kept.begin(), kept.end(), [](const ObjectivePair& a, const ObjectivePair& b) {
        return a.of1 < b.of1 || (a.of1 == b.of1 && a.of2 < b.of2);
    });
    // Drop dominated members so duplicates and interior points add nothing.
    std::vector<ObjectivePair> stairs;
    for (const ObjectivePair& p : kept)
        if (stairs.empty() || p.of2 < stairs.back().of2)
            stairs.push_back(p);
    for (size_t i = 0; i < stairs.size(); ++i) {
        double next_of1 = i + 1 < stairs.size() ? stairs[i + 1].of1 : ref.of1;
        out.volume += (next_of1 - stairs[i].of1) * (ref.of2 - stairs[i].of2);
    }
    return out;
}

} // namespace tvc
