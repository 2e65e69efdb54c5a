#include "revealment/cycles.hpp"

#include <algorithm>

namespace revealment {

std::int64_t CycleSet::min_slice0() const {
    std::int64_t best = -1;
    for (const auto& c : cycles) {
        if (!c.slice0.empty() && (best < 0 || c.slice0.front() < best)) best = c.slice0.front();
    }
    return best;
}

bool CycleSet::contains_slice0(std::uint32_t h) const {
    return std::any_of(cycles.begin(), cycles.end(), [h](const Cycle& c) {
        return std::binary_search(c.slice0.begin(), c.slice0.end(), h);
    });
}

std::uint64_t CycleSet::total_length() const {
    std::uint64_t total = 0;
    for (const auto& c : cycles) total += c.vertices.size();
    return total;
}

Cycle make_cycle(const ButterflyParams& p, std::vector<VertexId> walk) {
    Cycle c;
    std::size_t start = walk.size();
    for (std::size_t i = 0; i < walk.size(); ++i) {
        if (walk[i].t != 0) continue;
        c.slice0.push_back(walk[i].h);
        if (start == walk.size() || walk[i].h < walk[start].h) start = i;
    }
    std::sort(c.slice0.begin(), c.slice0.end());
    if (start == walk.size()) start = 0;  // not reachable for cycles in this graph
    std::rotate(walk.begin(), walk.begin() + static_cast<std::ptrdiff_t>(start), walk.end());
    c.winding = static_cast<std::uint32_t>(walk.size() / p.W());
    c.vertices = std::move(walk);
    return c;
}

void canonicalize(CycleSet& set) {
    std::sort(set.cycles.begin(), set.cycles.end(),
              [](const Cycle& a, const Cycle& b) { return a.vertices < b.vertices; });
    set.cycles.erase(std::unique(set.cycles.begin(), set.cycles.end()), set.cycles.end());
}

}  // namespace revealment
