#pragma once

#include "coxlogit/dataset.hpp"

#include <vector>

namespace coxlogit {

/// Half-open run [begin, end) of positions in RiskSetIndex::order sharing
/// one event time.
struct TieBlock {
    int begin;
    int end;
};

/// Time-descending ordering of the samples. The risk set of an event at
/// position pos is the prefix order[0 .. tie_blocks[block_of[pos]].end),
/// i.e. every sample with time >= the event's time (Breslow: tied events
/// share the whole block).
struct RiskSetIndex {
    std::vector<int> order;            // sample ids, times non-increasing, stable
    std::vector<int> event_positions;  // positions in `order` where status == 1
    std::vector<TieBlock> tie_blocks;  // contiguous equal-time runs covering `order`
    std::vector<int> block_of;         // per position, index into tie_blocks

    int n_samples() const { return static_cast<int>(order.size()); }
    int n_events() const { return static_cast<int>(event_positions.size()); }
    /// Size of the risk set for the sample at `pos` (prefix through its block).
    int risk_set_size(int pos) const { return tie_blocks[block_of[pos]].end; }
};

RiskSetIndex build_risk_index(const SurvivalDataset& ds);

}  // namespace coxlogit
