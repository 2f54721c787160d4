#include "coxlogit/risk_index.hpp"

#include <algorithm>
#include <numeric>

namespace coxlogit {

RiskSetIndex build_risk_index(const SurvivalDataset& ds) {
    validate(ds);
    const int n = static_cast<int>(ds.n_samples());

    RiskSetIndex idx;
    idx.order.resize(n);
    std::iota(idx.order.begin(), idx.order.end(), 0);
    // stable: original index order within equal times
    std::stable_sort(idx.order.begin(), idx.order.end(),
                     [&](int a, int b) { return ds.times[a] > ds.times[b]; });

    idx.block_of.resize(n);
    int pos = 0;
    while (pos < n) {
        const double t = ds.times[idx.order[pos]];
        int end = pos + 1;
        while (end < n && ds.times[idx.order[end]] == t) ++end;
        const int block = static_cast<int>(idx.tie_blocks.size());
        idx.tie_blocks.push_back(TieBlock{pos, end});
        for (int k = pos; k < end; ++k) idx.block_of[k] = block;
        pos = end;
    }

    for (int k = 0; k < n; ++k) {
        if (ds.status[idx.order[k]] == 1) idx.event_positions.push_back(k);
    }
    return idx;
}

}  // namespace coxlogit
