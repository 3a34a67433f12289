#pragma once

#include <limits>
#include <vector>

namespace sandpile {

/// Small dense-capacity max-flow (Dinic). The networks built here have a few
/// dozen nodes, so no scaling tricks are needed.
class FlowNetwork {
public:
    explicit FlowNetwork(int nodes) : adj_(nodes) {}

    struct ArcRef {
        int from = 0;
        int index = 0;
    };

    ArcRef add_arc(int from, int to, int capacity) {
        adj_[from].push_back({to, static_cast<int>(adj_[to].size()), capacity});
        adj_[to].push_back({from, static_cast<int>(adj_[from].size()) - 1, 0});
        return {from, static_cast<int>(adj_[from].size()) - 1};
    }

    /// Flow pushed through a previously added arc (after max_flow).
    int flow_on(ArcRef ref) const {
        const Arc& arc = adj_[ref.from][ref.index];
        return adj_[arc.to][arc.rev].capacity;
    }

    int max_flow(int source, int target) {
        int total = 0;
        while (bfs_levels(source, target)) {
            iter_.assign(adj_.size(), 0);
            while (int pushed = dfs_push(source, target, std::numeric_limits<int>::max())) total += pushed;
        }
        return total;
    }

private:
    struct Arc {
        int to;
        int rev;
        int capacity;
    };

    std::vector<std::vector<Arc>> adj_;
    std::vector<int> level_;
    std::vector<std::size_t> iter_;

    bool bfs_levels(int source, int target) {
        level_.assign(adj_.size(), -1);
        std::vector<int> queue{source};
        level_[source] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int x = queue[head];
            for (const Arc& arc : adj_[x]) {
                if (arc.capacity > 0 && level_[arc.to] < 0) {
                    level_[arc.to] = level_[x] + 1;
                    queue.push_back(arc.to);
                }
            }
        }
        return level_[target] >= 0;
    }

    int dfs_push(int x, int target, int limit) {
        if (x == target) return limit;
        for (std::size_t& i = iter_[x]; i < adj_[x].size(); ++i) {
            Arc& arc = adj_[x][i];
            if (arc.capacity <= 0 || level_[arc.to] != level_[x] + 1) continue;
            const int pushed = dfs_push(arc.to, target, std::min(limit, arc.capacity));
            if (pushed > 0) {
                arc.capacity -= pushed;
                adj_[arc.to][arc.rev].capacity += pushed;
                return pushed;
            }
        }
        return 0;
    }
};

}  // namespace sandpile
