#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include <nlohmann/json.hpp>

#include "svardisc/ci.hpp"
#include "svardisc/types.hpp"

namespace svardisc {

using Trace = std::vector<nlohmann::json>;

struct SeparationSets {
    std::set<int> m_set;  // contains a; lagged children of a that are not descendants of b
    std::set<int> s_set;  // lagged parents of b or of some member of m_set
};

// m_set and s_set read off the MAG's lagged edges; descendant reachability is
// the transitive closure of the lagged directed relation.
SeparationSets separation_sets(const Mag& mag, int a, int b, int k);

struct RecoverOptions {
    // conditioning sets grow from the empty set up to this size
    std::optional<int> max_cond;  // default min(d+2, 2d-2)
};

// Skeleton restricted by the temporal background knowledge: candidates are
// lagged pairs spanning exactly k plus instantaneous pairs at the late frame;
// conditioning sets are drawn from the remaining two-frame window vertices.
// Lagged survivors orient past-to-future, instantaneous ones bidirected.
Mag recover_mag(CiBackend& source, int d, int k, const RecoverOptions& opts = {},
                Trace* trace = nullptr);

// Dashed edge a => b iff the MAG holds both A(1) -> B(1+k) and
// A(1+k) <-> B(1+k); the solid set starts empty.
PdDag build_pd_dag(const Mag& mag);

enum class PickOrder { kAscending, kSeededShuffle };

struct ResolveOptions {
    std::optional<int> k;  // nullopt: factor unknown, skip the bound-based promotions
    std::uint64_t seed = 0;
    PickOrder pick_order = PickOrder::kAscending;
};

// Resolution loop: promote dashed edges that no alternative structure can
// explain within the lag bounds, then settle the rest one CI query at a time.
SummaryGraph resolve(const PdDag& pd, const Mag& mag, CiBackend& source,
                     const ResolveOptions& opts, Trace* trace = nullptr);

// The significance level travels with the CI source (backends are built
// with their alpha); discovery itself is level-agnostic.
struct DiscoverOptions {
    std::optional<int> k;  // known subsampling factor, or nullopt
    std::uint64_t seed = 0;
    PickOrder pick_order = PickOrder::kAscending;
    std::optional<int> max_cond;
};

struct DiscoveryResult {
    SummaryGraph graph;
    Mag mag;
    PdDag pd0;
    Trace trace;
};

DiscoveryResult discover(CiBackend& source, const DiscoverOptions& opts = {});

}  // namespace svardisc
