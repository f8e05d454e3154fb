#pragma once

#include <nlohmann/json.hpp>

#include "svardisc/types.hpp"

namespace svardisc {

// Directed cross-edge comparison; self loops are excluded (both sides assume
// them).  Empty-vs-empty scores (1, 1, 1); 0/0 in the F1 formula maps to 0.
struct GraphScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    long tp = 0, fp = 0, fn = 0;

    friend bool operator==(const GraphScore&, const GraphScore&) = default;
};

GraphScore score(const SummaryGraph& estimated, const SummaryGraph& truth);

nlohmann::json to_json(const GraphScore& s);

}  // namespace svardisc
