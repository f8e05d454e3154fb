#include "svardisc/metrics.hpp"

namespace svardisc {

GraphScore score(const SummaryGraph& estimated, const SummaryGraph& truth) {
    estimated.validate();
    truth.validate();
    if (estimated.d != truth.d)
        throw InvalidArgument("score: graphs have different vertex counts");
    GraphScore s;
    for (const auto& e : estimated.edges) {
        if (truth.edges.count(e))
            ++s.tp;
        else
            ++s.fp;
    }
    for (const auto& e : truth.edges)
        if (!estimated.edges.count(e)) ++s.fn;
    s.precision = (s.tp + s.fp == 0) ? (s.fn == 0 ? 1.0 : 0.0)
                                     : static_cast<double>(s.tp) / (s.tp + s.fp);
    s.recall = (s.tp + s.fn == 0) ? (s.fp == 0 ? 1.0 : 0.0)
                                  : static_cast<double>(s.tp) / (s.tp + s.fn);
    s.f1 = (s.precision + s.recall == 0.0)
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

nlohmann::json to_json(const GraphScore& s) {
    return nlohmann::json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                          {"tp", s.tp},               {"fp", s.fp},         {"fn", s.fn}};
}

}  // namespace svardisc
