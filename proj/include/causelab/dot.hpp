#pragma once

#include <string>

#include "causelab/compile.hpp"
#include "causelab/model.hpp"

namespace causelab {

/// Renders the causal network in DOT. Exogenous variables are drawn as
/// boxes, endogenous ones as ellipses; node and edge order follow the
/// declaration order, so the output is stable.
inline std::string export_dot(const CausalModel& m) {
    Graph g = causal_network(m);
    std::string out;
    out += "digraph \"" + (m.name.empty() ? std::string("model") : m.name) + "\" {\n";
    for (const auto& n : g.nodes) {
        const bool exo = m.signature.is_exogenous(n);
        out += "  \"" + n + "\" [shape=" + (exo ? "box" : "ellipse") + "];\n";
    }
    for (const auto& [from, to] : g.edges)
        out += "  \"" + from + "\" -> \"" + to + "\";\n";
    out += "}\n";
    return out;
}

}  // namespace causelab
