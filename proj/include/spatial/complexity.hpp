#pragma once

#include <cmath>

#include "blobs.hpp"
#include "compiler.hpp"

namespace spatial {

/// Work of neighborhood^k evaluated as a cellular circuit versus a
/// per-point re-expansion that memoises only inside one point's cone.
struct ComplexitySample {
    int r = 0;  // radius, 2k
    double circuit = 0;     // logic gates per tile
    double reexpansion = 0;  // logic gates in one output's fan-in cone
};

/// Logic gates in the transitive fan-in of the given nets.
inline std::size_t cone_size(const CompiledCircuit& cc, const std::vector<std::uint32_t>& roots) {
    std::vector<std::uint8_t> seen(cc.gates.size(), 0);
    std::vector<std::uint32_t> stack(roots.begin(), roots.end());
    std::size_t n = 0;
    while (!stack.empty()) {
        const std::uint32_t g = stack.back();
        stack.pop_back();
        if (seen[g]) continue;
        seen[g] = 1;
        const Gate& x = cc.gates[g];
        if (!x.is_logic()) continue;
        if (!cc.fused[g]) ++n;
        stack.push_back(x.a);
        if (x.op != GateOp::Not) stack.push_back(x.b);
    }
    return n;
}

inline ComplexitySample neighborhood_work(const MediumPtr& m, int k, std::uint32_t probe = 0) {
    const Expr x = layer("x", FieldType::boolean_on(Locus::V));
    const CompiledCircuit cc = compile(growth_update(x, k), m);
    ComplexitySample s;
    s.r = radius_of(growth_update(x, k));
    s.circuit = cc.stats.gates_per_tile;
    s.reexpansion = static_cast<double>(cone_size(cc, {cc.outputs.front().nets[probe]}));
    return s;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace spatial
