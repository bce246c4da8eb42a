#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "locus.hpp"

namespace spatial {

/// Integer lattice point used by the exact predicates.
struct IPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
};

inline std::int64_t orient(IPoint a, IPoint b, IPoint c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// > 0 when d lies strictly inside the circumcircle of ccw triangle abc.
inline int incircle(IPoint a, IPoint b, IPoint c, IPoint d) {
    using I = __int128;
    const I adx = a.x - d.x, ady = a.y - d.y;
    const I bdx = b.x - d.x, bdy = b.y - d.y;
    const I cdx = c.x - d.x, cdy = c.y - d.y;
    const I ad = adx * adx + ady * ady;
    const I bd = bdx * bdx + bdy * bdy;
    const I cd = cdx * cdx + cdy * cdy;
    const I det = adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

/// Bowyer-Watson triangulation of distinct integer points (|coord| < 2^24).
/// Returns counter-clockwise triangles. Cocircular points are treated as
/// outside, so ties resolve by insertion order. Throws on degeneracy.
inline std::vector<std::array<std::uint32_t, 3>> delaunay(const std::vector<IPoint>& pts) {
    const std::uint32_t n = static_cast<std::uint32_t>(pts.size());
    if (n < 3) throw Error("delaunay: need at least 3 points");
    std::vector<IPoint> p = pts;
    const std::int64_t big = std::int64_t(1) << 28;
    p.push_back({-big, -big});
    p.push_back({big, -big});
    p.push_back({0, big});

    struct Tri {
        std::array<std::uint32_t, 3> v;
        bool alive;
    };
    std::vector<Tri> tris{{{n, n + 1, n + 2}, true}};
    std::vector<std::uint32_t> bad;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_count;
    for (std::uint32_t i = 0; i < n; ++i) {
        bad.clear();
        for (std::uint32_t t = 0; t < tris.size(); ++t) {
            if (!tris[t].alive) continue;
            const auto& v = tris[t].v;
            if (incircle(p[v[0]], p[v[1]], p[v[2]], p[i]) > 0) bad.push_back(t);
        }
        if (bad.empty()) throw Error("delaunay: point outside every circumcircle (duplicate?)");
        edge_count.clear();
        for (auto t : bad) {
            const auto& v = tris[t].v;
            for (int k = 0; k < 3; ++k) {
                const std::uint32_t a = v[k], b = v[(k + 1) % 3];
                ++edge_count[{std::min(a, b), std::max(a, b)}];
            }
        }
        std::vector<std::array<std::uint32_t, 2>> boundary;
        for (auto t : bad) {
            const auto& v = tris[t].v;
            for (int k = 0; k < 3; ++k) {
                const std::uint32_t a = v[k], b = v[(k + 1) % 3];
                if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) boundary.push_back({a, b});
            }
            tris[t].alive = false;
        }
        for (const auto& e : boundary) {
            if (orient(p[e[0]], p[e[1]], p[i]) <= 0) throw Error("delaunay: degenerate cavity");
            tris.push_back({{e[0], e[1], i}, true});
        }
        if (tris.size() > 8 * std::size_t(n) + 64) {
            std::vector<Tri> keep;
            for (auto& t : tris)
                if (t.alive) keep.push_back(t);
            tris.swap(keep);
        }
    }
    std::vector<std::array<std::uint32_t, 3>> out;
    for (const auto& t : tris) {
        if (!t.alive) continue;
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
        if (orient(p[t.v[0]], p[t.v[1]], p[t.v[2]]) <= 0) throw Error("delaunay: degenerate triangle");
        out.push_back(t.v);
    }
    return out;
}

}  // namespace spatial
