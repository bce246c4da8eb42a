#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "delaunay.hpp"
#include "medium.hpp"

namespace spatial {

/// Poisson-disk points in the unit square plus a fixed perimeter ring.
/// Interior points then go through `relax_iters` rounds of centroid
/// relaxation with sampled Voronoi cells.
inline std::vector<Point> isotropic_points(int n, std::uint64_t seed, int relax_iters) {
    if (n < 10) throw Error("build_isotropic: n must be >= 10");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double spacing = std::sqrt(2.0 / (std::sqrt(3.0) * n));
    int per_side = std::max(2, static_cast<int>(std::lround(1.0 / spacing)));
    while (4 * per_side > n / 2) --per_side;
    per_side = std::max(per_side, 2);

    std::vector<Point> pts;
    for (int side = 0; side < 4; ++side)
        for (int k = 0; k < per_side; ++k) {
            const double t = static_cast<double>(k) / per_side;
            switch (side) {
                case 0: pts.push_back({t, 0}); break;
                case 1: pts.push_back({1, t}); break;
                case 2: pts.push_back({1 - t, 1}); break;
                default: pts.push_back({0, 1 - t}); break;
            }
        }
    const std::size_t fixed = pts.size();
    const double margin = 0.5 * spacing;
    double radius = 0.75 * spacing;
    int failures = 0;
    while (static_cast<int>(pts.size()) < n) {
        const Point c{margin + (1 - 2 * margin) * uni(rng), margin + (1 - 2 * margin) * uni(rng)};
        bool ok = true;
        for (const auto& q : pts)
            if ((q.x - c.x) * (q.x - c.x) + (q.y - c.y) * (q.y - c.y) < radius * radius) {
                ok = false;
                break;
            }
        if (ok) {
            pts.push_back(c);
            failures = 0;
        } else if (++failures > 2000) {
            radius *= 0.95;
            failures = 0;
        }
    }

    const int samples_per_point = 24;
    const std::size_t ns = static_cast<std::size_t>(n) * samples_per_point;
    for (int it = 0; it < relax_iters; ++it) {
        std::vector<double> sx(pts.size(), 0), sy(pts.size(), 0);
        std::vector<int> cnt(pts.size(), 0);
        for (std::size_t s = 0; s < ns; ++s) {
            const Point q{uni(rng), uni(rng)};
            std::size_t best = 0;
            double bd = 1e300;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double d = (pts[i].x - q.x) * (pts[i].x - q.x) + (pts[i].y - q.y) * (pts[i].y - q.y);
                if (d < bd) {
                    bd = d;
                    best = i;
                }
            }
            sx[best] += q.x;
            sy[best] += q.y;
            ++cnt[best];
        }
        for (std::size_t i = fixed; i < pts.size(); ++i) {
            if (cnt[i] == 0) continue;
            pts[i].x = std::clamp(sx[i] / cnt[i], margin, 1 - margin);
            pts[i].y = std::clamp(sy[i] / cnt[i], margin, 1 - margin);
        }
    }
    return pts;
}

/// Bordered medium: Delaunay triangulation of isotropic points, retried with
/// jitter on degeneracy. The border ring is the square perimeter.
inline Medium build_isotropic(int n, std::uint64_t seed, int relax_iters) {
    std::vector<Point> pts = isotropic_points(n, seed, relax_iters);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> jitter(-2, 2);
    const double scale = 1 << 20;
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<IPoint> ip;
        for (const auto& q : pts) ip.push_back({std::llround(q.x * scale), std::llround(q.y * scale)});
        if (attempt > 0)
            for (std::size_t i = 4; i < ip.size(); ++i) {
                ip[i].x += jitter(rng);
                ip[i].y += jitter(rng);
            }
        try {
            const auto tris = delaunay(ip);
            MediumDescription d;
            d.topology = Topology::Bordered;
            for (const auto& q : ip) d.points.push_back({q.x / scale, q.y / scale});
            for (const auto& t : tris) d.faces.push_back({t[0], t[1], t[2]});
            Medium m = assemble(d);
            assign_tiles(m, seed);
            return m;
        } catch (const Error&) {
            continue;
        }
    }
    throw Error("build_isotropic: triangulation failed after retries");
}

}  // namespace spatial
