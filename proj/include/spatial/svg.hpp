#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "field.hpp"

namespace spatial {

struct RenderLayer {
    Field field;
    std::string color;
};

struct RenderSpec {
    MediumPtr medium;
    std::vector<RenderLayer> layers;
    bool transfer_points = true;  // draw transfer-locus fields as dots
    double scale = 0;  // pixels per unit; 0 fits the longer side to 800
};

inline double mean_edge_length(const Medium& m) {
    if (m.edges.empty()) return 1;
    double t = 0;
    for (const auto& [a, b] : m.edges) {
        const Point q = m.unwrap(m.points[a], m.points[b]);
        t += std::hypot(q.x - m.points[a].x, q.y - m.points[a].y);
    }
    return t / static_cast<double>(m.edges.size());
}

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

inline Point lerp(Point a, Point b, double t) { return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t}; }

/// Cantellated tiling: corner (v, f) sits between vertex v and the centroid
/// of face f. On a hexagonal lattice this is the rhombitrihexagonal tiling.
class Tiling {
  public:
    static constexpr double kInset = 0.4;

    explicit Tiling(const Medium& m) : m_(m) {}

    Point center(SimplexId s, Point near) const { return m_.unwrap(near, m_.centroid(s)); }

    Point corner(std::uint32_t v, std::uint32_t f) const {
        const Point pv = m_.points[v];
        return lerp(pv, m_.unwrap(pv, m_.centroid({SimplexClass::F, f})), kInset);
    }

    std::vector<Point> polygon(SimplexId s) const {
        std::vector<Point> out;
        switch (s.cls) {
            case SimplexClass::V: {
                const Point pv = m_.points[s.index];
                const std::size_t n = m_.ring_size(SimplexClass::V, s.index);
                bool gap = false;
                for (std::size_t p = 1; p < n; p += 2) {
                    const auto f = m_.ring_at(SimplexClass::V, s.index, p);
                    if (f == kPhantom) {
                        gap = true;
                        continue;
                    }
                    out.push_back(corner(s.index, static_cast<std::uint32_t>(f)));
                }
                if (gap) out.push_back(pv);
                return out;
            }
            case SimplexClass::E: {
                const auto [u, v] = m_.edges[s.index];
                const Point pu = m_.points[u];
                auto wrap = [&](Point q) { return m_.unwrap(pu, q); };
                // ring: u, right face, v, left face
                const auto fr = m_.ring_at(SimplexClass::E, s.index, 1);
                const auto fl = m_.ring_at(SimplexClass::E, s.index, 3);
                if (fr != kPhantom) {
                    out.push_back(wrap(corner(u, fr)));
                    out.push_back(wrap(corner(v, fr)));
                } else {
                    out.push_back(pu);
                    out.push_back(wrap(m_.points[v]));
                }
                if (fl != kPhantom) {
                    out.push_back(wrap(corner(v, fl)));
                    out.push_back(wrap(corner(u, fl)));
                } else {
                    out.push_back(wrap(m_.points[v]));
                    out.push_back(pu);
                }
                return out;
            }
            case SimplexClass::F: {
                const auto& f = m_.faces[s.index];
                const Point p0 = m_.points[f[0]];
                for (auto v : f) out.push_back(m_.unwrap(p0, corner(v, s.index)));
                return out;
            }
        }
        return out;
    }

  private:
    const Medium& m_;
};

}  // namespace detail

/// Deterministic SVG 1.1: the tiling outline, then every nonzero data-point
/// of each layer filled with its color.
inline std::string render_svg(const RenderSpec& spec) {
    const Medium& m = *spec.medium;
    for (const auto& l : spec.layers)
        if (l.field.medium().get() != spec.medium.get() && medium_hash(*l.field.medium()) != medium_hash(m))
            throw Error("render: field on a different medium");
    const detail::Tiling tl(m);
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    std::vector<std::vector<Point>> polys[3];
    for (auto c : kSimplexClasses) {
        for (std::uint32_t i = 0; i < m.count(c); ++i) {
            auto p = tl.polygon({c, i});
            for (const auto& q : p) {
                x0 = std::min(x0, q.x);
                y0 = std::min(y0, q.y);
                x1 = std::max(x1, q.x);
                y1 = std::max(y1, q.y);
            }
            polys[static_cast<int>(c)].push_back(std::move(p));
        }
    }
    const double pad = 0.5 * mean_edge_length(m);
    const double s = spec.scale > 0 ? spec.scale : 800 / (std::max(x1 - x0, y1 - y0) + 2 * pad);
    auto X = [&](double x) { return detail::num((x - x0 + pad) * s); };
    // SVG y grows downwards.
    auto Y = [&](double y) { return detail::num((y1 - y + pad) * s); };
    auto path = [&](const std::vector<Point>& p) {
        std::string d = "M";
        for (std::size_t k = 0; k < p.size(); ++k) d += (k ? " L" : "") + X(p[k].x) + "," + Y(p[k].y);
        return d + " Z";
    };

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::num((x1 - x0 + 2 * pad) * s) +
           "\" height=\"" + detail::num((y1 - y0 + 2 * pad) * s) + "\">\n";
    out += "<g fill=\"white\" stroke=\"#999999\" stroke-width=\"0.5\">\n";
    for (auto c : kSimplexClasses)
        for (const auto& p : polys[static_cast<int>(c)]) out += "<path d=\"" + path(p) + "\"/>\n";
    out += "</g>\n";
    for (const auto& l : spec.layers) {
        const FieldType t = l.field.type();
        out += "<g fill=\"" + l.color + "\" stroke=\"#333333\" stroke-width=\"0.5\">\n";
        if (is_simplicial(t.locus)) {
            const auto& ps = polys[static_cast<int>(father_class(t.locus))];
            for (std::size_t p = 0; p < l.field.size(); ++p)
                if (l.field.get(p)) out += "<path d=\"" + path(ps[p]) + "\"/>\n";
        } else if (spec.transfer_points) {
            const auto& tab = m.table(t.locus);
            const SimplexClass fc = father_class(t.locus), xc = facing_class(t.locus);
            for (std::size_t p = 0; p < l.field.size(); ++p) {
                if (!l.field.get(p)) continue;
                const Point a = m.centroid({fc, tab.father[p]});
                const Point b = tl.center({xc, static_cast<std::uint32_t>(tab.facing[p])}, a);
                const Point q = detail::lerp(a, b, 0.35);
                out += "<circle cx=\"" + X(q.x) + "\" cy=\"" + Y(q.y) + "\" r=\"" + detail::num(0.16 * pad * s) + "\"/>\n";
            }
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace spatial
