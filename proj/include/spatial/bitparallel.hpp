#pragma once

#include <bit>
#include <map>
#include <tuple>

#include "runtime.hpp"

namespace spatial {

/// Row-pipelined word-parallel engine for 64-column hexagonal tori.
///
/// The compiled netlist is folded into one tile template: every gate is
/// identified with its translates in the other tiles. A template gate reads
/// template nets at a tile offset (dc, dr); one machine word holds that net
/// for a whole row, so a column offset is a word rotation and a row offset
/// selects another row. Rows are produced in a pipeline and each template net
/// keeps only the few rows its consumers still need.
class BitParallelEngine : public Engine {
  public:
    static constexpr int kWord = 64;

    struct Ref {
        std::uint32_t cls = 0;
        int dc = 0;
        int dr = 0;
    };
    struct TGate {
        GateOp op = GateOp::Const0;
        Ref a, b;
        std::uint32_t layer = 0;  // inputs: register plane
        std::uint32_t plane = 0;
    };
    /// A register plane: one (father code, slot, bit) of a layer.
    struct PlaneKey {
        int code;
        int slot;
        int bit;
        auto operator<=>(const PlaneKey&) const = default;
    };
    struct LayerPlanes {
        std::string name;
        FieldType type;
        std::vector<PlaneKey> keys;
    };

    explicit BitParallelEngine(std::shared_ptr<const CompiledCircuit> cc) : cc_(std::move(cc)) {
        const Medium& m = *cc_->medium;
        if (!m.is_hex() || !m.is_torus()) throw Error("bit-parallel engine needs a hexagonal torus");
        if (m.cols != kWord) throw Error("bit-parallel engine needs exactly 64 columns");
        rows_ = m.rows;
        fold();
        schedule();
    }

    std::string name() const override { return "bitparallel"; }
    std::size_t template_size() const { return tpl_.size(); }
    /// Largest number of rows any template net keeps buffered.
    long buffered_rows() const {
        long d = 0;
        for (std::size_t k = 0; k < tpl_.size(); ++k)
            if (tpl_[k].op != GateOp::Input) d = std::max(d, depth_[k]);
        return d;
    }
    long pipeline_lag() const { return out_lag_; }

    std::map<std::string, Field> evaluate(const Configuration& c) override {
        const Medium& m = *c.medium;
        // Registers: [layer][plane][row].
        std::vector<std::vector<std::vector<std::uint64_t>>> reg(in_layers_.size());
        for (std::size_t li = 0; li < in_layers_.size(); ++li) reg[li] = pack(m, c.at(in_layers_[li].name), in_layers_[li]);
        std::vector<std::vector<std::vector<std::uint64_t>>> next(out_layers_.size());
        for (std::size_t li = 0; li < out_layers_.size(); ++li)
            next[li].assign(out_layers_[li].keys.size(), std::vector<std::uint64_t>(rows_, 0));

        std::vector<std::vector<std::uint64_t>> buf(tpl_.size());
        for (std::size_t k = 0; k < tpl_.size(); ++k) buf[k].assign(static_cast<std::size_t>(std::max(depth_[k], 1L)), 0);

        auto read = [&](const Ref& r, long row) -> std::uint64_t {
            const TGate& g = tpl_[r.cls];
            std::uint64_t w;
            const long rr = row + r.dr;
            if (g.op == GateOp::Const0)
                return 0;
            else if (g.op == GateOp::Const1)
                return ~std::uint64_t(0);
            else if (g.op == GateOp::Input)
                w = reg[g.layer][g.plane][static_cast<std::size_t>(wrap(rr))];
            else
                w = buf[r.cls][static_cast<std::size_t>(wrap(rr, depth_[r.cls]))];
            // Bit c of the result is column c + dc of the source.
            return std::rotr(w, ((r.dc % kWord) + kWord) % kWord);
        };

        for (long s = s_lo_; s <= s_hi_; ++s) {
            for (std::uint32_t k : order_) {
                const long row = s - lag_[k];
                if (row < lo_[k] || row > hi_[k]) continue;
                const TGate& g = tpl_[k];
                std::uint64_t w = 0;
                switch (g.op) {
                    case GateOp::Not: w = ~read(g.a, row); break;
                    case GateOp::And: w = read(g.a, row) & read(g.b, row); break;
                    case GateOp::Or: w = read(g.a, row) | read(g.b, row); break;
                    case GateOp::Xor: w = read(g.a, row) ^ read(g.b, row); break;
                    default: continue;
                }
                buf[k][static_cast<std::size_t>(wrap(row, depth_[k]))] = w;
            }
            const long row = s - out_lag_;
            if (row < 0 || row >= rows_) continue;
            for (std::size_t li = 0; li < out_layers_.size(); ++li)
                for (std::size_t pk = 0; pk < out_refs_[li].size(); ++pk)
                    next[li][pk][static_cast<std::size_t>(row)] = read(out_refs_[li][pk], row);
        }

        std::map<std::string, Field> out;
        for (std::size_t li = 0; li < out_layers_.size(); ++li) out.emplace(out_layers_[li].name, unpack(c.medium, next[li], out_layers_[li]));
        return out;
    }

  private:
    long wrap(long r, long n) const { return ((r % n) + n) % n; }
    long wrap(long r) const { return wrap(r, rows_); }

    std::array<int, 2> tile_cr(std::uint32_t t) const {
        const int cols = cc_->medium->cols;
        return {static_cast<int>(t) % cols, static_cast<int>(t) / cols};
    }
    std::array<int, 2> offset(std::uint32_t from, std::uint32_t to) const {
        const auto a = tile_cr(from), b = tile_cr(to);
        const int cols = cc_->medium->cols;
        int dc = ((b[0] - a[0]) % cols + cols) % cols;
        int dr = ((b[1] - a[1]) % rows_ + rows_) % rows_;
        if (dc > cols / 2) dc -= cols;
        if (dr > rows_ / 2) dr -= rows_;
        return {dc, dr};
    }

    PlaneKey key_of(const Medium& m, const FieldType& t, std::size_t bit_slot) const {
        const std::size_t p = bit_slot / t.width;
        const int bit = static_cast<int>(bit_slot % t.width);
        const auto& tab = m.table(t.locus);
        const SimplexClass fc = father_class(t.locus);
        const std::uint32_t fa = tab.father[p];
        const int code = m.tile_code[static_cast<int>(fc)][fa];
        const int slot = is_transfer(t.locus) ? static_cast<int>(p - tab.offset[fa]) : 0;
        return {code, slot, bit};
    }

    LayerPlanes planes_for(const Medium& m, const std::string& name, const FieldType& t) const {
        LayerPlanes lp{name, t, {}};
        std::set<PlaneKey> keys;
        const std::size_t n = m.num_points(t.locus) * t.width;
        for (std::size_t i = 0; i < n; ++i) keys.insert(key_of(m, t, i));
        lp.keys.assign(keys.begin(), keys.end());
        return lp;
    }

    std::size_t plane_index(const LayerPlanes& lp, const PlaneKey& k) const {
        auto it = std::lower_bound(lp.keys.begin(), lp.keys.end(), k);
        if (it == lp.keys.end() || !(*it == k)) throw Error("bit-parallel: unknown register plane");
        return static_cast<std::size_t>(it - lp.keys.begin());
    }

    std::uint32_t point_tile(const Medium& m, const FieldType& t, std::size_t bit_slot) const {
        const std::size_t p = bit_slot / t.width;
        return m.owner[static_cast<int>(father_class(t.locus))][m.table(t.locus).father[p]];
    }

    /// Identifies each gate with its translates: the signature of a gate is
    /// its op and its operands as (template id, tile offset).
    void fold() {
        const Medium& m = *cc_->medium;
        const auto& g = cc_->gates;
        for (const auto& p : cc_->inputs) in_layers_.push_back(planes_for(m, p.name, p.type));
        for (const auto& p : cc_->outputs) out_layers_.push_back(planes_for(m, p.name, p.type));

        using Sig = std::tuple<int, std::uint32_t, int, int, std::uint32_t, int, int>;
        std::map<Sig, std::uint32_t> ids;
        cls_.assign(g.size(), 0);
        std::vector<std::size_t> members;
        for (std::uint32_t i = 0; i < g.size(); ++i) {
            const Gate& x = g[i];
            Sig sig;
            if (x.op == GateOp::Const0 || x.op == GateOp::Const1) {
                sig = {static_cast<int>(x.op), 0, 0, 0, 0, 0, 0};
            } else if (x.op == GateOp::Input) {
                const auto& port = cc_->inputs[x.a];
                const PlaneKey k = key_of(m, port.type, x.b);
                sig = {static_cast<int>(x.op), x.a, k.code, k.slot, static_cast<std::uint32_t>(k.bit), 0, 0};
            } else {
                auto ref = [&](std::uint32_t n) {
                    const auto o = offset(x.tile, g[n].tile);
                    return std::tuple<std::uint32_t, int, int>{cls_[n], o[0], o[1]};
                };
                auto ra = ref(x.a);
                auto rb = x.op == GateOp::Not ? std::tuple<std::uint32_t, int, int>{0, 0, 0} : ref(x.b);
                if (x.op != GateOp::Not && rb < ra) std::swap(ra, rb);
                sig = {static_cast<int>(x.op), std::get<0>(ra), std::get<1>(ra), std::get<2>(ra),
                       std::get<0>(rb), std::get<1>(rb), std::get<2>(rb)};
            }
            auto [it, fresh] = ids.emplace(sig, static_cast<std::uint32_t>(tpl_.size()));
            if (fresh) {
                TGate t;
                t.op = x.op;
                if (x.op == GateOp::Input) {
                    t.layer = x.a;
                    t.plane = static_cast<std::uint32_t>(plane_index(in_layers_[x.a], key_of(m, cc_->inputs[x.a].type, x.b)));
                } else if (x.is_logic()) {
                    t.a = {std::get<1>(sig), std::get<2>(sig), std::get<3>(sig)};
                    t.b = {std::get<4>(sig), std::get<5>(sig), std::get<6>(sig)};
                }
                tpl_.push_back(t);
                members.push_back(0);
            }
            cls_[i] = it->second;
            ++members[it->second];
        }
        const std::size_t V = m.num_vertices();
        for (std::size_t k = 0; k < tpl_.size(); ++k) {
            if (tpl_[k].op == GateOp::Const0 || tpl_[k].op == GateOp::Const1) continue;
            if (members[k] != V) throw Error("bit-parallel: netlist is not translation invariant");
        }
        out_refs_.resize(cc_->outputs.size());
        for (std::size_t li = 0; li < cc_->outputs.size(); ++li) {
            const auto& port = cc_->outputs[li];
            out_refs_[li].assign(out_layers_[li].keys.size(), Ref{});
            std::vector<std::uint8_t> seen(out_layers_[li].keys.size(), 0);
            for (std::size_t i = 0; i < port.nets.size(); ++i) {
                const std::uint32_t net = port.nets[i];
                const std::uint32_t tile = point_tile(m, port.type, i);
                const auto o = offset(tile, g[net].tile);
                const Ref r{cls_[net], o[0], o[1]};
                const std::size_t pk = plane_index(out_layers_[li], key_of(m, port.type, i));
                if (seen[pk] && (out_refs_[li][pk].cls != r.cls || out_refs_[li][pk].dc != r.dc || out_refs_[li][pk].dr != r.dr) &&
                    !(tpl_[r.cls].op == GateOp::Const0 || tpl_[r.cls].op == GateOp::Const1))
                    throw Error("bit-parallel: outputs are not translation invariant");
                out_refs_[li][pk] = r;
                seen[pk] = 1;
            }
        }
    }

    /// Row lags, needed row ranges and buffer depths.
    void schedule() {
        const std::size_t n = tpl_.size();
        auto logic = [&](std::uint32_t k) {
            const GateOp op = tpl_[k].op;
            return op == GateOp::Not || op == GateOp::And || op == GateOp::Or || op == GateOp::Xor;
        };
        lag_.assign(n, 0);
        for (std::uint32_t k = 0; k < n; ++k) {
            if (!logic(k)) continue;
            order_.push_back(k);
            for (const Ref* r : {&tpl_[k].a, &tpl_[k].b}) {
                if (r == &tpl_[k].b && tpl_[k].op == GateOp::Not) continue;
                if (logic(r->cls)) lag_[k] = std::max(lag_[k], lag_[r->cls] + r->dr);
            }
        }
        out_lag_ = 0;
        for (const auto& refs : out_refs_)
            for (const auto& r : refs)
                if (logic(r.cls)) out_lag_ = std::max(out_lag_, lag_[r.cls] + r.dr);
        const long inf = 1L << 40;
        lo_.assign(n, inf);
        hi_.assign(n, -inf);
        for (const auto& refs : out_refs_)
            for (const auto& r : refs) {
                lo_[r.cls] = std::min(lo_[r.cls], static_cast<long>(r.dr));
                hi_[r.cls] = std::max(hi_[r.cls], static_cast<long>(rows_ - 1 + r.dr));
            }
        for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
            const std::uint32_t k = *it;
            if (lo_[k] > hi_[k]) continue;
            for (const Ref* r : {&tpl_[k].a, &tpl_[k].b}) {
                if (r == &tpl_[k].b && tpl_[k].op == GateOp::Not) continue;
                lo_[r->cls] = std::min(lo_[r->cls], lo_[k] + r->dr);
                hi_[r->cls] = std::max(hi_[r->cls], hi_[k] + r->dr);
            }
        }
        depth_.assign(n, 1);
        for (std::uint32_t k : order_)
            for (const Ref* r : {&tpl_[k].a, &tpl_[k].b}) {
                if (r == &tpl_[k].b && tpl_[k].op == GateOp::Not) continue;
                if (logic(r->cls)) depth_[r->cls] = std::max(depth_[r->cls], lag_[k] - lag_[r->cls] - r->dr + 1);
            }
        for (const auto& refs : out_refs_)
            for (const auto& r : refs)
                if (logic(r.cls)) depth_[r.cls] = std::max(depth_[r.cls], out_lag_ - lag_[r.cls] - r.dr + 1);
        s_lo_ = inf;
        s_hi_ = rows_ - 1 + out_lag_;
        for (std::uint32_t k : order_)
            if (lo_[k] <= hi_[k]) {
                s_lo_ = std::min(s_lo_, lo_[k] + lag_[k]);
                s_hi_ = std::max(s_hi_, hi_[k] + lag_[k]);
            }
        if (s_lo_ == inf) s_lo_ = 0;
    }

    std::vector<std::vector<std::uint64_t>> pack(const Medium& m, const Field& f, const LayerPlanes& lp) const {
        std::vector<std::vector<std::uint64_t>> planes(lp.keys.size(), std::vector<std::uint64_t>(rows_, 0));
        const FieldType& t = lp.type;
        const std::size_t nbits = f.size() * t.width;
        for (std::size_t i = 0; i < nbits; ++i) {
            if (!((f.get(i / t.width) >> (i % t.width)) & 1u)) continue;
            const auto cr = tile_cr(point_tile(m, t, i));
            planes[plane_index(lp, key_of(m, t, i))][cr[1]] |= std::uint64_t(1) << cr[0];
        }
        return planes;
    }

    Field unpack(const MediumPtr& mp, const std::vector<std::vector<std::uint64_t>>& planes, const LayerPlanes& lp) const {
        const Medium& m = *mp;
        Field f(mp, lp.type);
        const FieldType& t = lp.type;
        std::vector<std::uint32_t> vals(f.size(), 0);
        for (std::size_t i = 0; i < f.size() * t.width; ++i) {
            const auto cr = tile_cr(point_tile(m, t, i));
            if ((planes[plane_index(lp, key_of(m, t, i))][cr[1]] >> cr[0]) & 1u) vals[i / t.width] |= 1u << (i % t.width);
        }
        f.assign(vals);
        return f;
    }

    std::shared_ptr<const CompiledCircuit> cc_;
    long rows_ = 0;
    std::vector<TGate> tpl_;
    std::vector<std::uint32_t> cls_;
    std::vector<LayerPlanes> in_layers_, out_layers_;
    std::vector<std::vector<Ref>> out_refs_;
    std::vector<std::uint32_t> order_;
    std::vector<long> lag_, lo_, hi_;
    std::vector<long> depth_;
    long out_lag_ = 0;
    long s_lo_ = 0, s_hi_ = 0;
};

}  // namespace spatial
