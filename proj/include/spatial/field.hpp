#pragma once

#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "medium.hpp"

namespace spatial {

/// Element type of a spatial type: bool, or unsigned int of width 1..8.
struct FieldType {
    Locus locus = Locus::V;
    int width = 1;
    bool boolean = true;

    static FieldType boolean_on(Locus l) { return {l, 1, true}; }
    static FieldType integer_on(Locus l, int w) { return {l, w, false}; }

    std::uint32_t max_value() const { return (1u << width) - 1; }
    friend bool operator==(const FieldType&, const FieldType&) = default;
};

inline std::string type_name(const FieldType& t) {
    std::string s = t.boolean ? "bool" : "int" + std::to_string(t.width);
    return s + std::string(locus_name(t.locus));
}

/// Bits per vertex a field of this type costs on a torus.
inline int bit_density(const FieldType& t) {
    int coarity = 1;
    if (is_transfer(t.locus)) coarity = father_class(t.locus) == SimplexClass::F ? 3 : (father_class(t.locus) == SimplexClass::E ? 2 : 6);
    return t.width * arity(father_class(t.locus)) * coarity;
}

inline std::uint64_t medium_hash(const Medium& m) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(m.topology));
    mix(static_cast<std::uint64_t>(m.cols));
    mix(static_cast<std::uint64_t>(m.rows));
    mix(m.num_vertices());
    for (const auto& f : m.faces)
        for (auto v : f) mix(v);
    return h;
}

/// Values of one spatial type over every data-point of its locus, packed
/// `width` bits per point in canonical point order.
class Field {
  public:
    Field() = default;
    Field(MediumPtr m, FieldType t) : medium_(std::move(m)), type_(t) {
        if (t.width < 1 || t.width > 8) throw Error("field width must be in 1..8");
        size_ = medium_->num_points(t.locus);
        words_.assign((size_ * t.width + 63) / 64, 0);
    }

    const FieldType& type() const { return type_; }
    const MediumPtr& medium() const { return medium_; }
    std::size_t size() const { return size_; }

    std::uint32_t get(std::size_t p) const {
        check(p);
        std::uint32_t v = 0;
        const std::size_t base = p * type_.width;
        for (int b = 0; b < type_.width; ++b) {
            const std::size_t i = base + b;
            v |= static_cast<std::uint32_t>((words_[i >> 6] >> (i & 63)) & 1u) << b;
        }
        return v;
    }

    void set(std::size_t p, std::uint32_t v) {
        check(p);
        if (v > type_.max_value())
            throw Error("value " + std::to_string(v) + " overflows " + type_name(type_));
        const std::size_t base = p * type_.width;
        for (int b = 0; b < type_.width; ++b) {
            const std::size_t i = base + b;
            const std::uint64_t mask = std::uint64_t(1) << (i & 63);
            if ((v >> b) & 1u)
                words_[i >> 6] |= mask;
            else
                words_[i >> 6] &= ~mask;
        }
    }

    std::vector<std::uint32_t> values() const {
        std::vector<std::uint32_t> out(size_);
        for (std::size_t p = 0; p < size_; ++p) out[p] = get(p);
        return out;
    }

    void assign(const std::vector<std::uint32_t>& vals) {
        if (vals.size() != size_) throw Error("field assign: size mismatch");
        for (std::size_t p = 0; p < size_; ++p) set(p, vals[p]);
    }

    /// Number of points holding a nonzero value.
    std::size_t popcount() const {
        std::size_t n = 0;
        for (std::size_t p = 0; p < size_; ++p) n += get(p) != 0;
        return n;
    }

    std::vector<std::size_t> true_points() const {
        std::vector<std::size_t> out;
        for (std::size_t p = 0; p < size_; ++p)
            if (get(p)) out.push_back(p);
        return out;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    friend bool operator==(const Field& a, const Field& b) {
        return a.type_ == b.type_ && a.size_ == b.size_ && a.words_ == b.words_;
    }

  private:
    void check(std::size_t p) const {
        if (p >= size_) throw Error("data-point " + std::to_string(p) + " out of range for " + type_name(type_));
    }

    MediumPtr medium_;
    FieldType type_;
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

inline Field constant(MediumPtr m, FieldType t, std::uint32_t v) {
    Field f(std::move(m), t);
    if (v > t.max_value()) throw Error("constant " + std::to_string(v) + " overflows " + type_name(t));
    for (std::size_t p = 0; p < f.size(); ++p) f.set(p, v);
    return f;
}

inline Field from_points(MediumPtr m, FieldType t, const std::vector<std::size_t>& pts, std::uint32_t v = 1) {
    Field f(std::move(m), t);
    for (auto p : pts) f.set(p, v);
    return f;
}

/// i.i.d. Bernoulli(density) bits per point (every bit of an int).
inline Field random_field(MediumPtr m, FieldType t, std::uint64_t seed, double density) {
    if (density < 0 || density > 1) throw Error("density must be in [0,1]");
    Field f(std::move(m), t);
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(density);
    for (std::size_t p = 0; p < f.size(); ++p) {
        std::uint32_t v = 0;
        for (int b = 0; b < t.width; ++b) v |= static_cast<std::uint32_t>(bit(rng)) << b;
        f.set(p, v);
    }
    return f;
}

}  // namespace spatial
