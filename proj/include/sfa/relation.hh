/* relation.hh -- dense boolean matrix over state pairs.  bits(i, j) = true
 * reads "j is (still) a candidate to simulate i", i.e. (i, j) is in the
 * relation. */

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

namespace sfa {

class Relation {
public:
    Relation() = default;
    explicit Relation(std::uint32_t n, bool fill = false)
        : n_(n), words_((n + 63) / 64), bits_(std::size_t{words_} * n, fill ? ~std::uint64_t{0} : 0) {
        if (fill) mask_tails();
    }

    static Relation full(std::uint32_t n) { return Relation(n, true); }
    static Relation identity(std::uint32_t n) {
        Relation r(n);
        for (std::uint32_t i = 0; i < n; ++i) r.set(i, i, true);
        return r;
    }

    std::uint32_t n() const { return n_; }

    bool get(std::uint32_t i, std::uint32_t j) const {
        return (row(i)[j >> 6] >> (j & 63)) & 1u;
    }
    void set(std::uint32_t i, std::uint32_t j, bool v) {
        if (v)
            row(i)[j >> 6] |= std::uint64_t{1} << (j & 63);
        else
            row(i)[j >> 6] &= ~(std::uint64_t{1} << (j & 63));
    }

    std::span<std::uint64_t> row(std::uint32_t i) { return {bits_.data() + std::size_t{i} * words_, words_}; }
    std::span<const std::uint64_t> row(std::uint32_t i) const {
        return {bits_.data() + std::size_t{i} * words_, words_};
    }
    std::uint32_t row_words() const { return words_; }

    std::uint64_t pair_count() const {
        std::uint64_t c = 0;
        for (std::uint64_t w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
        return c;
    }

    friend bool operator==(const Relation& a, const Relation& b) {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

    std::optional<std::uint32_t> reflexivity_violation() const {
        for (std::uint32_t i = 0; i < n_; ++i)
            if (!get(i, i)) return i;
        return std::nullopt;
    }

    /// Returns (i, j, k) with R(i,j), R(j,k) but not R(i,k), if any.
    std::optional<std::array<std::uint32_t, 3>> transitivity_violation() const {
        for (std::uint32_t i = 0; i < n_; ++i) {
            const auto ri = row(i);
            for (std::uint32_t j = 0; j < n_; ++j) {
                if (!get(i, j)) continue;
                const auto rj = row(j);
                for (std::uint32_t w = 0; w < words_; ++w) {
                    const std::uint64_t missing = rj[w] & ~ri[w];
                    if (missing) {
                        const auto k = static_cast<std::uint32_t>(w * 64 + std::countr_zero(missing));
                        return std::array<std::uint32_t, 3>{i, j, k};
                    }
                }
            }
        }
        return std::nullopt;
    }

    bool is_preorder() const { return !reflexivity_violation() && !transitivity_violation(); }

    Relation transposed() const {
        Relation t(n_);
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = 0; j < n_; ++j)
                if (get(i, j)) t.set(j, i, true);
        return t;
    }

    Relation intersected(const Relation& o) const {
        Relation r(n_);
        for (std::size_t k = 0; k < bits_.size(); ++k) r.bits_[k] = bits_[k] & o.bits_[k];
        return r;
    }

    bool subset_of(const Relation& o) const {
        for (std::size_t k = 0; k < bits_.size(); ++k)
            if (bits_[k] & ~o.bits_[k]) return false;
        return true;
    }

    /// Keeps the first k states (used to strip a completion sink, which is
    /// always the last index).
    Relation restricted_to_first(std::uint32_t k) const {
        Relation r(k);
        for (std::uint32_t i = 0; i < k; ++i)
            for (std::uint32_t j = 0; j < k; ++j)
                if (get(i, j)) r.set(i, j, true);
        return r;
    }

    /// FNV-1a over the packed rows; tail padding is always zero.
    std::uint64_t digest() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        auto mix = [&h](std::uint64_t v) {
            for (int i = 0; i < 8; ++i) {
                h ^= (v >> (i * 8)) & 0xff;
                h *= 0x100000001b3ull;
            }
        };
        mix(n_);
        for (std::uint64_t w : bits_) mix(w);
        return h;
    }

    /// CSV of pairs `i,j` in row-major ascending order, with a header line.
    void write_csv(std::ostream& os, std::string_view algo) const {
        os << "# states=" << n_ << " pairs=" << pair_count() << " algo=" << algo << "\n";
        for (std::uint32_t i = 0; i < n_; ++i)
            for (std::uint32_t j = 0; j < n_; ++j)
                if (get(i, j)) os << i << ',' << j << "\n";
    }

private:
    void mask_tails() {
        const std::uint32_t rem = n_ & 63;
        if (!rem) return;
        const std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
        for (std::uint32_t i = 0; i < n_; ++i) row(i)[words_ - 1] &= mask;
    }

    std::uint32_t n_ = 0;
    std::uint32_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

} // namespace sfa
