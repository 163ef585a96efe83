#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace planshield {

// Fixed-universe bitset. States, goal sets and action-index sets are all
// subsets of a dense id range, so everything below is word-parallel.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static Bitset from_indices(std::size_t size, const std::vector<int>& indices) {
        Bitset b(size);
        for (int i : indices) b.set(static_cast<std::size_t>(i));
        return b;
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const {
        assert(i < size_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i) {
        assert(i < size_);
        words_[i >> 6] |= std::uint64_t(1) << (i & 63);
    }
    void reset(std::size_t i) {
        assert(i < size_);
        words_[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
    }

    bool none() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    bool subset_of(const Bitset& o) const {
        assert(size_ == o.size_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool intersects(const Bitset& o) const {
        assert(size_ == o.size_);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    Bitset& operator|=(const Bitset& o) {
        assert(size_ == o.size_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    Bitset& operator&=(const Bitset& o) {
        assert(size_ == o.size_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    // set difference: *this \ o
    Bitset& subtract(const Bitset& o) {
        assert(size_ == o.size_);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset difference(Bitset a, const Bitset& b) { return a.subtract(b); }

    bool operator==(const Bitset& o) const = default;

    std::vector<int> to_indices() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(static_cast<int>(i)); });
        return out;
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word) {
                const int bit = __builtin_ctzll(word);
                f((w << 6) + static_cast<std::size_t>(bit));
                word &= word - 1;
            }
        }
    }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<std::size_t>(h);
    }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace planshield
