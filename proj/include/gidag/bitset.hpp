#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

#include "gidag/error.hpp"

namespace gidag {

// Fixed-universe bit set used for vertex and context sets. All sets taking
// part in one operation must share the same universe size.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(int n) : size_(n), words_((n + 63) / 64, 0) {}

    Bitset(int n, std::initializer_list<int> bits) : Bitset(n) {
        for (int b : bits) set(b);
    }

    static Bitset from_vector(int n, const std::vector<int>& bits) {
        Bitset s(n);
        for (int b : bits) s.set(b);
        return s;
    }

    int size() const { return size_; }

    void set(int i) {
        check(i);
        words_[static_cast<std::size_t>(i) >> 6] |= (std::uint64_t{1} << (i & 63));
    }

    void reset(int i) {
        check(i);
        words_[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    void assign(int i, bool on) { on ? set(i) : reset(i); }

    bool test(int i) const {
        check(i);
        return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1;
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    bool none() const {
        for (auto w : words_) {
            if (w != 0) return false;
        }
        return true;
    }

    bool any() const { return !none(); }

    bool operator==(const Bitset& o) const { return size_ == o.size_ && words_ == o.words_; }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    // Lexicographic order on the word representation; used for canonical
    // (deterministic) map keys, not for anything semantic.
    bool operator<(const Bitset& o) const {
        if (size_ != o.size_) return size_ < o.size_;
        return words_ < o.words_;
    }

    Bitset& operator|=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    Bitset& operator&=(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    Bitset& subtract(const Bitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }

    bool intersects(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & o.words_[i]) return true;
        }
        return false;
    }

    bool is_subset_of(const Bitset& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & ~o.words_[i]) return false;
        }
        return true;
    }

    template <class F>
    void for_each(F f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                int bit = std::countr_zero(w);
                f(static_cast<int>(wi * 64) + bit);
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(count()));
        for_each([&](int i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(size_);
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }

private:
    void check(int i) const {
        if (i < 0 || i >= size_) throw QueryError("bit index out of range");
    }

    int size_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BitsetHash {
    std::size_t operator()(const Bitset& s) const { return s.hash(); }
};

}  // namespace gidag
