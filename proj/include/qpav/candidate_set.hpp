#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <vector>

#include "qpav/errors.hpp"

namespace qpav {

/// A set of candidate indices over a fixed universe [0, m), packed into
/// 64-bit words. Ballots, queries, committees and response patterns are all
/// values of this type; binary operations require matching universes.
class CandidateSet {
public:
    CandidateSet() : universe_(0) {}
    explicit CandidateSet(int universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {
        if (universe < 0) throw ValidationError("candidate universe must be nonnegative");
    }

    static CandidateSet of(int universe, std::initializer_list<int> ids) {
        CandidateSet s(universe);
        for (int id : ids) s.add(id);
        return s;
    }

    template <class Container>
    static CandidateSet from_indices(int universe, const Container& ids) {
        CandidateSet s(universe);
        for (int id : ids) s.add(id);
        return s;
    }

    static CandidateSet full(int universe) {
        CandidateSet s(universe);
        for (auto& w : s.words_) w = ~std::uint64_t(0);
        s.trim();
        return s;
    }

    int universe() const { return universe_; }

    void add(int id) {
        check(id);
        words_[id >> 6] |= std::uint64_t(1) << (id & 63);
    }

    void remove(int id) {
        check(id);
        words_[id >> 6] &= ~(std::uint64_t(1) << (id & 63));
    }

    bool contains(int id) const {
        if (id < 0 || id >= universe_) return false;
        return (words_[id >> 6] >> (id & 63)) & 1;
    }

    int count() const {
        int n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    bool empty() const {
        for (auto w : words_) {
            if (w) return false;
        }
        return true;
    }

    int intersect_count(const CandidateSet& other) const {
        int n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i) n += std::popcount(words_[i] & other.words_[i]);
        return n;
    }

    bool intersects(const CandidateSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & other.words_[i]) return true;
        }
        return false;
    }

    bool is_subset_of(const CandidateSet& other) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (words_[i] & ~other.words_[i]) return false;
        }
        return true;
    }

    CandidateSet operator&(const CandidateSet& other) const {
        CandidateSet out(universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & other.words_[i];
        return out;
    }

    CandidateSet operator|(const CandidateSet& other) const {
        CandidateSet out(universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] | other.words_[i];
        return out;
    }

    /// Set difference: elements of this set not in `other`.
    CandidateSet minus(const CandidateSet& other) const {
        CandidateSet out(universe_);
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = words_[i] & ~other.words_[i];
        return out;
    }

    CandidateSet complement() const { return full(universe_).minus(*this); }

    bool operator==(const CandidateSet& other) const {
        return universe_ == other.universe_ && words_ == other.words_;
    }
    bool operator!=(const CandidateSet& other) const { return !(*this == other); }

    /// Total order for use as a map key (word-wise, high to low).
    bool operator<(const CandidateSet& other) const {
        if (universe_ != other.universe_) return universe_ < other.universe_;
        for (std::size_t i = words_.size(); i-- > 0;) {
            if (words_[i] != other.words_[i]) return words_[i] < other.words_[i];
        }
        return false;
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        out.reserve(count());
        for_each([&](int id) { out.push_back(id); });
        return out;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                int bit = std::countr_zero(w);
                fn(static_cast<int>(i * 64 + bit));
                w &= w - 1;
            }
        }
    }

    std::size_t hash() const {
        std::size_t h = std::hash<int>()(universe_);
        for (auto w : words_) h = h * 0x100000001b3ULL ^ w;
        return h;
    }

private:
    void check(int id) const {
        if (id < 0 || id >= universe_) throw ValidationError("candidate index out of range");
    }
    void trim() {
        if (universe_ % 64 != 0 && !words_.empty()) {
            words_.back() &= (std::uint64_t(1) << (universe_ % 64)) - 1;
        }
    }

    int universe_;
    std::vector<std::uint64_t> words_;
};

struct CandidateSetHash {
    std::size_t operator()(const CandidateSet& s) const { return s.hash(); }
};

}  // namespace qpav
