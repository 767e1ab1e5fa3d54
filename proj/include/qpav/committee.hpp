#pragma once

#include <algorithm>
#include <vector>

#include "qpav/candidate_set.hpp"
#include "qpav/errors.hpp"

namespace qpav {

/// A size-k subset of candidates. Members are kept sorted, so lexicographic
/// comparison of committees is comparison of the member vectors.
class Committee {
public:
    Committee() = default;
    Committee(int universe, std::vector<int> members) : members_(std::move(members)) {
        std::sort(members_.begin(), members_.end());
        if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
            throw ValidationError("committee members must be distinct");
        mask_ = CandidateSet::from_indices(universe, members_);
    }

    static Committee first_k(int universe, int k) {
        if (k > universe) throw ValidationError("committee size exceeds candidate count");
        std::vector<int> ids(k);
        for (int i = 0; i < k; ++i) ids[i] = i;
        return Committee(universe, std::move(ids));
    }

    int k() const { return static_cast<int>(members_.size()); }
    int universe() const { return mask_.universe(); }
    const std::vector<int>& members() const { return members_; }
    const CandidateSet& mask() const { return mask_; }
    bool contains(int id) const { return mask_.contains(id); }

    Committee with_swap(int in, int out) const {
        if (!contains(out) || contains(in)) throw ValidationError("invalid swap for committee");
        std::vector<int> next = members_;
        next.erase(std::find(next.begin(), next.end(), out));
        next.push_back(in);
        return Committee(universe(), std::move(next));
    }

    bool operator==(const Committee& other) const { return members_ == other.members_; }
    bool operator<(const Committee& other) const { return members_ < other.members_; }

private:
    std::vector<int> members_;
    CandidateSet mask_;
};

}  // namespace qpav
