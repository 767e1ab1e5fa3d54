#pragma once

#include <vector>

#include "qpav/candidate_set.hpp"
#include "qpav/errors.hpp"

namespace qpav {

/// A finite approval profile: one ballot (approval set) per voter over a
/// fixed candidate universe. Immutable after construction; a candidate ->
/// approvers index is built up front for fast marginal computations.
class FiniteProfile {
public:
    FiniteProfile(std::vector<CandidateSet> ballots, int candidate_count);

    int voter_count() const { return static_cast<int>(ballots_.size()); }
    int candidate_count() const { return m_; }
    const CandidateSet& ballot(int voter) const { return ballots_[voter]; }
    const std::vector<CandidateSet>& ballots() const { return ballots_; }
    const std::vector<int>& approvers(int candidate) const { return approvers_[candidate]; }
    int approval_count(int candidate) const { return static_cast<int>(approvers_[candidate].size()); }

private:
    int m_;
    std::vector<CandidateSet> ballots_;
    std::vector<std::vector<int>> approvers_;
};

/// Builds a profile from per-voter approval index lists.
FiniteProfile make_profile(const std::vector<std::vector<int>>& approvals, int candidate_count);

/// The two-ballot instance {c0} / {c1, c2} over three candidates, with the
/// two ballots replicated `copies` times each.
FiniteProfile two_block_profile(int copies = 1);

struct FilterResult {
    FiniteProfile profile;
    /// filtered index -> original index
    std::vector<int> kept;
    /// original indices that were removed
    std::vector<int> removed;

    int to_original(int filtered_index) const { return kept[filtered_index]; }
};

/// Removes candidates whose approval fraction strictly exceeds `threshold`
/// and remaps the remaining indices. threshold must lie in (0, 1].
FilterResult filter_popular(const FiniteProfile& profile, double threshold);

}  // namespace qpav
