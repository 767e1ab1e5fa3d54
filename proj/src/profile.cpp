#include "qpav/profile.hpp"

#include <cmath>

namespace qpav {

FiniteProfile::FiniteProfile(std::vector<CandidateSet> ballots, int candidate_count)
    : m_(candidate_count), ballots_(std::move(ballots)) {
    if (m_ < 1) throw ValidationError("profile needs at least one candidate");
    if (ballots_.empty()) throw ValidationError("profile needs at least one voter");
    approvers_.resize(m_);
    for (int i = 0; i < static_cast<int>(ballots_.size()); ++i) {
        if (ballots_[i].universe() != m_)
            throw ValidationError("ballot universe does not match candidate count");
        ballots_[i].for_each([&](int c) { approvers_[c].push_back(i); });
    }
}

FiniteProfile make_profile(const std::vector<std::vector<int>>& approvals, int candidate_count) {
    std::vector<CandidateSet> ballots;
    ballots.reserve(approvals.size());
    for (const auto& ids : approvals) {
        ballots.push_back(CandidateSet::from_indices(candidate_count, ids));
    }
    return FiniteProfile(std::move(ballots), candidate_count);
}

FiniteProfile two_block_profile(int copies) {
    if (copies < 1) throw ValidationError("copies must be positive");
    std::vector<std::vector<int>> approvals;
    for (int i = 0; i < copies; ++i) approvals.push_back({0});
    for (int i = 0; i < copies; ++i) approvals.push_back({1, 2});
    return make_profile(approvals, 3);
}

FilterResult filter_popular(const FiniteProfile& profile, double threshold) {
    if (!(threshold > 0.0) || threshold > 1.0)
        throw ValidationError("filter threshold must lie in (0, 1]");
    const int m = profile.candidate_count();
    const int n = profile.voter_count();
    std::vector<int> kept, removed;
    for (int c = 0; c < m; ++c) {
        double fraction = static_cast<double>(profile.approval_count(c)) / n;
        if (fraction > threshold) {
            removed.push_back(c);
        } else {
            kept.push_back(c);
        }
    }
    if (kept.empty()) throw ValidationError("filter would remove every candidate");

    std::vector<int> remap(m, -1);
    for (int i = 0; i < static_cast<int>(kept.size()); ++i) remap[kept[i]] = i;

    std::vector<CandidateSet> ballots;
    ballots.reserve(n);
    const int m_new = static_cast<int>(kept.size());
    for (int v = 0; v < n; ++v) {
        CandidateSet b(m_new);
        profile.ballot(v).for_each([&](int c) {
            if (remap[c] >= 0) b.add(remap[c]);
        });
        ballots.push_back(std::move(b));
    }
    return FilterResult{FiniteProfile(std::move(ballots), m_new), std::move(kept),
                        std::move(removed)};
}

}  // namespace qpav
