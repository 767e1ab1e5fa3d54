#pragma once

// Test-only reference implementations, kept independent of the library's
// incremental code paths so they can serve as oracles.

#include <algorithm>
#include <cmath>
#include <vector>

#include "qpav/committee.hpp"
#include "qpav/profile.hpp"
#include "qpav/rational.hpp"
#include "qpav/rng.hpp"

namespace qpav::testing {

inline double rescore(const FiniteProfile& profile, const Committee& committee) {
    double total = 0.0;
    for (const auto& ballot : profile.ballots()) {
        int overlap = ballot.intersect_count(committee.mask());
        for (int j = 1; j <= overlap; ++j) total += 1.0 / j;
    }
    return total / profile.voter_count();
}

inline double delta_add_rescore(const FiniteProfile& profile, const Committee& committee, int c) {
    std::vector<int> plus = committee.members();
    plus.push_back(c);
    return rescore(profile, Committee(profile.candidate_count(), plus)) -
           rescore(profile, committee);
}

inline double delta_swap_rescore(const FiniteProfile& profile, const Committee& committee, int in,
                                 int out) {
    return rescore(profile, committee.with_swap(in, out)) - rescore(profile, committee);
}

// Raw EJR audit: every candidate set of each size, no closure shortcut.
inline bool ejr_satisfied_raw(const FiniteProfile& profile, const Committee& committee,
                              Alpha alpha) {
    const int n = profile.voter_count();
    const int m = profile.candidate_count();
    const int k = committee.k();
    for (int level = 1; level <= k; ++level) {
        std::vector<int> comb(level);
        for (int i = 0; i < level; ++i) comb[i] = i;
        bool more = level <= m;
        while (more) {
            auto t = CandidateSet::from_indices(m, comb);
            std::int64_t group = 0;
            for (int v = 0; v < n; ++v) {
                if (t.is_subset_of(profile.ballot(v)) &&
                    profile.ballot(v).intersect_count(committee.mask()) < level) {
                    group++;
                }
            }
            if (static_cast<__int128>(group) * alpha.num * k >=
                static_cast<__int128>(level) * alpha.den * n) {
                return false;
            }
            int i = level - 1;
            while (i >= 0 && comb[i] == m - level + i) i--;
            if (i < 0) {
                more = false;
            } else {
                comb[i]++;
                for (int j = i + 1; j < level; ++j) comb[j] = comb[j - 1] + 1;
            }
        }
    }
    return true;
}

// Raw OAS audit: every voter group, checked against the defining inequality.
inline bool oas_satisfied_raw(const FiniteProfile& profile, const Committee& committee,
                              Alpha alpha) {
    const int n = profile.voter_count();
    const int k = committee.k();
    for (std::uint64_t bits = 1; bits < (std::uint64_t(1) << n); ++bits) {
        CandidateSet common(profile.candidate_count());
        bool first = true;
        std::int64_t size = 0, sat = 0;
        for (int v = 0; v < n; ++v) {
            if (!(bits & (std::uint64_t(1) << v))) continue;
            size++;
            sat += profile.ballot(v).intersect_count(committee.mask());
            common = first ? profile.ballot(v) : (common & profile.ballot(v));
            first = false;
        }
        double avs_value = static_cast<double>(sat) / size;
        double lambda_cap = std::min({static_cast<double>(common.count()),
                                      alpha.value() * size * k / static_cast<double>(n) - 1.0,
                                      static_cast<double>(k)});
        if (avs_value < lambda_cap - 1e-12) return false;
    }
    return true;
}

inline FiniteProfile random_profile(Rng& rng, int n, int m, double density = 0.4) {
    std::vector<CandidateSet> ballots;
    for (int v = 0; v < n; ++v) {
        CandidateSet b(m);
        for (int c = 0; c < m; ++c) {
            if (rng.bernoulli(density)) b.add(c);
        }
        ballots.push_back(std::move(b));
    }
    return FiniteProfile(std::move(ballots), m);
}

inline Committee random_committee(Rng& rng, int m, int k) {
    return Committee(m, rng.sample_distinct(m, k));
}

// The 51%/49% two-camp instance: voters 0..50 approve {0,1,2}, voters
// 51..99 approve {3,4,5}.
inline FiniteProfile split_51_49() {
    std::vector<std::vector<int>> approvals;
    for (int i = 0; i < 51; ++i) approvals.push_back({0, 1, 2});
    for (int i = 0; i < 49; ++i) approvals.push_back({3, 4, 5});
    return make_profile(approvals, 6);
}

}  // namespace qpav::testing
