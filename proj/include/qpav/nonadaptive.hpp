#pragma once

#include <cstdint>
#include <vector>

#include "qpav/candidate_set.hpp"
#include "qpav/committee.hpp"
#include "qpav/population.hpp"

namespace qpav {

/// A query plan fixed before any response is seen; a pure function of
/// (m, k, t).
struct NonadaptivePlan {
    std::vector<CandidateSet> queries;

    /// Every candidate subset of size min(t, m).
    static NonadaptivePlan all_subsets(int m, int t, std::int64_t max_queries);
};

struct NonadaptiveResult {
    Committee committee;
    std::int64_t queries_issued = 0;
};

struct NonadaptiveOptions {
    std::int64_t max_plan_queries = 3'000;
};

/// Greedy cover over t rounds followed by floor(3t/2) - t repair rounds; the
/// first k distinct selections (padded by lowest unused indices) always
/// satisfy JR when t >= 2k/3, which is enforced as a precondition. Consumes
/// only information derivable from the fixed all-subsets plan.
NonadaptiveResult run_nonadaptive_greedy(const Population& pop, int k, int t,
                                         const NonadaptiveOptions& options = {});

/// Queries every size-k candidate set exactly and returns the committee with
/// the highest reconstructed PAV score (lexicographically first among ties).
NonadaptiveResult run_full_info_pav(const Population& pop, int k, int t,
                                    std::int64_t budget = 2'000'000);

}  // namespace qpav
