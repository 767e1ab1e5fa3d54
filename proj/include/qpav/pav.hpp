#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qpav/committee.hpp"
#include "qpav/errors.hpp"
#include "qpav/profile.hpp"
#include "qpav/rational.hpp"

namespace qpav {

struct DeltaReport {
    double value = 0.0;
    std::optional<int> best_add;
    std::optional<int> best_swap_out;
};

/// Maintains per-voter committee-intersection counts so that marginal and
/// swap gains are O(approvers) instead of full rescores. All "scaled" values
/// are the exact integers value * n * scale(), where scale() = lcm(1..k+1),
/// so threshold comparisons can be done without floating-point slack.
class CommitteeScorer {
public:
    CommitteeScorer(const FiniteProfile& profile, Committee committee);

    const Committee& committee() const { return committee_; }
    int k() const { return committee_.k(); }
    std::int64_t scale() const { return scale_; }

    double pav_score() const;
    std::int64_t pav_score_scaled() const;

    double delta_add(int candidate) const;
    std::int64_t delta_add_scaled(int candidate) const;

    double delta_swap(int in, int out) const;
    std::int64_t delta_swap_scaled(int in, int out) const;

    /// Max marginal gain over candidates outside the committee (0 when the
    /// committee is the whole candidate set), argmax with lowest-index ties.
    DeltaReport delta_star() const;
    std::int64_t delta_star_scaled(int* best_add = nullptr) const;

    /// True iff delta_star < 1/(alpha k), compared exactly.
    bool certifies(const Alpha& alpha) const;

    void apply_swap(int in, int out);

private:
    const FiniteProfile* profile_;
    Committee committee_;
    std::int64_t scale_;
    std::vector<std::int32_t> counts_;  // |A_i ∩ W| per voter
};

double pav_score(const FiniteProfile& profile, const Committee& committee);
double delta_add(const FiniteProfile& profile, const Committee& committee, int candidate);
double delta_swap(const FiniteProfile& profile, const Committee& committee, int in, int out);
DeltaReport delta_star(const FiniteProfile& profile, const Committee& committee);

/// 1/(k * delta_star); +infinity when delta_star is exactly zero.
double alpha_hat(const FiniteProfile& profile, const Committee& committee);

/// Top-k candidates by approval count, lowest-index ties.
Committee av_committee(const FiniteProfile& profile, int k);

/// Global PAV-score maximizer by enumeration; lexicographically first among
/// ties. Throws BudgetError when C(m, k) exceeds `budget` committees.
Committee exhaustive_pav(const FiniteProfile& profile, int k, std::int64_t budget = 2'000'000);

/// Local search from a seeded random committee, swapping while some swap
/// gains at least 1/k^2 (compared exactly). The result always satisfies
/// delta_star < 1/k.
Committee ls_pav(const FiniteProfile& profile, int k, std::uint64_t seed);

/// Local search run all the way to a local optimum (any strictly positive
/// gain is taken); used as the full-information reference.
Committee ls_pav_local_optimum(const FiniteProfile& profile, int k, std::uint64_t seed);

}  // namespace qpav
