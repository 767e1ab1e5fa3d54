#include "qpav/nonadaptive.hpp"

#include <algorithm>
#include <set>

#include "qpav/rational.hpp"

namespace qpav {

namespace {

std::int64_t combinations_capped(int m, int k, std::int64_t cap) {
    std::int64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (m - k + i) / i;
        if (c > cap) return cap + 1;
    }
    return c;
}

bool next_combination(std::vector<int>& comb, int m) {
    const int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[i] < m - k + i) {
            comb[i]++;
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

// Fraction of voters approving `candidate` and none of `blockers`; requires
// |{candidate} u blockers| to fit in one plan query.
Rational blocked_mass(const Population& pop, int candidate, const std::vector<int>& blockers,
                      int t_eff) {
    CandidateSet blocker_set(pop.candidate_count());
    for (int b : blockers) blocker_set.add(b);
    CandidateSet needed = blocker_set;
    if (!needed.contains(candidate)) needed.add(candidate);
    if (needed.count() > t_eff) throw ValidationError("marginal not derivable from plan queries");
    return pop.solo_mass(candidate, blocker_set);
}

}  // namespace

NonadaptivePlan NonadaptivePlan::all_subsets(int m, int t, std::int64_t max_queries) {
    const int size = std::min(t, m);
    if (combinations_capped(m, size, max_queries) > max_queries)
        throw BudgetError("non-adaptive plan exceeds query budget");
    NonadaptivePlan plan;
    std::vector<int> comb(size);
    for (int i = 0; i < size; ++i) comb[i] = i;
    do {
        plan.queries.push_back(CandidateSet::from_indices(m, comb));
    } while (next_combination(comb, m));
    return plan;
}

NonadaptiveResult run_nonadaptive_greedy(const Population& pop, int k, int t,
                                         const NonadaptiveOptions& options) {
    const int m = pop.candidate_count();
    if (k < 1 || k > m) throw ValidationError("bad committee size");
    if (3 * t < 2 * k) throw ValidationError("greedy selection requires t >= 2k/3");
    const int t_eff = std::min(t, m);

    NonadaptivePlan plan = NonadaptivePlan::all_subsets(m, t, options.max_plan_queries);

    const Rational quota(1, k);
    std::vector<int> selections;
    const int total_rounds = (3 * t) / 2;

    // Greedy rounds: pick the candidate approved by the most voters who
    // approve none of the previous picks.
    for (int round = 1; round <= std::min(t, total_rounds); ++round) {
        int winner = 0;
        Rational winner_mass(-1);
        for (int c = 0; c < m; ++c) {
            Rational mass = blocked_mass(pop, c, selections, t_eff);
            if (mass > winner_mass) {
                winner_mass = mass;
                winner = c;
            }
        }
        selections.push_back(winner);
    }

    // Repair rounds: any candidate still strongly demanded relative to two
    // different blocker windows qualifies; otherwise a default is taken.
    for (int round = t + 1; round <= total_rounds; ++round) {
        std::set<int> taken(selections.begin(), selections.end());
        int pick = 0;
        while (taken.count(pick) && pick < m - 1) pick++;  // default: lowest unused

        std::vector<int> blockers_a(selections.begin(),
                                    selections.begin() + std::min<std::size_t>(t - 1, selections.size()));
        // Window c_{floor(t/2)} .. c_{t-1} (1-based) is dropped from the
        // second blocker list.
        std::set<int> window;
        for (int pos = t / 2 - 1; pos <= t - 2; ++pos) {
            if (pos >= 0 && pos < static_cast<int>(selections.size())) window.insert(selections[pos]);
        }
        std::set<int> blockers_b_set;
        for (int pos = 0; pos < round - 1 && pos < static_cast<int>(selections.size()); ++pos) {
            if (!window.count(selections[pos])) blockers_b_set.insert(selections[pos]);
        }
        std::vector<int> blockers_b(blockers_b_set.begin(), blockers_b_set.end());

        for (int c = 0; c < m; ++c) {
            if (blocked_mass(pop, c, blockers_a, t_eff) >= quota &&
                blocked_mass(pop, c, blockers_b, t_eff) >= quota) {
                pick = c;
                break;
            }
        }
        selections.push_back(pick);
    }

    // First k distinct selections, padded with the lowest unused indices.
    std::vector<int> members;
    std::set<int> used;
    for (int c : selections) {
        if (static_cast<int>(members.size()) == k) break;
        if (used.insert(c).second) members.push_back(c);
    }
    for (int c = 0; static_cast<int>(members.size()) < k && c < m; ++c) {
        if (used.insert(c).second) members.push_back(c);
    }

    return NonadaptiveResult{Committee(m, std::move(members)),
                             static_cast<std::int64_t>(plan.queries.size())};
}

NonadaptiveResult run_full_info_pav(const Population& pop, int k, int t, std::int64_t budget) {
    const int m = pop.candidate_count();
    if (k < 1 || k > m) throw ValidationError("bad committee size");
    if (t < k) throw ValidationError("query size below committee size");
    if (combinations_capped(m, k, budget) > budget)
        throw BudgetError("full-information enumeration exceeds budget");

    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    std::vector<int> best;
    Rational best_score(-1);
    std::int64_t queries = 0;
    std::vector<Rational> harmonics(k + 1);
    for (int j = 1; j <= k; ++j) harmonics[j] = harmonics[j - 1] + Rational(1, j);
    do {
        auto query = CandidateSet::from_indices(m, comb);
        ExactResponse response = pop.exact_query(query);
        queries++;
        Rational score = 0;
        for (const auto& [pattern, weight] : response.entries) {
            score += weight * harmonics[pattern.count()];
        }
        if (score > best_score) {
            best_score = score;
            best = comb;
        }
    } while (next_combination(comb, m));

    return NonadaptiveResult{Committee(m, std::move(best)), queries};
}

}  // namespace qpav
