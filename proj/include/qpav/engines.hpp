#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qpav/committee.hpp"
#include "qpav/population.hpp"
#include "qpav/query.hpp"
#include "qpav/rational.hpp"

#include "json.hpp"

namespace qpav {

struct EngineConfig {
    int k = 1;
    int t = 2;
    Alpha alpha{1, 1};
    double delta = 0.05;
    std::optional<std::int64_t> ell_override;   // samples per estimate
    std::optional<double> theta_override;       // replaces the err numerator
    std::optional<std::int64_t> voter_budget;   // hard stop on voters queried
    std::uint64_t seed = 0;
    /// Skip the swap that precedes the first round (the loop otherwise swaps
    /// the arbitrary initial pair before any estimate is made).
    bool skip_initial_swap = false;
    /// Keep running until the voter budget is exhausted instead of stopping
    /// at the certified threshold (the experiment-harness mode).
    bool run_to_budget = false;
    /// Rebuild the confidence-bound statistics from the log on every
    /// iteration instead of updating them incrementally. Slow but
    /// authoritative; results must be identical either way.
    bool exact_replay = false;
};

struct SwapEvent {
    std::int64_t iteration;
    int out;
    int in;
    double gamma;
};

struct RunResult {
    Committee committee;
    std::int64_t swaps = 0;
    std::int64_t queries_issued = 0;
    std::int64_t voters_queried = 0;
    double final_gamma = 0.0;
    /// alpha-hat from a full-information audit, when the population supports one.
    std::optional<double> certificate_alpha_hat;
    std::vector<SwapEvent> swap_trace;
    bool budget_exhausted = false;
    std::int64_t ell_used = 0;
    double voter_cap = 0.0;  // the L constant, when applicable
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    QueryLog log;
};

/// Override for how single-voter ballots are obtained. Used by the
/// experiment harness to replay a fixed voter pool in seeded random order
/// instead of sampling with replacement.
using BallotSampler = std::function<CandidateSet(const CandidateSet& query)>;

/// Local-search committee selection with exact queries: repeatedly swaps in
/// the candidate with the highest marginal PAV gain until that gain drops
/// below 1/(alpha k) (compared exactly). The returned committee therefore
/// certifies alpha-EJR and alpha-OAS.
RunResult run_exact_pav(const Population& pop, const EngineConfig& cfg);

/// Per-round sample count needed by the sampled engine:
/// ceil(288 (alpha k^2 / ((1-alpha)k + 1))^2 * ln(8 m k^4 / delta)).
std::int64_t noisy_sample_size(Alpha alpha, int k, int m, double delta);

/// Sampled variant: each cover query is put to `ell` fresh voters per round
/// and all deltas are sample means; the loop stops once the best estimated
/// gain drops below 1/(alpha k) - ((1-alpha)k + 1)/(12 alpha k^2).
RunResult run_noisy_pav(const Population& pop, const EngineConfig& cfg,
                        const BallotSampler* sampler = nullptr);

struct UcbConstants {
    std::int64_t ell = 0;        // per-candidate query quota
    std::int64_t voter_cap = 0;  // the L constant
    double err_numerator = 0.0;  // 2 ln(4 L (k+1) m^(k+1) / delta)
};

/// Constants for the confidence-bound engine, evaluated in log space so the
/// m^(k+2) term cannot overflow.
UcbConstants ucb_constants(Alpha alpha, int k, int m, int t, double delta);

/// Per-committee stratified statistics over a query log. Stratum s of a
/// candidate x collects logged voters whose query contained x and at least s
/// committee members; estimates get tighter as strata fill while looser
/// strata remain usable after swaps.
class UcbState {
public:
    UcbState(int m, const Committee& committee, double err_numerator);

    void rebuild(const QueryLog& log, const Committee& committee);
    void observe(const QueryLogEntry& entry);

    const Committee& committee() const { return committee_; }

    /// Best upper confidence bound on the gain of adding x: min over strata
    /// {0} u [k] of estimate + err. +infinity when every stratum is empty.
    double upper_add(int x) const;

    /// Best lower confidence bound on the gain of swapping x in for y: max
    /// over strata [k] of estimate - err. -infinity when empty. Partially
    /// covered ballots use the pessimistic denominator |R ∩ W| + |W \ Q| + 1.
    double lower_swap(int x, int y) const;

    /// Voters whose query covered x together with at least s committee members.
    std::int64_t stratum_count_add(int x, int s) const;
    std::int64_t stratum_count_swap(int x, int y, int s) const;

    /// Number of logged queries containing the whole committee plus x.
    std::int64_t full_cover_count(int x) const;

private:
    int index_of_member(int y) const;

    int m_ = 0;
    int k_ = 0;
    Committee committee_;
    double err_numerator_ = 0.0;
    // Buckets by exact coverage level c = |Q ∩ W|; stratum s aggregates c >= s.
    std::vector<std::int64_t> add_count_;  // [x][c]
    std::vector<double> add_sum_;
    std::vector<std::int64_t> swap_count_;  // [x][member][c]
    std::vector<double> swap_sum_;
    std::vector<std::int64_t> full_cover_;
};

double ucb_upper(const UcbState& state, int x);
double ucb_lower_swap(const UcbState& state, int x, int y);

/// Confidence-bound engine: never discards votes, queries undersampled
/// promising candidates, swaps as soon as a swap's lower bound clears half
/// the guaranteed-progress threshold, and stops once every outside
/// candidate's upper bound is below 1/(alpha k).
RunResult run_ucb_pav(const Population& pop, const EngineConfig& cfg,
                      const BallotSampler* sampler = nullptr);

}  // namespace qpav
