#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qpav/candidate_set.hpp"
#include "qpav/committee.hpp"
#include "qpav/population.hpp"

namespace qpav {

/// One sampled voter's approvals restricted to the queried candidates.
struct BallotResponse {
    CandidateSet query;
    CandidateSet approved;
};

struct QueryLogEntry {
    std::int64_t index;
    CandidateSet query;
    CandidateSet approved;
};

/// Append-only record of (query, ballot response) pairs with contiguous
/// 0-based indices; replayable for engine debugging.
class QueryLog {
public:
    void append(CandidateSet query, CandidateSet approved);
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const QueryLogEntry& operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    /// One JSON object per line: {"i":., "query":[...], "response":[...]}.
    void write_jsonl(std::ostream& out) const;
    static QueryLog read_jsonl(std::istream& in, int candidate_count);

private:
    std::vector<QueryLogEntry> entries_;
};

/// Exact subset-distribution over a nonempty query set.
ExactResponse exact_query(const Population& pop, const CandidateSet& query);

/// One fresh voter, sampled with replacement, restricted to the query.
BallotResponse noisy_query(const Population& pop, const CandidateSet& query, Rng& rng);

/// Fixed cover: ceil((m-k)/(t-k)) queries of size <= t, each containing the
/// committee, whose union is the full candidate set. The last query is padded
/// with already-covered candidates when possible. Requires t > k.
std::vector<CandidateSet> plan_cover(int m, const Committee& committee, int t);

/// Single-voter unbiased estimate of the marginal gain of adding x.
/// Requires committee and x to be covered by the response's query.
double ballot_delta_add(const BallotResponse& response, const Committee& committee, int x);

/// Single-voter unbiased estimate of the gain of swapping x in for y.
double ballot_delta_swap(const BallotResponse& response, const Committee& committee, int x, int y);

}  // namespace qpav
