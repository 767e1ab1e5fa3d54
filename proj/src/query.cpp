#include "qpav/query.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "json.hpp"

namespace qpav {

void QueryLog::append(CandidateSet query, CandidateSet approved) {
    if (!approved.is_subset_of(query))
        throw ValidationError("response must be a subset of its query");
    entries_.push_back(
        {static_cast<std::int64_t>(entries_.size()), std::move(query), std::move(approved)});
}

void QueryLog::write_jsonl(std::ostream& out) const {
    for (const auto& e : entries_) {
        nlohmann::json j;
        j["i"] = e.index;
        j["query"] = e.query.to_vector();
        j["response"] = e.approved.to_vector();
        out << j.dump() << "\n";
    }
}

QueryLog QueryLog::read_jsonl(std::istream& in, int candidate_count) {
    QueryLog log;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        auto query = CandidateSet::from_indices(candidate_count, j.at("query").get<std::vector<int>>());
        auto approved =
            CandidateSet::from_indices(candidate_count, j.at("response").get<std::vector<int>>());
        log.append(std::move(query), std::move(approved));
    }
    return log;
}

ExactResponse exact_query(const Population& pop, const CandidateSet& query) {
    if (query.empty()) throw ValidationError("query must be nonempty");
    return pop.exact_query(query);
}

BallotResponse noisy_query(const Population& pop, const CandidateSet& query, Rng& rng) {
    if (query.empty()) throw ValidationError("query must be nonempty");
    return BallotResponse{query, pop.sample_ballot(query, rng)};
}

std::vector<CandidateSet> plan_cover(int m, const Committee& committee, int t) {
    const int k = committee.k();
    if (t <= k) throw ValidationError("query size must exceed committee size");
    if (committee.universe() != m) throw ValidationError("committee universe mismatch");

    std::vector<int> outside;
    outside.reserve(m - k);
    for (int c = 0; c < m; ++c) {
        if (!committee.contains(c)) outside.push_back(c);
    }

    std::vector<CandidateSet> plan;
    const int chunk = t - k;
    for (std::size_t start = 0; start < outside.size(); start += chunk) {
        CandidateSet q = committee.mask();
        std::size_t end = std::min(outside.size(), start + chunk);
        for (std::size_t i = start; i < end; ++i) q.add(outside[i]);
        // Pad the last query with already-covered candidates up to size t.
        for (std::size_t i = 0; q.count() < t && i < start; ++i) q.add(outside[i]);
        plan.push_back(std::move(q));
    }
    return plan;
}

double ballot_delta_add(const BallotResponse& response, const Committee& committee, int x) {
    if (!committee.mask().is_subset_of(response.query) || !response.query.contains(x))
        throw ValidationError("query does not cover committee plus candidate");
    if (committee.contains(x)) throw ValidationError("candidate already on committee");
    if (!response.approved.contains(x)) return 0.0;
    return 1.0 / (response.approved.intersect_count(committee.mask()) + 1);
}

double ballot_delta_swap(const BallotResponse& response, const Committee& committee, int x, int y) {
    if (!committee.mask().is_subset_of(response.query) || !response.query.contains(x))
        throw ValidationError("query does not cover committee plus candidate");
    if (committee.contains(x) || !committee.contains(y))
        throw ValidationError("swap membership violation");
    const bool has_x = response.approved.contains(x);
    const bool has_y = response.approved.contains(y);
    const int overlap = response.approved.intersect_count(committee.mask());
    if (has_x && !has_y) return 1.0 / (overlap + 1);
    if (!has_x && has_y) return -1.0 / overlap;  // overlap >= 1 since y is approved
    return 0.0;
}

}  // namespace qpav
