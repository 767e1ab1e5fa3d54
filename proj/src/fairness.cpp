#include "qpav/fairness.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "qpav/pav.hpp"

namespace qpav {

namespace {

using int128 = __int128;

// All distinct intersections of subsets of the generator ballots. Any
// cohesive group's common approval set is such an intersection, so scanning
// these sets is exhaustive for the audits below.
std::vector<CandidateSet> intersection_closure(const std::vector<CandidateSet>& generators,
                                               std::int64_t cap) {
    std::set<CandidateSet> closed(generators.begin(), generators.end());
    std::vector<CandidateSet> worklist(closed.begin(), closed.end());
    while (!worklist.empty()) {
        CandidateSet current = std::move(worklist.back());
        worklist.pop_back();
        for (const auto& g : generators) {
            CandidateSet meet = current & g;
            if (meet.empty()) continue;
            if (closed.insert(meet).second) {
                if (static_cast<std::int64_t>(closed.size()) > cap)
                    throw BudgetError("cohesive-set enumeration budget exceeded");
                worklist.push_back(std::move(meet));
            }
        }
    }
    return {closed.begin(), closed.end()};
}

std::vector<int> overlap_counts(const FiniteProfile& profile, const Committee& committee) {
    std::vector<int> counts(profile.voter_count());
    for (int v = 0; v < profile.voter_count(); ++v)
        counts[v] = profile.ballot(v).intersect_count(committee.mask());
    return counts;
}

}  // namespace

std::string axiom_name(Axiom axiom) {
    switch (axiom) {
        case Axiom::JR: return "JR";
        case Axiom::EJR: return "EJR";
        case Axiom::OAS: return "OAS";
    }
    return "?";
}

nlohmann::json FairnessReport::to_json() const {
    nlohmann::json j;
    j["property"] = axiom_name(axiom);
    j["alpha"] = std::to_string(alpha.num) + "/" + std::to_string(alpha.den);
    j["verdict"] = satisfied ? "satisfied" : "violated";
    if (witness) {
        j["witness"] = {{"candidates", witness->candidates},
                        {"voters", witness->voters},
                        {"level", witness->level}};
    }
    return j;
}

FairnessReport check_jr(const FiniteProfile& profile, const Committee& committee) {
    const int n = profile.voter_count();
    const int k = committee.k();
    FairnessReport report;
    report.axiom = Axiom::JR;
    for (int c = 0; c < profile.candidate_count(); ++c) {
        if (committee.contains(c)) continue;
        std::vector<int> group;
        for (int v : profile.approvers(c)) {
            if (!profile.ballot(v).intersects(committee.mask())) group.push_back(v);
        }
        if (static_cast<std::int64_t>(group.size()) * k >= n) {
            report.satisfied = false;
            report.witness = FairnessWitness{{c}, std::move(group), 1.0};
            return report;
        }
    }
    return report;
}

FairnessReport check_ejr(const FiniteProfile& profile, const Committee& committee, Alpha alpha,
                         const AuditOptions& options) {
    const int n = profile.voter_count();
    const int k = committee.k();
    const auto counts = overlap_counts(profile, committee);

    FairnessReport report;
    report.axiom = Axiom::EJR;
    report.alpha = alpha;

    for (int level = 1; level <= k; ++level) {
        std::vector<int> unhappy;
        for (int v = 0; v < n; ++v) {
            if (counts[v] < level) unhappy.push_back(v);
        }
        if (unhappy.empty()) continue;

        std::set<CandidateSet> distinct;
        for (int v : unhappy) {
            if (profile.ballot(v).count() >= level) distinct.insert(profile.ballot(v));
        }
        if (distinct.empty()) continue;
        std::vector<CandidateSet> generators(distinct.begin(), distinct.end());
        auto closed = intersection_closure(generators, options.max_sets_per_level);

        for (const auto& t : closed) {
            if (t.count() < level) continue;
            std::vector<int> group;
            for (int v : unhappy) {
                if (t.is_subset_of(profile.ballot(v))) group.push_back(v);
            }
            // group is (level/alpha)-large iff |V| * alpha_num * k >= level * alpha_den * n
            int128 lhs = static_cast<int128>(group.size()) * alpha.num * k;
            int128 rhs = static_cast<int128>(level) * alpha.den * n;
            if (lhs >= rhs) {
                std::vector<int> witness_set = t.to_vector();
                witness_set.resize(level);
                report.satisfied = false;
                report.witness =
                    FairnessWitness{std::move(witness_set), std::move(group), double(level)};
                return report;
            }
        }
    }
    return report;
}

FairnessReport check_oas(const FiniteProfile& profile, const Committee& committee, Alpha alpha,
                         const AuditOptions& options) {
    const int n = profile.voter_count();
    const int k = committee.k();
    const auto counts = overlap_counts(profile, committee);

    FairnessReport report;
    report.axiom = Axiom::OAS;
    report.alpha = alpha;

    std::set<CandidateSet> distinct;
    for (const auto& b : profile.ballots()) {
        if (!b.empty()) distinct.insert(b);
    }
    if (distinct.empty()) return report;
    std::vector<CandidateSet> generators(distinct.begin(), distinct.end());
    auto closed = intersection_closure(generators, options.max_sets_per_level);

    for (const auto& t : closed) {
        const int cohesion_cap = std::min(t.count(), k);
        std::vector<int> supporters;
        for (int v = 0; v < n; ++v) {
            if (t.is_subset_of(profile.ballot(v))) supporters.push_back(v);
        }
        // Prefixes in ascending overlap order realize the minimum average
        // satisfaction among supporter groups of each size.
        std::stable_sort(supporters.begin(), supporters.end(),
                         [&](int a, int b) { return counts[a] < counts[b]; });
        std::int64_t sat_sum = 0;
        for (std::size_t i = 0; i < supporters.size(); ++i) {
            sat_sum += counts[supporters[i]];
            const std::int64_t v = static_cast<std::int64_t>(i) + 1;
            // avs < cohesion_cap
            if (!(sat_sum < static_cast<std::int64_t>(cohesion_cap) * v)) continue;
            // avs < alpha*v*k/n - 1
            int128 lhs = static_cast<int128>(sat_sum) * alpha.den * n;
            int128 rhs = (static_cast<int128>(alpha.num) * v * k -
                          static_cast<int128>(alpha.den) * n) *
                         v;
            if (lhs < rhs) {
                double large_term = alpha.value() * static_cast<double>(v) * k / n - 1.0;
                double lambda = std::min(static_cast<double>(cohesion_cap), large_term);
                report.satisfied = false;
                report.witness = FairnessWitness{
                    t.to_vector(),
                    std::vector<int>(supporters.begin(), supporters.begin() + v), lambda};
                return report;
            }
        }
    }
    return report;
}

double avs(const FiniteProfile& profile, const Committee& committee,
           const std::vector<int>& voters) {
    if (voters.empty()) throw ValidationError("avs needs a nonempty voter group");
    std::int64_t sum = 0;
    for (int v : voters) sum += profile.ballot(v).intersect_count(committee.mask());
    return static_cast<double>(sum) / static_cast<double>(voters.size());
}

double avs_lower_bound(const FiniteProfile& profile, const Committee& committee,
                       const std::vector<int>& voters) {
    if (voters.empty()) throw ValidationError("avs bound needs a nonempty voter group");
    CandidateSet common = profile.ballot(voters[0]);
    for (std::size_t i = 1; i < voters.size(); ++i) common = common & profile.ballot(voters[i]);
    const double first = common.count();

    CommitteeScorer scorer(profile, committee);
    std::int64_t scaled = scorer.delta_star_scaled();
    if (scaled == 0) return first;
    double ds = static_cast<double>(scaled) /
                (static_cast<double>(scorer.scale()) * profile.voter_count());
    double second =
        static_cast<double>(voters.size()) / (static_cast<double>(profile.voter_count()) * ds) -
        1.0;
    return std::min(first, second);
}

bool witness_valid(const FiniteProfile& profile, const Committee& committee, Axiom axiom,
                   Alpha alpha, const FairnessWitness& witness) {
    const int n = profile.voter_count();
    const int k = committee.k();
    if (witness.voters.empty()) return false;
    CandidateSet t = CandidateSet::from_indices(profile.candidate_count(), witness.candidates);
    for (int v : witness.voters) {
        if (!t.is_subset_of(profile.ballot(v))) return false;
    }
    switch (axiom) {
        case Axiom::JR: {
            if (t.count() != 1 || t.intersects(committee.mask())) return false;
            for (int v : witness.voters) {
                if (profile.ballot(v).intersects(committee.mask())) return false;
            }
            return static_cast<std::int64_t>(witness.voters.size()) * k >= n;
        }
        case Axiom::EJR: {
            const int level = static_cast<int>(witness.level);
            if (level < 1 || level > k || t.count() < level) return false;
            for (int v : witness.voters) {
                if (profile.ballot(v).intersect_count(committee.mask()) >= level) return false;
            }
            int128 lhs = static_cast<int128>(witness.voters.size()) * alpha.num * k;
            int128 rhs = static_cast<int128>(level) * alpha.den * n;
            return lhs >= rhs;
        }
        case Axiom::OAS: {
            const double lambda = witness.level;
            if (lambda < 0.0 || lambda > k || t.count() < lambda) return false;
            double group_avs = avs(profile, committee, witness.voters);
            if (!(group_avs < lambda)) return false;
            // group must be (lambda+1)/alpha - large
            double requirement = (lambda + 1.0) / alpha.value() * n / k;
            return static_cast<double>(witness.voters.size()) + 1e-9 >= requirement;
        }
    }
    return false;
}

FairnessReport check_jr(const Population& population, const Committee& committee) {
    const int k = committee.k();
    FairnessReport report;
    report.axiom = Axiom::JR;
    for (int c = 0; c < population.candidate_count(); ++c) {
        if (committee.contains(c)) continue;
        if (population.solo_mass(c, committee.mask()) >= Rational(1, k)) {
            report.satisfied = false;
            report.witness = FairnessWitness{{c}, {}, 1.0};
            return report;
        }
    }
    return report;
}

}  // namespace qpav
