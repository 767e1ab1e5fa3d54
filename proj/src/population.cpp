#include "qpav/population.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace qpav {

Rational ExactResponse::mass_exact(const CandidateSet& pattern) const {
    for (const auto& [p, w] : entries) {
        if (p == pattern) return w;
    }
    return Rational(0);
}

Rational ExactResponse::total() const {
    Rational t = 0;
    for (const auto& [p, w] : entries) t += w;
    return t;
}

Rational Population::solo_mass(int candidate, const CandidateSet& blockers) const {
    if (blockers.contains(candidate)) return Rational(0);
    CandidateSet q = blockers;
    q.add(candidate);
    ExactResponse r = exact_query(q);
    CandidateSet solo(candidate_count());
    solo.add(candidate);
    return r.mass_exact(solo);
}

// ---------------------------------------------------------------------------
// ProfilePopulation
// ---------------------------------------------------------------------------

ExactResponse ProfilePopulation::exact_query(const CandidateSet& query) const {
    std::map<CandidateSet, std::int64_t> counts;
    for (const auto& ballot : profile_.ballots()) counts[ballot & query]++;
    ExactResponse out;
    out.query = query;
    const int n = profile_.voter_count();
    out.entries.reserve(counts.size());
    for (const auto& [pattern, count] : counts) {
        out.entries.emplace_back(pattern, Rational(count, n));
    }
    return out;
}

CandidateSet ProfilePopulation::sample_ballot(const CandidateSet& query, Rng& rng) const {
    int voter = static_cast<int>(rng.below(profile_.voter_count()));
    return profile_.ballot(voter) & query;
}

Rational ProfilePopulation::solo_mass(int candidate, const CandidateSet& blockers) const {
    if (blockers.contains(candidate)) return Rational(0);
    std::int64_t count = 0;
    for (int v : profile_.approvers(candidate)) {
        if (!profile_.ballot(v).intersects(blockers)) count++;
    }
    return Rational(count, profile_.voter_count());
}

std::optional<Rational> ProfilePopulation::exact_delta_add(const Committee& committee,
                                                           int candidate) const {
    if (committee.contains(candidate)) throw ValidationError("candidate already on committee");
    Rational sum = 0;
    for (int v : profile_.approvers(candidate)) {
        sum += Rational(1, profile_.ballot(v).intersect_count(committee.mask()) + 1);
    }
    return sum / profile_.voter_count();
}

// ---------------------------------------------------------------------------
// MixturePopulation
// ---------------------------------------------------------------------------

MixturePopulation::MixturePopulation(int candidate_count,
                                     std::vector<std::pair<CandidateSet, Rational>> types)
    : m_(candidate_count), types_(std::move(types)) {
    if (m_ < 1) throw ValidationError("mixture needs at least one candidate");
    if (types_.empty()) throw ValidationError("mixture needs at least one ballot type");
    Rational total = 0;
    for (const auto& [ballot, weight] : types_) {
        if (ballot.universe() != m_) throw ValidationError("ballot universe mismatch in mixture");
        if (weight < 0) throw ValidationError("mixture weights must be nonnegative");
        total += weight;
    }
    if (total != 1) throw ValidationError("mixture weights must sum to 1");
    cumulative_.reserve(types_.size());
    double acc = 0.0;
    for (const auto& [ballot, weight] : types_) {
        acc += to_double(weight);
        cumulative_.push_back(acc);
    }
    cumulative_.back() = 1.0;
}

ExactResponse MixturePopulation::exact_query(const CandidateSet& query) const {
    std::map<CandidateSet, Rational> masses;
    for (const auto& [ballot, weight] : types_) masses[ballot & query] += weight;
    ExactResponse out;
    out.query = query;
    for (auto& [pattern, weight] : masses) {
        if (weight != 0) out.entries.emplace_back(pattern, weight);
    }
    return out;
}

CandidateSet MixturePopulation::sample_ballot(const CandidateSet& query, Rng& rng) const {
    double u = rng.next_double();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    std::size_t idx = std::min<std::size_t>(it - cumulative_.begin(), types_.size() - 1);
    return types_[idx].first & query;
}

Rational MixturePopulation::solo_mass(int candidate, const CandidateSet& blockers) const {
    if (blockers.contains(candidate)) return Rational(0);
    Rational mass = 0;
    for (const auto& [ballot, weight] : types_) {
        if (ballot.contains(candidate) && !ballot.intersects(blockers)) mass += weight;
    }
    return mass;
}

std::optional<Rational> MixturePopulation::exact_delta_add(const Committee& committee,
                                                           int candidate) const {
    if (committee.contains(candidate)) throw ValidationError("candidate already on committee");
    Rational sum = 0;
    for (const auto& [ballot, weight] : types_) {
        if (ballot.contains(candidate)) {
            sum += weight / (ballot.intersect_count(committee.mask()) + 1);
        }
    }
    return sum;
}

FiniteProfile MixturePopulation::materialize(int n) const {
    if (n < 1) throw ValidationError("materialize needs at least one voter");
    // Largest-remainder rounding: floor each weight*n, then hand the leftover
    // voters to the types with the largest remainders (lower index first).
    std::vector<std::int64_t> counts(types_.size());
    std::vector<std::pair<Rational, std::size_t>> remainders;
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < types_.size(); ++i) {
        Rational exact = types_[i].second * n;
        Rational fl = Rational(boost::multiprecision::numerator(exact) /
                               boost::multiprecision::denominator(exact));
        counts[i] = fl.convert_to<std::int64_t>();
        assigned += counts[i];
        remainders.emplace_back(exact - fl, i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::int64_t leftover = n - assigned; leftover > 0; --leftover) {
        counts[remainders[n - assigned - leftover].second]++;
    }
    std::vector<CandidateSet> ballots;
    ballots.reserve(n);
    for (std::size_t i = 0; i < types_.size(); ++i) {
        for (std::int64_t c = 0; c < counts[i]; ++c) ballots.push_back(types_[i].first);
    }
    return FiniteProfile(std::move(ballots), m_);
}

// ---------------------------------------------------------------------------
// ProductPopulation
// ---------------------------------------------------------------------------

ProductPopulation::ProductPopulation(int candidate_count, int special, int k)
    : m_(candidate_count), special_(special), k_(k) {
    if (k < 4) throw ValidationError("product population requires k >= 4");
    if (m_ <= k) throw ValidationError("product population requires m > k");
    if (special < 0 || special >= m_) throw ValidationError("special candidate out of range");
}

ProductPopulation gen_product_population(int candidate_count, int special, int k) {
    return ProductPopulation(candidate_count, special, k);
}

Rational ProductPopulation::approval_probability(int candidate) const {
    if (candidate < 0 || candidate >= m_) throw ValidationError("candidate out of range");
    return candidate == special_ ? Rational(2, k_) : Rational(1, 2 * std::int64_t(k_));
}

ExactResponse ProductPopulation::exact_query(const CandidateSet& query) const {
    std::vector<int> ids = query.to_vector();
    if (ids.size() > 20) throw BudgetError("product exact query limited to 20 candidates");
    ExactResponse out;
    out.query = query;
    const std::size_t total = std::size_t(1) << ids.size();
    out.entries.reserve(total);
    for (std::size_t bits = 0; bits < total; ++bits) {
        CandidateSet pattern(m_);
        Rational w = 1;
        for (std::size_t j = 0; j < ids.size(); ++j) {
            Rational p = approval_probability(ids[j]);
            if (bits & (std::size_t(1) << j)) {
                pattern.add(ids[j]);
                w *= p;
            } else {
                w *= 1 - p;
            }
        }
        out.entries.emplace_back(std::move(pattern), std::move(w));
    }
    return out;
}

CandidateSet ProductPopulation::sample_ballot(const CandidateSet& query, Rng& rng) const {
    CandidateSet out(m_);
    query.for_each([&](int c) {
        if (rng.bernoulli(to_double(approval_probability(c)))) out.add(c);
    });
    return out;
}

Rational ProductPopulation::solo_mass(int candidate, const CandidateSet& blockers) const {
    if (blockers.contains(candidate)) return Rational(0);
    Rational mass = approval_probability(candidate);
    blockers.for_each([&](int b) { mass *= 1 - approval_probability(b); });
    return mass;
}

// ---------------------------------------------------------------------------
// SubsetDistribution
// ---------------------------------------------------------------------------

void SubsetDistribution::validate() const {
    if (ell < 1) throw ValidationError("subset distribution needs ell >= 1");
    if (special < 1 || special > ell) throw ValidationError("distinguished element out of range");
    Rational total = 0;
    for (const auto& [set, weight] : entries) {
        if (weight < 0) throw ValidationError("subset weights must be nonnegative");
        for (int e : set) {
            if (e < 1 || e > ell) throw ValidationError("subset element out of range");
        }
        total += weight;
    }
    if (total != 1) throw ValidationError("subset weights must sum to 1");
}

Rational SubsetDistribution::weight_of(const std::vector<int>& set) const {
    std::vector<int> sorted = set;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [s, w] : entries) {
        std::vector<int> t = s;
        std::sort(t.begin(), t.end());
        if (t == sorted) return w;
    }
    return Rational(0);
}

Rational SubsetDistribution::marginal(const std::vector<int>& t) const {
    Rational mass = 0;
    for (const auto& [s, w] : entries) {
        bool contains_all = true;
        for (int e : t) {
            if (std::find(s.begin(), s.end(), e) == s.end()) {
                contains_all = false;
                break;
            }
        }
        if (contains_all) mass += w;
    }
    return mass;
}

MixturePopulation SubsetDistribution::to_population() const {
    validate();
    std::vector<std::pair<CandidateSet, Rational>> types;
    Rational listed = 0;
    for (const auto& [set, weight] : entries) {
        CandidateSet ballot(ell);
        for (int e : set) ballot.add(e - 1);
        types.emplace_back(std::move(ballot), weight);
        listed += weight;
    }
    if (listed != 1) types.emplace_back(CandidateSet(ell), 1 - listed);
    return MixturePopulation(ell, std::move(types));
}

SubsetDistribution fig1a_distribution(int ell) {
    if (ell < 3) throw ValidationError("fig1a family requires ell >= 3");
    SubsetDistribution d;
    d.ell = ell;
    d.special = 1;
    d.entries.emplace_back(std::vector<int>{1}, Rational(1, 2));
    std::vector<int> rest;
    for (int e = 2; e <= ell; ++e) rest.push_back(e);
    d.entries.emplace_back(std::move(rest), Rational(1, 2));
    return d;
}

// ---------------------------------------------------------------------------
// AdversaryPopulation
// ---------------------------------------------------------------------------

std::vector<int> AdversaryPopulation::hidden_support(int party) const {
    std::vector<int> support = hidden_[party];
    std::sort(support.begin(), support.end());
    return support;
}

int AdversaryPopulation::distinguished(int party) const {
    return hidden_[party][special_ - 1];
}

AdversaryPopulation gen_adversary_population(const SubsetDistribution& dist, int m, int k, int k0,
                                             std::uint64_t seed) {
    dist.validate();
    if (k0 < 1 || k0 > k) throw ValidationError("need 1 <= k0 <= k");
    const int ell = dist.ell;
    const int p = k / k0;
    const int r = k % k0;
    if (p < 1) throw ValidationError("need at least one full party (k >= k0)");
    const int pool_size = (m - r) / p;
    if (pool_size < ell) throw ValidationError("candidate pools too small for hidden subsets");
    if (m - p * pool_size < r) throw ValidationError("not enough remainder candidates");

    AdversaryPopulation pop;
    pop.k_ = k;
    pop.k0_ = k0;
    pop.p_ = p;
    pop.r_ = r;
    pop.special_ = dist.special;

    int next = 0;
    for (int i = 0; i < p; ++i) {
        std::vector<int> pool(pool_size);
        for (int j = 0; j < pool_size; ++j) pool[j] = next++;
        pop.pools_.push_back(std::move(pool));
    }
    for (int j = 0; j < r; ++j) pop.solo_.push_back(next++);

    // Hidden ordered subsets, one independent child stream per party.
    Rng rng(seed);
    for (int i = 0; i < p; ++i) {
        Rng party_rng = rng.child(i);
        std::vector<int> order = party_rng.sample_distinct(pool_size, ell);
        std::vector<int> hidden(ell);
        for (int j = 0; j < ell; ++j) hidden[j] = pop.pools_[i][order[j]];
        pop.hidden_.push_back(std::move(hidden));
    }

    std::vector<std::pair<CandidateSet, Rational>> types;
    Rational party_weight(k0, k);
    for (int i = 0; i < p; ++i) {
        for (const auto& [set, weight] : dist.entries) {
            if (weight == 0) continue;
            CandidateSet ballot(m);
            for (int e : set) ballot.add(pop.hidden_[i][e - 1]);
            if (!ballot.empty()) types.emplace_back(std::move(ballot), weight * party_weight);
        }
    }
    for (int j = 0; j < r; ++j) {
        CandidateSet ballot(m);
        ballot.add(pop.solo_[j]);
        types.emplace_back(std::move(ballot), Rational(1, k));
    }
    Rational listed = 0;
    for (const auto& [b, w] : types) listed += w;
    if (listed != 1) types.emplace_back(CandidateSet(m), 1 - listed);
    pop.mixture_ = std::make_shared<MixturePopulation>(m, std::move(types));
    return pop;
}

}  // namespace qpav
