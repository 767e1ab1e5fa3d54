#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qpav/candidate_set.hpp"
#include "qpav/committee.hpp"
#include "qpav/errors.hpp"
#include "qpav/profile.hpp"
#include "qpav/rational.hpp"
#include "qpav/rng.hpp"

namespace qpav {

/// Exact answer to a query: the measure of voters whose approval set,
/// restricted to the query, equals each pattern. Sparse: only patterns with
/// positive mass are listed. Masses are exact rationals summing to 1.
struct ExactResponse {
    CandidateSet query;
    std::vector<std::pair<CandidateSet, Rational>> entries;

    Rational mass_exact(const CandidateSet& pattern) const;
    double mass(const CandidateSet& pattern) const { return to_double(mass_exact(pattern)); }
    Rational total() const;
};

/// A source of approval opinions. Implementations answer exact
/// subset-distribution queries and sample single-voter ballots restricted to
/// a query set. Immutable after construction; safe to share across readers.
class Population {
public:
    virtual ~Population() = default;

    virtual int candidate_count() const = 0;

    /// Exact distribution of ballot patterns within `query`.
    virtual ExactResponse exact_query(const CandidateSet& query) const = 0;

    /// One voter drawn fresh from the population (with replacement),
    /// restricted to `query`.
    virtual CandidateSet sample_ballot(const CandidateSet& query, Rng& rng) const = 0;

    /// Measure of voters approving `candidate` and nobody in `blockers`.
    /// Returns 0 when candidate is itself a blocker. Default implementation
    /// marginalizes an exact query over {candidate} | blockers.
    virtual Rational solo_mass(int candidate, const CandidateSet& blockers) const;

    /// Exact marginal PAV gain of adding `candidate` to `committee`, when the
    /// population supports full-information audits.
    virtual std::optional<Rational> exact_delta_add(const Committee& committee, int candidate) const {
        (void)committee;
        (void)candidate;
        return std::nullopt;
    }
};

/// Population backed by a concrete finite profile; all measures are counts/n.
class ProfilePopulation : public Population {
public:
    explicit ProfilePopulation(FiniteProfile profile) : profile_(std::move(profile)) {}

    int candidate_count() const override { return profile_.candidate_count(); }
    ExactResponse exact_query(const CandidateSet& query) const override;
    CandidateSet sample_ballot(const CandidateSet& query, Rng& rng) const override;
    Rational solo_mass(int candidate, const CandidateSet& blockers) const override;
    std::optional<Rational> exact_delta_add(const Committee& committee, int candidate) const override;

    const FiniteProfile& profile() const { return profile_; }

private:
    FiniteProfile profile_;
};

/// Weighted mixture of ballot types with exact rational weights summing to 1.
/// Represents population-level instances without fixing a voter count.
class MixturePopulation : public Population {
public:
    MixturePopulation(int candidate_count, std::vector<std::pair<CandidateSet, Rational>> types);

    int candidate_count() const override { return m_; }
    ExactResponse exact_query(const CandidateSet& query) const override;
    CandidateSet sample_ballot(const CandidateSet& query, Rng& rng) const override;
    Rational solo_mass(int candidate, const CandidateSet& blockers) const override;
    std::optional<Rational> exact_delta_add(const Committee& committee, int candidate) const override;

    const std::vector<std::pair<CandidateSet, Rational>>& types() const { return types_; }

    /// Rounds type weights to a concrete n-voter profile by largest-remainder
    /// rounding (ties broken by lower type index).
    FiniteProfile materialize(int n) const;

private:
    int m_;
    std::vector<std::pair<CandidateSet, Rational>> types_;
    std::vector<double> cumulative_;
};

/// Independent-approval population with one special candidate approved at
/// rate 2/k while every other candidate is approved at rate 1/(2k).
class ProductPopulation : public Population {
public:
    ProductPopulation(int candidate_count, int special, int k);

    int candidate_count() const override { return m_; }
    int special() const { return special_; }
    int k() const { return k_; }
    Rational approval_probability(int candidate) const;

    /// Dense over subsets of the query; the query size is capped (default 20
    /// bits) because the response has 2^|query| entries.
    ExactResponse exact_query(const CandidateSet& query) const override;
    CandidateSet sample_ballot(const CandidateSet& query, Rng& rng) const override;
    Rational solo_mass(int candidate, const CandidateSet& blockers) const override;

private:
    int m_;
    int special_;
    int k_;
};

ProductPopulation gen_product_population(int candidate_count, int special, int k);

/// A sparse probability distribution over subsets of {1, ..., ell} with a
/// distinguished element s*. Element values are 1-based.
struct SubsetDistribution {
    int ell = 0;
    int special = 1;  // s*, in [1, ell]
    std::vector<std::pair<std::vector<int>, Rational>> entries;

    void validate() const;
    Rational weight_of(const std::vector<int>& set) const;
    /// Total weight of sets containing every element of `t`.
    Rational marginal(const std::vector<int>& t) const;

    /// Identity embedding onto candidates 0..ell-1 (element e -> candidate e-1).
    MixturePopulation to_population() const;
};

/// Distribution putting weight 1/2 on {1} and 1/2 on {2, ..., ell}
/// (the `fig1a` generator family; requires ell >= 3).
SubsetDistribution fig1a_distribution(int ell);

/// Party-structured population hiding one distinguished candidate per party.
/// Candidates are partitioned into p equal pools plus a remainder pool; each
/// party i realizes the subset distribution on a seeded random ordered
/// ell-subset of its pool, and each of r singleton parties approves one
/// remainder candidate.
class AdversaryPopulation : public Population {
public:
    int candidate_count() const override { return mixture_->candidate_count(); }
    ExactResponse exact_query(const CandidateSet& query) const override {
        return mixture_->exact_query(query);
    }
    CandidateSet sample_ballot(const CandidateSet& query, Rng& rng) const override {
        return mixture_->sample_ballot(query, rng);
    }
    Rational solo_mass(int candidate, const CandidateSet& blockers) const override {
        return mixture_->solo_mass(candidate, blockers);
    }
    std::optional<Rational> exact_delta_add(const Committee& committee, int candidate) const override {
        return mixture_->exact_delta_add(committee, candidate);
    }

    const MixturePopulation& mixture() const { return *mixture_; }
    int parties() const { return p_; }
    int remainder() const { return r_; }
    int k() const { return k_; }
    int k0() const { return k0_; }

    /// The hidden ordered subset of party i (positions are 1-based elements).
    const std::vector<int>& hidden_order(int party) const { return hidden_[party]; }
    /// The hidden subset of party i as a sorted set: learnable from
    /// low-order marginals, unlike the ordering.
    std::vector<int> hidden_support(int party) const;
    /// The candidate playing s* within party i.
    int distinguished(int party) const;
    /// Pool of candidates assigned to party i.
    const std::vector<int>& pool(int party) const { return pools_[party]; }
    /// The remainder candidates d_j, one per singleton party.
    const std::vector<int>& solo_candidates() const { return solo_; }

    friend AdversaryPopulation gen_adversary_population(const SubsetDistribution& dist, int m,
                                                        int k, int k0, std::uint64_t seed);

private:
    AdversaryPopulation() = default;

    std::shared_ptr<MixturePopulation> mixture_;
    int k_ = 0, k0_ = 0, p_ = 0, r_ = 0;
    int special_ = 1;
    std::vector<std::vector<int>> pools_;
    std::vector<std::vector<int>> hidden_;
    std::vector<int> solo_;
};

AdversaryPopulation gen_adversary_population(const SubsetDistribution& dist, int m, int k, int k0,
                                             std::uint64_t seed);

}  // namespace qpav
