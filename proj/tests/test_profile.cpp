#include "doctest.h"

#include "qpav/population.hpp"
#include "qpav/profile.hpp"

#include "support/reference.hpp"

using namespace qpav;

TEST_CASE("profile construction and validation") {
    FiniteProfile p = make_profile({{0}, {1, 2}}, 3);
    CHECK(p.voter_count() == 2);
    CHECK(p.candidate_count() == 3);
    CHECK(p.approval_count(0) == 1);
    CHECK(p.approvers(2) == std::vector<int>{1});

    CHECK_NOTHROW(make_profile({{}}, 1));  // empty ballot is a valid ballot
    CHECK_THROWS_AS(make_profile({{3}}, 3), ValidationError);
    CHECK_THROWS_AS(make_profile({}, 3), ValidationError);
}

TEST_CASE("filter_popular removes near-unanimous candidates") {
    // candidate 0 approved by everyone, candidate 1 by one voter of three
    FiniteProfile p = make_profile({{0, 1}, {0}, {0, 2}}, 3);
    FilterResult r = filter_popular(p, 0.6);
    CHECK(r.removed == std::vector<int>{0});
    CHECK(r.kept == std::vector<int>{1, 2});
    CHECK(r.profile.candidate_count() == 2);
    CHECK(r.profile.ballot(0).contains(0));   // old candidate 1
    CHECK(r.profile.ballot(2).contains(1));   // old candidate 2
    CHECK(r.to_original(0) == 1);

    FiniteProfile two_block = two_block_profile();
    FilterResult unchanged = filter_popular(two_block, 0.6);
    CHECK(unchanged.removed.empty());
    CHECK(unchanged.profile.candidate_count() == 3);

    CHECK_THROWS_AS(filter_popular(p, 0.0), ValidationError);
    CHECK_THROWS_AS(filter_popular(p, 1.5), ValidationError);
}

TEST_CASE("filter_popular is idempotent") {
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        FiniteProfile p = testing::random_profile(rng, 12, 6, 0.5);
        try {
            FilterResult once = filter_popular(p, 0.4);
            FilterResult twice = filter_popular(once.profile, 0.4);
            CHECK(twice.removed.empty());
        } catch (const ValidationError&) {
            // every candidate above threshold; nothing to check
        }
    }
}

TEST_CASE("fig1a distribution") {
    SubsetDistribution d = fig1a_distribution(3);
    CHECK(d.ell == 3);
    CHECK(d.special == 1);
    CHECK(d.weight_of({1}) == Rational(1, 2));
    CHECK(d.weight_of({2, 3}) == Rational(1, 2));
    CHECK(d.weight_of({1, 2}) == 0);

    SubsetDistribution wide = fig1a_distribution(5);
    CHECK(wide.weight_of({2, 3, 4, 5}) == Rational(1, 2));
    CHECK_THROWS_AS(fig1a_distribution(2), ValidationError);
}

TEST_CASE("product population closed forms") {
    ProductPopulation pop = gen_product_population(6, 0, 4);
    CHECK(pop.approval_probability(0) == Rational(1, 2));
    CHECK(pop.approval_probability(3) == Rational(1, 8));
    CHECK_THROWS_AS(gen_product_population(6, 0, 3), ValidationError);
    CHECK_THROWS_AS(gen_product_population(4, 0, 4), ValidationError);

    CandidateSet only_special = CandidateSet::of(6, {0});
    ExactResponse r = pop.exact_query(only_special);
    CHECK(r.mass_exact(only_special) == Rational(1, 2));
    CHECK(r.mass_exact(CandidateSet(6)) == Rational(1, 2));

    // fraction approving the special candidate but nobody in a k-set W
    // avoiding it: (2/k)(1 - 1/(2k))^k = 0.2931 at k = 4
    CandidateSet w = CandidateSet::of(6, {1, 2, 3, 4});
    double solo = to_double(pop.solo_mass(0, w));
    CHECK(solo == doctest::Approx(0.29309082).epsilon(1e-6));
}

TEST_CASE("adversary population construction") {
    SubsetDistribution d = fig1a_distribution(3);

    AdversaryPopulation one_party = gen_adversary_population(d, 9, 2, 2, 7);
    CHECK(one_party.parties() == 1);
    CHECK(one_party.remainder() == 0);
    CHECK(one_party.hidden_support(0).size() == 3);
    // population-level approval of the distinguished candidate is 1/2
    CandidateSet none(9);
    CHECK(one_party.solo_mass(one_party.distinguished(0), none) == Rational(1, 2));

    AdversaryPopulation two_parties = gen_adversary_population(d, 9, 4, 2, 7);
    CHECK(two_parties.parties() == 2);
    CHECK(two_parties.remainder() == 0);
    CHECK(two_parties.pool(0).size() == 4);

    CHECK_THROWS_AS(gen_adversary_population(d, 4, 4, 2, 7), ValidationError);
}

TEST_CASE("adversary hidden sets are seed-deterministic") {
    SubsetDistribution d = fig1a_distribution(3);
    AdversaryPopulation a = gen_adversary_population(d, 12, 4, 2, 99);
    AdversaryPopulation b = gen_adversary_population(d, 12, 4, 2, 99);
    AdversaryPopulation c = gen_adversary_population(d, 12, 4, 2, 100);
    for (int i = 0; i < a.parties(); ++i) {
        CHECK(a.hidden_order(i) == b.hidden_order(i));
    }
    bool all_equal = true;
    for (int i = 0; i < a.parties(); ++i) {
        if (a.hidden_order(i) != c.hidden_order(i)) all_equal = false;
    }
    CHECK_FALSE(all_equal);
}

TEST_CASE("solo support of the distinguished candidate meets the quota") {
    // weight of voters approving exactly {c_s*} is x_{s*} * k0/k >= 1/k
    // whenever x_{s*} >= 1/k0
    SubsetDistribution d = fig1a_distribution(4);
    for (int k : {2, 4, 6}) {
        AdversaryPopulation pop = gen_adversary_population(d, 16, k, 2, 5);
        for (int i = 0; i < pop.parties(); ++i) {
            int star = pop.distinguished(i);
            CandidateSet everyone_else = CandidateSet::full(16);
            everyone_else.remove(star);
            Rational only_star = pop.solo_mass(star, everyone_else);
            CHECK(only_star == Rational(1, 2) * Rational(2, k));
            CHECK(only_star >= Rational(1, k));
        }
    }
}

TEST_CASE("mixture materialization uses largest remainders") {
    MixturePopulation pop = fig1a_distribution(3).to_population();
    FiniteProfile p3 = pop.materialize(3);
    CHECK(p3.voter_count() == 3);
    // weights 1/2, 1/2 at n=3: floors 1,1; leftover goes to the lower index
    CHECK(p3.approval_count(0) == 2);
    CHECK(p3.approval_count(1) == 1);

    FiniteProfile p10 = pop.materialize(10);
    CHECK(p10.approval_count(0) == 5);
    CHECK_THROWS_AS(pop.materialize(0), ValidationError);
}

TEST_CASE("mixture weights must sum to one") {
    std::vector<std::pair<CandidateSet, Rational>> bad;
    bad.emplace_back(CandidateSet::of(2, {0}), Rational(1, 2));
    CHECK_THROWS_AS(MixturePopulation(2, std::move(bad)), ValidationError);
}
