#include <map>
#include <sstream>

#include "doctest.h"

#include "qpav/query.hpp"

#include "support/reference.hpp"

using namespace qpav;

TEST_CASE("exact queries return the subset distribution") {
    ProfilePopulation pop(two_block_profile());
    CandidateSet q = CandidateSet::of(3, {0, 1});
    ExactResponse r = exact_query(pop, q);
    CHECK(r.mass_exact(CandidateSet::of(3, {0})) == Rational(1, 2));
    CHECK(r.mass_exact(CandidateSet::of(3, {1})) == Rational(1, 2));
    CHECK(r.mass_exact(CandidateSet::of(3, {0, 1})) == 0);
    CHECK(r.total() == 1);

    ProductPopulation prod = gen_product_population(8, 2, 4);
    ExactResponse pr = exact_query(prod, CandidateSet::of(8, {2}));
    CHECK(pr.mass_exact(CandidateSet::of(8, {2})) == Rational(2, 4));

    CHECK_THROWS_AS(exact_query(pop, CandidateSet(3)), ValidationError);
}

TEST_CASE("exact responses always sum to one") {
    Rng rng(41);
    for (int i = 0; i < 30; ++i) {
        FiniteProfile p = testing::random_profile(rng, rng.uniform_int(1, 10),
                                                  rng.uniform_int(2, 8));
        ProfilePopulation pop(p);
        CandidateSet q(p.candidate_count());
        for (int c = 0; c < p.candidate_count(); ++c) {
            if (rng.bernoulli(0.6)) q.add(c);
        }
        if (q.empty()) q.add(0);
        CHECK(exact_query(pop, q).total() == 1);
    }
    MixturePopulation mix = fig1a_distribution(4).to_population();
    CHECK(exact_query(mix, CandidateSet::of(4, {0, 2, 3})).total() == 1);
    ProductPopulation prod = gen_product_population(9, 0, 5);
    CHECK(exact_query(prod, CandidateSet::of(9, {0, 1, 2, 3})).total() == 1);
}

TEST_CASE("noisy queries match the exact distribution in frequency") {
    MixturePopulation pop = fig1a_distribution(3).to_population();
    CandidateSet q = CandidateSet::full(3);
    Rng rng(1234);
    int singleton = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        BallotResponse r = noisy_query(pop, q, rng);
        if (r.approved == CandidateSet::of(3, {0})) singleton++;
    }
    double freq = static_cast<double>(singleton) / draws;
    CHECK(freq == doctest::Approx(0.5).epsilon(0.04));  // Hoeffding width at 1e4

    // single ballot type: deterministic response
    std::vector<std::pair<CandidateSet, Rational>> types;
    types.emplace_back(CandidateSet::of(2, {1}), Rational(1));
    MixturePopulation point(2, std::move(types));
    for (int i = 0; i < 5; ++i) {
        CHECK(noisy_query(point, CandidateSet::full(2), rng).approved ==
              CandidateSet::of(2, {1}));
    }
}

TEST_CASE("cover plans") {
    Committee w(10, {0, 1, 2});
    auto plan = plan_cover(10, w, 5);
    CHECK(plan.size() == 4);  // ceil(7/2)
    CandidateSet covered(10);
    for (const auto& q : plan) {
        CHECK(w.mask().is_subset_of(q));
        CHECK(q.count() <= 5);
        covered = covered | q;
    }
    CHECK(covered == CandidateSet::full(10));
    // padded final query reaches full size
    CHECK(plan.back().count() == 5);

    Committee small(4, {0, 1});
    auto single = plan_cover(4, small, 4);
    CHECK(single.size() == 1);
    CHECK(single[0] == CandidateSet::full(4));

    CHECK_THROWS_AS(plan_cover(10, w, 3), ValidationError);
}

TEST_CASE("cover plan size matches the ceiling formula") {
    Rng rng(42);
    for (int i = 0; i < 50; ++i) {
        int m = rng.uniform_int(3, 30);
        int k = rng.uniform_int(1, m - 2);
        int t = rng.uniform_int(k + 1, m);
        auto plan = plan_cover(m, testing::random_committee(rng, m, k), t);
        CHECK(static_cast<std::int64_t>(plan.size()) == (m - k + (t - k) - 1) / (t - k));
    }
}

TEST_CASE("single-ballot estimators") {
    Committee w(4, {0});
    BallotResponse approves_b{CandidateSet::of(4, {0, 1}), CandidateSet::of(4, {1})};
    CHECK(ballot_delta_add(approves_b, w, 1) == doctest::Approx(1.0));
    CHECK(ballot_delta_swap(approves_b, w, 1, 0) == doctest::Approx(1.0));

    BallotResponse approves_none{CandidateSet::of(4, {0, 1}), CandidateSet(4)};
    CHECK(ballot_delta_add(approves_none, w, 1) == doctest::Approx(0.0));
    CHECK(ballot_delta_swap(approves_none, w, 1, 0) == doctest::Approx(0.0));

    BallotResponse approves_both{CandidateSet::of(4, {0, 1}), CandidateSet::of(4, {0, 1})};
    CHECK(ballot_delta_swap(approves_both, w, 1, 0) == doctest::Approx(0.0));

    BallotResponse uncovered{CandidateSet::of(4, {1, 2}), CandidateSet(4)};
    CHECK_THROWS_AS(ballot_delta_add(uncovered, w, 1), ValidationError);
}

TEST_CASE("voter-averaged estimators equal the exact deltas") {
    Rng rng(43);
    for (int i = 0; i < 100; ++i) {
        int m = rng.uniform_int(2, 8);
        int k = rng.uniform_int(1, m - 1);
        int n = rng.uniform_int(1, 12);
        FiniteProfile p = testing::random_profile(rng, n, m);
        Committee w = testing::random_committee(rng, m, k);
        int x = -1, y = w.members()[0];
        for (int c = 0; c < m; ++c) {
            if (!w.contains(c)) x = c;
        }
        CandidateSet query = w.mask();
        query.add(x);

        double add_sum = 0.0, swap_sum = 0.0;
        for (int v = 0; v < n; ++v) {
            BallotResponse r{query, p.ballot(v) & query};
            add_sum += ballot_delta_add(r, w, x);
            swap_sum += ballot_delta_swap(r, w, x, y);
        }
        CHECK(add_sum / n ==
              doctest::Approx(testing::delta_add_rescore(p, w, x)).epsilon(1e-12));
        CHECK(swap_sum / n ==
              doctest::Approx(testing::delta_swap_rescore(p, w, x, y)).epsilon(1e-12));
    }
}

TEST_CASE("query log round trip") {
    QueryLog log;
    log.append(CandidateSet::of(4, {0, 1, 2}), CandidateSet::of(4, {1}));
    log.append(CandidateSet::of(4, {0, 3}), CandidateSet(4));
    CHECK(log.size() == 2);
    CHECK(log[1].index == 1);
    CHECK_THROWS_AS(log.append(CandidateSet::of(4, {0}), CandidateSet::of(4, {1})),
                    ValidationError);

    std::stringstream buffer;
    log.write_jsonl(buffer);
    QueryLog replayed = QueryLog::read_jsonl(buffer, 4);
    REQUIRE(replayed.size() == 2);
    CHECK(replayed[0].query == log[0].query);
    CHECK(replayed[0].approved == log[0].approved);
    CHECK(replayed[1].approved == log[1].approved);
}

TEST_CASE("per-index child streams reproduce draws") {
    MixturePopulation pop = fig1a_distribution(3).to_population();
    CandidateSet q = CandidateSet::full(3);
    Rng base(99);
    for (int i = 0; i < 10; ++i) {
        Rng first = base.child(i);
        Rng second = base.child(i);
        CHECK(noisy_query(pop, q, first).approved == noisy_query(pop, q, second).approved);
    }
    // streams are independent of how much of the parent was consumed
    Rng consumed(99);
    consumed.next_u64();
    Rng replay = consumed.child(3);
    Rng fresh = Rng(99).child(3);
    CHECK(replay.next_u64() == fresh.next_u64());
}
