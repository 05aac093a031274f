#include <doctest.h>

#include "bpir/farm.hpp"

using namespace bpir;

namespace {

struct Setup {
    SystemParams params;
    SessionPlan plan;
    MessageStore store;
    std::vector<Query> queries;
};

Setup make_setup(std::uint64_t seed) {
    SystemParams p;
    p.num_databases = 6;
    p.num_messages = 2;
    p.num_byzantine = 2;
    p.blocks = 4;
    p.desired_index = 1;
    Rng rng(seed);
    SessionPlan plan = plan_session(p, rng);
    MessageStore store = MessageStore::random(plan.field, 2, 16, 4, seed + 1);
    std::vector<Query> queries = build_round1_queries(plan);
    return Setup{p, std::move(plan), std::move(store), std::move(queries)};
}

} // namespace

TEST_CASE("byzantine set sampling is deterministic and in range") {
    const auto set1 = sample_byzantine_set(6, 2, 123);
    const auto set2 = sample_byzantine_set(6, 2, 123);
    CHECK(set1 == set2);
    CHECK(set1.size() == 2);
    for (int db : set1) {
        CHECK(db >= 0);
        CHECK(db < 6);
    }
    CHECK(sample_byzantine_set(6, 2, 124) != set1); // seed-dependent (holds here)
}

TEST_CASE("honest databases always return exact answers") {
    const Setup s = make_setup(5);
    for (const char* name :
         {"no_attack", "corrupt_all_blocks", "corrupt_fraction:0.5", "single_symbol",
          "one_db_only", "round2_only", "random_replace", "worst_case"}) {
        Farm farm;
        farm.store = &s.store;
        farm.strategy = make_strategy(name, {1, 4}, 777, s.params);
        const auto answers = respond(farm, s.plan, s.queries, 1);
        for (int db = 0; db < 6; ++db) {
            if (db == 1 || db == 4) continue;
            const AnswerVector honest = honest_answer(s.queries[db], s.store, s.plan.field);
            CHECK(answers[db].values == honest.values);
        }
    }
}

TEST_CASE("no_attack and corrupt_fraction(0) leave every answer intact") {
    const Setup s = make_setup(6);
    for (const char* name : {"no_attack", "corrupt_fraction:0"}) {
        Farm farm;
        farm.store = &s.store;
        farm.strategy = make_strategy(name, {0, 3}, 9, s.params);
        const auto answers = respond(farm, s.plan, s.queries, 1);
        for (int db = 0; db < 6; ++db) {
            CHECK(answers[db].values == honest_answer(s.queries[db], s.store, s.plan.field).values);
        }
    }
}

TEST_CASE("corrupt_all_blocks damages every block of the byzantine databases") {
    const Setup s = make_setup(7);
    Farm farm;
    farm.store = &s.store;
    farm.strategy = make_strategy("corrupt_all_blocks", {1, 4}, 11, s.params);
    const auto answers = respond(farm, s.plan, s.queries, 1);
    for (int db : {1, 4}) {
        const AnswerVector honest = honest_answer(s.queries[db], s.store, s.plan.field);
        for (long long j = 0; j < s.params.blocks; ++j) {
            bool differs = false;
            for (long long r = j * 5; r < (j + 1) * 5; ++r) {
                if (answers[db].values[r] != honest.values[r]) differs = true;
            }
            CHECK(differs);
        }
    }
}

TEST_CASE("single_symbol corrupts exactly one value of one block") {
    const Setup s = make_setup(8);
    Farm farm;
    farm.store = &s.store;
    farm.strategy = make_strategy("single_symbol", {2, 5}, 13, s.params);
    const auto answers = respond(farm, s.plan, s.queries, 1);
    int diffs = 0;
    for (int db = 0; db < 6; ++db) {
        const AnswerVector honest = honest_answer(s.queries[db], s.store, s.plan.field);
        for (std::size_t r = 0; r < honest.values.size(); ++r) {
            if (answers[db].values[r] != honest.values[r]) ++diffs;
        }
    }
    CHECK(diffs == 1);
}

TEST_CASE("strategies are deterministic given identical seeds") {
    const Setup s = make_setup(9);
    for (const char* name : {"corrupt_fraction:0.7", "random_replace"}) {
        Farm f1, f2;
        f1.store = &s.store;
        f2.store = &s.store;
        f1.strategy = make_strategy(name, {0, 2}, 42, s.params);
        f2.strategy = make_strategy(name, {0, 2}, 42, s.params);
        const auto a1 = respond(f1, s.plan, s.queries, 1);
        const auto a2 = respond(f2, s.plan, s.queries, 1);
        for (int db = 0; db < 6; ++db) CHECK(a1[db].values == a2[db].values);
    }
}

TEST_CASE("round2_only is indistinguishable from no_attack in round 1") {
    const Setup s = make_setup(10);
    Farm farm;
    farm.store = &s.store;
    farm.strategy = make_strategy("round2_only", {1, 3}, 15, s.params);
    const auto answers = respond(farm, s.plan, s.queries, 1);
    for (int db = 0; db < 6; ++db) {
        CHECK(answers[db].values ==
              honest_answer(s.queries[db], s.store, s.plan.field).values);
    }
    // ...but round 2 answers are corrupted
    const auto rq = build_retransmit_query(s.plan, 0, 2);
    const auto r2 = respond(farm, s.plan, rq, 2);
    for (int db : {1, 3}) {
        CHECK(r2[db].values != honest_answer(rq[db], s.store, s.plan.field).values);
    }
}

TEST_CASE("strategy parsing errors") {
    SystemParams p;
    p.num_databases = 6;
    p.num_messages = 2;
    p.num_byzantine = 2;
    p.blocks = 1; // worst_case needs at least B blocks
    p.desired_index = 1;
    CHECK_THROWS_AS(make_strategy("nope", {0, 1}, 1, p), InvalidParams);
    CHECK_THROWS_AS(make_strategy("corrupt_fraction:x", {0, 1}, 1, p), InvalidParams);
    CHECK_THROWS_AS(make_strategy("corrupt_fraction:1.5", {0, 1}, 1, p), InvalidParams);
    CHECK_THROWS_AS(make_strategy("worst_case", {0, 1}, 1, p), InvalidParams);
    CHECK(builtin_strategy_names().size() == 8);
}
