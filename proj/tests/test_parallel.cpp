#include <doctest.h>

#include <atomic>

#include "bpir/audit.hpp"
#include "bpir/experiment.hpp"
#include "bpir/parallel.hpp"

using namespace bpir;

TEST_CASE("parallel_for covers every index exactly once") {
    std::vector<std::atomic<int>> hits(1000);
    for (auto& h : hits) h = 0;
    parallel_for(Exec::Parallel, hits.size(), [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) CHECK(h == 1);
}

TEST_CASE("parallel_for rethrows exceptions from the loop body") {
    CHECK_THROWS_AS(
        parallel_for(Exec::Parallel, 64,
                     [&](std::size_t i) {
                         if (i == 17) throw InvalidParams("boom");
                     }),
        InvalidParams);
}

TEST_CASE("simulation outcomes are identical under both execution policies") {
    SystemParams p;
    p.num_databases = 5;
    p.num_messages = 2;
    p.num_byzantine = 2;
    p.blocks = 12;
    p.desired_index = 2;

    for (const char* strategy : {"worst_case", "corrupt_fraction:0.5", "random_replace"}) {
        SimulationOptions serial;
        serial.exec = Exec::Serial;
        SimulationOptions parallel;
        parallel.exec = Exec::Parallel;
        const RunReport a = run_simulation(p, strategy, 4242, serial);
        const RunReport b = run_simulation(p, strategy, 4242, parallel);
        CHECK(a.outcome.decoded == b.outcome.decoded);
        CHECK(a.outcome.caught == b.outcome.caught);
        CHECK(a.outcome.rounds_used == b.outcome.rounds_used);
        CHECK(a.outcome.ledger.per_round == b.outcome.ledger.per_round);
        CHECK(a.decode_ok);
        CHECK(b.decode_ok);
    }
}

TEST_CASE("privacy audit histograms agree across execution policies") {
    SystemParams p;
    p.num_databases = 3;
    p.num_messages = 2;
    p.num_byzantine = 1;
    p.blocks = 1;
    p.field_modulus = 5;
    p.desired_index = 1;

    PrivacyAuditOptions serial;
    serial.samples = 3000;
    serial.exec = Exec::Serial;
    PrivacyAuditOptions parallel = serial;
    parallel.exec = Exec::Parallel;

    const PrivacyAuditReport a = privacy_audit(p, 555, serial);
    const PrivacyAuditReport b = privacy_audit(p, 555, parallel);
    CHECK(a.max_tv == doctest::Approx(b.max_tv).epsilon(1e-12));
    CHECK(a.max_tv_per_db == b.max_tv_per_db);
}
