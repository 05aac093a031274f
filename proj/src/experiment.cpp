#include "bpir/experiment.hpp"

namespace bpir {

namespace {

// Sub-stream tags for one simulation seed.
enum : std::uint64_t { kMessages = 1, kByzantine = 2, kStrategy = 3, kSession = 4 };

} // namespace

RunReport run_simulation(const SystemParams& params, const std::string& strategy_spec,
                         std::uint64_t seed, const SimulationOptions& options) {
    params.validate();
    const PrimeField field(params.field_modulus);

    const MessageStore store =
        MessageStore::random(field, params.num_messages, params.block_len(),
                             params.blocks, derive_seed(seed, kMessages));

    std::vector<int> byzantine =
        options.byzantine
            ? *options.byzantine
            : sample_byzantine_set(params.num_databases, params.num_byzantine,
                                   derive_seed(seed, kByzantine));
    if (static_cast<int>(byzantine.size()) != params.num_byzantine) {
        throw InvalidParams("byzantine set size must equal B");
    }
    for (int db : byzantine) {
        if (db < 0 || db >= params.num_databases) {
            throw InvalidParams("byzantine database index out of range");
        }
    }

    Farm farm;
    farm.store = &store;
    farm.strategy =
        make_strategy(strategy_spec, byzantine, derive_seed(seed, kStrategy), params);

    Rng session_rng(derive_seed(seed, kSession));
    EngineOptions engine_options;
    engine_options.exec = options.exec;
    engine_options.keep_transcript = options.keep_transcript;

    RunReport report;
    report.params = params;
    report.strategy = strategy_spec;
    report.seed = seed;
    report.byzantine = farm.strategy.byzantine;
    report.outcome = run_retrieval(params, farm, session_rng, engine_options);
    report.rate = Rational(params.message_len(), report.outcome.ledger.total());
    report.decode_ok = report.outcome.decoded == store.message(params.theta0());
    return report;
}

RateReport measure_rate(const SystemParams& params, const std::string& strategy_spec,
                        std::uint64_t seed, const SimulationOptions& options) {
    RateReport report;
    report.run = run_simulation(params, strategy_spec, seed, options);
    report.rate = report.run.rate;
    report.capacity_value = capacity(CapacityFormula::ByzMulti, params.num_databases,
                                     params.num_messages, params.num_byzantine);
    report.capacity_gap = report.capacity_value - report.rate;
    return report;
}

} // namespace bpir
