#include "bpir/farm.hpp"

#include <algorithm>

namespace bpir {

namespace {

// Replaces values[idx] with a uniformly chosen different element.
void corrupt_symbol(std::vector<Elem>& values, std::size_t idx, Rng& rng,
                    std::uint64_t q) {
    values[idx] = (values[idx] + 1 + rng.uniform_below(q - 1)) % q;
}

// Round-1 answers hold l blocks of rows_per_block values; later rounds hold
// a single block.
struct Slice {
    std::size_t begin, len;
};

Slice block_slice(const AttackContext& ctx, long long block, std::size_t total) {
    if (ctx.round == 1) {
        const std::size_t rpb = ctx.plan->rows_per_block;
        return Slice{static_cast<std::size_t>(block) * rpb, rpb};
    }
    return Slice{0, total};
}

Rng block_rng(const AttackContext& ctx, long long block) {
    return Rng(derive_seed(ctx.seed, static_cast<std::uint64_t>(ctx.db),
                           static_cast<std::uint64_t>(ctx.round),
                           static_cast<std::uint64_t>(block + 1)));
}

void corrupt_whole_answer(const AttackContext& ctx, std::vector<Elem>& values) {
    const std::uint64_t q = ctx.plan->field.modulus();
    Rng rng = block_rng(ctx, ctx.block);
    for (std::size_t i = 0; i < values.size(); ++i) corrupt_symbol(values, i, rng, q);
}

} // namespace

bool AdversaryStrategy::is_byzantine(int db) const {
    return std::binary_search(byzantine.begin(), byzantine.end(), db);
}

int AdversaryStrategy::byz_index(int db) const {
    const auto it = std::lower_bound(byzantine.begin(), byzantine.end(), db);
    if (it == byzantine.end() || *it != db) return -1;
    return static_cast<int>(it - byzantine.begin());
}

std::vector<std::string> builtin_strategy_names() {
    return {"no_attack",   "corrupt_all_blocks", "corrupt_fraction", "single_symbol",
            "one_db_only", "round2_only",        "random_replace",   "worst_case"};
}

std::vector<int> sample_byzantine_set(int num_databases, int num_byzantine,
                                      std::uint64_t seed) {
    if (num_byzantine < 0 || num_byzantine > num_databases) {
        throw InvalidParams("byzantine set size out of range");
    }
    std::vector<int> all(num_databases);
    for (int i = 0; i < num_databases; ++i) all[i] = i;
    Rng rng(derive_seed(seed, 0xb52));
    // partial Fisher-Yates
    for (int i = 0; i < num_byzantine; ++i) {
        const std::size_t j = i + rng.uniform_below(num_databases - i);
        std::swap(all[i], all[j]);
    }
    std::vector<int> picked(all.begin(), all.begin() + num_byzantine);
    std::sort(picked.begin(), picked.end());
    return picked;
}

AdversaryStrategy make_strategy(const std::string& spec, std::vector<int> byzantine,
                                std::uint64_t seed, const SystemParams& params) {
    std::sort(byzantine.begin(), byzantine.end());
    std::string name = spec;
    std::string param;
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        param = spec.substr(colon + 1);
    }

    AdversaryStrategy strategy;
    strategy.name = spec;
    strategy.byzantine = std::move(byzantine);
    strategy.seed = seed;

    if (name == "no_attack") {
        strategy.behavior = [](const AttackContext&, std::vector<Elem>&) {};
    } else if (name == "corrupt_all_blocks") {
        strategy.behavior = [](const AttackContext& ctx, std::vector<Elem>& values) {
            const std::uint64_t q = ctx.plan->field.modulus();
            if (ctx.round == 1) {
                for (long long j = 0; j < ctx.plan->params.blocks; ++j) {
                    Rng rng = block_rng(ctx, j);
                    const Slice s = block_slice(ctx, j, values.size());
                    for (std::size_t i = 0; i < s.len; ++i) {
                        corrupt_symbol(values, s.begin + i, rng, q);
                    }
                }
            } else {
                corrupt_whole_answer(ctx, values);
            }
        };
    } else if (name == "corrupt_fraction") {
        double p = 0.0;
        try {
            p = std::stod(param);
        } catch (...) {
            throw InvalidParams("corrupt_fraction needs a probability, e.g. corrupt_fraction:0.3");
        }
        if (p < 0.0 || p > 1.0) throw InvalidParams("corrupt_fraction probability out of [0,1]");
        strategy.behavior = [p](const AttackContext& ctx, std::vector<Elem>& values) {
            const std::uint64_t q = ctx.plan->field.modulus();
            const long long blocks = ctx.round == 1 ? ctx.plan->params.blocks : 1;
            for (long long j = 0; j < blocks; ++j) {
                const long long block = ctx.round == 1 ? j : ctx.block;
                Rng rng = block_rng(ctx, block);
                if (!rng.coin(p)) continue;
                const Slice s = block_slice(ctx, j, values.size());
                corrupt_symbol(values, s.begin + rng.uniform_below(s.len), rng, q);
            }
        };
    } else if (name == "single_symbol") {
        strategy.behavior = [](const AttackContext& ctx, std::vector<Elem>& values) {
            if (ctx.byz_index != 0 || ctx.round != 1) return;
            Rng rng = block_rng(ctx, 0);
            corrupt_symbol(values, 0, rng, ctx.plan->field.modulus());
        };
    } else if (name == "one_db_only") {
        strategy.behavior = [](const AttackContext& ctx, std::vector<Elem>& values) {
            if (ctx.byz_index != 0) return;
            const std::uint64_t q = ctx.plan->field.modulus();
            if (ctx.round == 1) {
                for (long long j = 0; j < ctx.plan->params.blocks; ++j) {
                    Rng rng = block_rng(ctx, j);
                    const Slice s = block_slice(ctx, j, values.size());
                    for (std::size_t i = 0; i < s.len; ++i) {
                        corrupt_symbol(values, s.begin + i, rng, q);
                    }
                }
            } else {
                corrupt_whole_answer(ctx, values);
            }
        };
    } else if (name == "round2_only") {
        strategy.behavior = [](const AttackContext& ctx, std::vector<Elem>& values) {
            if (ctx.round >= 2) corrupt_whole_answer(ctx, values);
        };
    } else if (name == "random_replace") {
        strategy.behavior = [](const AttackContext& ctx, std::vector<Elem>& values) {
            const std::uint64_t q = ctx.plan->field.modulus();
            Rng rng = block_rng(ctx, ctx.block);
            for (auto& v : values) v = rng.uniform_below(q);
        };
    } else if (name == "worst_case") {
        // Byzantine database i corrupts only block i of Round 1, so each
        // identification round catches exactly one of them: B+1 rounds total.
        if (params.blocks < params.num_byzantine) {
            throw InvalidParams("worst_case needs at least B blocks");
        }
        strategy.behavior = [](const AttackContext& ctx, std::vector<Elem>& values) {
            if (ctx.round != 1) return;
            const std::uint64_t q = ctx.plan->field.modulus();
            const long long j = ctx.byz_index;
            Rng rng = block_rng(ctx, j);
            const Slice s = block_slice(ctx, j, values.size());
            for (std::size_t i = 0; i < s.len; ++i) {
                corrupt_symbol(values, s.begin + i, rng, q);
            }
        };
    } else {
        throw InvalidParams("unknown strategy '" + name + "'");
    }
    return strategy;
}

std::vector<AnswerVector> respond(const Farm& farm, const SessionPlan& plan,
                                  const std::vector<Query>& queries, int round,
                                  Exec exec) {
    const int N = plan.params.num_databases;
    if (static_cast<int>(queries.size()) != N) {
        throw DimensionMismatch("expected one query per database");
    }
    std::vector<AnswerVector> answers(N);
    const long long block = round >= 2 && !queries[0].rows.empty()
                                ? queries[0].rows[0].block
                                : -1;
    for (int db = 0; db < N; ++db) {
        const Query& query = queries[db];
        AnswerVector answer;
        answer.db = db;
        answer.round = round;
        answer.values.assign(query.rows.size(), 0);
        parallel_for(exec, query.rows.size(), [&](std::size_t i) {
            const QueryRow& row = query.rows[i];
            Elem acc = 0;
            for (const auto& term : row.terms) {
                const Elem partial = dot(plan.field, term.coeffs.data(),
                                         farm.store->block(term.message, row.block),
                                         term.coeffs.size());
                acc = plan.field.add(acc, partial);
            }
            answer.values[i] = acc;
        });
        const int byz_index = farm.strategy.byz_index(db);
        if (byz_index >= 0 && farm.strategy.behavior) {
            AttackContext ctx;
            ctx.plan = &plan;
            ctx.db = db;
            ctx.byz_index = byz_index;
            ctx.round = round;
            ctx.block = block;
            ctx.seed = farm.strategy.seed;
            const std::size_t before = answer.values.size();
            farm.strategy.behavior(ctx, answer.values);
            if (answer.values.size() != before) {
                throw InternalInconsistency("strategy changed the answer length");
            }
        }
        answers[db] = std::move(answer);
    }
    return answers;
}

} // namespace bpir
