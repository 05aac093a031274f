#include "bpir/engine.hpp"

#include <algorithm>
#include <string>

namespace bpir {

namespace {

// Value of sum-type coordinate t for one block: coordinate t of a length
// N*c query vector was answered by database t mod N at its (t div N)-th row
// of that type.
inline Elem type_value(const SessionPlan& plan, const std::vector<AnswerVector>& answers,
                       long long block, const TypeLayout& type, long long t) {
    const int N = plan.params.num_databases;
    const int db = static_cast<int>(t % N);
    const long long row = block * plan.rows_per_block + type.row_offset + t / N;
    return answers[db].values[row];
}

long long round1_symbol_count(const std::vector<AnswerVector>& answers) {
    long long total = 0;
    for (const auto& a : answers) total += static_cast<long long>(a.values.size());
    return total;
}

} // namespace

BlockScanResult scan_block(const SessionPlan& plan,
                           const std::vector<AnswerVector>& round1_answers,
                           long long block, const std::set<int>& ignore) {
    const int N = plan.params.num_databases;
    const SubsetMask theta_bit = SubsetMask{1} << plan.params.theta0();

    BlockScanResult result;
    result.block = block;

    // Undesired sum types first: each is the head of its [N*alpha_s, alpha_s]
    // code, with the tail (riding inside mixed rows) and the ignored
    // databases erased.
    for (const auto& type : plan.types) {
        if (type.mask & theta_bit) continue;
        const MdsCode& code = plan.undesired_codes[type.size - 1];
        ReceivedWord word{code, std::vector<std::optional<Elem>>(code.length())};
        for (long long t = 0; t < type.length; ++t) {
            if (ignore.count(static_cast<int>(t % N))) continue;
            word.values[t] = type_value(plan, round1_answers, block, type, t);
        }
        const DetectResult det = detect(word);
        if (!det.consistent) {
            result.status = BlockStatus::ErrorBlock;
            return result;
        }
        result.undesired_sums[type.mask] = det.message;
    }

    // Mixed and pure-desired rows: subtract the recomputed interference and
    // check the concatenated desired word.
    ReceivedWord word{plan.desired_code,
                      std::vector<std::optional<Elem>>(plan.desired_code.length())};
    for (const auto& type : plan.types) {
        if (!(type.mask & theta_bit)) continue;
        const long long offset = plan.desired_offsets.at(type.mask);
        const SubsetMask undesired_part = type.mask & ~theta_bit;
        const MdsCode* ucode = nullptr;
        const std::vector<Elem>* mixture_sum = nullptr;
        long long head_len = 0;
        if (undesired_part != 0) {
            ucode = &plan.undesired_codes[subset_size(undesired_part) - 1];
            mixture_sum = &result.undesired_sums.at(undesired_part);
            head_len = plan.type_layout(undesired_part).length;
        }
        for (long long t = 0; t < type.length; ++t) {
            if (ignore.count(static_cast<int>(t % N))) continue;
            Elem v = type_value(plan, round1_answers, block, type, t);
            if (undesired_part != 0) {
                const Elem interference =
                    dot(plan.field, ucode->generator().row(head_len + t),
                        mixture_sum->data(), mixture_sum->size());
                v = plan.field.sub(v, interference);
            }
            word.values[offset + t] = v;
        }
    }
    const DetectResult det = detect(word);
    if (!det.consistent) {
        result.status = BlockStatus::ErrorBlock;
        return result;
    }
    result.status = BlockStatus::Clean;
    result.desired_mixed = det.message;
    return result;
}

std::vector<long long> scan_round1(const SessionPlan& plan,
                                   const std::vector<AnswerVector>& round1_answers,
                                   const std::set<int>& ignore, Exec exec) {
    const long long blocks = plan.params.blocks;
    std::vector<char> is_error(blocks, 0);
    parallel_for(exec, static_cast<std::size_t>(blocks), [&](std::size_t j) {
        const BlockScanResult res =
            scan_block(plan, round1_answers, static_cast<long long>(j), ignore);
        is_error[j] = res.status == BlockStatus::ErrorBlock ? 1 : 0;
    });
    std::vector<long long> errors;
    for (long long j = 0; j < blocks; ++j) {
        if (is_error[j]) errors.push_back(j);
    }
    return errors;
}

long long select_error_block(const std::vector<long long>& error_blocks, Rng& rng) {
    if (error_blocks.empty()) throw EmptyErrorSet("no error blocks to choose from");
    return error_blocks[rng.uniform_below(error_blocks.size())];
}

std::vector<std::vector<Elem>> decode_retransmission(
    const SessionPlan& plan, const std::vector<AnswerVector>& answers) {
    if (!plan.retransmit_code) {
        throw InvalidParams("plan has no retransmission code");
    }
    const MdsCode& code = *plan.retransmit_code;
    const int N = plan.params.num_databases;
    const int K = plan.params.num_messages;
    const long long alpha = plan.params.alpha();

    std::vector<std::vector<Elem>> blocks;
    blocks.reserve(K);
    for (int k = 0; k < K; ++k) {
        ReceivedWord word{code, std::vector<std::optional<Elem>>(code.length())};
        for (int db = 0; db < N; ++db) {
            for (long long i = 0; i < alpha; ++i) {
                word.values[db + i * N] = answers[db].values[k * alpha + i];
            }
        }
        blocks.push_back(correct(word));
    }
    return blocks;
}

std::vector<int> identify(const SessionPlan& plan, long long block,
                          const std::vector<std::vector<Elem>>& true_blocks,
                          const std::vector<AnswerVector>& round1_answers,
                          const std::set<int>& caught) {
    const int N = plan.params.num_databases;
    std::vector<int> newly;
    for (int db = 0; db < N; ++db) {
        if (caught.count(db)) continue;
        bool mismatch = false;
        for (const auto& type : plan.types) {
            for (long long i = 0; i < type.per_db && !mismatch; ++i) {
                const long long t = db + i * N;
                Elem expect = 0;
                for (int k = 0; k < plan.params.num_messages; ++k) {
                    if (!(type.mask & (SubsetMask{1} << k))) continue;
                    const Elem* coeffs = plan.coeff_row(type.mask, k, t);
                    expect = plan.field.add(
                        expect, dot(plan.field, coeffs, true_blocks[k].data(),
                                    true_blocks[k].size()));
                }
                const long long row = block * plan.rows_per_block + type.row_offset + i;
                if (round1_answers[db].values[row] != expect) mismatch = true;
            }
            if (mismatch) break;
        }
        if (mismatch) newly.push_back(db);
    }
    if (newly.empty()) {
        throw InternalInconsistency(
            "identification found no new byzantine database for error block " +
            std::to_string(block));
    }
    return newly;
}

RetrievalOutcome run_retrieval(const SystemParams& params, const Farm& farm, Rng& rng,
                               const EngineOptions& options) {
    params.validate();
    const SessionPlan plan = plan_session(params, rng);
    const int theta = params.theta0();
    const long long blen = params.block_len();

    RetrievalOutcome outcome;
    if (options.keep_transcript) outcome.transcript.emplace();

    std::vector<Query> round1_queries = build_round1_queries(plan);
    const std::vector<AnswerVector> round1_answers =
        respond(farm, plan, round1_queries, 1, options.exec);
    outcome.ledger.per_round.push_back(round1_symbol_count(round1_answers));
    if (options.keep_transcript) {
        outcome.transcript->rounds.push_back(
            RoundRecord{1, round1_queries, round1_answers});
    }
    round1_queries.clear();
    round1_queries.shrink_to_fit();

    std::set<int> caught;
    std::vector<long long> errors = scan_round1(plan, round1_answers, caught, options.exec);

    int round = 1;
    while (!errors.empty()) {
        ++round;
        if (round > params.num_byzantine + 1) {
            throw InternalInconsistency("session exceeded the B+1 round bound");
        }
        const long long chosen = select_error_block(errors, rng);
        const std::vector<Query> queries = build_retransmit_query(plan, chosen, round);
        const std::vector<AnswerVector> answers =
            respond(farm, plan, queries, round, options.exec);
        outcome.ledger.per_round.push_back(round1_symbol_count(answers));
        if (options.keep_transcript) {
            outcome.transcript->rounds.push_back(RoundRecord{round, queries, answers});
        }

        const std::vector<std::vector<Elem>> true_blocks =
            decode_retransmission(plan, answers);
        const std::vector<int> newly =
            identify(plan, chosen, true_blocks, round1_answers, caught);
        caught.insert(newly.begin(), newly.end());
        outcome.catches_per_round.push_back(static_cast<int>(newly.size()));

        // Re-scan only the previous error set: blocks outside it were already
        // certified clean under a subset of the current erasures.
        std::vector<char> still_error(errors.size(), 0);
        parallel_for(options.exec, errors.size(), [&](std::size_t i) {
            const BlockScanResult res = scan_block(plan, round1_answers, errors[i], caught);
            still_error[i] = res.status == BlockStatus::ErrorBlock ? 1 : 0;
        });
        std::vector<long long> next;
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (still_error[i]) next.push_back(errors[i]);
        }
        errors = std::move(next);
    }
    outcome.rounds_used = round;

    // Final decoding: erase every caught database and decode each block from
    // the certified-clean remainder.
    outcome.decoded.assign(params.message_len(), 0);
    parallel_for(options.exec, static_cast<std::size_t>(params.blocks), [&](std::size_t j) {
        const BlockScanResult res = scan_block(plan, round1_answers, j, caught);
        if (res.status != BlockStatus::Clean) {
            throw InternalInconsistency("block " + std::to_string(j) +
                                        " still inconsistent at final decoding");
        }
        const std::vector<Elem> x = solve_linear(plan.mixers[theta], res.desired_mixed);
        std::copy(x.begin(), x.end(), outcome.decoded.begin() + j * blen);
    });

    outcome.caught.assign(caught.begin(), caught.end());
    return outcome;
}

} // namespace bpir
