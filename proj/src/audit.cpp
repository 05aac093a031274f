#include "bpir/audit.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "bpir/experiment.hpp"
#include "bpir/serialize.hpp"

namespace bpir {

namespace {

double total_variation(const std::map<std::string, long long>& h1,
                       const std::map<std::string, long long>& h2, long long n1,
                       long long n2) {
    double tv = 0.0;
    auto it1 = h1.begin();
    auto it2 = h2.begin();
    while (it1 != h1.end() || it2 != h2.end()) {
        double p = 0.0, q = 0.0;
        if (it2 == h2.end() || (it1 != h1.end() && it1->first < it2->first)) {
            p = static_cast<double>(it1->second) / n1;
            ++it1;
        } else if (it1 == h1.end() || it2->first < it1->first) {
            q = static_cast<double>(it2->second) / n2;
            ++it2;
        } else {
            p = static_cast<double>(it1->second) / n1;
            q = static_cast<double>(it2->second) / n2;
            ++it1;
            ++it2;
        }
        tv += std::abs(p - q);
    }
    return tv / 2.0;
}

} // namespace

std::string query_structure_signature(const Query& query, int num_messages,
                                      long long block_len) {
    std::string sig;
    for (int k = 0; k < num_messages; ++k) {
        const std::size_t rows = query.rows.size();
        std::string row_mask(rows, '0');
        std::string col_mask(static_cast<std::size_t>(block_len), '0');
        for (std::size_t r = 0; r < rows; ++r) {
            for (const auto& term : query.rows[r].terms) {
                if (term.message != k) continue;
                for (long long c = 0; c < block_len; ++c) {
                    if (term.coeffs[c] != 0) {
                        row_mask[r] = '1';
                        col_mask[c] = '1';
                    }
                }
            }
        }
        sig += "m" + std::to_string(k) + ":" + row_mask + ":" + col_mask + ";";
    }
    return sig;
}

namespace {

// Rank of message k's coefficient matrix over the plan's field; appended to
// the structure signature by the audit (the bare signature function cannot
// see the field).
std::string full_signature(const SessionPlan& plan, const Query& query) {
    std::string sig = query_structure_signature(query, plan.params.num_messages,
                                                plan.params.block_len());
    const long long blen = plan.params.block_len();
    for (int k = 0; k < plan.params.num_messages; ++k) {
        FieldMatrix m(plan.field, query.rows.size(), blen);
        for (std::size_t r = 0; r < query.rows.size(); ++r) {
            for (const auto& term : query.rows[r].terms) {
                if (term.message != k) continue;
                for (long long c = 0; c < blen; ++c) m.at(r, c) = term.coeffs[c];
            }
        }
        sig += "r" + std::to_string(k) + "=" + std::to_string(m.rank()) + ";";
    }
    return sig;
}

} // namespace

PrivacyAuditReport privacy_audit(const SystemParams& params, std::uint64_t seed,
                                 const PrivacyAuditOptions& options) {
    const int N = params.num_databases;
    const int K = params.num_messages;
    const long long samples = options.samples;

    PrivacyAuditReport report;
    report.samples = samples;
    report.threshold = options.threshold;
    report.negative_control = options.negative_control;
    report.inconclusive = samples < options.min_samples;

    // histograms[theta][db] over signature keys
    std::vector<std::vector<std::map<std::string, long long>>> histograms(
        K, std::vector<std::map<std::string, long long>>(N));

    for (int theta = 1; theta <= K; ++theta) {
        SystemParams p = params;
        p.desired_index = theta;
        p.blocks = 1;
        std::vector<std::vector<std::string>> keys(
            samples, std::vector<std::string>(N));
        parallel_for(options.exec, static_cast<std::size_t>(samples), [&](std::size_t s) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(theta), s));
            const SessionPlan plan = plan_round1(p, rng, !options.negative_control);
            const std::vector<Query> queries = build_round1_queries(plan);
            for (int db = 0; db < N; ++db) {
                keys[s][db] = full_signature(plan, queries[db]);
            }
        });
        for (long long s = 0; s < samples; ++s) {
            for (int db = 0; db < N; ++db) {
                ++histograms[theta - 1][db][keys[s][db]];
            }
        }
    }

    report.max_tv_per_db.assign(N, 0.0);
    for (int db = 0; db < N; ++db) {
        for (int t1 = 0; t1 < K; ++t1) {
            for (int t2 = t1 + 1; t2 < K; ++t2) {
                const double tv = total_variation(histograms[t1][db], histograms[t2][db],
                                                  samples, samples);
                report.max_tv_per_db[db] = std::max(report.max_tv_per_db[db], tv);
            }
        }
        report.max_tv = std::max(report.max_tv, report.max_tv_per_db[db]);
    }
    report.pass = !report.inconclusive && report.max_tv < options.threshold;
    return report;
}

RoundmAuditReport roundm_privacy_audit(const SystemParams& params,
                                       const std::string& strategy_spec,
                                       long long sessions, std::uint64_t seed,
                                       double threshold, Exec exec) {
    const int N = params.num_databases;
    const int K = params.num_messages;

    RoundmAuditReport report;
    report.sessions = sessions;
    report.threshold = threshold;

    std::vector<std::vector<std::map<std::string, long long>>> histograms(
        K, std::vector<std::map<std::string, long long>>(N));

    for (int theta = 1; theta <= K; ++theta) {
        SystemParams p = params;
        p.desired_index = theta;
        std::vector<std::vector<std::string>> keys(
            sessions, std::vector<std::string>(N));
        parallel_for(exec, static_cast<std::size_t>(sessions), [&](std::size_t s) {
            SimulationOptions sim;
            sim.exec = Exec::Serial;
            sim.keep_transcript = true;
            const RunReport run =
                run_simulation(p, strategy_spec, derive_seed(seed, s), sim);
            for (int db = 0; db < N; ++db) {
                std::string key;
                for (const auto& record : run.outcome.transcript->rounds) {
                    if (record.round < 2) continue;
                    for (std::uint64_t v : canonical_serialization(record.queries[db])) {
                        key += std::to_string(v);
                        key += ',';
                    }
                }
                keys[s][db] = std::move(key);
            }
        });
        for (long long s = 0; s < sessions; ++s) {
            for (int db = 0; db < N; ++db) {
                ++histograms[theta - 1][db][keys[s][db]];
            }
        }
    }

    for (int db = 0; db < N; ++db) {
        for (int t1 = 0; t1 < K; ++t1) {
            for (int t2 = t1 + 1; t2 < K; ++t2) {
                report.max_tv = std::max(
                    report.max_tv, total_variation(histograms[t1][db], histograms[t2][db],
                                                   sessions, sessions));
            }
        }
    }
    report.pass = report.max_tv < threshold;
    return report;
}

namespace {

std::string witness_transcript(const std::vector<Query>& queries,
                               const std::vector<AnswerVector>& answers) {
    nlohmann::json dbs = nlohmann::json::array();
    for (std::size_t i = 0; i < queries.size(); ++i) {
        dbs.push_back({{"db", static_cast<int>(i) + 1},
                       {"query", canonical_serialization(queries[i])},
                       {"answer", canonical_serialization(answers[i])}});
    }
    return nlohmann::json{{"observed", std::move(dbs)}}.dump(2);
}

} // namespace

WitnessReport ambiguity_witness(int num_databases, int num_byzantine, int num_messages,
                                std::uint64_t field_modulus, std::uint64_t seed) {
    const int N = num_databases;
    const int B = num_byzantine;
    const int K = num_messages;
    if (N < 1 || K < 1 || B < 0 || B > N) throw InvalidParams("witness parameter range");
    if (2 * B + 1 <= N) {
        throw InvalidParams("witness needs 2B+1 > N; at 2B+1 <= N the capacity is positive");
    }
    const PrimeField field(field_modulus);
    const long long msg_len = 8;

    const MessageStore real =
        MessageStore::random(field, K, msg_len, 1, derive_seed(seed, 1));
    MessageStore fake = MessageStore::random(field, K, msg_len, 1, derive_seed(seed, 2));
    // the fake realization must differ somewhere
    if (fake.message(0) == real.message(0)) {
        fake.message(0)[0] = field.add(fake.message(0)[0], 1);
    }

    // Fixed query plan: every database is asked for every symbol of every
    // message (the argument holds for any plan; this one is the bluntest).
    std::vector<Query> queries(N);
    for (int db = 0; db < N; ++db) {
        queries[db].db = db;
        queries[db].round = 1;
        for (int k = 0; k < K; ++k) {
            for (long long i = 0; i < msg_len; ++i) {
                QueryRow row;
                row.block = 0;
                row.sum_type = SubsetMask{1} << k;
                std::vector<Elem> unit(msg_len, 0);
                unit[i] = 1;
                row.terms.push_back(QueryTerm{k, std::move(unit)});
                queries[db].rows.push_back(std::move(row));
            }
        }
    }

    // World A: true store `real`, databases 1..B byzantine and answering as
    // if the store were `fake`. World B: true store `fake`, the other N-B
    // databases byzantine and answering from `real`.
    auto observe = [&](const MessageStore& truth, const MessageStore& lie,
                       bool low_ids_lie) {
        std::vector<AnswerVector> answers(N);
        for (int db = 0; db < N; ++db) {
            const bool lies = low_ids_lie ? db < B : db >= B;
            answers[db] = honest_answer(queries[db], lies ? lie : truth, field);
        }
        return answers;
    };

    WitnessReport report;
    report.num_databases = N;
    report.num_byzantine = B;
    report.num_messages = K;
    report.field_modulus = field_modulus;
    report.world_a_transcript = witness_transcript(queries, observe(real, fake, true));
    report.world_b_transcript = witness_transcript(queries, observe(fake, real, false));
    report.identical = report.world_a_transcript == report.world_b_transcript;
    return report;
}

} // namespace bpir
