#include "bpir/protocol.hpp"

#include <algorithm>
#include <string>

namespace bpir {

namespace {

long long ipow(long long base, int exp) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

void lex_subsets_rec(int count, int next, SubsetMask prefix, std::vector<SubsetMask>& out) {
    for (int e = next; e < count; ++e) {
        const SubsetMask mask = prefix | (SubsetMask{1} << e);
        out.push_back(mask);
        lex_subsets_rec(count, e + 1, mask, out);
    }
}

} // namespace

std::vector<SubsetMask> lex_subsets(int count) {
    std::vector<SubsetMask> out;
    lex_subsets_rec(count, 0, 0, out);
    return out;
}

int subset_size(SubsetMask mask) { return __builtin_popcount(mask); }

void SystemParams::validate() const {
    if (num_messages < 1) throw InvalidParams("need K >= 1");
    if (num_byzantine < 1) throw InvalidParams("need B >= 1 in simulation mode");
    if (2 * num_byzantine + 1 > num_databases) {
        throw InvalidParams("need 2B+1 <= N, got N=" + std::to_string(num_databases) +
                            " B=" + std::to_string(num_byzantine));
    }
    if (blocks < 1) throw InvalidParams("need l >= 1");
    if (desired_index < 1 || desired_index > num_messages) {
        throw InvalidParams("desired message index out of range");
    }
    if (alpha_override && *alpha_override < 1) {
        throw InvalidParams("alpha override must be positive");
    }
}

long long SystemParams::block_len() const {
    return ipow(num_databases - num_byzantine, num_messages);
}

long long SystemParams::message_len() const { return block_len() * blocks; }

long long SystemParams::alpha() const {
    if (alpha_override) return *alpha_override;
    const long long denom = num_databases - 2 * num_byzantine;
    return (block_len() + 1 + denom - 1) / denom;
}

long long SystemParams::rows_per_db_per_block() const {
    const long long base = num_databases - num_byzantine - 1;
    long long total = 0;
    for (int s = 1; s <= num_messages; ++s) {
        total += ipow(base, s - 1) * binom(num_messages, s);
    }
    return total;
}

MessageStore::MessageStore(int num_messages, long long block_len, long long blocks)
    : block_len_(block_len), blocks_(blocks),
      messages_(num_messages, std::vector<Elem>(block_len * blocks, 0)) {}

MessageStore MessageStore::random(const PrimeField& field, int num_messages,
                                  long long block_len, long long blocks,
                                  std::uint64_t seed) {
    MessageStore store(num_messages, block_len, blocks);
    for (int k = 0; k < num_messages; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        for (auto& sym : store.messages_[k]) sym = field.sample(rng);
    }
    return store;
}

std::vector<Elem> MessageStore::block_vec(int k, long long j) const {
    const Elem* p = block(k, j);
    return std::vector<Elem>(p, p + block_len_);
}

long long CostLedger::total() const {
    long long t = 0;
    for (long long v : per_round) t += v;
    return t;
}

const TypeLayout& SessionPlan::type_layout(SubsetMask mask) const {
    for (const auto& t : types) {
        if (t.mask == mask) return t;
    }
    throw InvalidParams("unknown sum type");
}

long long SessionPlan::alpha_s(int size) const {
    const long long nb = params.num_databases - params.num_byzantine;
    return nb * ipow(nb - 1, size - 1);
}

long long SessionPlan::mixture_rows() const {
    return ipow(params.num_databases - params.num_byzantine, params.num_messages - 1);
}

const Elem* SessionPlan::coeff_row(SubsetMask mask, int k, long long t) const {
    const int theta = params.theta0();
    if (k == theta) {
        return desired_stack.row(desired_offsets.at(mask) + t);
    }
    const SubsetMask theta_bit = SubsetMask{1} << theta;
    const SubsetMask undesired_part = mask & ~theta_bit;
    const auto& seg = undesired_segments[k].at(undesired_part);
    const long long row = seg.stack_offset + ((mask & theta_bit) ? seg.head_len : 0) + t;
    return undesired_stacks[k].row(row);
}

namespace {

SessionPlan make_plan(const SystemParams& params, Rng& rng, bool round1_only,
                      bool mix_randomness) {
    params.validate();
    const PrimeField field(params.field_modulus);
    const int N = params.num_databases;
    const int K = params.num_messages;
    const int B = params.num_byzantine;
    const int theta = params.theta0();
    const long long blen = params.block_len();
    const long long mixture_rows = ipow(N - B, K - 1);
    const long long desired_n = N * mixture_rows;
    const long long alpha = params.alpha();

    // Every code must fit the field: standard construction needs n <= q-1,
    // the extended one (audit) stretches to q+1.
    const std::uint64_t q = field.modulus();
    const long long max_round1_n = desired_n;
    const long long fit_limit =
        static_cast<long long>(round1_only ? q + 1 : q - 1);
    if (max_round1_n > fit_limit || (!round1_only && N * alpha > fit_limit)) {
        throw FieldTooSmall("field size " + std::to_string(q) +
                            " cannot host the session's codes");
    }
    if (params.alpha_override) {
        // The retransmission code must still correct B*alpha errors.
        if (!round1_only && 2 * B * alpha > N * alpha - blen) {
            throw InvalidParams("alpha override " + std::to_string(alpha) +
                                " leaves the retransmission code unable to correct " +
                                std::to_string(B * alpha) + " errors");
        }
    }

    auto build = [&](std::size_t n, std::size_t k) {
        return round1_only ? MdsCode::build_extended(field, n, k)
                           : MdsCode::build(field, n, k);
    };

    SessionPlan plan{
        params,
        field,
        {},
        build(desired_n, blen),
        {},
        std::nullopt,
        {},
        0,
        FieldMatrix(field, 0, 0),
        {},
        {},
        {},
    };

    // Private randomness, sampled in the documented order S_1, ..., S_K.
    plan.mixers.reserve(K);
    for (int k = 0; k < K; ++k) {
        plan.mixers.push_back(mix_randomness
                                  ? sample_full_rank(field, blen, rng)
                                  : FieldMatrix::identity(field, blen));
    }

    for (int s = 1; s <= K - 1; ++s) {
        const long long a = plan.alpha_s(s);
        plan.undesired_codes.push_back(build(N * a, a));
    }
    if (!round1_only) {
        plan.retransmit_code = MdsCode::build(field, N * alpha, blen);
    }

    // Sum-type layout, shared row order for queries and answers.
    const long long per_db_base = N - B - 1;
    long long row_offset = 0;
    for (SubsetMask mask : lex_subsets(K)) {
        TypeLayout t;
        t.mask = mask;
        t.size = subset_size(mask);
        t.per_db = ipow(per_db_base, t.size - 1);
        t.length = N * t.per_db;
        t.row_offset = row_offset;
        row_offset += t.per_db;
        plan.types.push_back(t);
    }
    plan.rows_per_block = row_offset;

    // Desired stack: the [N(N-B)^{K-1}, (N-B)^K] codeword of S_theta * x is
    // cut into one segment per sum type containing theta, lex order.
    plan.desired_stack = plan.desired_code.generator().multiply(plan.mixers[theta]);
    const SubsetMask theta_bit = SubsetMask{1} << theta;
    long long seg_offset = 0;
    for (const auto& t : plan.types) {
        if (!(t.mask & theta_bit)) continue;
        plan.desired_offsets[t.mask] = seg_offset;
        seg_offset += t.length;
    }

    // Undesired stacks: per message k, the first (N-B)^{K-1} rows of S_k are
    // cut into one slice per sum type containing k but not theta; each slice
    // feeds its own MDS code whose codeword splits into a head (type U) and
    // a tail (type U + theta).
    plan.undesired_stacks.assign(K, FieldMatrix(field, 0, 0));
    plan.undesired_segments.assign(K, {});
    for (int k = 0; k < K; ++k) {
        if (k == theta) continue;
        FieldMatrix stack(field, desired_n, blen);
        long long stack_offset = 0;
        long long mix_offset = 0;
        for (const auto& t : plan.types) {
            if ((t.mask & theta_bit) || !(t.mask & (SubsetMask{1} << k))) continue;
            const int s = t.size;
            const long long a = plan.alpha_s(s);
            const MdsCode& code = plan.undesired_codes[s - 1];

            std::vector<std::size_t> slice_rows(a);
            for (long long i = 0; i < a; ++i) slice_rows[i] = mix_offset + i;
            const FieldMatrix coeffs =
                code.generator().multiply(plan.mixers[k].select_rows(slice_rows));
            for (long long r = 0; r < static_cast<long long>(coeffs.rows()); ++r) {
                for (long long c = 0; c < blen; ++c) {
                    stack.at(stack_offset + r, c) = coeffs.at(r, c);
                }
            }

            SessionPlan::UndesiredSegment seg;
            seg.stack_offset = stack_offset;
            seg.head_len = t.length; // N * (N-B-1)^{s-1}
            seg.mix_offset = mix_offset;
            seg.alpha = a;
            plan.undesired_segments[k][t.mask] = seg;

            stack_offset += N * a;
            mix_offset += a;
        }
        plan.undesired_stacks[k] = std::move(stack);
    }

    return plan;
}

} // namespace

SessionPlan plan_session(const SystemParams& params, Rng& rng) {
    return make_plan(params, rng, /*round1_only=*/false, /*mix_randomness=*/true);
}

SessionPlan plan_round1(const SystemParams& params, Rng& rng, bool mix_randomness) {
    return make_plan(params, rng, /*round1_only=*/true, mix_randomness);
}

std::vector<Query> build_round1_queries(const SessionPlan& plan) {
    const int N = plan.params.num_databases;
    const long long blocks = plan.params.blocks;
    const long long blen = plan.params.block_len();

    std::vector<Query> queries(N);
    for (int db = 0; db < N; ++db) {
        // Row template is identical for every block.
        std::vector<QueryRow> tmpl;
        tmpl.reserve(plan.rows_per_block);
        for (const auto& t : plan.types) {
            for (long long i = 0; i < t.per_db; ++i) {
                const long long coord = db + i * N;
                QueryRow row;
                row.sum_type = t.mask;
                for (int k = 0; k < plan.params.num_messages; ++k) {
                    if (!(t.mask & (SubsetMask{1} << k))) continue;
                    const Elem* c = plan.coeff_row(t.mask, k, coord);
                    row.terms.push_back(QueryTerm{k, std::vector<Elem>(c, c + blen)});
                }
                tmpl.push_back(std::move(row));
            }
        }

        Query& query = queries[db];
        query.db = db;
        query.round = 1;
        query.rows.reserve(blocks * tmpl.size());
        for (long long j = 0; j < blocks; ++j) {
            for (const auto& row : tmpl) {
                QueryRow r = row;
                r.block = j;
                query.rows.push_back(std::move(r));
            }
        }
    }
    return queries;
}

std::vector<Query> build_retransmit_query(const SessionPlan& plan, long long block,
                                          int round) {
    if (!plan.retransmit_code) {
        throw InvalidParams("plan was built without a retransmission code");
    }
    if (round < 2) throw InvalidParams("retransmission rounds start at 2");
    if (block < 0 || block >= plan.params.blocks) {
        throw InvalidParams("retransmission block out of range");
    }
    const int N = plan.params.num_databases;
    const int K = plan.params.num_messages;
    const long long alpha = plan.params.alpha();
    const long long blen = plan.params.block_len();
    const FieldMatrix& g = plan.retransmit_code->generator();

    std::vector<Query> queries(N);
    for (int db = 0; db < N; ++db) {
        Query& query = queries[db];
        query.db = db;
        query.round = round;
        query.rows.reserve(K * alpha);
        for (int k = 0; k < K; ++k) {
            for (long long i = 0; i < alpha; ++i) {
                const long long coord = db + i * N;
                QueryRow row;
                row.block = block;
                row.sum_type = SubsetMask{1} << k;
                const Elem* c = g.row(coord);
                row.terms.push_back(QueryTerm{k, std::vector<Elem>(c, c + blen)});
                query.rows.push_back(std::move(row));
            }
        }
    }
    return queries;
}

AnswerVector honest_answer(const Query& query, const MessageStore& store,
                           const PrimeField& field) {
    AnswerVector answer;
    answer.db = query.db;
    answer.round = query.round;
    answer.values.reserve(query.rows.size());
    const long long blen = store.block_len();
    for (const auto& row : query.rows) {
        if (row.block < 0 || row.block >= store.blocks()) {
            throw DimensionMismatch("query row block out of range");
        }
        Elem acc = 0;
        for (const auto& term : row.terms) {
            if (term.message < 0 || term.message >= store.num_messages() ||
                static_cast<long long>(term.coeffs.size()) != blen) {
                throw DimensionMismatch("query term inconsistent with message store");
            }
            const Elem partial =
                dot(field, term.coeffs.data(), store.block(term.message, row.block),
                    term.coeffs.size());
            acc = field.add(acc, partial);
        }
        answer.values.push_back(acc);
    }
    return answer;
}

} // namespace bpir
