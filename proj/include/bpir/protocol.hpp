#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bpir/mds.hpp"

namespace bpir {

/// Message subset ("sum type") as a bitmask; bit k set = message k (0-based).
using SubsetMask = std::uint32_t;

/// All non-empty subsets of {0..count-1} ordered lexicographically by their
/// sorted element lists: {0} < {0,1} < {0,1,2} < {0,2} < {1} < ...
std::vector<SubsetMask> lex_subsets(int count);

int subset_size(SubsetMask mask);

/// Retrieval session parameters. Databases, messages and blocks are indexed
/// 0-based internally; `desired_index` is 1-based as presented to the user.
struct SystemParams {
    int num_databases = 0;                     // N
    int num_messages = 0;                      // K
    int num_byzantine = 0;                     // B
    long long blocks = 1;                      // l
    std::uint64_t field_modulus = 65537;       // q
    int desired_index = 1;                     // theta in [1..K]
    std::optional<long long> alpha_override;   // retransmission rate override

    /// Throws InvalidParams unless 1 <= B, 2B+1 <= N, K >= 1, l >= 1 and
    /// theta is in range.
    void validate() const;

    long long block_len() const;        // (N-B)^K symbols per block
    long long message_len() const;      // block_len * blocks
    long long alpha() const;            // override or ceil(((N-B)^K + 1) / (N-2B))
    long long rows_per_db_per_block() const;
    int theta0() const { return desired_index - 1; }
};

/// The K messages, each `message_len` uniform symbols cut into contiguous
/// blocks of `block_len`.
class MessageStore {
public:
    MessageStore(int num_messages, long long block_len, long long blocks);
    static MessageStore random(const PrimeField& field, int num_messages,
                               long long block_len, long long blocks, std::uint64_t seed);

    int num_messages() const { return static_cast<int>(messages_.size()); }
    long long block_len() const { return block_len_; }
    long long blocks() const { return blocks_; }

    const std::vector<Elem>& message(int k) const { return messages_[k]; }
    std::vector<Elem>& message(int k) { return messages_[k]; }

    /// Pointer to the first symbol of block j of message k.
    const Elem* block(int k, long long j) const {
        return messages_[k].data() + j * block_len_;
    }
    std::vector<Elem> block_vec(int k, long long j) const;

private:
    long long block_len_, blocks_;
    std::vector<std::vector<Elem>> messages_;
};

/// Per sum-type layout constants shared by user and databases.
struct TypeLayout {
    SubsetMask mask = 0;
    int size = 0;           // |mask|
    long long per_db = 0;   // coordinates per database: (N-B-1)^{size-1}
    long long length = 0;   // N * per_db
    long long row_offset = 0; // row offset inside one block of a database's query
};

/// One query row: the database returns sum over terms of <coeffs, block j of
/// message `message`>.
struct QueryTerm {
    int message = 0; // 0-based
    std::vector<Elem> coeffs;
};

struct QueryRow {
    long long block = 0; // 0-based
    SubsetMask sum_type = 0;
    std::vector<QueryTerm> terms;
};

struct Query {
    int db = 0; // 0-based
    int round = 1;
    std::vector<QueryRow> rows;
};

struct AnswerVector {
    int db = 0;
    int round = 1;
    std::vector<Elem> values;
};

/// Download bookkeeping; one entry per executed round.
struct CostLedger {
    std::vector<long long> per_round;

    long long total() const;
    int rounds_used() const { return static_cast<int>(per_round.size()); }
};

/// All public and private randomness plus code parameters for one retrieval.
/// Coordinate t (0-based) of any length N*c query vector always goes to
/// database t mod N; that round-robin assignment is public and theta-free.
struct SessionPlan {
    SystemParams params;
    PrimeField field;

    std::vector<FieldMatrix> mixers;       // S_1..S_K, sampled in index order
    MdsCode desired_code;                  // [N(N-B)^{K-1}, (N-B)^K]
    std::vector<MdsCode> undesired_codes;  // per subset size s=1..K-1: [N*alpha_s, alpha_s]
    std::optional<MdsCode> retransmit_code; // [N*alpha, (N-B)^K]; absent in round1-only plans

    std::vector<TypeLayout> types;         // all non-empty sum types, lex order
    long long rows_per_block = 0;

    // Precomputed coefficient stacks: query coefficients are rows of these.
    FieldMatrix desired_stack;                 // G_d * S_theta
    std::vector<FieldMatrix> undesired_stacks; // per message k != theta (theta slot empty)

    std::map<SubsetMask, long long> desired_offsets; // segment offset per type containing theta
    struct UndesiredSegment {
        long long stack_offset = 0; // into the message's undesired stack
        long long head_len = 0;     // first head_len rows carry type U, rest type U+{theta}
        long long mix_offset = 0;   // slice offset into the mixture rows of S_k
        long long alpha = 0;        // slice length
    };
    std::vector<std::map<SubsetMask, UndesiredSegment>> undesired_segments; // per message

    const TypeLayout& type_layout(SubsetMask mask) const;
    long long alpha_s(int subset_size) const; // (N-B)(N-B-1)^{s-1}
    long long mixture_rows() const;           // (N-B)^{K-1}

    /// Coefficient row (length block_len) for message k at coordinate t of
    /// sum type `mask`.
    const Elem* coeff_row(SubsetMask mask, int k, long long t) const;
};

/// Builds codes, samples S matrices (stream order S_1..S_K) and fixes the
/// layout. Requires every code length <= q-1, else FieldTooSmall.
SessionPlan plan_session(const SystemParams& params, Rng& rng);

/// Round-1-only plan for the privacy audit: no retransmission code, and the
/// extended code construction is allowed so lengths up to q+1 fit. With
/// `mix_randomness` false the S matrices are identities (the audit's
/// negative control).
SessionPlan plan_round1(const SystemParams& params, Rng& rng, bool mix_randomness = true);

/// One Round-1 query per database; per block and sum type the query vector
/// coordinates are distributed round-robin.
std::vector<Query> build_round1_queries(const SessionPlan& plan);

/// Round-m (m >= 2) queries: the whole block of every message under the
/// retransmission code; alpha rows per message per database.
std::vector<Query> build_retransmit_query(const SessionPlan& plan, long long block, int round);

/// The correct answer a trustworthy database computes from its query.
AnswerVector honest_answer(const Query& query, const MessageStore& store,
                           const PrimeField& field);

} // namespace bpir
