#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "bpir/farm.hpp"

namespace bpir {

enum class BlockStatus { Clean, ErrorBlock };

/// Result of examining one block's Round-1 answers under a set of ignored
/// (caught) databases.
struct BlockScanResult {
    long long block = 0;
    BlockStatus status = BlockStatus::Clean;
    /// Decoded mixture sums per undesired sum type, filled while scanning.
    std::map<SubsetMask, std::vector<Elem>> undesired_sums;
    /// S_theta * x_theta^j, filled when status == Clean.
    std::vector<Elem> desired_mixed;
};

/// Full record of a session for the audit and witness tools.
struct RoundRecord {
    int round = 1;
    std::vector<Query> queries;
    std::vector<AnswerVector> answers;
};

struct Transcript {
    std::vector<RoundRecord> rounds;
};

struct RetrievalOutcome {
    std::vector<Elem> decoded;   // W_theta, message_len symbols
    std::vector<int> caught;     // identified byzantine databases, sorted, 0-based
    CostLedger ledger;
    int rounds_used = 0;
    std::vector<int> catches_per_round; // n_m for m = 2, 3, ...
    std::optional<Transcript> transcript;
};

struct EngineOptions {
    Exec exec = Exec::Parallel;
    bool keep_transcript = false;
};

/// Examines block `block`: every undesired sum type is checked against its
/// punctured MDS code with ignored databases erased; if all are consistent
/// the decoded interference is subtracted and the desired word is checked
/// the same way. ErrorBlock iff any check fails. With at most B - |ignore|
/// corrupt databases remaining, any corruption in this block is detected.
BlockScanResult scan_block(const SessionPlan& plan,
                           const std::vector<AnswerVector>& round1_answers,
                           long long block, const std::set<int>& ignore);

/// Applies scan_block to all l blocks; returns the error-block indices.
std::vector<long long> scan_round1(const SessionPlan& plan,
                                   const std::vector<AnswerVector>& round1_answers,
                                   const std::set<int>& ignore,
                                   Exec exec = Exec::Serial);

/// Uniform choice among the current error blocks; throws EmptyErrorSet.
long long select_error_block(const std::vector<long long>& error_blocks, Rng& rng);

/// Recovers the true block of every message from a retransmission round,
/// regardless of what the (at most B) byzantine databases answered.
std::vector<std::vector<Elem>> decode_retransmission(
    const SessionPlan& plan, const std::vector<AnswerVector>& answers);

/// Recomputes every database's correct Round-1 rows for `block` from the
/// corrected block contents and reports the not-yet-caught databases whose
/// actual Round-1 answers differ. Guaranteed nonempty when `block` was an
/// error block under `caught`; throws InternalInconsistency otherwise.
std::vector<int> identify(const SessionPlan& plan, long long block,
                          const std::vector<std::vector<Elem>>& true_blocks,
                          const std::vector<AnswerVector>& round1_answers,
                          const std::set<int>& caught);

/// The whole session: Round-1 scan, retransmission rounds until no error
/// blocks remain, final decoding with caught databases erased.
RetrievalOutcome run_retrieval(const SystemParams& params, const Farm& farm, Rng& rng,
                               const EngineOptions& options = {});

} // namespace bpir
