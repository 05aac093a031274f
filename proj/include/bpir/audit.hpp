#pragma once

#include <string>
#include <vector>

#include "bpir/engine.hpp"

namespace bpir {

struct PrivacyAuditOptions {
    long long samples = 100000;
    double threshold = 0.02;
    /// Disables the S-matrix mixing, which must make the audit fail.
    bool negative_control = false;
    Exec exec = Exec::Parallel;
    /// Below this many samples per message index the verdict is inconclusive.
    long long min_samples = 1000;
};

struct PrivacyAuditReport {
    long long samples = 0;
    double threshold = 0.0;
    bool negative_control = false;
    /// Max pairwise total-variation distance across desired indices, per db.
    std::vector<double> max_tv_per_db;
    double max_tv = 0.0;
    bool pass = false;
    bool inconclusive = false;
};

/// Samples Round-1 sessions for every desired message index and compares,
/// per database, the empirical distribution of the query's structure
/// signature (per message: zero-row mask, zero-column mask, rank of the
/// coefficient matrix). The signature is invariant under the private mixing
/// randomness, so its support stays small enough for exact-match binning at
/// the audit's sample counts, while still exposing generators that leak the
/// desired index through coefficient structure.
PrivacyAuditReport privacy_audit(const SystemParams& params, std::uint64_t seed,
                                 const PrivacyAuditOptions& options = {});

/// Signature of one database's query; exposed for tests.
std::string query_structure_signature(const Query& query, int num_messages,
                                      long long block_len);

struct RoundmAuditReport {
    long long sessions = 0;
    double threshold = 0.0;
    double max_tv = 0.0;
    bool pass = false;
};

/// Runs full sessions under a fixed adversary for every desired index and
/// compares the distribution of the serialized round >= 2 queries per
/// database. Those queries name whole blocks of every message, so the
/// distributions must coincide.
RoundmAuditReport roundm_privacy_audit(const SystemParams& params,
                                       const std::string& strategy_spec,
                                       long long sessions, std::uint64_t seed,
                                       double threshold, Exec exec = Exec::Parallel);

struct WitnessReport {
    int num_databases = 0;
    int num_byzantine = 0;
    int num_messages = 0;
    std::uint64_t field_modulus = 0;
    std::string world_a_transcript;
    std::string world_b_transcript;
    bool identical = false;
};

/// Executable form of the two-world indistinguishability argument for
/// 2B+1 > N: world A has true messages W with B byzantine databases
/// answering from a fake realization W'; world B has true messages W' with
/// the other N-B databases answering from W. Both worlds are run against
/// the same fixed query plan and the user-observed transcripts are compared
/// byte for byte. Throws InvalidParams when 2B+1 <= N.
WitnessReport ambiguity_witness(int num_databases, int num_byzantine, int num_messages,
                                std::uint64_t field_modulus, std::uint64_t seed);

} // namespace bpir
