#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpir/capacity.hpp"
#include "bpir/engine.hpp"

namespace bpir {

/// Canonical flat encoding of a query: stable across runs given a seed and
/// identical under both execution policies. Layout per row: block, sum type,
/// term count, then (message, coefficients...) per term.
std::vector<std::uint64_t> canonical_serialization(const Query& query);

/// Canonical flat encoding of an answer: round, db, values.
std::vector<std::uint64_t> canonical_serialization(const AnswerVector& answer);

/// Self-describing JSON dump of a session transcript
/// (round -> database -> query rows and answer values, plus the ledger).
std::string transcript_to_json(const Transcript& transcript, const CostLedger& ledger,
                               const std::vector<int>& caught);

/// Everything one simulation run produced; feeds the JSON/CSV emitters.
struct RunReport {
    SystemParams params;
    std::string strategy;
    std::uint64_t seed = 0;
    std::vector<int> byzantine; // 0-based
    RetrievalOutcome outcome;
    Rational rate;
    bool decode_ok = false;
};

/// Flat JSON object per run: parameters, per-round ledger, caught set,
/// rounds_used, rate numerator/denominator, decode_ok. Database and message
/// indices are rendered 1-based.
std::string run_report_to_json(const RunReport& report);

std::string run_report_csv_header();
std::string run_report_to_csv(const RunReport& report);

} // namespace bpir
