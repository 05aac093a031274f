#include "bpir/serialize.hpp"

#include <json.hpp>

namespace bpir {

using nlohmann::json;

std::vector<std::uint64_t> canonical_serialization(const Query& query) {
    std::vector<std::uint64_t> out;
    out.push_back(static_cast<std::uint64_t>(query.round));
    out.push_back(static_cast<std::uint64_t>(query.db));
    out.push_back(query.rows.size());
    for (const auto& row : query.rows) {
        out.push_back(static_cast<std::uint64_t>(row.block));
        out.push_back(row.sum_type);
        out.push_back(row.terms.size());
        for (const auto& term : row.terms) {
            out.push_back(static_cast<std::uint64_t>(term.message));
            out.insert(out.end(), term.coeffs.begin(), term.coeffs.end());
        }
    }
    return out;
}

std::vector<std::uint64_t> canonical_serialization(const AnswerVector& answer) {
    std::vector<std::uint64_t> out;
    out.push_back(static_cast<std::uint64_t>(answer.round));
    out.push_back(static_cast<std::uint64_t>(answer.db));
    out.push_back(answer.values.size());
    out.insert(out.end(), answer.values.begin(), answer.values.end());
    return out;
}

namespace {

json query_to_json(const Query& query) {
    json rows = json::array();
    for (const auto& row : query.rows) {
        json terms = json::array();
        for (const auto& term : row.terms) {
            terms.push_back({{"message", term.message + 1}, {"coeffs", term.coeffs}});
        }
        rows.push_back({{"block", row.block + 1},
                        {"sum_type", row.sum_type},
                        {"terms", std::move(terms)}});
    }
    return json{{"db", query.db + 1}, {"round", query.round}, {"rows", std::move(rows)}};
}

json answer_to_json(const AnswerVector& answer) {
    return json{{"db", answer.db + 1}, {"round", answer.round}, {"values", answer.values}};
}

std::vector<int> one_based(const std::vector<int>& ids) {
    std::vector<int> out;
    out.reserve(ids.size());
    for (int id : ids) out.push_back(id + 1);
    return out;
}

} // namespace

std::string transcript_to_json(const Transcript& transcript, const CostLedger& ledger,
                               const std::vector<int>& caught) {
    json rounds = json::array();
    for (const auto& record : transcript.rounds) {
        json queries = json::array();
        for (const auto& q : record.queries) queries.push_back(query_to_json(q));
        json answers = json::array();
        for (const auto& a : record.answers) answers.push_back(answer_to_json(a));
        rounds.push_back({{"round", record.round},
                          {"queries", std::move(queries)},
                          {"answers", std::move(answers)}});
    }
    const json doc{{"rounds", std::move(rounds)},
                   {"ledger", ledger.per_round},
                   {"total_downloaded", ledger.total()},
                   {"caught", one_based(caught)}};
    return doc.dump(2);
}

std::string run_report_to_json(const RunReport& report) {
    const json doc{{"n", report.params.num_databases},
                   {"k", report.params.num_messages},
                   {"b", report.params.num_byzantine},
                   {"blocks", report.params.blocks},
                   {"field", report.params.field_modulus},
                   {"theta", report.params.desired_index},
                   {"alpha", report.params.alpha()},
                   {"seed", report.seed},
                   {"strategy", report.strategy},
                   {"byzantine", one_based(report.byzantine)},
                   {"caught", one_based(report.outcome.caught)},
                   {"rounds_used", report.outcome.rounds_used},
                   {"ledger", report.outcome.ledger.per_round},
                   {"total_downloaded", report.outcome.ledger.total()},
                   {"rate_num", report.rate.num},
                   {"rate_den", report.rate.den},
                   {"decode_ok", report.decode_ok}};
    return doc.dump(2);
}

std::string run_report_csv_header() {
    return "n,k,b,blocks,field,theta,alpha,seed,strategy,byzantine,caught,"
           "rounds_used,total_downloaded,rate_num,rate_den,decode_ok";
}

std::string run_report_to_csv(const RunReport& report) {
    auto join = [](const std::vector<int>& ids) {
        std::string s;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (i) s += '|';
            s += std::to_string(ids[i] + 1);
        }
        return s;
    };
    std::string s;
    s += std::to_string(report.params.num_databases) + ',';
    s += std::to_string(report.params.num_messages) + ',';
    s += std::to_string(report.params.num_byzantine) + ',';
    s += std::to_string(report.params.blocks) + ',';
    s += std::to_string(report.params.field_modulus) + ',';
    s += std::to_string(report.params.desired_index) + ',';
    s += std::to_string(report.params.alpha()) + ',';
    s += std::to_string(report.seed) + ',';
    s += report.strategy + ',';
    s += join(report.byzantine) + ',';
    s += join(report.outcome.caught) + ',';
    s += std::to_string(report.outcome.rounds_used) + ',';
    s += std::to_string(report.outcome.ledger.total()) + ',';
    s += std::to_string(report.rate.num) + ',';
    s += std::to_string(report.rate.den) + ',';
    s += report.decode_ok ? "true" : "false";
    return s;
}

} // namespace bpir
