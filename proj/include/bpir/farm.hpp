#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "bpir/parallel.hpp"
#include "bpir/protocol.hpp"

namespace bpir {

/// What a byzantine database knows when tampering with one answer.
struct AttackContext {
    const SessionPlan* plan = nullptr;
    int db = 0;          // 0-based database id
    int byz_index = 0;   // position of db inside the byzantine set
    int round = 1;
    long long block = -1; // requested block for rounds >= 2, -1 in round 1
    std::uint64_t seed = 0;
};

/// Deterministic answer substitution: mutates the correct values in place.
/// Output length always equals input length.
using Behavior = std::function<void(const AttackContext&, std::vector<Elem>&)>;

/// A byzantine set plus the behavior its members apply to correct answers.
/// Behaviors are deterministic given the seed, which realizes "arbitrary
/// deterministic sequence" while letting tests sweep many adversaries.
struct AdversaryStrategy {
    std::string name;
    std::vector<int> byzantine; // sorted, 0-based, size B
    std::uint64_t seed = 0;
    Behavior behavior;

    bool is_byzantine(int db) const;
    int byz_index(int db) const; // -1 when honest
};

/// Names accepted by make_strategy. corrupt_fraction takes a parameter,
/// e.g. "corrupt_fraction:0.3".
std::vector<std::string> builtin_strategy_names();

/// Builds a catalog strategy; `spec` is "name" or "name:param".
/// Throws InvalidParams for unknown names or bad parameters.
AdversaryStrategy make_strategy(const std::string& spec, std::vector<int> byzantine,
                                std::uint64_t seed, const SystemParams& params);

/// Deterministically samples a size-B byzantine subset of [0, N).
std::vector<int> sample_byzantine_set(int num_databases, int num_byzantine,
                                      std::uint64_t seed);

/// Simulated database bank: a message store plus an adversary.
struct Farm {
    const MessageStore* store = nullptr;
    AdversaryStrategy strategy;
};

/// One answer per query. Honest databases return the exact linear-combination
/// values; byzantine databases get their behavior applied. Deterministic
/// given (messages, strategy, seeds) regardless of execution policy.
std::vector<AnswerVector> respond(const Farm& farm, const SessionPlan& plan,
                                  const std::vector<Query>& queries, int round,
                                  Exec exec = Exec::Serial);

} // namespace bpir
