#pragma once

#include <optional>

#include "bpir/serialize.hpp"

namespace bpir {

struct SimulationOptions {
    Exec exec = Exec::Parallel;
    bool keep_transcript = false;
    /// Explicit byzantine set (0-based); sampled from the seed when absent.
    std::optional<std::vector<int>> byzantine;
};

/// One complete seeded run: message store, byzantine set, strategy and the
/// session randomness all derive from `seed` (streams: messages, byzantine
/// set, strategy, session).
RunReport run_simulation(const SystemParams& params, const std::string& strategy_spec,
                         std::uint64_t seed, const SimulationOptions& options = {});

/// Measured rate L / total downloaded symbols plus the gap to the multi-round
/// capacity at the same parameters.
struct RateReport {
    RunReport run;
    Rational rate;
    Rational capacity_value;
    Rational capacity_gap; // capacity - rate
};

RateReport measure_rate(const SystemParams& params, const std::string& strategy_spec,
                        std::uint64_t seed, const SimulationOptions& options = {});

} // namespace bpir
