#pragma once

#include <cstddef>
#include <functional>

#include "stirap/config.hpp"
#include "stirap/ensemble.hpp"
#include "stirap/protocols.hpp"

namespace stirap {

// Outcome of one scenario run. Raw propagations fill `result.trajectory`;
// diagonal-ensemble initial states fill `ensemble` instead.
struct ScenarioRun {
  ProtocolResult result;
  std::optional<EnsembleEvolution> ensemble;
  // Scheme and schedule actually propagated, when there was a single one.
  std::optional<Setup> setup;
};

// Runs a raw propagation or a named protocol. Raw runs report P1..PN,
// max_P1..max_PN, final_norm_sq, total_loss and closure_error. With a target
// level they add efficiency and efficiency_normalized (over the final norm);
// cavity lambda schemes add emission_probability.
ScenarioRun run_scenario(const ScenarioConfig& config, std::size_t threads = 1);

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

// Evaluates `config.sweep->observable` on the grid spanned by the sweep axes.
// Each point rewrites the canonical document at the axis paths, re-parses it
// and runs it single-threaded; points are spread over `threads` workers.
SweepResult run_sweep(const ScenarioConfig& config, std::size_t threads = 1,
                      const SweepProgress& progress = {});

}  // namespace stirap
