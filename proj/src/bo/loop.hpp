#pragma once

#include "acquisition/acquisition.hpp"
#include "benchmarks/benchmarks.hpp"
#include "bo/config.hpp"
#include "bo/metrics.hpp"
#include "bo/record.hpp"
#include "gp/surrogate.hpp"

#include <cstdint>
#include <functional>

namespace pf2es::bo {

struct BatchResult {
  Matrix batch;  // q x d
  double value = 0.0;
  bool optimizer_warning = false;
  int empty_frontiers = 0;
  /// Fantasized datasets after each Kriging Believer step (empty otherwise).
  std::vector<Dataset> fantasies;
};

/// Builds the acquisition state for a surrogate (fresh frontier samples).
using StateBuilder = std::function<acquisition::AcquisitionState(const gp::IndependentGPSurrogate&, std::uint64_t)>;

/// Greedy Kriging Believer batch: maximize the sequential acquisition, append
/// the posterior mean at the chosen point, condition, rebuild, repeat.
BatchResult kriging_believer_batch(const gp::IndependentGPSurrogate& surrogate, const StateBuilder& builder, int q,
                                   const optim::OptimizerConfig& optimizer, std::uint64_t seed);

/// Chooses the next batch for one iteration of `config` given the fitted surrogate.
BatchResult select_batch(const RunConfig& config, const gp::IndependentGPSurrogate& surrogate, std::uint64_t seed,
                         double* frontier_seconds = nullptr);

/// Optional per-iteration callback (iteration index, record so far).
using ProgressCallback = std::function<void(int, const BORunRecord&)>;

/// Full seeded BO run on a registered benchmark.
BORunRecord run_bo(const RunConfig& config, const ProgressCallback& progress = {});

/// Same, on an arbitrary problem (log HV difference needs a BenchmarkProblem).
BORunRecord run_bo(const RunConfig& config, const benchmarks::BenchmarkProblem& problem,
                   const ProgressCallback& progress = {});

}  // namespace pf2es::bo
