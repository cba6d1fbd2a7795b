#include "bo/loop.hpp"

#include "core/dominance.hpp"
#include "core/errors.hpp"
#include "core/random.hpp"
#include "moo/frontier_sampling.hpp"

#include <chrono>
#include <random>

namespace pf2es::bo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Seed streams inside one run.
enum Stream : std::uint64_t {
  kInitial = 1,
  kFit = 2,
  kFrontier = 3,
  kBase = 4,
  kOptimizer = 5,
  kRandom = 6,
  kRecommend = 7,
  kCalibrate = 8,
};

optim::AcquisitionObjective sequential_objective(const acquisition::AcquisitionState& state,
                                                 const gp::IndependentGPSurrogate& s) {
  return [&state, &s](const Vector& z, Vector* grad) {
    if (grad == nullptr) return acquisition::pf2es(state, s, z);
    return acquisition::pf2es_with_gradient(state, s, z, *grad);
  };
}

moo::ParetoFrontierSample observed_front(const gp::IndependentGPSurrogate& s) {
  const int m = s.num_objectives();
  const auto& y = s.data().outputs;
  std::vector<OutputVector> pts;
  for (Eigen::Index i = 0; i < y.rows(); ++i) pts.push_back(split_output(y.row(i).transpose(), m));
  const auto idx = non_dominated_indices(pts);
  moo::ParetoFrontierSample f;
  f.inputs.resize(static_cast<Eigen::Index>(idx.size()), s.dim());
  f.objectives.resize(static_cast<Eigen::Index>(idx.size()), m);
  f.constraints.resize(static_cast<Eigen::Index>(idx.size()), s.num_constraints());
  for (std::size_t t = 0; t < idx.size(); ++t) {
    const auto r = static_cast<Eigen::Index>(t);
    f.inputs.row(r) = s.data().inputs.row(idx[t]);
    f.objectives.row(r) = y.row(idx[t]).head(m);
    f.constraints.row(r) = y.row(idx[t]).tail(s.num_constraints());
  }
  return f;
}

gp::IndependentGPSurrogate fit_with_retry(const Dataset& data, const benchmarks::BenchmarkProblem& problem,
                                          const RunConfig& config, std::uint64_t seed) {
  gp::HyperpriorConfig prior = config.prior;
  prior.seed = seed;
  try {
    return gp::IndependentGPSurrogate::fit_map(data, problem.spec.bounds, problem.spec.num_objectives,
                                               problem.spec.num_constraints, prior);
  } catch (const FitError&) {
    // One retry with fresh restarts and a larger noise floor.
    prior.seed = mix_seed(seed, 0xfe11);
    prior.noise_variance *= 10.0;
    return gp::IndependentGPSurrogate::fit_map(data, problem.spec.bounds, problem.spec.num_objectives,
                                               problem.spec.num_constraints, prior);
  }
}

}  // namespace

BatchResult kriging_believer_batch(const gp::IndependentGPSurrogate& surrogate, const StateBuilder& builder, int q,
                                   const optim::OptimizerConfig& optimizer, std::uint64_t seed) {
  if (q < 1) throw ContractError("kriging believer: q must be positive");
  BatchResult out;
  out.batch.resize(q, surrogate.dim());
  gp::IndependentGPSurrogate current = surrogate;
  Dataset fantasy = surrogate.data();
  for (int j = 0; j < q; ++j) {
    const auto state = builder(current, mix_seed(seed, j, kFrontier));
    out.empty_frontiers += state.empty_frontiers;
    optim::OptimizerConfig oc = optimizer;
    oc.seed = mix_seed(seed, j, kOptimizer);
    const auto res = optim::multistart_maximize(sequential_objective(state, current), current.bounds(), 1, oc);
    out.batch.row(j) = res.batch.row(0);
    out.optimizer_warning = out.optimizer_warning || res.warning;
    if (j == 0) out.value = res.value;
    if (j + 1 < q) {
      const Vector x = res.batch.row(0).transpose();
      fantasy.append(x, current.predict_mean(x));
      out.fantasies.push_back(fantasy);
      current = current.condition_on(fantasy);
    }
  }
  return out;
}

BatchResult select_batch(const RunConfig& config, const gp::IndependentGPSurrogate& surrogate, std::uint64_t seed,
                         double* frontier_seconds) {
  const int m = surrogate.num_objectives();
  const int c = surrogate.num_constraints();
  const auto& bounds = surrogate.bounds();
  double frontier_time = 0.0;

  auto frontiers_for = [&](const gp::IndependentGPSurrogate& s, std::uint64_t sd) {
    const auto t0 = Clock::now();
    auto f = moo::sample_pareto_frontiers(s, config.num_frontiers, config.n_features, config.frontier_nsga, sd);
    frontier_time += seconds_since(t0);
    return f;
  };
  acquisition::StateOptions opts;
  opts.epsilon = config.epsilon;
  opts.tau = config.tau;
  opts.n_mc = config.n_mc;
  opts.q = 1;
  opts.seed = mix_seed(seed, 0, kBase);

  optim::OptimizerConfig oc = config.optimizer;
  oc.seed = mix_seed(seed, 0, kOptimizer);
  BatchResult out;

  switch (config.acquisition) {
    case AcquisitionKind::random: {
      Rng rng(mix_seed(seed, 0, kRandom));
      std::uniform_real_distribution<double> u(0.0, 1.0);
      out.batch.resize(config.q, bounds.dim());
      for (int l = 0; l < config.q; ++l)
        for (Eigen::Index j = 0; j < bounds.dim(); ++j)
          out.batch(l, j) = bounds.lower[j] + u(rng) * bounds.range()[j];
      break;
    }
    case AcquisitionKind::mopi: {
      const auto front = observed_front(surrogate);
      const auto part = front.empty() ? partition::feasibility_partition(m, c)
                                      : partition::decompose_non_dominated(front.objectives, m, c);
      out.empty_frontiers = front.empty() ? 1 : 0;
      const optim::AcquisitionObjective obj = [&](const Vector& z, Vector* grad) {
        return acquisition::mopi_pof_with_gradient(part, surrogate, z, grad);
      };
      const auto res = optim::multistart_maximize(obj, bounds, 1, oc);
      out.batch = res.batch;
      out.value = res.value;
      out.optimizer_warning = res.warning;
      break;
    }
    case AcquisitionKind::pf2es: {
      const auto state = acquisition::build_state(frontiers_for(surrogate, mix_seed(seed, 0, kFrontier)), m, c, opts);
      const auto res = optim::multistart_maximize(sequential_objective(state, surrogate), bounds, 1, oc);
      out.batch = res.batch;
      out.value = res.value;
      out.optimizer_warning = res.warning;
      out.empty_frontiers = state.empty_frontiers;
      break;
    }
    case AcquisitionKind::qpf2es: {
      opts.q = config.q;
      const auto state = acquisition::build_state(frontiers_for(surrogate, mix_seed(seed, 0, kFrontier)), m, c, opts);
      const auto d = bounds.dim();
      const int q = config.q;
      const optim::AcquisitionObjective obj = [&](const Vector& z, Vector* grad) {
        Matrix batch(q, d);
        for (int l = 0; l < q; ++l) batch.row(l) = z.segment(l * d, d).transpose();
        if (grad == nullptr) return acquisition::qpf2es(state, surrogate, batch);
        Matrix g;
        const double v = acquisition::qpf2es_with_gradient(state, surrogate, batch, g);
        grad->resize(q * d);
        for (int l = 0; l < q; ++l) grad->segment(l * d, d) = g.row(l).transpose();
        return v;
      };
      const auto res = optim::multistart_maximize(obj, bounds, q, oc);
      out.batch = res.batch;
      out.value = res.value;
      out.optimizer_warning = res.warning;
      out.empty_frontiers = state.empty_frontiers;
      break;
    }
    case AcquisitionKind::pf2es_kb: {
      const StateBuilder builder = [&](const gp::IndependentGPSurrogate& s, std::uint64_t sd) {
        acquisition::StateOptions o = opts;
        o.seed = mix_seed(sd, 0, kBase);
        return acquisition::build_state(frontiers_for(s, sd), m, c, o);
      };
      out = kriging_believer_batch(surrogate, builder, config.q, config.optimizer, seed);
      break;
    }
  }
  if (frontier_seconds != nullptr) *frontier_seconds = frontier_time;
  return out;
}

BORunRecord run_bo(const RunConfig& config, const ProgressCallback& progress) {
  return run_bo(config, benchmarks::get_problem(config.problem), progress);
}

BORunRecord run_bo(const RunConfig& config, const benchmarks::BenchmarkProblem& problem,
                   const ProgressCallback& progress) {
  config.validate();
  const auto& spec = problem.spec;
  const int d = spec.dim();
  const int m = spec.num_objectives;
  const int c = spec.num_constraints;

  BORunRecord rec;
  rec.config = config;
  rec.dim = d;
  rec.num_objectives = m;
  rec.num_constraints = c;

  Dataset data;
  {
    Rng rng(mix_seed(config.seed, 0, kInitial));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n0 = config.initial_design_size(d);
    for (int i = 0; i < n0; ++i) {
      Vector x(d);
      for (int j = 0; j < d; ++j) x[j] = spec.bounds.lower[j] + u(rng) * spec.bounds.range()[j];
      data.append(x, spec.evaluate(x));
    }
  }
  rec.initial_inputs = data.inputs;
  rec.initial_outputs = data.outputs;
  const auto calib_ref = problem.calibration_reference_max();

  IterationRecord pending;  // queries chosen for the current record
  for (int t = 0; t <= config.iterations; ++t) {
    const auto t_start = Clock::now();
    Timing timing;
    IterationRecord it = std::move(pending);
    pending = IterationRecord{};
    it.iteration = t;
    it.seed = mix_seed(config.seed, t, 0);

    gp::IndependentGPSurrogate surrogate;
    try {
      const auto t0 = Clock::now();
      surrogate = fit_with_retry(data, problem, config, mix_seed(config.seed, t, kFit));
      timing.fit = seconds_since(t0);
    } catch (const FitError& e) {
      rec.aborted = true;
      rec.abort_reason = std::string("surrogate fit failed at iteration ") + std::to_string(t) + ": " + e.what();
      if (t > 0) rec.iterations.push_back(std::move(it));
      break;
    }
    for (const auto& model : surrogate.models()) it.hyperparameters.push_back(model.hyper());

    {
      const auto t0 = Clock::now();
      moo::NSGA2Config nc = config.recommendation_nsga;
      nc.seed = mix_seed(config.seed, t, kRecommend);
      const auto reco = recommend_out_of_sample(surrogate, config.recommendation, nc);
      it.recommended_inputs = reco.inputs;
      it.recommended_outputs.resize(reco.inputs.rows(), m + c);
      for (Eigen::Index i = 0; i < reco.inputs.rows(); ++i)
        it.recommended_outputs.row(i) = spec.evaluate(reco.inputs.row(i).transpose()).transpose();
      it.recommendation_confidence = reco.confidence;
      it.confidence_levels = reco.tried;
      it.recommendation_empty = reco.empty;
      it.log_hv_difference = log_hv_difference_of_outputs(it.recommended_outputs, problem);
      timing.recommendation = seconds_since(t0);
    }
    const bool calibrate = calib_ref.has_value() && config.calibration_interval > 0 &&
                           (t % config.calibration_interval == 0 || t == 0 || t == config.iterations);
    if (calibrate) {
      const auto t0 = Clock::now();
      const auto cal = uncertainty_calibration(surrogate, *calib_ref, config.calibration_samples, config.n_features,
                                               config.frontier_nsga, mix_seed(config.seed, t, kCalibrate));
      it.has_calibration = true;
      it.calibration_median = cal.median;
      it.calibration_p10 = cal.p10;
      it.calibration_p90 = cal.p90;
      it.calibration_values = cal.values;
      timing.calibration = seconds_since(t0);
    }

    if (t < config.iterations) {
      const auto t0 = Clock::now();
      double frontier_seconds = 0.0;
      BatchResult batch;
      try {
        batch = select_batch(config, surrogate, mix_seed(config.seed, t + 1, 0), &frontier_seconds);
      } catch (const FitError& e) {
        rec.aborted = true;
        rec.abort_reason = std::string("batch selection failed at iteration ") + std::to_string(t + 1) + ": " +
                           e.what();
      }
      timing.frontiers = frontier_seconds;
      timing.acquisition = seconds_since(t0) - frontier_seconds;
      if (!rec.aborted) {
        pending.queries = batch.batch;
        pending.acquisition_value = batch.value;
        pending.optimizer_warning = batch.optimizer_warning;
        pending.empty_frontiers = batch.empty_frontiers;
        if (batch.empty_frontiers > 0) rec.used_feasibility_fallback = true;
        pending.observations.resize(batch.batch.rows(), m + c);
        for (Eigen::Index l = 0; l < batch.batch.rows(); ++l) {
          const Vector x = spec.bounds.clip(batch.batch.row(l).transpose());
          pending.queries.row(l) = x.transpose();
          const Vector y = spec.evaluate(x);
          pending.observations.row(l) = y.transpose();
          data.append(x, y);
        }
      }
    }
    timing.total = seconds_since(t_start);
    if (config.record_timings) it.timing = timing;
    rec.iterations.push_back(std::move(it));
    if (progress) progress(t, rec);
    if (rec.aborted) break;
  }
  return rec;
}

}  // namespace pf2es::bo
