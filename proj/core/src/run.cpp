#include "nbp/run.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "nbp/distributions.hpp"
#include "nbp/gibbs.hpp"

namespace nbp {

namespace {

using json = nlohmann::ordered_json;

// iteration i of a chain: warm-up sweeps run the pinned gamma-NB model, the
// last warm-up iteration unpins by resampling every free parameter once,
// everything after is a full variant sweep
void advance_iteration(ModelState& s, const ModelSpec& spec, std::int32_t it,
                       std::int32_t warmup, RngStream& rng) {
  if (it <= warmup) {
    pinned_sweep(s, spec, rng);
    if (it == warmup) update_params(s, spec, rng);
  } else {
    sweep_variant(s, spec, rng);
  }
}

std::string pad_number(std::int64_t n, std::size_t width) {
  std::string s = std::to_string(n);
  return std::string(s.size() >= width ? 0 : width - s.size(), '0') + s;
}

std::string chain_dir_name(std::int32_t c) {
  return "chain-" + pad_number(c, 3);
}

void drive_chain(ChainCheckpoint& c, std::int32_t checkpoint_every,
                 const std::filesystem::path& chain_dir) {
  for (std::int32_t it = c.iteration + 1; it <= c.iterations; ++it) {
    const std::uint64_t clamps_before = clamp_prob_events();
    advance_iteration(c.state, c.spec, it, c.warmup, c.rng);
    c.clamp_events += clamp_prob_events() - clamps_before;

    TraceRow row;
    row.iteration = it;
    row.k_active = c.state.active_topics();
    if (it > c.burn_in) {
      c.acc.accumulate(c.state);
      row.perplexity_so_far =
          perplexity(c.acc.predictive(), c.state.V, c.heldout);
      row.has_perplexity = true;
    }
    c.trace.push_back(row);
    c.iteration = it;

    if (checkpoint_every > 0 && it % checkpoint_every == 0 &&
        it < c.iterations && !chain_dir.empty())
      save_checkpoint(c, chain_dir / ("checkpoint-" + pad_number(it, 6) +
                                      ".json"));
  }
}

PerplexityReport build_report(const ChainCheckpoint& c) {
  PerplexityReport r;
  r.variant = std::string(variant_name(c.spec.variant));
  r.samples = c.acc.samples();
  r.perplexity = c.acc.samples() > 0
                     ? perplexity(c.acc.predictive(), c.state.V, c.heldout)
                     : 0.0;
  r.k_active_final = c.state.active_topics();
  r.trace = c.trace;
  r.params = dump_params(c.state);
  r.iterations = c.iterations;
  r.burn_in = c.burn_in;
  r.warmup = c.warmup;
  r.seed = c.seed;
  r.clamp_events = c.clamp_events;
  return r;
}

void write_chain_artifacts(const ChainCheckpoint& c,
                           const ChainOutcome& outcome,
                           const std::filesystem::path& chain_dir) {
  std::filesystem::create_directories(chain_dir);
  {
    std::ofstream out(chain_dir / "report.json", std::ios::binary);
    out << outcome.report_json;
  }
  write_trace_csv(outcome.report.trace, chain_dir / "trace.csv");
  write_param_csvs(outcome.report.params, chain_dir / "params_topic.csv",
                   chain_dir / "params_doc.csv");
  save_checkpoint(c, chain_dir / "checkpoint.json");
}

}  // namespace

void RunConfig::validate() const {
  spec.hp.validate();
  if (iterations < 1)
    throw std::invalid_argument("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations)
    throw std::invalid_argument("burn-in must lie in [0, iterations)");
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie in (0,1)");
  if (chains < 1) throw std::invalid_argument("chain count must be >= 1");
  if (checkpoint_every < 0)
    throw std::invalid_argument("checkpoint-every must be >= 0");
  if (min_df < 0) throw std::invalid_argument("min-df must be >= 0");
}

std::string run_config_to_json(const RunConfig& cfg) {
  json out;
  out["variant"] = std::string(variant_name(cfg.spec.variant));
  out["hyperparams"] = {{"a0", cfg.spec.hp.a0},     {"b0", cfg.spec.hp.b0},
                        {"e0", cfg.spec.hp.e0},     {"f0", cfg.spec.hp.f0},
                        {"c", cfg.spec.hp.c},       {"c_beta", cfg.spec.hp.c_beta},
                        {"eta", cfg.spec.hp.eta},   {"K", cfg.spec.hp.K}};
  out["lda_alpha"] = cfg.spec.lda_alpha;
  out["iterations"] = cfg.iterations;
  out["burn_in"] = cfg.burn_in;
  out["train_fraction"] = cfg.train_fraction;
  out["seed"] = cfg.seed;
  out["chains"] = cfg.chains;
  out["checkpoint_every"] = cfg.checkpoint_every;
  out["min_df"] = cfg.min_df;
  return out.dump(2) + "\n";
}

FitOutcome run_fit(const RunConfig& cfg, const SparseCountMatrix& corpus) {
  cfg.validate();
  const SparseCountMatrix filtered =
      cfg.min_df > 1 ? filter_min_document_frequency(corpus, cfg.min_df)
                     : corpus;

  FitOutcome outcome;
  outcome.split = split_holdout(filtered, cfg.train_fraction, cfg.seed);
  const std::int32_t warmup =
      std::min(kWarmupSweeps, cfg.burn_in);

  const std::filesystem::path out_dir =
      cfg.out_dir.empty() ? std::filesystem::path{}
                          : std::filesystem::path(cfg.out_dir);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream cfg_out(out_dir / "config.json", std::ios::binary);
    cfg_out << run_config_to_json(cfg);
  }

  std::vector<ChainCheckpoint> chains(cfg.chains);
  std::vector<std::exception_ptr> failures(cfg.chains);

  auto run_one = [&](std::int32_t c) {
    try {
      ChainCheckpoint& ckpt = chains[c];
      ckpt.spec = cfg.spec;
      ckpt.iterations = cfg.iterations;
      ckpt.burn_in = cfg.burn_in;
      ckpt.warmup = warmup;
      ckpt.seed = cfg.seed;
      ckpt.chain_index = c;
      ckpt.rng = RngStream(cfg.seed, streams::id(streams::kChain, c));
      ckpt.state = init_state(outcome.split.train, cfg.spec, ckpt.rng);
      ckpt.acc = PredictiveAccumulator(ckpt.state.J, ckpt.state.V);
      ckpt.train = outcome.split.train;
      ckpt.heldout = outcome.split.heldout;
      const auto chain_dir = out_dir.empty()
                                 ? std::filesystem::path{}
                                 : out_dir / chain_dir_name(c);
      if (!chain_dir.empty()) std::filesystem::create_directories(chain_dir);
      drive_chain(ckpt, cfg.checkpoint_every, chain_dir);
    } catch (...) {
      failures[c] = std::current_exception();
    }
  };

  if (cfg.chains == 1) {
    run_one(0);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(cfg.chains);
    for (std::int32_t c = 0; c < cfg.chains; ++c)
      workers.emplace_back(run_one, c);
    for (auto& w : workers) w.join();
  }
  for (std::int32_t c = 0; c < cfg.chains; ++c) {
    if (!failures[c]) continue;
    try {
      std::rethrow_exception(failures[c]);
    } catch (const NumericalError& e) {
      if (!out_dir.empty()) {
        std::ofstream snap(out_dir / "failure-snapshot.json",
                           std::ios::binary);
        snap << e.snapshot << "\n";
      }
      throw;
    }
  }

  PredictiveAccumulator merged;
  for (std::int32_t c = 0; c < cfg.chains; ++c) {
    ChainOutcome co;
    co.report = build_report(chains[c]);
    co.report_json = report_to_json(co.report);
    co.final_state = chains[c].state;
    co.acc = chains[c].acc;
    if (c == 0)
      merged = chains[c].acc;
    else
      merged.merge(chains[c].acc);
    outcome.chains.push_back(std::move(co));
  }
  outcome.merged_perplexity =
      perplexity(merged.predictive(), filtered.vocab_size(),
                 outcome.split.heldout);

  json merged_json;
  merged_json["variant"] = std::string(variant_name(cfg.spec.variant));
  merged_json["seed"] = cfg.seed;
  merged_json["chains"] = cfg.chains;
  merged_json["schedule"] = {{"iterations", cfg.iterations},
                             {"burn_in", cfg.burn_in},
                             {"warmup", warmup}};
  merged_json["train_fraction"] = cfg.train_fraction;
  merged_json["train_tokens"] = outcome.split.train.total();
  merged_json["heldout_tokens"] = outcome.split.heldout.total();
  merged_json["perplexity"] = outcome.merged_perplexity;
  json per_chain = json::array();
  std::uint64_t clamp_total = 0;
  for (std::int32_t c = 0; c < cfg.chains; ++c) {
    per_chain.push_back({{"chain", c},
                         {"perplexity", outcome.chains[c].report.perplexity},
                         {"k_active_final",
                          outcome.chains[c].report.k_active_final},
                         {"samples", outcome.chains[c].report.samples}});
    clamp_total += chains[c].clamp_events;
  }
  merged_json["per_chain"] = std::move(per_chain);
  merged_json["clamp_events"] = clamp_total;
  outcome.merged_report_json = merged_json.dump(2) + "\n";

  if (!out_dir.empty()) {
    for (std::int32_t c = 0; c < cfg.chains; ++c)
      write_chain_artifacts(chains[c], outcome.chains[c],
                            out_dir / chain_dir_name(c));
    std::ofstream rep(out_dir / "report.json", std::ios::binary);
    rep << outcome.merged_report_json;
  }
  return outcome;
}

ChainOutcome resume_chain(ChainCheckpoint ckpt,
                          const std::filesystem::path& out_dir) {
  const std::filesystem::path chain_dir =
      out_dir.empty() ? std::filesystem::path{}
                      : out_dir / chain_dir_name(ckpt.chain_index);
  if (!chain_dir.empty()) std::filesystem::create_directories(chain_dir);

  drive_chain(ckpt, 0, chain_dir);

  ChainOutcome co;
  co.report = build_report(ckpt);
  co.report_json = report_to_json(co.report);
  co.final_state = ckpt.state;
  co.acc = ckpt.acc;
  if (!chain_dir.empty()) write_chain_artifacts(ckpt, co, chain_dir);
  return co;
}

}  // namespace nbp
