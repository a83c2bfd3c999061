// nbp: fit / eval / simulate / dist-check front end.
// Exit codes: 0 ok, 1 usage, 2 data error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbp/checkpoint.hpp"
#include "nbp/corpus.hpp"
#include "nbp/eval.hpp"
#include "nbp/gibbs.hpp"
#include "nbp/measures.hpp"
#include "nbp/run.hpp"
#include "nbp/selfcheck.hpp"

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

void print_error(const std::string& type, const std::string& message,
                 int exit_code) {
  json err;
  err["error"] = {{"type", type}, {"message", message},
                  {"exit_code", exit_code}};
  std::cerr << err.dump(2) << std::endl;
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// phase wrapper: anything thrown while touching data maps to exit 2 unless
// it is a numerical failure
template <typename Fn>
int run_data_phase(Fn&& fn) {
  try {
    return fn();
  } catch (const nbp::NumericalError& e) {
    print_error("numerical", e.what(), kExitNumerical);
    std::cerr << e.snapshot << std::endl;
    return kExitNumerical;
  } catch (const nbp::ParseError& e) {
    print_error("parse", e.what(), kExitData);
    return kExitData;
  } catch (const std::exception& e) {
    print_error("data", e.what(), kExitData);
    return kExitData;
  }
}

void add_hyperparam_options(CLI::App* cmd, nbp::ModelSpec& spec,
                            std::string& variant_name) {
  cmd->add_option("--variant", variant_name,
                  "model variant: nb, nb-lda, nb-hdp, nb-ftm, beta-geometric, "
                  "beta-nb, gamma-nb, marked-beta-nb, dir-pfa");
  cmd->add_option("--K", spec.hp.K, "truncation level");
  cmd->add_option("--a0", spec.hp.a0, "beta prior shape a0");
  cmd->add_option("--b0", spec.hp.b0, "beta prior shape b0");
  cmd->add_option("--e0", spec.hp.e0, "gamma0 prior shape e0");
  cmd->add_option("--f0", spec.hp.f0, "gamma0 prior rate f0");
  cmd->add_option("--c", spec.hp.c, "gamma-process scale rate c");
  cmd->add_option("--c-beta", spec.hp.c_beta, "beta-process concentration");
  cmd->add_option("--eta", spec.hp.eta, "topic Dirichlet eta");
  cmd->add_option("--lda-alpha", spec.lda_alpha,
                  "Dir-PFA topic proportion concentration");
}

json truth_to_json(const nbp::SyntheticCorpus& corpus,
                   const nbp::ModelSpec& spec, std::uint64_t seed) {
  json truth;
  truth["variant"] = std::string(nbp::variant_name(corpus.variant));
  truth["V"] = corpus.counts.vocab_size();
  truth["J"] = corpus.counts.num_docs();
  truth["K"] = spec.hp.K;
  truth["truth_seed"] = corpus.truth_seed;
  truth["seed"] = seed;
  truth["gamma0"] = corpus.gamma0;
  if (!corpus.r_topic.empty()) truth["r_topic"] = corpus.r_topic;
  if (!corpus.r_doc.empty()) truth["r_doc"] = corpus.r_doc;
  if (!corpus.p_topic.empty()) truth["p_topic"] = corpus.p_topic;
  if (!corpus.p_doc.empty()) truth["p_doc"] = corpus.p_doc;
  if (!corpus.pi_topic.empty()) truth["pi_topic"] = corpus.pi_topic;
  if (corpus.variant == nbp::Variant::kNb) truth["p_shared"] = corpus.p_shared;
  truth["topics"] = corpus.topics;
  truth["n_jk"] = corpus.n_jk;
  return truth;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"negative binomial process count and mixture modeling"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file with a [fit] section; command line "
                 "flags win");

  // ---- fit -----------------------------------------------------------------
  auto* fit = app.add_subcommand(
      "fit", "run block Gibbs on a corpus and report held-out perplexity");
  fit->configurable(true);
  fit->fallthrough(true);
  nbp::RunConfig cfg;
  std::string fit_variant = "gamma-nb";
  std::string docword_path, vocab_path, out_dir, resume_path;
  add_hyperparam_options(fit, cfg.spec, fit_variant);
  fit->add_option("--docword", docword_path, "UCI docword file");
  fit->add_option("--vocab", vocab_path, "vocabulary file (one term per line)");
  fit->add_option("--iterations", cfg.iterations, "total Gibbs iterations");
  fit->add_option("--burn-in", cfg.burn_in,
                  "iterations discarded before collection");
  fit->add_option("--train-fraction", cfg.train_fraction,
                  "per-document fraction of tokens used for training");
  fit->add_option("--seed", cfg.seed, "run seed; all randomness flows from it");
  fit->add_option("--chains", cfg.chains, "independent chains run in parallel");
  fit->add_option("--checkpoint-every", cfg.checkpoint_every,
                  "periodic checkpoint interval (0: final only)");
  fit->add_option("--min-df", cfg.min_df,
                  "drop terms present in fewer documents than this");
  fit->add_option("--out", out_dir, "output directory")->required();
  fit->add_option("--resume", resume_path,
                  "checkpoint to continue; ignores corpus/schedule flags");

  // ---- eval ----------------------------------------------------------------
  auto* eval = app.add_subcommand(
      "eval", "score a fitted checkpoint against held-out counts");
  std::string eval_checkpoint, eval_docword, eval_out;
  eval->add_option("--checkpoint", eval_checkpoint, "chain checkpoint")
      ->required();
  eval->add_option("--docword", eval_docword,
                   "held-out counts (UCI docword file); defaults to the "
                   "held-out split stored in the checkpoint");
  eval->add_option("--out", eval_out, "write the report here instead of stdout");

  // ---- simulate --------------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "draw a synthetic corpus with known ground truth");
  nbp::ModelSpec sim_spec;
  std::string sim_variant = "gamma-nb";
  sim_spec.hp.K = 5;
  sim_spec.hp.a0 = 2.0;
  sim_spec.hp.b0 = 2.0;
  sim_spec.hp.e0 = 100.0;
  sim_spec.hp.f0 = 10.0;
  std::int32_t sim_V = 50, sim_J = 100;
  std::uint64_t sim_truth_seed = 1, sim_seed = 1;
  std::string sim_out;
  add_hyperparam_options(simulate, sim_spec, sim_variant);
  simulate->add_option("--V", sim_V, "vocabulary size");
  simulate->add_option("--J", sim_J, "number of documents");
  simulate->add_option("--truth-seed", sim_truth_seed,
                       "seed for topics and weights");
  simulate->add_option("--seed", sim_seed, "seed for the counts");
  simulate->add_option("--out", sim_out, "output directory")->required();

  // ---- dist-check ------------------------------------------------------------
  auto* dist_check = app.add_subcommand(
      "dist-check", "run the distribution identity and frequency suite");
  std::int64_t check_draws = 100000;
  std::uint64_t check_seed = 1;
  std::string check_out;
  dist_check->add_option("--draws", check_draws, "draws per frequency check");
  dist_check->add_option("--seed", check_seed, "suite seed");
  dist_check->add_option("--out", check_out,
                         "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (fit->parsed()) {
    if (resume_path.empty()) {
      // config phase: reject bad settings before touching the corpus
      try {
        if (docword_path.empty())
          throw UsageError("fit needs --docword (or --resume)");
        cfg.spec.variant = nbp::parse_variant(fit_variant);
        cfg.out_dir = out_dir;
        cfg.validate();
      } catch (const std::exception& e) {
        print_error("usage", e.what(), kExitUsage);
        return kExitUsage;
      }
      return run_data_phase([&] {
        const nbp::SparseCountMatrix corpus =
            nbp::load_uci(docword_path, vocab_path);
        const nbp::FitOutcome outcome = nbp::run_fit(cfg, corpus);
        std::cout << outcome.merged_report_json;
        return kExitOk;
      });
    }
    return run_data_phase([&] {
      nbp::ChainCheckpoint ckpt = nbp::load_checkpoint(resume_path);
      const nbp::ChainOutcome outcome =
          nbp::resume_chain(std::move(ckpt), out_dir);
      std::cout << outcome.report_json;
      return kExitOk;
    });
  }

  if (eval->parsed()) {
    return run_data_phase([&] {
      const nbp::ChainCheckpoint ckpt = nbp::load_checkpoint(eval_checkpoint);
      if (ckpt.acc.samples() == 0)
        throw std::runtime_error(
            "checkpoint holds no collected samples (taken during burn-in); "
            "nothing to evaluate");
      const nbp::SparseCountMatrix heldout =
          eval_docword.empty() ? ckpt.heldout : nbp::load_uci(eval_docword);
      const double ppl =
          nbp::perplexity(ckpt.acc.predictive(), ckpt.state.V, heldout);
      json report;
      report["variant"] = std::string(nbp::variant_name(ckpt.spec.variant));
      report["iteration"] = ckpt.iteration;
      report["samples"] = ckpt.acc.samples();
      report["heldout_tokens"] = heldout.total();
      report["perplexity"] = ppl;
      const std::string text = report.dump(2) + "\n";
      if (eval_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(eval_out, std::ios::binary);
        out << text;
      }
      return kExitOk;
    });
  }

  if (simulate->parsed()) {
    try {
      sim_spec.variant = nbp::parse_variant(sim_variant);
      sim_spec.hp.validate();
    } catch (const std::exception& e) {
      print_error("usage", e.what(), kExitUsage);
      return kExitUsage;
    }
    return run_data_phase([&] {
      nbp::RngStream rng(sim_seed);
      const nbp::SyntheticCorpus corpus =
          nbp::simulate_corpus(sim_spec, sim_V, sim_J, sim_truth_seed, rng);
      fs::create_directories(sim_out);
      nbp::save_uci(corpus.counts, fs::path(sim_out) / "docword.txt",
                    fs::path(sim_out) / "vocab.txt");
      std::ofstream truth_out(fs::path(sim_out) / "truth.json",
                              std::ios::binary);
      truth_out << truth_to_json(corpus, sim_spec, sim_seed).dump(2) << "\n";
      std::cout << "wrote " << corpus.counts.total() << " tokens over "
                << sim_J << " documents to " << sim_out << "\n";
      return kExitOk;
    });
  }

  if (dist_check->parsed()) {
    return run_data_phase([&] {
      const nbp::SelfCheckReport report =
          nbp::run_dist_check(check_draws, check_seed);
      const std::string text = nbp::selfcheck_to_json(report);
      if (check_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(check_out, std::ios::binary);
        out << text;
      }
      if (!report.all_pass) {
        print_error("numerical", "dist-check found failing identities",
                    kExitNumerical);
        return kExitNumerical;
      }
      return kExitOk;
    });
  }

  return kExitUsage;
}
