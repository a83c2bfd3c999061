#include "nbp/checkpoint.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace nbp {

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const SparseCountMatrix& m) {
  json out;
  out["V"] = m.vocab_size();
  out["J"] = m.num_docs();
  json entries = json::array();
  for (std::int32_t j = 0; j < m.num_docs(); ++j)
    for (const auto& [term, count] : m.doc(j))
      entries.push_back(json::array({j, term, count}));
  out["entries"] = std::move(entries);
  return out;
}

SparseCountMatrix matrix_from_json(const json& in) {
  SparseCountMatrix m(in.at("V").get<std::int32_t>(),
                      in.at("J").get<std::int32_t>());
  for (const auto& e : in.at("entries"))
    m.add(e.at(0).get<std::int32_t>(), e.at(1).get<std::int32_t>(),
          e.at(2).get<std::int32_t>());
  return m;
}

json state_to_json(const ModelState& s) {
  json out;
  out["variant"] = std::string(variant_name(s.variant));
  out["V"] = s.V;
  out["J"] = s.J;
  out["K"] = s.K;
  out["token_term"] = s.token_term;
  out["doc_begin"] = s.doc_begin;
  out["z"] = s.z;
  out["phi"] = s.phi;
  out["theta"] = s.theta;
  out["r_topic"] = s.r_topic;
  out["r_doc"] = s.r_doc;
  out["p_topic"] = s.p_topic;
  out["p_doc"] = s.p_doc;
  out["p_shared"] = s.p_shared;
  out["gamma0"] = s.gamma0;
  out["lda_alpha"] = s.lda_alpha;
  out["pi_topic"] = s.pi_topic;
  out["b_active"] = s.b_active;
  return out;
}

ModelState state_from_json(const json& in) {
  ModelState s;
  s.variant = parse_variant(in.at("variant").get<std::string>());
  s.V = in.at("V").get<std::int32_t>();
  s.J = in.at("J").get<std::int32_t>();
  s.K = in.at("K").get<std::int32_t>();
  in.at("token_term").get_to(s.token_term);
  in.at("doc_begin").get_to(s.doc_begin);
  in.at("z").get_to(s.z);
  in.at("phi").get_to(s.phi);
  in.at("theta").get_to(s.theta);
  in.at("r_topic").get_to(s.r_topic);
  in.at("r_doc").get_to(s.r_doc);
  in.at("p_topic").get_to(s.p_topic);
  in.at("p_doc").get_to(s.p_doc);
  s.p_shared = in.at("p_shared").get<double>();
  s.gamma0 = in.at("gamma0").get<double>();
  s.lda_alpha = in.at("lda_alpha").get<double>();
  in.at("pi_topic").get_to(s.pi_topic);
  in.at("b_active").get_to(s.b_active);
  s.n_vk.assign(static_cast<std::size_t>(s.V) * s.K, 0);
  s.n_jk.assign(static_cast<std::size_t>(s.J) * s.K, 0);
  s.n_k.assign(s.K, 0);
  s.recount_from_z();
  s.aug_l_jk.assign(static_cast<std::size_t>(s.J) * s.K, 0);
  s.aug_lprime_k.assign(s.K, 0);
  s.aug_lprime_j.assign(s.J, 0);
  return s;
}

}  // namespace

std::string checkpoint_to_json(const ChainCheckpoint& c) {
  json out;
  out["format"] = "nbp-checkpoint";
  out["version"] = ChainCheckpoint::kFormatVersion;
  out["spec"] = {{"variant", std::string(variant_name(c.spec.variant))},
                 {"a0", c.spec.hp.a0},
                 {"b0", c.spec.hp.b0},
                 {"e0", c.spec.hp.e0},
                 {"f0", c.spec.hp.f0},
                 {"c", c.spec.hp.c},
                 {"c_beta", c.spec.hp.c_beta},
                 {"eta", c.spec.hp.eta},
                 {"K", c.spec.hp.K},
                 {"lda_alpha", c.spec.lda_alpha}};
  out["iterations"] = c.iterations;
  out["burn_in"] = c.burn_in;
  out["warmup"] = c.warmup;
  out["seed"] = c.seed;
  out["chain_index"] = c.chain_index;
  out["iteration"] = c.iteration;
  out["clamp_events"] = c.clamp_events;
  out["rng"] = {{"state", c.rng.state()}, {"inc", c.rng.increment()}};
  out["state"] = state_to_json(c.state);
  out["acc"] = {{"samples", c.acc.samples()},
                {"f_raw", c.acc.raw_sums()},
                {"doc_total", c.acc.doc_totals()}};
  json trace = json::array();
  for (const auto& row : c.trace)
    trace.push_back(json::array({row.iteration, row.k_active,
                                 row.perplexity_so_far,
                                 row.has_perplexity}));
  out["trace"] = std::move(trace);
  out["train"] = matrix_to_json(c.train);
  out["heldout"] = matrix_to_json(c.heldout);
  return out.dump() + "\n";
}

ChainCheckpoint checkpoint_from_json(const std::string& text) {
  const json in = json::parse(text);
  if (in.at("format").get<std::string>() != "nbp-checkpoint")
    throw std::runtime_error("not an nbp checkpoint file");
  if (in.at("version").get<std::int32_t>() != ChainCheckpoint::kFormatVersion)
    throw std::runtime_error("unsupported checkpoint version");

  ChainCheckpoint c;
  const auto& spec = in.at("spec");
  c.spec.variant = parse_variant(spec.at("variant").get<std::string>());
  c.spec.hp.a0 = spec.at("a0").get<double>();
  c.spec.hp.b0 = spec.at("b0").get<double>();
  c.spec.hp.e0 = spec.at("e0").get<double>();
  c.spec.hp.f0 = spec.at("f0").get<double>();
  c.spec.hp.c = spec.at("c").get<double>();
  c.spec.hp.c_beta = spec.at("c_beta").get<double>();
  c.spec.hp.eta = spec.at("eta").get<double>();
  c.spec.hp.K = spec.at("K").get<std::int32_t>();
  c.spec.lda_alpha = spec.at("lda_alpha").get<double>();
  c.iterations = in.at("iterations").get<std::int32_t>();
  c.burn_in = in.at("burn_in").get<std::int32_t>();
  c.warmup = in.at("warmup").get<std::int32_t>();
  c.seed = in.at("seed").get<std::uint64_t>();
  c.chain_index = in.at("chain_index").get<std::int32_t>();
  c.iteration = in.at("iteration").get<std::int32_t>();
  c.clamp_events = in.at("clamp_events").get<std::uint64_t>();
  c.rng = RngStream::restore(in.at("rng").at("state").get<std::uint64_t>(),
                             in.at("rng").at("inc").get<std::uint64_t>());
  c.state = state_from_json(in.at("state"));
  c.train = matrix_from_json(in.at("train"));
  c.heldout = matrix_from_json(in.at("heldout"));
  c.acc = PredictiveAccumulator(c.state.J, c.state.V);
  c.acc.restore(in.at("acc").at("f_raw").get<std::vector<double>>(),
                in.at("acc").at("doc_total").get<std::vector<double>>(),
                in.at("acc").at("samples").get<std::int64_t>());
  for (const auto& row : in.at("trace")) {
    TraceRow t;
    t.iteration = row.at(0).get<std::int32_t>();
    t.k_active = row.at(1).get<std::int32_t>();
    t.perplexity_so_far = row.at(2).get<double>();
    t.has_perplexity = row.at(3).get<bool>();
    c.trace.push_back(t);
  }
  return c;
}

void save_checkpoint(const ChainCheckpoint& ckpt,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << checkpoint_to_json(ckpt);
}

ChainCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace nbp
