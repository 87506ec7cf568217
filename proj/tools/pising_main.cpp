// pising: planar Ising model toolkit.
//
// Subcommands: gen, sample, fit, infer, eval, export-dot. Data goes to files,
// diagnostics to stderr; every file output gets a .manifest.json sidecar.
// Exit codes: 0 success, 1 runtime/data error, 2 usage error, 3 fit ran but
// did not fully converge (outputs still written).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pising/fit.hpp"
#include "pising/graph.hpp"
#include "pising/io.hpp"
#include "pising/ising.hpp"
#include "pising/kacward.hpp"
#include "pising/learn.hpp"
#include "pising/sample.hpp"
#include "pising/version.hpp"

namespace {

using namespace pising;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

GenSpec parse_kind(const std::string& kind) {
  GenSpec spec;
  auto colon = kind.find(':');
  std::string name = kind.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : kind.substr(colon + 1);
  auto parse_int = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad --kind argument '" + kind + "'");
    }
  };
  if (name == "grid") {
    auto x = arg.find_first_of("xX");
    if (x == std::string::npos) throw UsageError("grid kind needs RxC, e.g. grid:7x7");
    spec.kind = ModelKind::grid;
    spec.rows = parse_int(arg.substr(0, x));
    spec.cols = parse_int(arg.substr(x + 1));
  } else if (name == "outerplanar") {
    spec.kind = ModelKind::outerplanar;
    spec.n = parse_int(arg);
  } else if (name == "random-planar") {
    spec.kind = ModelKind::random_planar;
    spec.n = parse_int(arg);
  } else {
    throw UsageError("unknown --kind '" + kind + "' (grid:RxC, outerplanar:N, random-planar:N)");
  }
  return spec;
}

// The original-variable view of a stored model: extended models are
// restricted, already-plain models pass through.
IsingModel original_view(const IsingModel& model, std::vector<std::string>& notes) {
  if (model.aux_vertex) {
    notes.push_back("extended model restricted to its original variables");
    return restrict_extended(model);
  }
  return model;
}

int cmd_gen(const std::string& kind, const std::string& range, double min_abs,
            std::uint64_t seed, const std::string& out) {
  Timer timer;
  GenSpec spec = parse_kind(kind);
  {
    std::istringstream ss(range);
    char comma = 0;
    if (!(ss >> spec.lo >> comma >> spec.hi) || comma != ',')
      throw UsageError("bad --range, expected lo,hi");
  }
  spec.min_abs = min_abs;
  spec.seed = seed;

  GeneratedModel gen = gen_model(spec);
  save_model(out, gen.model, &gen.embedding);

  RunManifest m;
  m.subcommand = "gen";
  m.flags = {{"kind", kind}, {"range", range}, {"min_abs", std::to_string(min_abs)}};
  m.seed = seed;
  m.outputs = {out};
  m.wall_clock_sec = timer.seconds();
  m.version = kVersion;
  save_manifest(out, m);
  return 0;
}

int cmd_sample(const std::string& model_path, long num, int burn, int thin,
               std::uint64_t seed, const std::string& out) {
  Timer timer;
  LoadedModel loaded = load_model(model_path);
  std::vector<std::string> notes;
  IsingModel model = original_view(loaded.model, notes);

  SampleConfig cfg;
  cfg.num_samples = num;
  cfg.burn_in = burn;
  cfg.thin = thin;
  cfg.seed = seed;
  save_samples(out, gibbs_sample(model, cfg));

  RunManifest m;
  m.subcommand = "sample";
  m.flags = {{"model", model_path},
             {"num", std::to_string(num)},
             {"burn", std::to_string(burn)},
             {"thin", std::to_string(thin)}};
  m.seed = seed;
  m.inputs = {model_path};
  m.outputs = {out};
  m.wall_clock_sec = timer.seconds();
  m.version = kVersion;
  m.notes = notes;
  save_manifest(out, m);
  return 0;
}

int cmd_fit(const std::string& samples_path, const std::string& moments_path,
            bool zero_one, const std::string& mode, const std::string& stop,
            std::optional<int> max_edges, const std::string& out,
            const std::string& trace_path) {
  Timer timer;
  if (samples_path.empty() == moments_path.empty())
    throw UsageError("need exactly one of --samples and --moments");

  MomentSet targets;
  std::vector<std::string> inputs;
  if (!samples_path.empty()) {
    targets = empirical_moments(load_samples(samples_path, zero_one));
    inputs.push_back(samples_path);
  } else {
    targets = load_moments(moments_path);
    inputs.push_back(moments_path);
  }

  LearnConfig cfg;
  cfg.max_edges = max_edges;
  if (mode == "zero-field") {
    cfg.mode = LearnMode::zero_field_planar;
  } else if (mode == "outer-planar") {
    cfg.mode = LearnMode::outer_planar;
  } else if (mode == "mixed") {
    cfg.mode = LearnMode::mixed;
  } else {
    throw UsageError("unknown --mode '" + mode + "'");
  }
  if (stop == "maximal") {
    cfg.stop = StopRule::maximal;
  } else if (stop.rfind("gamma:", 0) == 0) {
    cfg.stop = StopRule::threshold;
    try {
      cfg.gamma = std::stod(stop.substr(6));
    } catch (const std::exception&) {
      throw UsageError("bad --stop gamma value");
    }
    if (cfg.gamma < 0) throw UsageError("gamma must be >= 0");
  } else if (stop == "aic") {
    cfg.stop = StopRule::aic;
  } else if (stop == "bic") {
    cfg.stop = StopRule::bic;
  } else {
    throw UsageError("unknown --stop '" + stop + "' (maximal, gamma:V, aic, bic)");
  }

  LearnResult result;
  switch (cfg.mode) {
    case LearnMode::zero_field_planar:
      result = greedy_planar_select(targets, cfg);
      break;
    case LearnMode::outer_planar:
      result = learn_outer_planar(targets, cfg);
      break;
    case LearnMode::mixed:
      result = learn_mixed(targets, cfg);
      break;
  }

  PlanarEmbedding drawing = straight_line_drawing(result.model.graph);
  save_model(out, result.model, &drawing);
  if (!trace_path.empty()) save_trace(trace_path, result.trace);

  RunManifest m;
  m.subcommand = "fit";
  m.flags = {{"mode", mode}, {"stop", stop}, {"zero_one", zero_one ? "1" : "0"}};
  if (max_edges) m.flags.emplace_back("max_edges", std::to_string(*max_edges));
  m.inputs = inputs;
  m.outputs = {out};
  if (!trace_path.empty()) m.outputs.push_back(trace_path);
  m.wall_clock_sec = timer.seconds();
  m.version = kVersion;
  m.notes = result.trace.warnings;
  if (!result.trace.all_fits_converged) m.notes.push_back("fit did not fully converge");
  save_manifest(out, m);

  for (const std::string& w : result.trace.warnings) std::cerr << "warning: " << w << "\n";
  return result.trace.all_fits_converged ? 0 : 3;
}

int cmd_infer(const std::string& model_path, const std::string& query,
              const std::string& out) {
  Timer timer;
  if (query != "logz" && query != "moments") throw UsageError("--query must be logz or moments");

  LoadedModel loaded = load_model(model_path);
  std::vector<std::string> notes;

  // Inference happens on a zero-field graph: either the stored model itself
  // or the extension of a fielded one. Results are reported over the
  // original variables.
  IsingModel original = original_view(loaded.model, notes);
  IsingModel working;
  int aux = -1;
  if (original.zero_field()) {
    working = original;
  } else {
    working = extend_zero_field(original);
    aux = *working.aux_vertex;
    notes.push_back("fields absorbed into an auxiliary vertex");
  }

  double log_z = 0;
  std::optional<MomentSet> moments;
  if (is_planar(working.graph)) {
    PlanarEmbedding emb = straight_line_drawing(working.graph);
    KacWardSystem sys = build_kacward(working, emb);
    if (query == "logz") {
      log_z = sys.log_partition();
    } else {
      Eigen::VectorXd mu = sys.edge_moments();
      moments = MomentSet(working.graph.num_vertices());
      for (int k = 0; k < working.graph.num_edges(); ++k) {
        auto [u, v] = working.graph.edges()[k];
        moments->set_pair(u, v, mu[k]);
      }
    }
  } else if (working.graph.num_vertices() <= 20) {
    notes.push_back("non-planar graph: brute-force enumeration used");
    BruteForceResult bf = brute_force_inference(original);
    log_z = bf.log_partition + (aux >= 0 ? std::numbers::ln2 : 0.0);
    if (query == "moments") {
      moments = MomentSet(working.graph.num_vertices());
      for (int k = 0; k < original.graph.num_edges(); ++k) {
        auto [u, v] = original.graph.edges()[k];
        moments->set_pair(u, v, bf.moments.pair(u, v));
      }
      if (aux >= 0)
        for (int i = 0; i < original.graph.num_vertices(); ++i)
          if (original.theta_nodes[i] != 0) moments->set_pair(i, aux, bf.moments.first[i]);
    }
  } else {
    throw NonPlanarError("model graph is not planar and too large for enumeration");
  }

  std::ostringstream buf;
  buf.precision(17);
  if (query == "logz") {
    if (aux >= 0) log_z -= std::numbers::ln2;  // back to the original variables
    buf << "logz," << log_z << "\n";
  } else {
    // Moments CSV over the original variables: aux edges become first-moment
    // rows, everything else pair rows.
    for (int k = 0; k < working.graph.num_edges(); ++k) {
      auto [u, v] = working.graph.edges()[k];
      double mu = moments->pair(u, v);
      if (aux >= 0 && v == aux) continue;
      buf << u << "," << v << "," << mu << "\n";
    }
    if (aux >= 0) {
      for (int k = 0; k < working.graph.num_edges(); ++k) {
        auto [u, v] = working.graph.edges()[k];
        if (v == aux) buf << u << "," << moments->pair(u, v) << "\n";
      }
    }
  }
  {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw BadValueError("cannot write " + out);
    f << buf.str();
  }

  RunManifest m;
  m.subcommand = "infer";
  m.flags = {{"model", model_path}, {"query", query}};
  m.inputs = {model_path};
  m.outputs = {out};
  m.wall_clock_sec = timer.seconds();
  m.version = kVersion;
  m.notes = notes;
  save_manifest(out, m);
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& samples_path, bool zero_one) {
  LoadedModel loaded = load_model(model_path);
  Eigen::MatrixXi samples = load_samples(samples_path, zero_one);
  double avg_ll = average_log_likelihood(loaded.model, samples);
  std::cout.precision(17);
  std::cout << avg_ll << "\n";
  return 0;
}

int cmd_export_dot(const std::string& model_path, const std::string& out) {
  Timer timer;
  LoadedModel loaded = load_model(model_path);
  std::string dot = model_to_dot(loaded.model,
                                 loaded.embedding ? &*loaded.embedding : nullptr);
  std::ofstream f(out, std::ios::binary);
  if (!f) throw BadValueError("cannot write " + out);
  f << dot;
  f.close();

  RunManifest m;
  m.subcommand = "export-dot";
  m.flags = {{"model", model_path}};
  m.inputs = {model_path};
  m.outputs = {out};
  m.wall_clock_sec = timer.seconds();
  m.version = kVersion;
  save_manifest(out, m);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar Ising model toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic model");
  std::string gen_kind, gen_range = "-1,1", gen_out;
  double gen_min_abs = 0.05;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "grid:RxC | outerplanar:N | random-planar:N")->required();
  gen->add_option("--range", gen_range, "theta range lo,hi");
  gen->add_option("--min-abs", gen_min_abs, "minimum |theta|");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output model JSON")->required();

  // sample
  auto* smp = app.add_subcommand("sample", "Gibbs-sample a model");
  std::string smp_model, smp_out;
  long smp_num = 0;
  int smp_burn = 1000, smp_thin = 10;
  std::uint64_t smp_seed = 0;
  smp->add_option("--model", smp_model, "model JSON")->required();
  smp->add_option("--num", smp_num, "number of samples")->required();
  smp->add_option("--burn", smp_burn, "burn-in sweeps");
  smp->add_option("--thin", smp_thin, "sweeps between kept samples");
  smp->add_option("--seed", smp_seed, "RNG seed");
  smp->add_option("--out", smp_out, "output samples CSV")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "learn a model from data");
  std::string fit_samples, fit_moments, fit_mode = "zero-field", fit_stop = "maximal";
  std::string fit_out, fit_trace;
  bool fit_zero_one = false;
  std::optional<int> fit_max_edges;
  int fit_max_edges_raw = -1;
  fit->add_option("--samples", fit_samples, "samples CSV");
  fit->add_option("--moments", fit_moments, "moments CSV");
  fit->add_flag("--zero-one", fit_zero_one, "samples use 0/1 instead of -1/+1");
  fit->add_option("--mode", fit_mode, "zero-field | outer-planar | mixed");
  fit->add_option("--stop", fit_stop, "maximal | gamma:V | aic | bic");
  fit->add_option("--max-edges", fit_max_edges_raw, "cap on accepted edges");
  fit->add_option("--out", fit_out, "output model JSON")->required();
  fit->add_option("--trace", fit_trace, "output trace CSV");

  // infer
  auto* inf = app.add_subcommand("infer", "exact inference on a model");
  std::string inf_model, inf_query = "logz", inf_out;
  inf->add_option("--model", inf_model, "model JSON")->required();
  inf->add_option("--query", inf_query, "logz | moments");
  inf->add_option("--out", inf_out, "output CSV")->required();

  // eval
  auto* evl = app.add_subcommand("eval", "average log-likelihood of data");
  std::string evl_model, evl_samples;
  bool evl_zero_one = false;
  evl->add_option("--model", evl_model, "model JSON")->required();
  evl->add_option("--samples", evl_samples, "samples CSV")->required();
  evl->add_flag("--zero-one", evl_zero_one, "samples use 0/1 instead of -1/+1");

  // export-dot
  auto* dot = app.add_subcommand("export-dot", "write a Graphviz DOT file");
  std::string dot_model, dot_out;
  dot->add_option("--model", dot_model, "model JSON")->required();
  dot->add_option("--out", dot_out, "output DOT file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_kind, gen_range, gen_min_abs, gen_seed, gen_out);
    if (smp->parsed())
      return cmd_sample(smp_model, smp_num, smp_burn, smp_thin, smp_seed, smp_out);
    if (fit->parsed()) {
      if (fit->count("--max-edges")) fit_max_edges = fit_max_edges_raw;
      return cmd_fit(fit_samples, fit_moments, fit_zero_one, fit_mode, fit_stop,
                     fit_max_edges, fit_out, fit_trace);
    }
    if (inf->parsed()) return cmd_infer(inf_model, inf_query, inf_out);
    if (evl->parsed()) return cmd_eval(evl_model, evl_samples, evl_zero_one);
    if (dot->parsed()) return cmd_export_dot(dot_model, dot_out);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
