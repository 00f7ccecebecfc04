// Copyright 2026 The AGCN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "agcn/baselines.hpp"
#include "agcn/checkpoint.hpp"
#include "agcn/eval.hpp"
#include "agcn/extraction.hpp"
#include "agcn/graph.hpp"
#include "agcn/model.hpp"
#include "agcn/parallel.hpp"
#include "agcn/training.hpp"
#include "json.hpp"

namespace agcn::cli {

namespace fs = std::filesystem;

std::string Command::format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string Command::config_line() const {
  std::string line = "agcn " + app_->get_name();
  for (const auto& opt : logged_) {
    std::string v = opt.value();
    if (v.empty()) continue;
    if (v.find_first_of(" \t'\"") != std::string::npos) v = "'" + v + "'";
    line += " " + opt.name + (opt.is_flag ? "=" : " ") + v;
  }
  return line;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::vector<std::string> apply_config_file(std::vector<std::string> args) {
  std::string path;
  std::set<std::string> given;
  for (std::size_t k = 0; k < args.size(); ++k) {
    const auto& a = args[k];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    given.insert(key);
    if (key == "config") {
      if (eq != std::string::npos)
        path = a.substr(eq + 1);
      else if (k + 1 < args.size())
        path = args[k + 1];
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty() || body.front() == '[') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(path, line_no, "expected key = value");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw ParseError(path, line_no, "empty key");
    if (key == "config") throw ParseError(path, line_no, "config files cannot nest");
    if (given.contains(key)) continue;
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

namespace {

std::vector<LabeledPair> read_pairs(const std::string& path, bool& labeled) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open pairs file '" + path + "'");
  std::vector<LabeledPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  int columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, '\t');) fields.push_back(f);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(path, line_no, "expected i<TAB>j[<TAB>label]");
    if (columns == 0) columns = static_cast<int>(fields.size());
    if (columns != static_cast<int>(fields.size()))
      throw ParseError(path, line_no, "mixed labeled and unlabeled rows");
    auto num = [&](const std::string& f, const char* what) {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || p != f.data() + f.size() || v > 0xffffffffULL)
        throw ParseError(path, line_no, std::string("bad ") + what + " '" + f + "'");
      return v;
    };
    LabeledPair pair;
    pair.i = static_cast<NodeId>(num(fields[0], "node id"));
    pair.j = static_cast<NodeId>(num(fields[1], "node id"));
    if (fields.size() == 3) {
      const auto label = num(fields[2], "label");
      if (label > 1) throw ParseError(path, line_no, "label must be 0 or 1");
      pair.label = static_cast<int>(label);
    }
    pairs.push_back(pair);
  }
  if (pairs.empty()) throw DataError("pairs file '" + path + "' has no pairs");
  labeled = columns == 3;
  return pairs;
}

std::vector<LabeledPair> read_labeled_pairs(const std::string& path) {
  bool labeled = false;
  auto pairs = read_pairs(path, labeled);
  if (!labeled) throw DataError("pairs file '" + path + "' needs a label column");
  return pairs;
}

void write_pairs(const fs::path& path, const std::vector<LabeledPair>& pairs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  for (const auto& p : pairs) out << p.i << '\t' << p.j << '\t' << p.label << '\n';
}

std::string real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Writes to path, or to stdout when path is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw DataError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

AttributedGraph load_graph(const std::string& dir) {
  if (dir.empty()) throw UsageError("--graph is required");
  IngestReport report;
  auto g = ingest(GraphFiles::in_directory(dir), &report);
  if (report.duplicate_edges_dropped)
    std::cerr << "agcn: dropped " << report.duplicate_edges_dropped << " duplicate edges\n";
  return g;
}

ExtractionMode parse_mode(const std::string& mode) {
  if (mode == "inference") return ExtractionMode::kInference;
  if (mode == "train") return ExtractionMode::kTrainPositive;
  throw UsageError("--mode must be 'inference' or 'train'");
}

void add_extract_options(Command& cmd, ExtractOptions& eo) {
  cmd.option("--hops", eo.hops, "Enclosing subgraph radius h");
  cmd.option("--cap", eo.max_neighbors, "Neighbor sample cap a per node");
  cmd.option("--max-path-length", eo.max_path_length, "Longest i-j path kept (0 = hops)");
  cmd.option("--max-paths", eo.max_paths, "Paths kept per pair");
}

void add_threads(Command& cmd, unsigned& threads) {
  cmd.option("--threads", threads, "Worker threads (0 = all cores)");
}

std::vector<TrainingExample> labeled_examples(const AttributedGraph& g,
                                              const std::vector<LabeledPair>& pairs,
                                              const ExtractOptions& eo, unsigned threads) {
  return build_labeled_dataset(g, pairs, eo, threads);
}

nlohmann::ordered_json attr_json(const EdgeAttr& a) {
  auto arr = nlohmann::ordered_json::array();
  for (auto v : a.values) arr.push_back(v);
  return arr;
}

// ---- subcommands ----

std::unique_ptr<Command> make_ingest(CLI::App& app) {
  struct State {
    std::string schema, nodes, edges, dir, out;
  };
  auto st = std::make_shared<State>();
  auto cmd = std::make_unique<Command>(
      app.add_subcommand("ingest", "Validate graph files and optionally re-export them"));
  cmd->option("--graph", st->dir, "Directory with schema.tsv, nodes.tsv, edges.tsv");
  cmd->option("--schema", st->schema, "Schema file (overrides --graph)");
  cmd->option("--nodes", st->nodes, "Node file (overrides --graph)");
  cmd->option("--edges", st->edges, "Edge file (overrides --graph)");
  cmd->option("--out", st->out, "Directory for the normalized export");
  cmd->run = [st] {
    GraphFiles files = st->dir.empty() ? GraphFiles{} : GraphFiles::in_directory(st->dir);
    if (!st->schema.empty()) files.schema = st->schema;
    if (!st->nodes.empty()) files.nodes = st->nodes;
    if (!st->edges.empty()) files.edges = st->edges;
    if (files.schema.empty() || files.nodes.empty() || files.edges.empty())
      throw UsageError("give --graph or all of --schema, --nodes, --edges");
    IngestReport report;
    const auto g = ingest(files, &report);
    std::cout << "nodes\t" << g.node_count() << "\nedges\t" << g.edge_count()
              << "\nnode_dim\t" << g.node_dim() << "\ngroups\t" << g.schema().group_count()
              << "\nduplicates_dropped\t" << report.duplicate_edges_dropped << '\n';
    if (!st->out.empty()) {
      fs::create_directories(st->out);
      export_graph(g, GraphFiles::in_directory(st->out));
    }
    return 0;
  };
  return cmd;
}

std::unique_ptr<Command> make_extract(CLI::App& app) {
  struct State {
    std::string graph, pairs, mode = "inference", out;
    ExtractOptions eo;
    unsigned threads = 0;
  };
  auto st = std::make_shared<State>();
  auto cmd = std::make_unique<Command>(
      app.add_subcommand("extract", "Dump enclosing subgraphs and paths as JSON lines"));
  cmd->option("--graph", st->graph, "Graph directory")->required();
  cmd->option("--pairs", st->pairs, "Pairs TSV (i<TAB>j[<TAB>label])")->required();
  cmd->option("--mode", st->mode, "inference or train (target edge removed)");
  add_extract_options(*cmd, st->eo);
  cmd->option("--seed", st->eo.seed, "Sampling seed");
  cmd->option("--out", st->out, "Output file (default stdout)");
  add_threads(*cmd, st->threads);
  cmd->finalize = [st] { st->threads = resolve_threads(st->threads); };
  cmd->run = [st] {
    const auto g = load_graph(st->graph);
    bool labeled = false;
    const auto pairs = read_pairs(st->pairs, labeled);
    const auto mode = parse_mode(st->mode);
    std::vector<std::string> lines(pairs.size());
    parallel_for(pairs.size(), st->threads, [&](std::size_t k) {
      const auto ex = make_example(g, pairs[k].i, pairs[k].j, pairs[k].label, mode, st->eo);
      nlohmann::ordered_json j;
      j["i"] = ex.i;
      j["j"] = ex.j;
      j["mode"] = st->mode;
      j["nodes"] = ex.sub.local_ids;
      auto edges = nlohmann::ordered_json::array();
      for (const auto& e : ex.sub.edges)
        edges.push_back(nlohmann::ordered_json::array({e.u, e.v, attr_json(e.attr)}));
      j["edges"] = std::move(edges);
      auto paths = nlohmann::ordered_json::array();
      for (const auto& p : ex.bundle.paths) paths.push_back(p.node_seq);
      j["paths"] = std::move(paths);
      j["truncated"] = ex.bundle.truncated;
      lines[k] = j.dump();
    });
    Output out(st->out);
    for (const auto& line : lines) out.stream() << line << '\n';
    return 0;
  };
  return cmd;
}

std::unique_ptr<Command> make_synth(CLI::App& app) {
  struct State {
    SynthConfig cfg;
    std::string out;
  };
  auto st = std::make_shared<State>();
  auto& c = st->cfg;
  auto cmd = std::make_unique<Command>(
      app.add_subcommand("synth", "Generate a planted-signal user-item graph"));
  cmd->option("--out", st->out, "Output directory")->required();
  cmd->option("--seed", c.seed, "Generator seed");
  cmd->option("--users", c.n_users, "Number of user nodes");
  cmd->option("--items", c.n_items, "Number of item nodes");
  cmd->option("--edges", c.n_edges, "Total user-item edges");
  cmd->option("--train-pairs", c.n_train_pairs, "Labeled item pairs for training");
  cmd->option("--test-pairs", c.n_test_pairs, "Labeled item pairs held out for testing");
  cmd->option("--signal-group", c.signal_group, "Group whose agreement drives labels");
  cmd->option("--signal-strength", c.signal_strength, "P(positive | agreement)");
  cmd->option("--noise-rate", c.noise_rate, "P(positive) for pairs not made positive");
  cmd->option("--extra-path-rate", c.extra_path_rate, "P(pair gets extra connecting users)");
  cmd->option("--max-extra-paths", c.max_extra_paths, "Most extra connecting users");
  cmd->option("--missing-rate", c.missing_rate, "P(non-signal attribute missing)");
  cmd->run = [st] {
    const auto& cfg = st->cfg;
    const auto result = generate_synthetic(cfg);
    fs::create_directories(st->out);
    const fs::path dir(st->out);
    export_graph(result.graph, GraphFiles::in_directory(dir));
    write_pairs(dir / "train_pairs.tsv", result.train_pairs);
    write_pairs(dir / "test_pairs.tsv", result.test_pairs);

    nlohmann::ordered_json truth;
    truth["seed"] = cfg.seed;
    truth["n_users"] = cfg.n_users;
    truth["n_items"] = cfg.n_items;
    truth["n_edges"] = cfg.n_edges;
    truth["signal_group"] = cfg.schema.group(cfg.signal_group).name;
    truth["signal_strength"] = cfg.signal_strength;
    truth["noise_rate"] = cfg.noise_rate;
    truth["extra_path_rate"] = cfg.extra_path_rate;
    truth["max_extra_paths"] = cfg.max_extra_paths;
    truth["missing_rate"] = cfg.missing_rate;
    auto pairs = nlohmann::ordered_json::array();
    for (const auto& p : result.truth)
      pairs.push_back({{"i", p.i},
                       {"j", p.j},
                       {"user", p.user},
                       {"agree", p.agree},
                       {"label", p.label},
                       {"split", p.test ? "test" : "train"},
                       {"extra_paths", p.extra_paths}});
    truth["pairs"] = std::move(pairs);
    std::ofstream(dir / "truth.json") << truth.dump(1) << '\n';
    std::cout << "wrote " << result.graph.node_count() << " nodes, "
              << result.graph.edge_count() << " edges, " << result.train_pairs.size()
              << " train and " << result.test_pairs.size() << " test pairs to " << st->out
              << '\n';
    return 0;
  };
  return cmd;
}

std::unique_ptr<Command> make_train(CLI::App& app) {
  struct State {
    std::string graph, pairs, out, trace, model = "agcn", optimizer = "adam";
    TrainConfig tc;
    ExtractOptions eo;
    std::size_t layers = 2, hidden = 32, mlp_hidden = 32;
    double slope = 0.01, tau = 0;
    bool symmetric = false;
  };
  auto st = std::make_shared<State>();
  auto& tc = st->tc;
  auto cmd = std::make_unique<Command>(app.add_subcommand(
      "train", "Train AGCN or the Concat baseline on labeled or positive pairs"));
  cmd->option("--graph", st->graph, "Graph directory")->required();
  cmd->option("--pairs", st->pairs,
              "Pairs TSV: i<TAB>j<TAB>label, or i<TAB>j positives (negatives sampled)")
      ->required();
  cmd->option("--out", st->out, "Checkpoint path")->required();
  cmd->option("--trace", st->trace, "CSV of epoch,loss,val_auc");
  cmd->option("--model", st->model, "agcn or concat");
  cmd->option("--layers", st->layers, "GCN layers L");
  cmd->option("--hidden", st->hidden, "Hidden width F");
  cmd->option("--mlp-hidden", st->mlp_hidden, "Classifier hidden width");
  cmd->option("--leaky-slope", st->slope, "Leaky ReLU negative slope");
  cmd->flag("--symmetric-readout", st->symmetric, "Read out (u+v, |u-v|)");
  cmd->option("--interaction-tau", st->tau,
              "Project only groups present on at least this fraction of edges");
  add_extract_options(*cmd, st->eo);
  cmd->option("--epochs", tc.epochs, "Training epochs");
  cmd->option("--batch-size", tc.batch_size, "Mini-batch size");
  cmd->option("--learning-rate", tc.learning_rate, "Step size");
  cmd->option("--optimizer", st->optimizer, "sgd or adam");
  cmd->option("--beta1", tc.beta1, "Adam beta1");
  cmd->option("--beta2", tc.beta2, "Adam beta2");
  cmd->option("--adam-epsilon", tc.adam_epsilon, "Adam epsilon");
  cmd->option("--l2-weight", tc.l2_weight, "L2 penalty");
  cmd->option("--neg-ratio", tc.neg_ratio, "Negatives per positive for unlabeled pairs");
  cmd->option("--early-stop-patience", tc.early_stop_patience, "0 disables early stopping");
  cmd->option("--validation-fraction", tc.validation_fraction, "Stratified validation split");
  cmd->option("--seed", tc.seed, "Seed for init, shuffling, sampling");
  add_threads(*cmd, tc.threads);
  cmd->finalize = [st] { st->tc.threads = resolve_threads(st->tc.threads); };
  cmd->run = [st] {
    auto& tc = st->tc;
    tc.optimizer = parse_optimizer(st->optimizer);
    tc.validate();
    const auto g = load_graph(st->graph);
    bool labeled = false;
    const auto pairs = read_pairs(st->pairs, labeled);
    ExtractOptions eo = st->eo;
    eo.seed = tc.seed;
    std::vector<TrainingExample> dataset;
    if (labeled) {
      dataset = build_labeled_dataset(g, pairs, eo, tc.threads);
    } else {
      std::vector<std::pair<NodeId, NodeId>> positives;
      for (const auto& p : pairs) positives.emplace_back(p.i, p.j);
      dataset = build_dataset(g, positives, tc.neg_ratio, eo, tc.threads);
    }
    auto mc = ModelConfig::for_graph(g, parse_model_kind(st->model));
    mc.layers = st->layers;
    mc.hidden = st->hidden;
    mc.mlp_hidden = st->mlp_hidden;
    mc.leaky_slope = static_cast<Scalar>(st->slope);
    mc.symmetric_readout = st->symmetric;
    if (st->tau > 0) mc.interaction_groups = select_high_frequency_groups(g, st->tau);
    const auto result = train(dataset, ModelParams::initialize(mc, tc.seed), tc);
    save_checkpoint(st->out, result.params);
    if (!st->trace.empty()) {
      Output out(st->trace);
      out.stream() << "epoch,loss,val_auc\n";
      for (const auto& e : result.trace)
        out.stream() << e.epoch << ',' << real(e.loss) << ','
                     << (std::isnan(e.val_auc) ? std::string("nan") : real(e.val_auc)) << '\n';
    }
    std::cout << "examples\t" << dataset.size() << "\nepochs_run\t" << result.trace.size()
              << "\nbest_epoch\t" << result.best_epoch << "\nfinal_loss\t"
              << (result.trace.empty() ? std::string("nan") : real(result.trace.back().loss))
              << '\n';
    return 0;
  };
  return cmd;
}

std::vector<double> model_scores(const AttributedGraph& g, const std::string& checkpoint,
                                 const std::vector<LabeledPair>& pairs, const ExtractOptions& eo,
                                 unsigned threads, ModelKind* kind = nullptr) {
  const auto params = load_checkpoint(checkpoint, g.schema());
  if (kind) *kind = params.config.kind;
  const auto examples = labeled_examples(g, pairs, eo, threads);
  return predict(params, examples, threads);
}

std::unique_ptr<Command> make_eval(CLI::App& app) {
  struct State {
    std::string graph, pairs, checkpoint, method, scores;
    ExtractOptions eo;
    unsigned threads = 0;
  };
  auto st = std::make_shared<State>();
  auto cmd = std::make_unique<Command>(
      app.add_subcommand("eval", "AUC of a checkpoint or heuristic on labeled pairs"));
  cmd->option("--graph", st->graph, "Graph directory")->required();
  cmd->option("--pairs", st->pairs, "Labeled pairs TSV")->required();
  cmd->option("--checkpoint", st->checkpoint, "Trained model");
  cmd->option("--method", st->method, "Heuristic instead of a model: cn, jaccard or aa");
  add_extract_options(*cmd, st->eo);
  cmd->option("--seed", st->eo.seed, "Sampling seed (use the training seed)");
  cmd->option("--scores", st->scores, "CSV of i,j,score,label");
  add_threads(*cmd, st->threads);
  cmd->finalize = [st] { st->threads = resolve_threads(st->threads); };
  cmd->run = [st] {
    if (st->checkpoint.empty() == st->method.empty())
      throw UsageError("give exactly one of --checkpoint and --method");
    const auto g = load_graph(st->graph);
    const auto pairs = read_labeled_pairs(st->pairs);
    std::vector<double> scores;
    if (!st->checkpoint.empty()) {
      scores = model_scores(g, st->checkpoint, pairs, st->eo, st->threads);
    } else {
      const auto method = parse_heuristic(st->method);
      for (const auto& p : pairs) scores.push_back(heuristic_score(g, method, p.i, p.j));
    }
    std::vector<ScoredPair> scored;
    for (std::size_t k = 0; k < pairs.size(); ++k)
      scored.push_back({pairs[k].i, pairs[k].j, scores[k], pairs[k].label});
    const double a = auc(scored);
    std::cout << "auc\t" << real(a) << '\n';
    if (!st->scores.empty()) {
      Output out(st->scores);
      out.stream() << "i,j,score,label\n";
      for (const auto& s : scored)
        out.stream() << s.i << ',' << s.j << ',' << real(s.score) << ',' << s.label << '\n';
    }
    return 0;
  };
  return cmd;
}

std::unique_ptr<Command> make_predict(CLI::App& app) {
  struct State {
    std::string graph, pairs, checkpoint, out;
    ExtractOptions eo;
    unsigned threads = 0;
  };
  auto st = std::make_shared<State>();
  auto cmd = std::make_unique<Command>(
      app.add_subcommand("predict", "Link probabilities from a checkpoint"));
  cmd->option("--graph", st->graph, "Graph directory")->required();
  cmd->option("--checkpoint", st->checkpoint, "Trained model")->required();
  cmd->option("--pairs", st->pairs, "Pairs TSV (labels ignored)")->required();
  add_extract_options(*cmd, st->eo);
  cmd->option("--seed", st->eo.seed, "Sampling seed");
  cmd->option("--out", st->out, "Output TSV (default stdout)");
  add_threads(*cmd, st->threads);
  cmd->finalize = [st] { st->threads = resolve_threads(st->threads); };
  cmd->run = [st] {
    const auto g = load_graph(st->graph);
    bool labeled = false;
    const auto pairs = read_pairs(st->pairs, labeled);
    const auto probs = model_scores(g, st->checkpoint, pairs, st->eo, st->threads);
    Output out(st->out);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      out.stream() << pairs[k].i << '\t' << pairs[k].j << '\t' << real(probs[k]) << '\n';
    return 0;
  };
  return cmd;
}

std::unique_ptr<Command> make_baseline(CLI::App& app) {
  struct State {
    std::string graph, pairs, method = "cn", checkpoint, out;
    ExtractOptions eo;
    unsigned threads = 0;
  };
  auto st = std::make_shared<State>();
  auto cmd = std::make_unique<Command>(
      app.add_subcommand("baseline", "Score pairs with a heuristic or a Concat checkpoint"));
  cmd->option("--graph", st->graph, "Graph directory")->required();
  cmd->option("--pairs", st->pairs, "Pairs TSV")->required();
  cmd->option("--method", st->method, "cn, jaccard, aa or concat");
  cmd->option("--checkpoint", st->checkpoint, "Concat checkpoint (train --model concat)");
  add_extract_options(*cmd, st->eo);
  cmd->option("--seed", st->eo.seed, "Sampling seed (concat only)");
  cmd->option("--out", st->out, "Output TSV (default stdout)");
  add_threads(*cmd, st->threads);
  cmd->finalize = [st] { st->threads = resolve_threads(st->threads); };
  cmd->run = [st] {
    const auto g = load_graph(st->graph);
    bool labeled = false;
    const auto pairs = read_pairs(st->pairs, labeled);
    std::vector<double> scores;
    if (st->method == "concat") {
      if (st->checkpoint.empty()) throw UsageError("--method concat needs --checkpoint");
      ModelKind kind{};
      scores = model_scores(g, st->checkpoint, pairs, st->eo, st->threads, &kind);
      if (kind != ModelKind::kConcat)
        throw CheckpointError("checkpoint '" + st->checkpoint + "' is not a concat model");
    } else {
      const auto method = parse_heuristic(st->method);
      for (const auto& p : pairs) scores.push_back(heuristic_score(g, method, p.i, p.j));
    }
    Output out(st->out);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      out.stream() << pairs[k].i << '\t' << pairs[k].j << '\t' << real(scores[k]) << '\n';
    return 0;
  };
  return cmd;
}

std::unique_ptr<Command> make_stats(CLI::App& app) {
  struct State {
    std::string graph, pairs, rates, groups, checkpoint;
    std::size_t k = 1;
    ExtractOptions eo;
    unsigned threads = 0;
  };
  auto st = std::make_shared<State>();
  auto cmd = std::make_unique<Command>(
      app.add_subcommand("stats", "Path statistics per label and attribute-rate tables"));
  cmd->option("--graph", st->graph, "Graph directory")->required();
  cmd->option("--pairs", st->pairs, "Labeled pairs TSV")->required();
  cmd->option("--k", st->k, "Report the fraction of pairs with at most k paths");
  add_extract_options(*cmd, st->eo);
  cmd->option("--seed", st->eo.seed, "Sampling seed");
  cmd->option("--rates", st->rates, "Write the agreement-pattern rate table here");
  cmd->option("--groups", st->groups, "Comma-separated groups for --rates (default all)");
  cmd->option("--checkpoint", st->checkpoint, "Rate table over predictions, not labels");
  add_threads(*cmd, st->threads);
  cmd->finalize = [st] { st->threads = resolve_threads(st->threads); };
  cmd->run = [st] {
    const auto g = load_graph(st->graph);
    const auto pairs = read_labeled_pairs(st->pairs);
    const auto examples = labeled_examples(g, pairs, st->eo, st->threads);
    std::cout << format_path_stats(path_stats(examples, st->k));
    if (st->rates.empty()) return 0;

    std::vector<std::size_t> groups;
    if (st->groups.empty()) {
      for (std::size_t grp = 0; grp < g.schema().group_count(); ++grp) groups.push_back(grp);
    } else {
      std::stringstream ss(st->groups);
      for (std::string name; std::getline(ss, name, ',');) {
        auto idx = g.schema().find(trim(name));
        if (!idx) throw UsageError("unknown group '" + name + "' in --groups");
        groups.push_back(*idx);
      }
    }
    std::vector<double> values;
    if (!st->checkpoint.empty()) {
      const auto params = load_checkpoint(st->checkpoint, g.schema());
      values = predict(params, examples, st->threads);
    } else {
      for (const auto& ex : examples) values.push_back(ex.label);
    }
    const auto rows = attribute_rate_table(examples, values, groups);
    Output out(st->rates);
    out.stream() << format_rate_table(rows, g.schema(), groups);
    return 0;
  };
  return cmd;
}

}  // namespace

std::unique_ptr<Registry> register_commands(CLI::App& app) {
  auto reg = std::make_unique<Registry>();
  reg->commands.push_back(make_ingest(app));
  reg->commands.push_back(make_extract(app));
  reg->commands.push_back(make_synth(app));
  reg->commands.push_back(make_train(app));
  reg->commands.push_back(make_eval(app));
  reg->commands.push_back(make_predict(app));
  reg->commands.push_back(make_baseline(app));
  reg->commands.push_back(make_stats(app));
  for (auto& cmd : reg->commands) {
    cmd->app()->add_option("--config", reg->config_path, "Flat key = value file");
    cmd->app()->footer(
        "Precedence: command-line flags override --config file values, which override "
        "defaults.\nConfig file: one `key = value` per line; keys are flag names without "
        "the leading dashes (underscores allowed); `#` starts a comment.");
  }
  return reg;
}

}  // namespace agcn::cli
