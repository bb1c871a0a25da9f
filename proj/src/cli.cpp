#include "divgnn/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "divgnn/complexity.hpp"
#include "divgnn/errors.hpp"
#include "divgnn/stats.hpp"
#include "divgnn/trainer.hpp"
#include "divgnn/tudataset.hpp"

namespace divgnn::cli {

namespace {

struct Options {
  ExperimentConfig exp;
  std::string model = "divgnn";
  std::string readout = "category";
  std::string replication = "on";
  double hp_a = 0.0;
  bool hp_fixed = false;
  bool internet_activation = true;
  bool internet_hetero_subgraph = false;
  bool virtual_every_layer = false;
  // subcommand extras
  int bins = 20;
  std::string grid = "branches";
  std::vector<std::string> variants;
  std::vector<std::uint64_t> seeds{0};
  int synth_nodes = 128;
  std::vector<long long> sizes{200, 400, 800, 1600, 3200};
  int reps = 5;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  return f;
}

void finalize_model_config(Options& o, const CLI::Option* hp_a_opt) {
  o.exp.model.kind = parse_model_kind(o.model);
  o.exp.model.readout = parse_readout_kind(o.readout);
  o.exp.model.replication = (o.replication == "on");
  o.exp.model.hidden = o.exp.train.hidden;
  o.exp.model.conv_layers = o.exp.train.conv_layers;
  o.exp.model.internet_activation = o.internet_activation;
  o.exp.model.internet_on_hetero_subgraph = o.internet_hetero_subgraph;
  o.exp.model.virtual_every_layer = o.virtual_every_layer;
  o.exp.model.hp.learnable = !o.hp_fixed;
  if (hp_a_opt != nullptr && hp_a_opt->count() > 0) {
    o.exp.model.hp.a_independent = true;
    o.exp.model.hp.a = o.hp_a;
  }
}

int run_stats(const Options& o, std::ostream& out) {
  Dataset d = load_tudataset(o.exp.data_dir, o.exp.dataset);
  DatasetStats s = compute_stats(d, o.exp.dataset, o.bins);
  out << format_stats_text(s);
  if (!o.exp.out_path.empty()) {
    auto f = open_out(o.exp.out_path);
    write_stats_csv(s, f);
    out << "stats csv written to " << o.exp.out_path << "\n";
  }
  return 0;
}

int run_train(const Options& o, std::ostream& out, std::ostream& err) {
  o.exp.validate();
  Dataset d = load_tudataset(o.exp.data_dir, o.exp.dataset);
  FoldPlan plan = stratified_kfold(d, o.exp.folds, o.exp.train.seed, &err);
  Report r = run_cv(d, o.exp, plan, o.exp.train.seed);
  out << r.dataset << " " << r.model << " " << r.metric << " "
      << format_display(r.metric, r.mean, r.stddev) << "\n";
  out << "folds:";
  for (double v : r.fold_values) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.4f", v);
    out << buf;
  }
  out << "\n";
  {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", r.wall_seconds);
    out << "wall_seconds: " << buf << "\n";
  }
  if (!o.exp.out_path.empty()) {
    export_report(r, o.exp.out_path);
    out << "report written to " << o.exp.out_path << "\n";
  } else {
    out << serialize_report(r);
  }
  return 0;
}

int run_ablate(const Options& o, std::ostream& out) {
  o.exp.validate();
  Dataset d = load_tudataset(o.exp.data_dir, o.exp.dataset);
  std::vector<std::string> variants =
      o.variants.empty() ? ablation_grid(o.grid) : o.variants;
  AblationTable t = run_ablation(d, o.exp, variants, o.seeds);
  if (!o.exp.out_path.empty()) {
    auto f = open_out(o.exp.out_path);
    write_ablation_csv(t, f);
    out << "ablation csv written to " << o.exp.out_path << "\n";
  } else {
    write_ablation_csv(t, out);
  }
  for (const auto& [label, mean, sd] : t.summary)
    out << label << ": " << format_display(t.metric, mean, sd) << "\n";
  return 0;
}

int run_complexity_cmd(const Options& o, std::ostream& out) {
  auto rows = run_complexity(o.synth_nodes, o.sizes, o.reps, o.exp.train.seed);
  if (!o.exp.out_path.empty()) {
    auto f = open_out(o.exp.out_path);
    write_complexity_csv(rows, f);
    out << "complexity csv written to " << o.exp.out_path << "\n";
  } else {
    write_complexity_csv(rows, out);
  }
  if (rows.size() >= 2) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", conv_edge_slope(rows));
    out << "# conv_vs_edges_loglog_slope=" << buf << "\n";
  }
  return 0;
}

int run_gradcheck(const Options& o, std::ostream& out) {
  const double tol = 1e-4;
  double worst = 0.0;
  for (ModelKind kind :
       {ModelKind::divgnn, ModelKind::intranet, ModelKind::internet, ModelKind::gcn,
        ModelKind::gcn_wo_hetero, ModelKind::hetero_gcn_fused,
        ModelKind::hetero_ego_fused}) {
    auto errs = model_gradcheck_errors(kind, o.exp.train.seed);
    double kind_max = 0.0;
    for (const auto& [name, e] : errs) kind_max = std::max(kind_max, e);
    worst = std::max(worst, kind_max);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", kind_max);
    out << to_string(kind) << ": max_rel_err " << buf
        << (kind_max <= tol ? " [ok]" : " [FAIL]") << "\n";
    for (const auto& [name, e] : errs) {
      std::snprintf(buf, sizeof(buf), "%.3e", e);
      out << "  " << name << " " << buf << "\n";
    }
  }
  if (worst <= tol) {
    out << "gradcheck: PASS (tolerance 1e-4)\n";
    return 0;
  }
  out << "gradcheck: FAIL (tolerance 1e-4)\n";
  return 3;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"divergent-path graph neural network toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");

  Options o;
  app.add_option("--dataset", o.exp.dataset, "dataset name (directory under --data-dir)")
      ->capture_default_str();
  app.add_option("--data-dir", o.exp.data_dir, "root directory holding datasets")
      ->capture_default_str();
  app.add_option("--model", o.model,
                 "divgnn | intranet | internet | gcn | gcn_wo_hetero | "
                 "hetero_gcn_fused | hetero_ego_fused")
      ->capture_default_str();
  app.add_option("--readout", o.readout, "category | sum | mean | max | virtual")
      ->capture_default_str();
  app.add_option("--replication", o.replication, "node replication preprocessing")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  app.add_option("--folds", o.exp.folds, "cross-validation folds")->capture_default_str();
  app.add_option("--epochs", o.exp.train.epochs, "training epochs per fold")
      ->capture_default_str();
  app.add_option("--batch-size", o.exp.train.batch_size, "graphs per optimizer step")
      ->capture_default_str();
  app.add_option("--lr", o.exp.train.lr, "initial learning rate")->capture_default_str();
  app.add_option("--lr-halve-every", o.exp.train.lr_halve_every,
                 "epochs between learning-rate halvings")
      ->capture_default_str();
  app.add_option("--hidden", o.exp.train.hidden, "convolution width")
      ->capture_default_str();
  app.add_option("--embed-dim", o.exp.model.embed_dim, "branch embedding width")
      ->capture_default_str();
  app.add_option("--d-prime", o.exp.model.d_prime, "per-category readout width")
      ->capture_default_str();
  app.add_option("--layers", o.exp.train.conv_layers, "convolution layers per branch")
      ->capture_default_str();
  app.add_option("--id-width", o.exp.model.id_width,
                 "identity feature width (0 = derive from data)")
      ->capture_default_str();
  app.add_option("--seed", o.exp.train.seed, "master RNG seed")->capture_default_str();
  app.add_option("--workers", o.exp.workers, "parallel fold workers")
      ->capture_default_str();
  app.add_option("--metric", o.exp.metric, "auto | accuracy | mae | auc")
      ->check(CLI::IsMember({"auto", "accuracy", "mae", "auc"}))
      ->capture_default_str();
  app.add_option("--out", o.exp.out_path, "output file path");
  app.add_flag("--internet-activation,!--no-internet-activation",
               o.internet_activation,
               "nonlinearity between heterophilic conv layers (default on)");
  app.add_flag("--internet-hetero-subgraph", o.internet_hetero_subgraph,
               "run the heterophilic branch on the heterophilic subgraph only");
  app.add_flag("--virtual-every-layer", o.virtual_every_layer,
               "update the virtual node after every conv layer");
  app.add_option("--hp-p", o.exp.model.hp.p, "high-pass magnitude init")
      ->capture_default_str();
  app.add_option("--hp-e", o.exp.model.hp.e, "high-pass cut-off init")
      ->capture_default_str();
  CLI::Option* hp_a_opt =
      app.add_option("--hp-a", o.hp_a, "decouple the offset term from the cut-off");
  app.add_flag("--hp-fixed", o.hp_fixed, "freeze the high-pass filter parameters");

  CLI::App* c_stats = app.add_subcommand("stats", "dataset statistics");
  c_stats->add_option("--bins", o.bins, "histogram bins over [0, 1]")
      ->capture_default_str();

  CLI::App* c_train = app.add_subcommand("train", "cross-validated training");

  CLI::App* c_ablate = app.add_subcommand("ablate", "variant comparison runs");
  c_ablate->add_option("--grid", o.grid,
                       "branches | replication | readouts | baselines | fusion")
      ->capture_default_str();
  c_ablate->add_option("--variants", o.variants,
                       "explicit variant specs, e.g. divgnn/sum (overrides --grid)")
      ->delimiter(',');
  c_ablate->add_option("--seeds", o.seeds, "comma-separated training seeds")
      ->delimiter(',');

  CLI::App* c_complexity = app.add_subcommand("complexity", "runtime scaling sweep");
  c_complexity->add_option("--n", o.synth_nodes, "synthetic graph node count")
      ->capture_default_str();
  c_complexity->add_option("--sizes", o.sizes, "comma-separated edge counts")
      ->delimiter(',');
  c_complexity->add_option("--reps", o.reps, "timing repetitions per size")
      ->capture_default_str();

  CLI::App* c_gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient verification");

  for (CLI::App* sub : {c_stats, c_train, c_ablate, c_complexity, c_gradcheck})
    sub->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    finalize_model_config(o, hp_a_opt);
    if (c_stats->parsed()) return run_stats(o, out);
    if (c_train->parsed()) return run_train(o, out, err);
    if (c_ablate->parsed()) return run_ablate(o, out);
    if (c_complexity->parsed()) return run_complexity_cmd(o, out);
    if (c_gradcheck->parsed()) return run_gradcheck(o, out);
    err << "error: no subcommand\n";
    return 1;
  } catch (const capacity_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const format_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const numeric_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const state_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace divgnn::cli
