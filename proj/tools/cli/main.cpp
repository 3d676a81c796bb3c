#include <iostream>

#include <CLI11.hpp>

#include "chromdev/error.hpp"
#include "commands.hpp"

using namespace chromdev::cli;

int main(int argc, char** argv) {
  CLI::App app{"Chromatographic process development: design, simulate, model, optimise."};
  app.name("chromdev");
  app.require_subcommand(1);

  DoeArgs doe;
  auto* c_doe = app.add_subcommand("doe", "Emit an experimental design as CSV");
  c_doe->add_option("--design", doe.design, "dsd, bbd or ccd")->check(CLI::IsMember({"dsd", "bbd", "ccd"}));
  c_doe->add_option("--factors", doe.factors, "Number of factors");
  c_doe->add_option("--dummy", doe.dummy, "Dummy factors (dsd)");
  c_doe->add_option("--centers", doe.centers, "Extra centre runs (dsd) or centre runs (bbd, ccd)");
  c_doe->add_option("--alpha", doe.alpha, "ccd axial distance")->check(CLI::IsMember({"rotatable", "face_centered"}));
  c_doe->add_option("--seed", doe.seed, "Seed for run order and batch allocation");
  c_doe->add_flag("--shuffle", doe.shuffle, "Randomise run order");
  c_doe->add_option("--batches", doe.batches, "Comma-separated batch ids to allocate")->delimiter(',');
  c_doe->add_option("-o,--out", doe.out, "Output file (default stdout)");

  RunArgs run;
  auto* c_run = app.add_subcommand("run", "Execute a design on the simulated plant");
  c_run->add_option("--design", run.design, "Design CSV")->required();
  c_run->add_option("--config", run.config, "JSON config");
  c_run->add_option("-o,--out", run.out, "Records JSONL")->required();
  c_run->add_option("--events", run.events, "Event log JSONL");
  c_run->add_option("--sensors", run.sensors, "Sensor log JSONL");
  c_run->add_option("--batches", run.batches, "Allocate these batches to the design")->delimiter(',');
  c_run->add_option("--seed", run.seed, "Allocation seed");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Fit response models from records");
  c_fit->add_option("--records", fit.records, "Records JSONL")->required();
  c_fit->add_option("--config", fit.config, "JSON config (batch table)");
  c_fit->add_option("-o,--out-dir", fit.out_dir, "Directory for Y1..Y4.txt")->required();
  c_fit->add_option("--p-enter", fit.p_enter, "Entry p-value");
  c_fit->add_option("--p-remove", fit.p_remove, "Removal p-value");
  c_fit->add_option("--heredity", fit.heredity, "none, weak or strong")->check(CLI::IsMember({"none", "weak", "strong"}));

  OptimizeArgs opt;
  auto* c_opt = app.add_subcommand("optimize", "Constrained Pareto search on fitted models");
  c_opt->add_option("--models", opt.models, "Directory with Y1..Y4.txt")->required();
  c_opt->add_option("--config", opt.config, "JSON config (constraints, bounds, NSGA-II)");
  c_opt->add_option("--batch", opt.batch, "Feed batch id")->required();
  c_opt->add_option("--population", opt.population, "Population size");
  c_opt->add_option("--generations", opt.generations, "Generations");
  c_opt->add_option("--seed", opt.seed, "Seed");
  c_opt->add_option("--keep", opt.keep, "Down-select to this many diverse solutions");
  c_opt->add_option("-o,--out", opt.out, "Pareto CSV (default stdout)");

  DspaceArgs ds;
  auto* c_ds = app.add_subcommand("dspace", "Scan a two-factor design-space slice");
  c_ds->add_option("--models", ds.models, "Directory with Y1..Y4.txt")->required();
  c_ds->add_option("--config", ds.config, "JSON config (thresholds)");
  c_ds->add_option("--batch", ds.batch, "Feed batch id")->required();
  c_ds->add_option("--point", ds.point, "Fixed X1..X6, comma-separated")->delimiter(',')->required();
  c_ds->add_option("--sweep", ds.sweep, "Two swept factors, e.g. X3,X4")->delimiter(',');
  c_ds->add_option("--resolution", ds.resolution, "Nodes per axis");
  c_ds->add_option("-o,--out", ds.out, "Grid CSV (default stdout)");

  ValidateArgs val;
  auto* c_val = app.add_subcommand("validate", "Run one point on the plant and compare with the models");
  c_val->add_option("--models", val.models, "Directory with Y1..Y4.txt")->required();
  c_val->add_option("--config", val.config, "JSON config");
  c_val->add_option("--batch", val.batch, "Feed batch id")->required();
  c_val->add_option("--point", val.point, "X1..X6, comma-separated")->delimiter(',')->required();

  CampaignArgs camp;
  auto* c_camp = app.add_subcommand("campaign", "Run the full closed loop");
  c_camp->add_option("--config", camp.config, "JSON config");
  c_camp->add_option("-o,--out", camp.out, "Output directory");

  ReplicateArgs rep;
  auto* c_rep = app.add_subcommand("replicate-paper", "Run the acceptance checks on the embedded case study");
  c_rep->add_option("--scratch", rep.scratch, "Directory for campaign artifacts");
  c_rep->add_flag("--keep", rep.keep, "Keep the scratch directory");

  std::string cfg_out;
  auto* c_cfg = app.add_subcommand("default-config", "Print the default JSON config");
  c_cfg->add_option("-o,--out", cfg_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*c_doe) return run_doe(doe);
    if (*c_run) return run_run(run);
    if (*c_fit) return run_fit(fit);
    if (*c_opt) return run_optimize(opt);
    if (*c_ds) return run_dspace(ds);
    if (*c_val) return run_validate(val);
    if (*c_camp) return run_campaign_cmd(camp);
    if (*c_rep) return run_replicate(rep);
    if (*c_cfg) return run_default_config(cfg_out);
  } catch (const std::exception& e) {
    std::cerr << "chromdev: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
