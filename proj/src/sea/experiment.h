// sea/experiment.h

#ifndef SEA_EXPERIMENT_H_
#define SEA_EXPERIMENT_H_

#include <iosfwd>
#include <map>
#include <string>

namespace sea {

struct MetricBound {
  bool has_min = false;
  bool has_max = false;
  double min = 0.0;
  double max = 0.0;
};

// A reproducible run over a generated corpus with pinned expectations.
// File format, one assignment per line ('#' comments allowed):
//   name=<label>
//   seed=<n>                  shorthand for config.rng_seed + config.synth_seed
//   runtime_budget_s=<real>   0 disables the budget
//   config.<key>=<value>      any pipeline configuration key
//   bound.<metric>.min=<real>
//   bound.<metric>.max=<real>
struct ExperimentSpec {
  std::string name = "experiment";
  double runtime_budget_s = 0.0;
  std::map<std::string, std::string> config;
  std::map<std::string, MetricBound> bounds;
};

ExperimentSpec parse_experiment_file(const std::string& path);

struct ExperimentResult {
  std::map<std::string, double> metrics;
  double elapsed_s = 0.0;
};

// Generates the synthetic corpus into work_dir, runs the full pipeline on
// it, and scores the result. Beyond the pipeline metrics this adds
// cosine_margin (mean within-phone minus mean cross-phone cosine of the
// learned frame embeddings, unit rows, zero rows excluded) and
// phone_boundary_p/r/f (hypothesis segment boundaries against true phone
// boundaries at a two-frame tolerance). A report is written to
// work_dir/report.txt before bounds are enforced; violations then raise
// BudgetExceeded or BoundViolated naming the offending metric.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::string& work_dir,
                                std::ostream* log = nullptr);

}  // namespace sea

#endif  // SEA_EXPERIMENT_H_
