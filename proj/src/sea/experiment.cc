// sea/experiment.cc

#include "sea/experiment.h"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "sea/config.h"
#include "sea/error.h"
#include "sea/eval.h"
#include "sea/io_util.h"
#include "sea/pipeline.h"
#include "sea/segmentation.h"
#include "sea/synth.h"

namespace sea {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_real(const std::string& s, const std::string& where) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Err::parse_error, where + ": bad number '" + s + "'");
  }
}

double mean_cosine_margin(const SynthCorpus& corpus,
                          const PipelineConfig& cfg) {
  std::map<int, std::vector<double>> class_sum;
  std::map<int, long long> class_count;
  std::vector<double> total_sum;
  long long total_count = 0;

  for (size_t u = 0; u < corpus.features.size(); ++u) {
    const std::string& utt = corpus.features[u].utt_id;
    const FrameMatrix z =
        read_features(cfg.workdir + "/embed/" + utt + ".seaf");
    const std::vector<int>& labels = corpus.frame_phone[u];
    if (z.values.rows != static_cast<int>(labels.size())) {
      throw Error(Err::length_mismatch,
                  "embedding frames do not match the true label track");
    }
    const int k = z.values.cols;
    if (total_sum.empty()) total_sum.assign(static_cast<size_t>(k), 0.0);
    for (int r = 0; r < z.values.rows; ++r) {
      const float* row = z.values.row(r);
      double norm = 0.0;
      for (int c = 0; c < k; ++c) norm += double(row[c]) * double(row[c]);
      norm = std::sqrt(norm);
      if (norm < 1e-12) continue;
      auto& cs = class_sum[labels[static_cast<size_t>(r)]];
      if (cs.empty()) cs.assign(static_cast<size_t>(k), 0.0);
      for (int c = 0; c < k; ++c) {
        const double e = double(row[c]) / norm;
        cs[static_cast<size_t>(c)] += e;
        total_sum[static_cast<size_t>(c)] += e;
      }
      ++class_count[labels[static_cast<size_t>(r)]];
      ++total_count;
    }
  }

  // With unit rows, the sum of pairwise cosines inside a set equals
  // ||sum||^2 minus the set size; halve for unordered pairs.
  auto pair_stats = [](const std::vector<double>& sum, long long n) {
    double sq = 0.0;
    for (double v : sum) sq += v * v;
    return std::pair<double, double>((sq - double(n)) / 2.0,
                                     double(n) * double(n - 1) / 2.0);
  };
  double within_sum = 0.0, within_pairs = 0.0;
  for (const auto& [label, sum] : class_sum) {
    const auto [s, p] = pair_stats(sum, class_count.at(label));
    within_sum += s;
    within_pairs += p;
  }
  const auto [all_sum, all_pairs] = pair_stats(total_sum, total_count);
  const double cross_sum = all_sum - within_sum;
  const double cross_pairs = all_pairs - within_pairs;
  const double within_mean = within_pairs > 0 ? within_sum / within_pairs : 0;
  const double cross_mean = cross_pairs > 0 ? cross_sum / cross_pairs : 0;
  return within_mean - cross_mean;
}

PRF phone_boundary_prf(const SynthCorpus& corpus, const PipelineConfig& cfg) {
  std::map<std::string, std::vector<double>> hyp;
  const double period = cfg.synth.frame_period_s;
  for (const Segment& s : read_segments(cfg.workdir + "/segments.txt")) {
    if (s.start_frame > 0) hyp[s.utt_id].push_back(s.start_frame * period);
  }
  std::map<std::string, std::vector<double>> gold;
  for (const auto& [utt, align] : corpus.gold) {
    auto& v = gold[utt];
    for (size_t i = 1; i < align.phones.size(); ++i) {
      v.push_back(align.phones[i].start_s);
    }
  }
  return boundary_prf(hyp, gold, 2.0 * period + 1e-6);
}

}  // namespace

ExperimentSpec parse_experiment_file(const std::string& path) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  ExperimentSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Err::parse_error, where + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") {
      spec.name = value;
    } else if (key == "seed") {
      spec.config.insert_or_assign("rng_seed", value);
      spec.config.insert_or_assign("synth_seed", value);
    } else if (key == "runtime_budget_s") {
      spec.runtime_budget_s = parse_real(value, where);
    } else if (key.rfind("config.", 0) == 0) {
      const std::string name = key.substr(7);
      if (name.empty()) throw Error(Err::parse_error, where + ": empty key");
      spec.config.insert_or_assign(name, value);
    } else if (key.rfind("bound.", 0) == 0) {
      const std::string rest = key.substr(6);
      const size_t dot = rest.rfind('.');
      if (dot == std::string::npos) {
        throw Error(Err::parse_error,
                    where + ": expected bound.<metric>.min or .max");
      }
      const std::string metric = rest.substr(0, dot);
      const std::string side = rest.substr(dot + 1);
      MetricBound& b = spec.bounds[metric];
      if (side == "min") {
        b.has_min = true;
        b.min = parse_real(value, where);
      } else if (side == "max") {
        b.has_max = true;
        b.max = parse_real(value, where);
      } else {
        throw Error(Err::parse_error, where + ": bound side must be min or max");
      }
    } else {
      throw Error(Err::parse_error, where + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::string& work_dir,
                                std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();

  PipelineConfig cfg;
  cfg.workdir = work_dir;
  cfg.manifest = work_dir + "/manifest.txt";
  cfg.phn = work_dir + "/gold.phn";
  cfg.wrd = work_dir + "/gold.wrd";
  // Generated inputs change with the seed, so cached stage outputs from a
  // previous run must not leak in.
  cfg.force = true;
  for (const auto& [key, value] : spec.config) {
    set_config_key(cfg, key, value);
  }

  ensure_dir(work_dir);
  const SynthCorpus corpus = gen_synthetic_corpus(cfg.synth);
  write_synthetic_corpus(corpus, work_dir);
  if (log) {
    *log << "experiment " << spec.name << ": " << corpus.features.size()
         << " utterances in " << work_dir << "\n";
  }
  run_pipeline(cfg, log);

  ExperimentResult result;
  result.metrics = read_metrics_tsv(work_dir + "/metrics.tsv");
  result.metrics["cosine_margin"] = mean_cosine_margin(corpus, cfg);
  const PRF pb = phone_boundary_prf(corpus, cfg);
  result.metrics["phone_boundary_p"] = pb.precision;
  result.metrics["phone_boundary_r"] = pb.recall;
  result.metrics["phone_boundary_f"] = pb.fscore;
  result.elapsed_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  result.metrics["elapsed_s"] = result.elapsed_s;

  std::vector<std::string> violations;
  if (spec.runtime_budget_s > 0 && result.elapsed_s > spec.runtime_budget_s) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "runtime %.1fs over budget %.1fs",
                  result.elapsed_s, spec.runtime_budget_s);
    violations.push_back(buf);
  }
  std::vector<std::string> bound_lines;
  for (const auto& [metric, b] : spec.bounds) {
    const auto it = result.metrics.find(metric);
    if (it == result.metrics.end()) {
      throw Error(Err::parse_error, "bound on unknown metric: " + metric);
    }
    const double v = it->second;
    const bool ok = !(b.has_min && v < b.min) && !(b.has_max && v > b.max);
    char buf[160];
    std::string range;
    if (b.has_min) range += "min " + std::to_string(b.min);
    if (b.has_max) range += (range.empty() ? "" : ", ") + std::string("max ") +
                            std::to_string(b.max);
    std::snprintf(buf, sizeof buf, "bound %s = %.6f (%s): %s", metric.c_str(),
                  v, range.c_str(), ok ? "pass" : "FAIL");
    bound_lines.push_back(buf);
    if (!ok) {
      std::snprintf(buf, sizeof buf, "%s = %.6f outside [%s]", metric.c_str(),
                    v, range.c_str());
      violations.push_back(buf);
    }
  }

  std::ofstream out(work_dir + "/report.txt");
  if (!out) throw Error(Err::io_error, "cannot write " + work_dir + "/report.txt");
  out << "name: " << spec.name << "\n";
  char buf[96];
  for (const auto& [key, value] : result.metrics) {
    std::snprintf(buf, sizeof buf, "%s: %.6f\n", key.c_str(), value);
    out << buf;
  }
  for (const std::string& line : bound_lines) out << line << "\n";
  out << "result: " << (violations.empty() ? "PASS" : "FAIL") << "\n";
  out.close();
  if (!out) throw Error(Err::io_error, "failed writing experiment report");
  if (log) {
    *log << "experiment " << spec.name << ": "
         << (violations.empty() ? "PASS" : "FAIL") << " ("
         << result.metrics.size() << " metrics)\n";
  }

  if (spec.runtime_budget_s > 0 && result.elapsed_s > spec.runtime_budget_s) {
    throw Error(Err::budget_exceeded, violations.front());
  }
  if (!violations.empty()) {
    throw Error(Err::bound_violated, violations.front());
  }
  return result;
}

}  // namespace sea
