// sea/config.h

#ifndef SEA_CONFIG_H_
#define SEA_CONFIG_H_

#include <functional>
#include <string>
#include <vector>

#include "sea/clustering.h"
#include "sea/eval.h"
#include "sea/features.h"
#include "sea/model.h"
#include "sea/segmentation.h"
#include "sea/synth.h"

namespace sea {

// One configuration drives every stage; there are deliberately no
// per-language or per-speaker overrides.
struct PipelineConfig {
  std::string manifest;
  std::string phn;
  std::string wrd;
  std::string workdir = "work";
  std::string stages = "all";            // comma list or "all"
  std::string segment_on = "embedding";  // "embedding" | "mfcc" (ablation)
  int jobs = 1;
  bool force = false;
  int max_n = 3;
  MfccConfig mfcc;
  SeaConfig sea;
  SegConfig seg;
  ClusterConfig cluster;
  EvalConfig eval;
  SynthConfig synth;
};

// Flat key registry: every tunable is settable from a key=value config
// file and as a --key value command line flag.
struct ConfigKey {
  std::string name;
  std::string type;  // int | real | bool | string
  std::function<std::string()> get;
  std::function<void(const std::string&)> set;  // throws ParseError
};

std::vector<ConfigKey> config_keys(PipelineConfig& cfg);

// Sets one key; unknown names and unparseable values are ParseErrors.
void set_config_key(PipelineConfig& cfg, const std::string& key,
                    const std::string& value);

// key=value lines, '#' comments, blank lines ignored.
void apply_config_file(PipelineConfig& cfg, const std::string& path);

}  // namespace sea

#endif  // SEA_CONFIG_H_
