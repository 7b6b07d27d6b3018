// sea/config.cc

#include "sea/config.h"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "sea/error.h"
#include "sea/io_util.h"

namespace sea {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

int parse_int(const std::string& v) {
  try {
    size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::logic_error&) {
    throw Error(Err::parse_error, "not an integer: " + v);
  }
}

double parse_real(const std::string& v) {
  try {
    size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::logic_error&) {
    throw Error(Err::parse_error, "not a number: " + v);
  }
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(Err::parse_error, "not a boolean: " + v);
}

std::string fmt_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

ConfigKey int_key(const std::string& name, int* p) {
  return {name, "int", [p] { return std::to_string(*p); },
          [p](const std::string& v) { *p = parse_int(v); }};
}

ConfigKey seed_key(const std::string& name, uint32_t* p) {
  return {name, "int", [p] { return std::to_string(*p); },
          [p](const std::string& v) {
            const int s = parse_int(v);
            if (s < 0) throw Error(Err::parse_error, "seed must be >= 0");
            *p = static_cast<uint32_t>(s);
          }};
}

ConfigKey real_key(const std::string& name, double* p) {
  return {name, "real", [p] { return fmt_real(*p); },
          [p](const std::string& v) { *p = parse_real(v); }};
}

ConfigKey bool_key(const std::string& name, bool* p) {
  return {name, "bool", [p] { return *p ? std::string("true") : std::string("false"); },
          [p](const std::string& v) { *p = parse_bool(v); }};
}

ConfigKey string_key(const std::string& name, std::string* p) {
  return {name, "string", [p] { return *p; },
          [p](const std::string& v) { *p = v; }};
}

}  // namespace

std::vector<ConfigKey> config_keys(PipelineConfig& cfg) {
  std::vector<ConfigKey> keys;
  keys.push_back(string_key("manifest", &cfg.manifest));
  keys.push_back(string_key("phn", &cfg.phn));
  keys.push_back(string_key("wrd", &cfg.wrd));
  keys.push_back(string_key("workdir", &cfg.workdir));
  keys.push_back(string_key("stages", &cfg.stages));
  keys.push_back(string_key("segment_on", &cfg.segment_on));
  keys.push_back(int_key("jobs", &cfg.jobs));
  keys.push_back(bool_key("force", &cfg.force));
  keys.push_back(int_key("max_n", &cfg.max_n));

  keys.push_back(real_key("window_length_s", &cfg.mfcc.window_length_s));
  keys.push_back(real_key("hop_length_s", &cfg.mfcc.hop_length_s));
  keys.push_back(int_key("num_mel_filters", &cfg.mfcc.num_mel_filters));
  keys.push_back(int_key("num_cepstra", &cfg.mfcc.num_cepstra));
  keys.push_back(real_key("log_floor", &cfg.mfcc.log_floor));
  keys.push_back(real_key("preemphasis", &cfg.mfcc.preemphasis));

  keys.push_back(int_key("input_dim", &cfg.sea.input_dim));
  keys.push_back(int_key("hidden_dim", &cfg.sea.hidden_dim));
  keys.push_back(int_key("embed_dim", &cfg.sea.embed_dim));
  keys.push_back(int_key("chunk_frames", &cfg.sea.chunk_frames));
  keys.push_back(real_key("learning_rate", &cfg.sea.learning_rate));
  keys.push_back(real_key("momentum", &cfg.sea.momentum));
  keys.push_back(int_key("pretrain_epochs", &cfg.sea.pretrain_epochs));
  keys.push_back(int_key("sea_epochs", &cfg.sea.sea_epochs));
  keys.push_back(seed_key("rng_seed", &cfg.sea.rng_seed));
  keys.push_back(bool_key("stop_gradient", &cfg.sea.stop_gradient));

  keys.push_back(int_key("tau", &cfg.seg.tau));
  keys.push_back(int_key("min_frames", &cfg.seg.min_frames));
  keys.push_back(int_key("max_frames", &cfg.seg.max_frames));
  keys.push_back(bool_key("eps_exclude_diagonal", &cfg.seg.eps_exclude_diagonal));

  keys.push_back(real_key("cluster_threshold", &cfg.cluster.threshold));

  keys.push_back(real_key("boundary_tolerance_s", &cfg.eval.boundary_tolerance_s));
  keys.push_back(real_key("overlap_min_fraction", &cfg.eval.overlap_min_fraction));
  keys.push_back(real_key("overlap_min_s", &cfg.eval.overlap_min_s));

  keys.push_back(int_key("synth_num_phones", &cfg.synth.num_phones));
  keys.push_back(int_key("synth_num_utts", &cfg.synth.num_utts));
  keys.push_back(int_key("synth_dim", &cfg.synth.dim));
  keys.push_back(int_key("synth_lexicon_size", &cfg.synth.lexicon_size));
  keys.push_back(int_key("synth_words_per_utt", &cfg.synth.words_per_utt));
  keys.push_back(int_key("synth_min_phone_frames", &cfg.synth.min_phone_frames));
  keys.push_back(int_key("synth_max_phone_frames", &cfg.synth.max_phone_frames));
  keys.push_back(real_key("synth_noise_variance", &cfg.synth.noise_variance));
  keys.push_back(real_key("synth_frame_period_s", &cfg.synth.frame_period_s));
  keys.push_back(seed_key("synth_seed", &cfg.synth.seed));
  return keys;
}

void set_config_key(PipelineConfig& cfg, const std::string& key,
                    const std::string& value) {
  for (ConfigKey& k : config_keys(cfg)) {
    if (k.name == key) {
      try {
        k.set(value);
      } catch (const Error& e) {
        throw Error(Err::parse_error,
                    "config key " + key + ": " + std::string(e.what()));
      }
      return;
    }
  }
  throw Error(Err::parse_error, "unknown config key: " + key);
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  const std::string text = read_text_file(path);
  size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(Err::parse_error, path + " line " + std::to_string(line_no) +
                                        ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      set_config_key(cfg, key, value);
    } catch (const Error& e) {
      throw Error(Err::parse_error,
                  path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace sea
