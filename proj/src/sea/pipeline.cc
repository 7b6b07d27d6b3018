// sea/pipeline.cc

#include "sea/pipeline.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "sea/clustering.h"
#include "sea/error.h"
#include "sea/eval.h"
#include "sea/io_util.h"
#include "sea/model.h"
#include "sea/plot.h"
#include "sea/segmentation.h"
#include "sea/word_discovery.h"

namespace sea {
namespace {

std::string strip_code_prefix(const std::string& what) {
  const size_t pos = what.find(": ");
  return (pos != std::string::npos && pos <= 24) ? what.substr(pos + 2) : what;
}

std::string feats_dir(const PipelineConfig& cfg) { return cfg.workdir + "/feats"; }
std::string embed_dir(const PipelineConfig& cfg) { return cfg.workdir + "/embed"; }

std::string feats_path(const PipelineConfig& cfg, const std::string& utt) {
  return feats_dir(cfg) + "/" + utt + ".seaf";
}
std::string embed_path(const PipelineConfig& cfg, const std::string& utt) {
  return embed_dir(cfg) + "/" + utt + ".seaf";
}

// Input directory for segmentation and clustering: SEA embeddings by
// default, raw features for the ablation path.
std::string source_path(const PipelineConfig& cfg, const std::string& utt) {
  if (cfg.segment_on == "embedding") return embed_path(cfg, utt);
  if (cfg.segment_on == "mfcc") return feats_path(cfg, utt);
  throw Error(Err::parse_error,
              "segment_on must be 'embedding' or 'mfcc', got " + cfg.segment_on);
}

std::vector<std::string> manifest_utts(const PipelineConfig& cfg) {
  if (cfg.manifest.empty()) {
    throw Error(Err::missing_file, "no manifest path configured");
  }
  std::vector<std::string> utts;
  for (const auto& [utt, path] : read_manifest(cfg.manifest)) {
    (void)path;
    utts.push_back(utt);
  }
  if (utts.empty()) throw Error(Err::empty_corpus, cfg.manifest);
  return utts;
}

// Runs fn(i) for every index under a jobs-wide thread team; the first
// failure (by index) is rethrown after the loop since exceptions must not
// unwind through the parallel region.
template <typename Fn>
void parallel_for_indices(int count, int jobs, Fn fn) {
  std::vector<char> failed(static_cast<size_t>(count), 0);
  std::vector<Err> codes(static_cast<size_t>(count), Err::io_error);
  std::vector<std::string> messages(static_cast<size_t>(count));
  const int threads = std::max(1, jobs);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < count; ++i) {
    try {
      fn(i);
    } catch (const Error& e) {
      failed[static_cast<size_t>(i)] = 1;
      codes[static_cast<size_t>(i)] = e.code();
      messages[static_cast<size_t>(i)] = strip_code_prefix(e.what());
    } catch (const std::exception& e) {
      failed[static_cast<size_t>(i)] = 1;
      messages[static_cast<size_t>(i)] = e.what();
    }
  }
  for (int i = 0; i < count; ++i) {
    if (failed[static_cast<size_t>(i)]) {
      throw Error(codes[static_cast<size_t>(i)], messages[static_cast<size_t>(i)]);
    }
  }
}

std::vector<FrameMatrix> load_corpus(const PipelineConfig& cfg,
                                     const std::vector<std::string>& utts) {
  std::vector<FrameMatrix> corpus(utts.size());
  parallel_for_indices(static_cast<int>(utts.size()), cfg.jobs, [&](int i) {
    corpus[static_cast<size_t>(i)] =
        read_features(feats_path(cfg, utts[static_cast<size_t>(i)]));
  });
  int d = -1;
  for (const FrameMatrix& f : corpus) {
    if (d < 0) d = f.values.cols;
    if (f.values.cols != d) {
      throw Error(Err::dimension_mismatch,
                  "feature width differs between utterances");
    }
  }
  return corpus;
}

}  // namespace

void stage_features(const PipelineConfig& cfg, std::ostream* log) {
  if (cfg.manifest.empty()) {
    throw Error(Err::missing_file, "no manifest path configured");
  }
  ensure_dir(cfg.workdir);
  ensure_dir(feats_dir(cfg));
  const auto entries = read_manifest(cfg.manifest);
  if (entries.empty()) throw Error(Err::empty_corpus, cfg.manifest);

  int computed = 0, cached = 0, pregenerated = 0;
  std::vector<int> todo;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& [utt, wav] = entries[i];
    const std::string out = feats_path(cfg, utt);
    if (wav == "-") {
      // Features were produced by a generator; they only need to exist.
      if (!file_exists(out)) {
        throw Error(Err::missing_file,
                    "manifest lists pregenerated features but " + out +
                        " does not exist");
      }
      ++pregenerated;
      continue;
    }
    if (file_exists(out) && !cfg.force) {
      ++cached;
      continue;
    }
    todo.push_back(static_cast<int>(i));
  }
  parallel_for_indices(static_cast<int>(todo.size()), cfg.jobs, [&](int t) {
    const auto& [utt, wav] = entries[static_cast<size_t>(todo[static_cast<size_t>(t)])];
    const AudioSignal audio = read_wav(wav);
    const FrameMatrix mfcc = compute_mfcc(audio, cfg.mfcc, utt);
    write_features(normalize_features(mfcc), feats_path(cfg, utt));
  });
  computed = static_cast<int>(todo.size());
  if (log) {
    *log << "features: " << computed << " computed, " << cached
         << " cached, " << pregenerated << " pregenerated\n";
  }
}

void stage_pretrain(const PipelineConfig& cfg, std::ostream* log) {
  const std::string out = cfg.workdir + "/pretrain.seam";
  if (file_exists(out) && !cfg.force) {
    if (log) *log << "pretrain: cached\n";
    return;
  }
  const std::vector<std::string> utts = manifest_utts(cfg);
  const std::vector<FrameMatrix> corpus = load_corpus(cfg, utts);
  SeaConfig sea_cfg = cfg.sea;
  const int d = corpus.front().values.cols;
  if (sea_cfg.input_dim != d) {
    if (log) {
      *log << "pretrain: input_dim follows the feature files (" << d << ")\n";
    }
    sea_cfg.input_dim = d;
  }
  TrainReport report;
  const ModelParams p = pretrain_autoencoder(corpus, sea_cfg, &report, log);
  save_checkpoint(p, sea_cfg, out);
  if (log) *log << "pretrain: wrote " << out << "\n";
}

void stage_train(const PipelineConfig& cfg, std::ostream* log) {
  const std::string out = cfg.workdir + "/model.seam";
  if (file_exists(out) && !cfg.force) {
    if (log) *log << "train: cached\n";
    return;
  }
  const std::string pre = cfg.workdir + "/pretrain.seam";
  auto [p, ck_cfg] = load_checkpoint(pre);
  const std::vector<std::string> utts = manifest_utts(cfg);
  const std::vector<FrameMatrix> corpus = load_corpus(cfg, utts);
  if (corpus.front().values.cols != ck_cfg.input_dim) {
    throw Error(Err::dimension_mismatch,
                "features do not match the pretrained model width");
  }
  // Model geometry is fixed by the checkpoint; optimization knobs follow
  // the current configuration.
  SeaConfig sea_cfg = cfg.sea;
  sea_cfg.input_dim = ck_cfg.input_dim;
  sea_cfg.hidden_dim = ck_cfg.hidden_dim;
  sea_cfg.embed_dim = ck_cfg.embed_dim;
  TrainReport report;
  const ModelParams trained =
      train_sea(std::move(p), corpus, sea_cfg, &report, log);
  save_checkpoint(trained, sea_cfg, out);
  if (log) *log << "train: wrote " << out << "\n";
}

void stage_embed(const PipelineConfig& cfg, std::ostream* log) {
  ensure_dir(embed_dir(cfg));
  const std::vector<std::string> utts = manifest_utts(cfg);
  std::vector<int> todo;
  for (size_t i = 0; i < utts.size(); ++i) {
    if (!file_exists(embed_path(cfg, utts[i])) || cfg.force) {
      todo.push_back(static_cast<int>(i));
    }
  }
  if (todo.empty()) {
    if (log) *log << "embed: cached\n";
    return;
  }
  const auto [model, model_cfg] = load_checkpoint(cfg.workdir + "/model.seam");
  (void)model_cfg;
  parallel_for_indices(static_cast<int>(todo.size()), cfg.jobs, [&](int t) {
    const std::string& utt = utts[static_cast<size_t>(todo[static_cast<size_t>(t)])];
    const FrameMatrix feats = read_features(feats_path(cfg, utt));
    FrameMatrix z;
    z.values = embed_utterance(model, feats);
    z.frame_period_s = feats.frame_period_s;
    z.utt_id = utt;
    write_features(z, embed_path(cfg, utt));
  });
  if (log) {
    *log << "embed: " << todo.size() << " written, "
         << (utts.size() - todo.size()) << " cached\n";
  }
}

void stage_segment(const PipelineConfig& cfg, std::ostream* log) {
  const std::string out = cfg.workdir + "/segments.txt";
  if (file_exists(out) && !cfg.force) {
    if (log) *log << "segment: cached\n";
    return;
  }
  const std::vector<std::string> utts = manifest_utts(cfg);
  std::vector<std::vector<Segment>> per_utt(utts.size());
  parallel_for_indices(static_cast<int>(utts.size()), cfg.jobs, [&](int i) {
    const FrameMatrix z = read_features(source_path(cfg, utts[static_cast<size_t>(i)]));
    per_utt[static_cast<size_t>(i)] =
        segment_utterance(z.values, cfg.seg, utts[static_cast<size_t>(i)]);
  });
  std::vector<Segment> all;
  for (const auto& segs : per_utt) {
    all.insert(all.end(), segs.begin(), segs.end());
  }
  write_segments(all, out, /*include_cluster=*/false);
  if (log) *log << "segment: " << all.size() << " segments\n";
}

void stage_cluster(const PipelineConfig& cfg, std::ostream* log) {
  const std::string out = cfg.workdir + "/clusters.txt";
  if (file_exists(out) && !cfg.force) {
    if (log) *log << "cluster: cached\n";
    return;
  }
  std::vector<Segment> segments = read_segments(cfg.workdir + "/segments.txt");
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) {
              if (a.utt_id != b.utt_id) return a.utt_id < b.utt_id;
              return a.start_frame < b.start_frame;
            });
  std::map<std::string, MatF> z_by_utt;
  for (const Segment& s : segments) {
    if (!z_by_utt.count(s.utt_id)) {
      z_by_utt[s.utt_id] = read_features(source_path(cfg, s.utt_id)).values;
    }
  }
  std::vector<std::vector<double>> embeddings(segments.size());
  parallel_for_indices(static_cast<int>(segments.size()), cfg.jobs, [&](int i) {
    const Segment& s = segments[static_cast<size_t>(i)];
    embeddings[static_cast<size_t>(i)] =
        segment_embedding(z_by_utt.at(s.utt_id), s);
  });
  const auto [ids, model] = grow_clusters(embeddings, cfg.cluster.threshold);
  const std::vector<Segment> labeled = label_segments(segments, ids);
  write_segments(labeled, out, /*include_cluster=*/true);
  if (log) {
    *log << "cluster: " << model.centroids.size() << " clusters over "
         << segments.size() << " segments";
    if (model.zero_members > 0) {
      *log << " (" << model.zero_members << " zero-embedding segments)";
    }
    *log << "\n";
  }
}

void stage_discover(const PipelineConfig& cfg, std::ostream* log) {
  const std::string out = cfg.workdir + "/words.txt";
  if (file_exists(out) && !cfg.force) {
    if (log) *log << "discover: cached\n";
    return;
  }
  std::vector<Segment> segments = read_segments(cfg.workdir + "/clusters.txt");
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) {
              if (a.utt_id != b.utt_id) return a.utt_id < b.utt_id;
              return a.start_frame < b.start_frame;
            });
  std::map<std::string, std::vector<Segment>> by_utt;
  for (const Segment& s : segments) {
    if (s.cluster_id < 0) {
      throw Error(Err::parse_error, "segment without cluster id; run cluster");
    }
    by_utt[s.utt_id].push_back(s);
  }
  std::vector<PhoneSequence> seqs;
  for (const auto& [utt, segs] : by_utt) {
    PhoneSequence ps;
    ps.utt_id = utt;
    for (const Segment& s : segs) ps.ids.push_back(s.cluster_id);
    seqs.push_back(std::move(ps));
  }
  const std::vector<WordToken> tokens =
      tokens_to_intervals(discover_words(seqs, cfg.max_n), by_utt);
  const double period =
      read_features(source_path(cfg, seqs.front().utt_id)).frame_period_s;
  write_words(tokens, period, out);
  if (log) *log << "discover: " << tokens.size() << " tokens\n";
}

void stage_evaluate(const PipelineConfig& cfg, std::ostream* log) {
  const std::string txt = cfg.workdir + "/metrics.txt";
  const std::string tsv = cfg.workdir + "/metrics.tsv";
  if (file_exists(tsv) && !cfg.force) {
    if (log) *log << "evaluate: cached\n";
    return;
  }
  if (cfg.phn.empty() || cfg.wrd.empty()) {
    throw Error(Err::missing_file,
                "evaluate needs phn and wrd alignment paths");
  }
  const auto classes = read_words(cfg.workdir + "/words.txt");
  const auto gold = load_alignments(cfg.phn, cfg.wrd);
  const Metrics m = evaluate_tokens(classes, gold, cfg.eval);
  write_metrics(m, txt, tsv);
  if (log) {
    if (m.ned_no_pairs) {
      *log << "evaluate: warning: no within-class pairs, ned reported as 0\n";
    }
    *log << "evaluate: wrote " << txt << "\n";
  }
}

void run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
  using StageFn = void (*)(const PipelineConfig&, std::ostream*);
  static const std::vector<std::pair<std::string, StageFn>> kStages = {
      {"features", stage_features}, {"pretrain", stage_pretrain},
      {"train", stage_train},       {"embed", stage_embed},
      {"segment", stage_segment},   {"cluster", stage_cluster},
      {"discover", stage_discover}, {"evaluate", stage_evaluate},
  };
  std::set<std::string> wanted;
  if (cfg.stages != "all") {
    size_t pos = 0;
    const std::string& s = cfg.stages;
    while (pos <= s.size()) {
      size_t comma = s.find(',', pos);
      if (comma == std::string::npos) comma = s.size();
      const std::string name = s.substr(pos, comma - pos);
      pos = comma + 1;
      if (name.empty()) continue;
      bool known = false;
      for (const auto& [sname, fn] : kStages) {
        (void)fn;
        if (sname == name) known = true;
      }
      if (!known) throw Error(Err::parse_error, "unknown stage: " + name);
      wanted.insert(name);
    }
    if (wanted.empty()) {
      throw Error(Err::parse_error, "stage list is empty");
    }
  }
  for (const auto& [name, fn] : kStages) {
    if (cfg.stages != "all" && !wanted.count(name)) continue;
    if (log) *log << "== stage " << name << "\n";
    try {
      fn(cfg, log);
    } catch (const Error& e) {
      throw Error(e.code(), "stage " + name + ": " + strip_code_prefix(e.what()));
    }
  }
}

void make_plot(const PipelineConfig& cfg, const std::string& utt_id,
               const std::string& out_path, std::ostream* log) {
  const FrameMatrix z = read_features(source_path(cfg, utt_id));
  const MatF g = similarity_matrix(z.values);

  std::vector<int> hyp;
  const std::string seg_path = cfg.workdir + "/segments.txt";
  if (file_exists(seg_path)) {
    for (const Segment& s : read_segments(seg_path)) {
      if (s.utt_id == utt_id && s.start_frame > 0) hyp.push_back(s.start_frame);
    }
  }
  std::vector<int> gold;
  if (!cfg.phn.empty()) {
    for (const GoldAlignment& a : parse_alignment(cfg.phn)) {
      if (a.utt_id != utt_id) continue;
      std::set<int> frames;
      for (const AlignedUnit& p : a.phones) {
        frames.insert(static_cast<int>(std::lround(p.start_s / z.frame_period_s)));
        frames.insert(static_cast<int>(std::lround(p.end_s / z.frame_period_s)));
      }
      gold.assign(frames.begin(), frames.end());
    }
  }
  emit_similarity_plot(g, hyp, gold, out_path);
  if (log) *log << "plot: wrote " << out_path << "\n";
}

}  // namespace sea
