// sea/pipeline.h

#ifndef SEA_PIPELINE_H_
#define SEA_PIPELINE_H_

#include <ostream>
#include <string>

#include "sea/config.h"

namespace sea {

// Stage entry points. Each reads and writes only the documented file
// formats under cfg.workdir and skips itself when its outputs already
// exist, unless cfg.force is set.
void stage_features(const PipelineConfig& cfg, std::ostream* log = nullptr);
void stage_pretrain(const PipelineConfig& cfg, std::ostream* log = nullptr);
void stage_train(const PipelineConfig& cfg, std::ostream* log = nullptr);
void stage_embed(const PipelineConfig& cfg, std::ostream* log = nullptr);
void stage_segment(const PipelineConfig& cfg, std::ostream* log = nullptr);
void stage_cluster(const PipelineConfig& cfg, std::ostream* log = nullptr);
void stage_discover(const PipelineConfig& cfg, std::ostream* log = nullptr);
void stage_evaluate(const PipelineConfig& cfg, std::ostream* log = nullptr);

// Runs the stages named in cfg.stages ("all" or a comma list) in canonical
// order. Stage failures are rethrown with the stage name prepended.
void run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

// Similarity-matrix image for one utterance: hypothesis boundaries from
// the segment stage output (when present), gold boundaries from the phone
// tier (when configured).
void make_plot(const PipelineConfig& cfg, const std::string& utt_id,
               const std::string& out_path, std::ostream* log = nullptr);

}  // namespace sea

#endif  // SEA_PIPELINE_H_
