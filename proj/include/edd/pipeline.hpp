#pragma once

#include <iosfwd>
#include <string>

#include "edd/config.hpp"

namespace edd {

// Pipeline stages. They communicate only through files under
// config.out_dir:
//   corpus.csv + raw/pNN.csv            (synth)
//   features/manifest.csv + pNN.csv     (extract)
//   windows/manifest.csv + pNN.edw      (segment)
//   split.csv                           (evaluate, unless split.file pins one)
//   report.csv + report.svg             (evaluate)
// which is what makes `run-all` byte-identical to running the stages one at
// a time with the same config. Manifest paths are relative to the manifest's
// own directory.

void stage_synth(const PipelineConfig& config);
void stage_extract(const PipelineConfig& config);
void stage_segment(const PipelineConfig& config);

// Trains one named model (rocket, fcn, resnet or fcn_lstm) on the split's
// train/val participants and writes the artifact to model_path. nn1 is
// rejected: it has no trained state to store.
void stage_train(const PipelineConfig& config, const std::string& model_name,
                 const std::string& model_path);

void stage_evaluate(const PipelineConfig& config);

// Replays a raw-session CSV sample by sample through a saved model: the
// same causal filter, frame and window recurrences as the batch pipeline,
// one `t_end,state,prob_distracted` line per completed window (the
// recurrent model starts once four windows exist). Features and therefore
// predictions match the batch path exactly.
void stage_stream(const PipelineConfig& config, const std::string& session_csv,
                  const std::string& model_path, std::ostream& out);

// synth -> extract -> segment -> evaluate with stage-tagged diagnostics.
void run_all(const PipelineConfig& config);

}  // namespace edd
