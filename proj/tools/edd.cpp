#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edd/pipeline.hpp"

namespace {

edd::PipelineConfig build_config(const std::string& config_path,
                                 const std::vector<std::string>& overrides) {
  edd::PipelineConfig config;
  if (!config_path.empty()) config = edd::load_pipeline_config(config_path);
  for (const std::string& assignment : overrides)
    edd::apply_config_override(config, assignment);
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "EEG driver-distraction pipeline: synthesize a corpus, extract "
      "band-power features, segment windows, train and evaluate classifiers, "
      "or replay a session as a stream."};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path,
                 "Config file of `key = value` lines (defaults apply "
                 "without one)")
      ->type_name("FILE");
  app.add_option("--set", overrides,
                 "Override one config key, e.g. --set experiment.reps=3 "
                 "(repeatable; wins over --config)")
      ->type_name("KEY=VALUE");

  CLI::App* synth =
      app.add_subcommand("synth", "Generate the synthetic EEG corpus");
  CLI::App* extract = app.add_subcommand(
      "extract", "Band-pass filter raw sessions and extract feature frames");
  CLI::App* segment = app.add_subcommand(
      "segment", "Cut feature series into weakly labeled 40-frame windows");

  CLI::App* train = app.add_subcommand(
      "train", "Train one model on the split's train/val participants");
  std::string model_name;
  std::string model_out;
  train->add_option("--model", model_name,
                    "One of: rocket, fcn, resnet, fcn_lstm")
      ->required();
  train->add_option("--out", model_out,
                    "Artifact path (default <out_dir>/models/<model>.edm)");

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Run the repeated train/test protocol and write the report");

  CLI::App* stream = app.add_subcommand(
      "stream", "Replay a raw session through a trained model, one "
                "prediction line per completed window");
  std::string session_csv;
  std::string model_file;
  std::string stream_out;
  stream->add_option("--session", session_csv, "Raw session CSV to replay")
      ->required();
  stream->add_option("--model-file", model_file, "Trained model artifact")
      ->required();
  stream->add_option("--out", stream_out,
                     "Write prediction lines here instead of stdout");

  CLI::App* run_all_cmd = app.add_subcommand(
      "run-all", "synth + extract + segment + evaluate in one go");

  for (CLI::App* sub :
       {synth, extract, segment, train, evaluate, stream, run_all_cmd})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad invocations are config errors
  }

  try {
    const edd::PipelineConfig config = build_config(config_path, overrides);
    if (synth->parsed()) {
      edd::stage_synth(config);
    } else if (extract->parsed()) {
      edd::stage_extract(config);
    } else if (segment->parsed()) {
      edd::stage_segment(config);
    } else if (train->parsed()) {
      std::string out = model_out;
      if (out.empty())
        out = (std::filesystem::path(config.out_dir) / "models" /
               (model_name + ".edm"))
                  .string();
      edd::stage_train(config, model_name, out);
    } else if (evaluate->parsed()) {
      edd::stage_evaluate(config);
    } else if (stream->parsed()) {
      if (stream_out.empty()) {
        edd::stage_stream(config, session_csv, model_file, std::cout);
      } else {
        std::ofstream out(stream_out, std::ios::binary);
        if (!out)
          throw edd::DataError("cannot open '" + stream_out +
                               "' for writing");
        edd::stage_stream(config, session_csv, model_file, out);
      }
    } else if (run_all_cmd->parsed()) {
      edd::run_all(config);
    }
    return 0;
  } catch (const edd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const edd::TrainingDiverged& e) {
    std::cerr << "error: training diverged: " << e.what() << "\n";
    return 4;
  } catch (const edd::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
