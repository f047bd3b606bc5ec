// Copyright 2026 The radnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "radnet/cli.h"

#include <cstdio>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "radnet/checkpoint.h"
#include "radnet/dataset.h"
#include "radnet/file_util.h"
#include "radnet/ids.h"
#include "radnet/model.h"
#include "radnet/params_report.h"
#include "radnet/synthetic.h"
#include "radnet/train.h"
#include "radnet/vocab.h"

namespace radnet {

using json = nlohmann::json;

namespace {

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DecompositionTable LoadValidTable(const std::string& path) {
  DecompositionTable table;
  try {
    table = ParseIdsTable(ReadFile(path), path);
  } catch (const IdsParseError& e) {
    throw CliError(path + ": " + e.what());
  }
  const ValidationReport report = ValidateTable(table);
  if (!report.ok()) {
    std::string msg = path + ": invalid IDS table:";
    for (const auto& cycle : report.cycles) {
      msg += " cycle {";
      for (size_t i = 0; i < cycle.size(); ++i) {
        msg += (i ? " " : "") + RadicalToString(cycle[i]);
      }
      msg += "}";
    }
    for (Codepoint c : report.arity_violations) {
      msg += " arity violation at " + FormatCodepoint(c);
    }
    throw CliError(msg);
  }
  return table;
}

// Radical models cannot encode text without the table they were built on.
DecompositionTable TableFor(ModelVariant variant, const std::string& path) {
  if (path.empty()) {
    if (variant == ModelVariant::kRadical) {
      throw CliError("radical models need --table");
    }
    return DecompositionTable();
  }
  return LoadValidTable(path);
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

// --- subcommands -------------------------------------------------------------

struct DecomposeArgs {
  std::string table, input, output;
};

void RunDecompose(const DecomposeArgs& a) {
  const DecompositionTable table = LoadValidTable(a.table);
  const std::vector<Codepoint> chars = DecodeUtf8(ReadFile(a.input));
  std::string out;
  for (Codepoint c : chars) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    out += EncodeUtf8(c);
    out += '\t';
    const RadicalSequence seq = FlattenCharacter(c, table);
    for (size_t i = 0; i < seq.radicals.size(); ++i) {
      if (i > 0) out += ' ';
      out += RadicalToString(seq.radicals[i]);
    }
    out += '\n';
  }
  WriteFileAtomic(a.output, out);
}

struct BuildVocabArgs {
  std::string data, table, output, variant = "radical";
};

void RunBuildVocab(const BuildVocabArgs& a, std::ostream& out) {
  const ModelVariant variant = ParseVariant(a.variant);
  const DecompositionTable table = TableFor(variant, a.table);
  const std::vector<Document> docs = ReadDataset(a.data, false);
  const Vocab vocab = BuildVocab(variant, docs, table);
  WriteFileAtomic(a.output, vocab.ToJson().dump(1) + "\n");
  out << "vocabulary size " << vocab.size() << "\n";
}

struct TrainArgs {
  std::string data, dev, config, table, checkpoint_out, report_out;
  size_t epochs = 0;
  uint64_t seed = 0;
  size_t batch_size = 100;
  double learning_rate = 0.001, decay = 0.9, epsilon = 1e-8;
  bool quiet = false;
};

void RunTrain(const TrainArgs& a, std::ostream& out) {
  ModelConfig config;
  try {
    config = ModelConfig::FromJson(json::parse(ReadFile(a.config)));
  } catch (const json::parse_error& e) {
    throw CliError(a.config + ": " + e.what());
  } catch (const ConfigError& e) {
    throw CliError(a.config + ": " + e.what());
  }
  const DecompositionTable table = TableFor(config.variant, a.table);
  const std::vector<Document> train_docs = ReadDataset(a.data, true);
  if (train_docs.empty()) throw CliError(a.data + ": no documents");
  const std::vector<Document> dev_docs =
      a.dev.empty() ? std::vector<Document>{} : ReadDataset(a.dev, true);

  const Vocab vocab = BuildVocab(config.variant, train_docs, table);
  const DocumentEncoder encoder(config.variant, vocab, table, config.shape,
                                static_cast<int>(config.num_classes));
  const std::vector<EncodedDocument> train = encoder.EncodeAll(train_docs);
  const std::vector<EncodedDocument> dev = encoder.EncodeAll(dev_docs);

  TrainOptions options;
  options.epochs = a.epochs;
  options.seed = a.seed;
  options.batch_size = a.batch_size;
  options.optimizer = {a.learning_rate, a.decay, a.epsilon};

  auto progress = [&](const EpochStats& e) {
    if (a.quiet) return;
    out << "epoch " << e.epoch << " train_loss " << FormatDouble(e.train_loss)
        << " train_acc " << FormatDouble(e.train_accuracy);
    if (e.eval_accuracy) {
      out << " dev_loss " << FormatDouble(*e.eval_loss) << " dev_acc "
          << FormatDouble(*e.eval_accuracy);
    }
    out << "\n";
  };
  TrainResult<float> result =
      TrainFromScratch<float>(config, vocab.size(), train, dev, options, progress);
  SaveCheckpoint(a.checkpoint_out, result.model, vocab);
  if (!a.report_out.empty()) {
    WriteFileAtomic(a.report_out, result.report.ToJsonLines());
  }
  out << "vocabulary " << vocab.size() << " parameters "
      << result.model.NumParameters() << " checkpoint " << a.checkpoint_out << "\n";
}

struct EvalArgs {
  std::string checkpoint, data, table;
  size_t batch_size = 100;
};

void RunEval(const EvalArgs& a, std::ostream& out) {
  const Checkpoint<float> ckpt = LoadCheckpoint<float>(a.checkpoint);
  const ModelConfig& config = ckpt.model.config();
  const DecompositionTable table = TableFor(config.variant, a.table);
  const std::vector<Document> docs = ReadDataset(a.data, true);
  const DocumentEncoder encoder(config.variant, ckpt.vocab, table, config.shape,
                                static_cast<int>(config.num_classes));
  const std::vector<EncodedDocument> encoded = encoder.EncodeAll(docs);
  const EvalResult r = Evaluate(ckpt.model, encoded, a.batch_size);
  out << "documents " << r.documents << " accuracy " << FormatDouble(r.accuracy)
      << " loss " << FormatDouble(r.loss) << "\n";
}

struct PredictArgs {
  std::string checkpoint, input, table, output;
};

void RunPredict(const PredictArgs& a, std::ostream& out) {
  const Checkpoint<float> ckpt = LoadCheckpoint<float>(a.checkpoint);
  const ModelConfig& config = ckpt.model.config();
  const DecompositionTable table = TableFor(config.variant, a.table);
  const std::vector<Document> docs = ReadDataset(a.input, false);
  const DocumentEncoder encoder(config.variant, ckpt.vocab, table, config.shape,
                                static_cast<int>(config.num_classes));
  std::string lines;
  for (const Document& d : docs) {
    const EncodedDocument enc = encoder.EncodeTokens(d.tokens);
    const EncodedDocument* batch[] = {&enc};
    const std::vector<float> probs = ckpt.model.Predict(batch)[0];
    size_t best = 0;
    for (size_t k = 1; k < probs.size(); ++k) {
      if (probs[k] > probs[best]) best = k;
    }
    lines += json{{"label", best}, {"probabilities", probs}}.dump() + "\n";
  }
  if (a.output.empty()) {
    out << lines;
  } else {
    WriteFileAtomic(a.output, lines);
  }
}

struct ParamsReportArgs {
  size_t radical_vocab = 2000, character_vocab = 21000;
  std::vector<size_t> word_vocabs;
  std::string radical_config, character_config, word_config, json_out;
};

void RunParamsReport(const ParamsReportArgs& a, std::ostream& out) {
  std::vector<size_t> words = a.word_vocabs;
  if (words.empty()) words = {30000, 18000};
  std::vector<BudgetInput> inputs =
      StockBudgetInputs(a.radical_vocab, a.character_vocab, words);
  auto override_config = [](const std::string& path, ModelVariant expected,
                            ModelConfig* config) {
    if (path.empty()) return;
    ModelConfig c = ModelConfig::FromJson(json::parse(ReadFile(path)));
    if (c.variant != expected) {
      throw CliError(path + ": expected a " + VariantName(expected) + " config");
    }
    *config = c;
  };
  for (BudgetInput& in : inputs) {
    switch (in.config.variant) {
      case ModelVariant::kRadical:
        override_config(a.radical_config, in.config.variant, &in.config);
        break;
      case ModelVariant::kCharacter:
        override_config(a.character_config, in.config.variant, &in.config);
        break;
      case ModelVariant::kWord:
        override_config(a.word_config, in.config.variant, &in.config);
        break;
    }
  }
  const ParamsReport report = MakeParamsReport(inputs);
  out << report.RenderText();
  if (!a.json_out.empty()) WriteFileAtomic(a.json_out, report.ToJson().dump(2) + "\n");
}

struct GenSyntheticArgs {
  SyntheticSpec spec;
  std::string train_out, test_out, table_out;
};

void RunGenSynthetic(GenSyntheticArgs a, std::ostream& out) {
  if (a.test_out.empty()) a.spec.test_documents = 0;
  const SyntheticCorpus corpus = GenerateSynthetic(a.spec);
  WriteFileAtomic(a.table_out, corpus.table_tsv);
  WriteFileAtomic(a.train_out, SerializeDataset(corpus.train));
  if (!a.test_out.empty()) WriteFileAtomic(a.test_out, SerializeDataset(corpus.test));
  out << "wrote " << corpus.train.size() << " training and " << corpus.test.size()
      << " test documents\n";
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Radical-level CJK text classification toolkit", "radnet"};
  app.require_subcommand(1);

  DecomposeArgs decompose;
  auto* dec = app.add_subcommand("decompose", "Flatten characters into radicals");
  dec->add_option("--table", decompose.table, "IDS table (TSV)")->required()->check(CLI::ExistingFile);
  dec->add_option("--input", decompose.input, "UTF-8 text to decompose")->required()->check(CLI::ExistingFile);
  dec->add_option("--output", decompose.output, "Output TSV")->required();

  BuildVocabArgs build_vocab;
  auto* bv = app.add_subcommand("build-vocab", "Build a vocabulary from a dataset");
  bv->add_option("--data", build_vocab.data, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  bv->add_option("--table", build_vocab.table, "IDS table (radical variant)")->check(CLI::ExistingFile);
  bv->add_option("--variant", build_vocab.variant, "radical, character or word")
      ->check(CLI::IsMember({"radical", "character", "word"}));
  bv->add_option("--output", build_vocab.output, "Vocabulary JSON")->required();

  TrainArgs train;
  auto* tr = app.add_subcommand("train", "Train a classifier");
  tr->add_option("--data", train.data, "Training JSONL")->required()->check(CLI::ExistingFile);
  tr->add_option("--dev", train.dev, "Dev JSONL evaluated after each epoch")->check(CLI::ExistingFile);
  tr->add_option("--config", train.config, "Model config JSON")->required()->check(CLI::ExistingFile);
  tr->add_option("--table", train.table, "IDS table (radical variant)")->check(CLI::ExistingFile);
  tr->add_option("--epochs", train.epochs, "Number of epochs")->required();
  tr->add_option("--seed", train.seed, "Random seed")->required();
  tr->add_option("--checkpoint-out", train.checkpoint_out, "Checkpoint path")->required();
  tr->add_option("--report-out", train.report_out, "Per-epoch JSONL report");
  tr->add_option("--batch-size", train.batch_size, "Mini-batch size")->check(CLI::PositiveNumber);
  tr->add_option("--learning-rate", train.learning_rate, "RMSprop learning rate")->check(CLI::NonNegativeNumber);
  tr->add_option("--decay", train.decay, "RMSprop decay")->check(CLI::Range(0.0, 1.0));
  tr->add_option("--epsilon", train.epsilon, "RMSprop epsilon")->check(CLI::PositiveNumber);
  tr->add_flag("--quiet", train.quiet, "No per-epoch progress");

  EvalArgs eval;
  auto* ev = app.add_subcommand("eval", "Accuracy and mean cross-entropy on a dataset");
  ev->add_option("--checkpoint", eval.checkpoint, "Checkpoint")->required()->check(CLI::ExistingFile);
  ev->add_option("--data", eval.data, "Labelled JSONL")->required()->check(CLI::ExistingFile);
  ev->add_option("--table", eval.table, "IDS table (radical variant)")->check(CLI::ExistingFile);
  ev->add_option("--batch-size", eval.batch_size, "Batch size")->check(CLI::PositiveNumber);

  PredictArgs predict;
  auto* pr = app.add_subcommand("predict", "Label and class probabilities per document");
  pr->add_option("--checkpoint", predict.checkpoint, "Checkpoint")->required()->check(CLI::ExistingFile);
  pr->add_option("--input", predict.input, "JSONL with \"tokens\"")->required()->check(CLI::ExistingFile);
  pr->add_option("--table", predict.table, "IDS table (radical variant)")->check(CLI::ExistingFile);
  pr->add_option("--output", predict.output, "Output JSONL (default stdout)");

  ParamsReportArgs params;
  auto* pa = app.add_subcommand("params-report", "Compare parameter budgets");
  pa->add_option("--radical-vocab", params.radical_vocab, "Radical vocabulary size");
  pa->add_option("--character-vocab", params.character_vocab, "Character vocabulary size");
  pa->add_option("--word-vocab", params.word_vocabs, "Word vocabulary size (repeatable)");
  pa->add_option("--radical-config", params.radical_config, "Radical config JSON")->check(CLI::ExistingFile);
  pa->add_option("--character-config", params.character_config, "Character config JSON")->check(CLI::ExistingFile);
  pa->add_option("--word-config", params.word_config, "Word config JSON")->check(CLI::ExistingFile);
  pa->add_option("--json-out", params.json_out, "Also write the report as JSON");

  GenSyntheticArgs gen;
  auto* gs = app.add_subcommand("gen-synthetic", "Write a synthetic corpus and IDS table");
  gs->add_option("--train-out", gen.train_out, "Training JSONL")->required();
  gs->add_option("--test-out", gen.test_out, "Held-out JSONL");
  gs->add_option("--table-out", gen.table_out, "IDS table TSV")->required();
  gs->add_option("--seed", gen.spec.seed, "Random seed")->required();
  gs->add_option("--train-docs", gen.spec.train_documents, "Training documents");
  gs->add_option("--test-docs", gen.spec.test_documents, "Held-out documents");
  gs->add_option("--classes", gen.spec.num_classes, "Number of classes");
  gs->add_option("--noise", gen.spec.noise, "Label noise rate in [0, 1)");
  gs->add_option("--min-words", gen.spec.min_words, "Minimum words per document");
  gs->add_option("--max-words", gen.spec.max_words, "Maximum words per document");
  gs->add_option("--filler-radicals", gen.spec.filler_radicals, "Filler radical count");
  gs->add_option("--signal-radicals", gen.spec.signal_radicals_per_class,
                 "Signal radicals per class");
  gs->add_option("--signal-characters", gen.spec.signal_characters_per_class,
                 "Composite characters per class carrying a signal radical");
  gs->add_option("--filler-characters", gen.spec.filler_characters,
                 "Composite characters without a signal radical");
  gs->add_option("--min-signal-words", gen.spec.min_signal_words,
                 "Minimum words per document carrying the class signal");
  gs->add_option("--max-signal-words", gen.spec.max_signal_words,
                 "Maximum words per document carrying the class signal");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*dec) RunDecompose(decompose);
    else if (*bv) RunBuildVocab(build_vocab, out);
    else if (*tr) RunTrain(train, out);
    else if (*ev) RunEval(eval, out);
    else if (*pr) RunPredict(predict, out);
    else if (*pa) RunParamsReport(params, out);
    else if (*gs) RunGenSynthetic(gen, out);
  } catch (const std::exception& e) {
    err << "radnet: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace radnet
