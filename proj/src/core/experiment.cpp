/**
 * Copyright 2026 The ironykit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "core/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <thread>

#include <json.hpp>

#include "core/common.hpp"
#include "core/csv.hpp"

namespace irony {

namespace fs = std::filesystem;

ModelFamily family_from_string(const std::string& s) {
  if (s == "rf_surface") return ModelFamily::rf_surface;
  if (s == "rf_full") return ModelFamily::rf_full;
  if (s == "cnn_mono") return ModelFamily::cnn_mono;
  if (s == "cnn_crosslingual") return ModelFamily::cnn_crosslingual;
  fail(ErrorCode::format, "unknown model family: '" + s + "'");
}

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::rf_surface: return "rf_surface";
    case ModelFamily::rf_full: return "rf_full";
    case ModelFamily::cnn_mono: return "cnn_mono";
    case ModelFamily::cnn_crosslingual: return "cnn_crosslingual";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (train_langs.empty() || test_langs.empty()) {
    fail(ErrorCode::invalid_argument,
         "experiment '" + name + "': train and test languages required");
  }
  const bool mono =
      family == ModelFamily::rf_full || family == ModelFamily::cnn_mono;
  if (mono) {
    if (train_langs.size() != 1 || test_langs.size() != 1 ||
        train_langs[0] != test_langs[0]) {
      fail(ErrorCode::invalid_argument,
           "experiment '" + name +
               "': monolingual families need train == test == one language");
    }
  } else {
    for (Lang t : test_langs) {
      if (std::find(train_langs.begin(), train_langs.end(), t) !=
          train_langs.end()) {
        fail(ErrorCode::invalid_argument,
             "experiment '" + name +
                 "': cross-lingual test language also appears in training");
      }
    }
  }
}

namespace {

std::string langs_slug(const std::vector<Lang>& langs) {
  std::string out;
  for (Lang l : langs) out += to_string(l);
  return out;
}

ExperimentSpec make_spec(ModelFamily family, std::vector<Lang> train,
                         std::vector<Lang> test, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.family = family;
  spec.train_langs = std::move(train);
  spec.test_langs = std::move(test);
  spec.seed = seed;
  const std::string prefix =
      family == ModelFamily::rf_surface || family == ModelFamily::rf_full
          ? "rf"
          : "cnn";
  spec.name = prefix + "_" + langs_slug(spec.train_langs) + "_to_" +
              langs_slug(spec.test_langs);
  return spec;
}

}  // namespace

std::vector<ExperimentSpec> crosslingual_matrix(ModelFamily family,
                                                std::uint64_t seed) {
  if (family != ModelFamily::rf_surface &&
      family != ModelFamily::cnn_crosslingual) {
    fail(ErrorCode::invalid_argument,
         "crosslingual_matrix: family must be rf_surface or cnn_crosslingual");
  }
  using L = Lang;
  return {
      make_spec(family, {L::ar}, {L::fr}, seed),
      make_spec(family, {L::fr}, {L::ar}, seed),
      make_spec(family, {L::ar}, {L::en}, seed),
      make_spec(family, {L::en}, {L::ar}, seed),
      make_spec(family, {L::fr}, {L::en}, seed),
      make_spec(family, {L::en}, {L::fr}, seed),
      make_spec(family, {L::en, L::fr}, {L::ar}, seed),
      make_spec(family, {L::ar}, {L::en, L::fr}, seed),
  };
}

std::vector<ExperimentSpec> monolingual_matrix(ModelFamily family,
                                               std::uint64_t seed) {
  if (family != ModelFamily::rf_full && family != ModelFamily::cnn_mono) {
    fail(ErrorCode::invalid_argument,
         "monolingual_matrix: family must be rf_full or cnn_mono");
  }
  using L = Lang;
  return {
      make_spec(family, {L::ar}, {L::ar}, seed),
      make_spec(family, {L::fr}, {L::fr}, seed),
      make_spec(family, {L::en}, {L::en}, seed),
  };
}

namespace {

const Dataset& train_corpus(const PreparedResources& res, Lang lang) {
  const auto it = res.train.find(lang);
  if (it == res.train.end() || it->second == nullptr) {
    fail(ErrorCode::invalid_argument,
         "experiment: no training corpus for language '" + to_string(lang) + "'");
  }
  return *it->second;
}

const LexiconSet& lexicons_for(const PreparedResources& res, Lang lang) {
  const auto it = res.lexicons.find(lang);
  if (it == res.lexicons.end() || it->second == nullptr) {
    fail(ErrorCode::invalid_argument,
         "experiment: no lexicons for language '" + to_string(lang) + "'");
  }
  return *it->second;
}

const EmbeddingTable* mapped_table(const PreparedResources& res, Lang src,
                                   Lang tgt) {
  const auto it = res.mapped.find({src, tgt});
  if (it == res.mapped.end() || it->second == nullptr) {
    fail(ErrorCode::invalid_argument,
         "experiment: no alignment map for " + to_string(src) + "->" +
             to_string(tgt));
  }
  return it->second;
}

// Feature matrix for the RF families. Surface mode keeps the slots the
// cross-lingual setup can rely on (the named-entity heuristic is excluded
// along with the lexicon counts); full mode uses every slot.
struct RfFeatures {
  std::vector<std::vector<double>> x;
  std::vector<Label> y;
  std::vector<std::string> ids;
};

std::vector<std::string> rf_slot_names(bool surface) {
  const auto& names = feature_slot_names();
  if (!surface) return names;
  return std::vector<std::string>(names.begin(), names.begin() + kNamedEntityCount);
}

RfFeatures extract_rf_features(const Dataset& ds, const PreparedResources& res,
                               bool surface) {
  RfFeatures out;
  out.x.reserve(ds.tweets.size());
  for (const auto& tweet : ds.tweets) {
    const LexiconSet& lex = lexicons_for(res, tweet.lang);
    const FeatureVector fv =
        surface ? extract_surface(tweet, lex) : extract_full(tweet, lex);
    std::vector<double> row;
    if (surface) {
      row.assign(fv.values.begin(), fv.values.begin() + kNamedEntityCount);
    } else {
      row.assign(fv.values.begin(), fv.values.end());
    }
    out.x.push_back(std::move(row));
    out.y.push_back(tweet.label);
    out.ids.push_back(tweet.id);
  }
  return out;
}

ExperimentResult run_rf(const ExperimentSpec& spec,
                        const PreparedResources& res) {
  const bool surface = spec.family == ModelFamily::rf_surface;
  std::vector<const Dataset*> parts;
  for (Lang l : spec.train_langs) parts.push_back(&train_corpus(res, l));
  const Dataset train = concat(parts);
  const RfFeatures train_f = extract_rf_features(train, res, surface);

  RfParams params = res.rf_params;
  const RandomForestModel model =
      rf_train(train_f.x, train_f.y, params, spec.seed, rf_slot_names(surface));

  ExperimentResult result;
  result.spec = spec;
  result.train_log.push_back(
      "rf: trained " + std::to_string(params.n_trees) + " trees on " +
      std::to_string(train_f.x.size()) + " examples (" +
      (surface ? "surface" : "full") + " features)");
  for (Lang t : spec.test_langs) {
    const Dataset& test = res.test_source(t);
    const RfFeatures test_f = extract_rf_features(test, res, surface);
    const auto preds = rf_predict(model, test_f.x, rf_slot_names(surface));
    std::vector<Label> gold, pred;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      gold.push_back(test_f.y[i]);
      pred.push_back(preds[i].label);
      result.predictions.push_back(
          {test_f.ids[i], test_f.y[i], preds[i].label, preds[i].p_ironic});
    }
    result.cm += confusion(gold, pred);
  }
  result.metrics = metrics(result.cm);
  return result;
}

ExperimentResult run_cnn(const ExperimentSpec& spec,
                         const PreparedResources& res) {
  std::vector<const Dataset*> parts;
  for (Lang l : spec.train_langs) parts.push_back(&train_corpus(res, l));
  const Dataset train = concat(parts);

  TrainConfig cfg = res.cnn_cfg;
  cfg.seed = spec.seed;
  cfg.validate();

  ExperimentResult result;
  result.spec = spec;

  if (spec.family == ModelFamily::cnn_mono) {
    const Lang lang = spec.test_langs[0];
    const auto it = res.raw.find(lang);
    if (it == res.raw.end() || it->second == nullptr) {
      fail(ErrorCode::invalid_argument,
           "experiment: no embeddings for language '" + to_string(lang) + "'");
    }
    const CnnTrainResult tr = cnn_train(train, *it->second, cfg);
    result.train_log = tr.log;
    const Dataset& test = res.test_source(lang);
    const auto preds = cnn_predict(tr.model, test, it->second);
    std::vector<Label> gold, pred;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      gold.push_back(test.tweets[i].label);
      pred.push_back(preds[i].label);
      result.predictions.push_back({test.tweets[i].id, test.tweets[i].label,
                                    preds[i].label, preds[i].p_ironic});
    }
    result.cm += confusion(gold, pred);
    result.metrics = metrics(result.cm);
    return result;
  }

  // Cross-lingual: one model per test language, trained on the training
  // languages' tables mapped into that test language's space; the test
  // language's own (unmapped, normalized) table supplies vectors at predict
  // time. Multi-language test sets pool into a single confusion matrix.
  for (Lang t : spec.test_langs) {
    TableMap tables;
    for (Lang l : spec.train_langs) {
      tables[l] = mapped_table(res, l, t);
    }
    const CnnTrainResult tr = cnn_train(train, tables, cfg);
    for (const auto& line : tr.log) {
      result.train_log.push_back(to_string(t) + ": " + line);
    }
    const auto norm_it = res.normalized.find(t);
    if (norm_it == res.normalized.end() || norm_it->second == nullptr) {
      fail(ErrorCode::invalid_argument,
           "experiment: no normalized embeddings for test language '" +
               to_string(t) + "'");
    }
    const Dataset& test = res.test_source(t);
    const auto preds = cnn_predict(tr.model, test, norm_it->second);
    std::vector<Label> gold, pred;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      gold.push_back(test.tweets[i].label);
      pred.push_back(preds[i].label);
      result.predictions.push_back({test.tweets[i].id, test.tweets[i].label,
                                    preds[i].label, preds[i].p_ironic});
    }
    result.cm += confusion(gold, pred);
  }
  result.metrics = metrics(result.cm);
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const PreparedResources& res) {
  spec.validate();
  if (!res.test_source) {
    fail(ErrorCode::invalid_argument, "experiment: no test source configured");
  }
  switch (spec.family) {
    case ModelFamily::rf_surface:
    case ModelFamily::rf_full:
      return run_rf(spec, res);
    case ModelFamily::cnn_mono:
    case ModelFamily::cnn_crosslingual:
      return run_cnn(spec, res);
  }
  fail(ErrorCode::invalid_argument, "experiment: unknown family");
}

std::string predictions_csv(const std::vector<PredictionRow>& rows) {
  std::string out = "id,gold,pred,p_ironic\n";
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.p_ironic);
    out += csv::join_row({r.id, to_string(r.gold), to_string(r.pred), buf});
    out += "\n";
  }
  return out;
}

std::string metrics_json(const ExperimentSpec& spec, const ConfusionMatrix& cm,
                         const Metrics& m) {
  nlohmann::ordered_json j;
  j["name"] = spec.name;
  j["family"] = to_string(spec.family);
  std::vector<std::string> train, test;
  for (Lang l : spec.train_langs) train.push_back(to_string(l));
  for (Lang l : spec.test_langs) test.push_back(to_string(l));
  j["train"] = train;
  j["test"] = test;
  j["seed"] = spec.seed;
  j["confusion"] = {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
  auto pct = [](double v) { return std::stod(format_pct(v)); };
  j["metrics"] = {{"accuracy", pct(m.accuracy)},
                  {"precision_pos", pct(m.precision_pos)},
                  {"recall_pos", pct(m.recall_pos)},
                  {"f1_pos", pct(m.f1_pos)},
                  {"precision_neg", pct(m.precision_neg)},
                  {"recall_neg", pct(m.recall_neg)},
                  {"f1_neg", pct(m.f1_neg)},
                  {"macro_precision", pct(m.macro_precision)},
                  {"macro_recall", pct(m.macro_recall)},
                  {"macro_f1", pct(m.macro_f1)}};
  return j.dump(2) + "\n";
}

MatrixConfig MatrixConfig::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::format, "matrix file " + path + ": " + e.what());
  }
  MatrixConfig cfg;
  cfg.seed = j.value("seed", std::uint64_t{42});
  cfg.lexicon_dir = j.value("lexicons", std::string());
  cfg.preprocess = j.value("preprocess", std::string());
  cfg.max_vocab = j.value("max_vocab", std::int64_t{0});
  if (j.contains("corpora")) {
    for (auto& [lang_str, ref] : j["corpora"].items()) {
      const Lang lang = lang_from_string(lang_str);
      CorpusRef cr;
      cr.train_path = ref.value("train", std::string());
      cr.test_path = ref.value("test", std::string());
      cr.file_path = ref.value("file", std::string());
      cr.n_train = ref.value("n_train", std::int64_t{0});
      cr.n_test = ref.value("n_test", std::int64_t{0});
      const bool presplit = !cr.train_path.empty() && !cr.test_path.empty();
      const bool single = !cr.file_path.empty() && cr.n_train > 0;
      if (presplit == single) {
        fail(ErrorCode::format,
             "matrix file: corpus for '" + lang_str +
                 "' needs either train+test paths or file+n_train/n_test");
      }
      cfg.corpora[lang] = std::move(cr);
    }
  }
  if (j.contains("embeddings")) {
    for (auto& [lang_str, p] : j["embeddings"].items()) {
      cfg.embeddings[lang_from_string(lang_str)] = p.get<std::string>();
    }
  }
  if (j.contains("maps")) {
    for (auto& [key, p] : j["maps"].items()) {
      const auto arrow = key.find("->");
      if (arrow == std::string::npos) {
        fail(ErrorCode::format,
             "matrix file: map key '" + key + "' must look like 'src->tgt'");
      }
      cfg.maps[{lang_from_string(key.substr(0, arrow)),
                lang_from_string(key.substr(arrow + 2))}] = p.get<std::string>();
    }
  }
  if (j.contains("cnn")) {
    cfg.cnn_cfg = TrainConfig::from_json(j["cnn"].dump());
  }
  if (j.contains("rf")) {
    const auto& r = j["rf"];
    cfg.rf_params.n_trees = r.value("n_trees", cfg.rf_params.n_trees);
    cfg.rf_params.max_depth = r.value("max_depth", cfg.rf_params.max_depth);
    cfg.rf_params.min_leaf = r.value("min_leaf", cfg.rf_params.min_leaf);
    cfg.rf_params.features_per_split =
        r.value("features_per_split", cfg.rf_params.features_per_split);
  }
  if (!j.contains("experiments")) {
    fail(ErrorCode::format, "matrix file: missing 'experiments'");
  }
  const auto& exps = j["experiments"];
  if (exps.is_string()) {
    const std::string kind = exps.get<std::string>();
    if (kind == "crosslingual_cnn") {
      cfg.specs = crosslingual_matrix(ModelFamily::cnn_crosslingual, cfg.seed);
    } else if (kind == "crosslingual_rf") {
      cfg.specs = crosslingual_matrix(ModelFamily::rf_surface, cfg.seed);
    } else if (kind == "monolingual_cnn") {
      cfg.specs = monolingual_matrix(ModelFamily::cnn_mono, cfg.seed);
    } else if (kind == "monolingual_rf") {
      cfg.specs = monolingual_matrix(ModelFamily::rf_full, cfg.seed);
    } else {
      fail(ErrorCode::format,
           "matrix file: unknown experiments shorthand '" + kind + "'");
    }
  } else {
    for (const auto& e : exps) {
      ExperimentSpec spec;
      spec.family = family_from_string(e.at("family").get<std::string>());
      for (const auto& l : e.at("train")) {
        spec.train_langs.push_back(lang_from_string(l.get<std::string>()));
      }
      for (const auto& l : e.at("test")) {
        spec.test_langs.push_back(lang_from_string(l.get<std::string>()));
      }
      spec.seed = e.value("seed", cfg.seed);
      spec.name = e.value("name", std::string());
      if (spec.name.empty()) {
        spec.name = make_spec(spec.family, spec.train_langs, spec.test_langs,
                              spec.seed)
                        .name;
      }
      spec.validate();
      cfg.specs.push_back(std::move(spec));
    }
  }
  if (cfg.specs.empty()) {
    fail(ErrorCode::format, "matrix file: empty experiment list");
  }
  return cfg;
}

namespace {

struct LoadedResources {
  std::map<Lang, Dataset> train;
  std::map<Lang, Dataset> test;
  std::map<Lang, EmbeddingTable> raw;
  std::map<Lang, EmbeddingTable> normalized;
  std::map<std::pair<Lang, Lang>, EmbeddingTable> mapped;
  std::map<Lang, LexiconSet> lexicons;
};

LoadedResources load_resources(const MatrixConfig& cfg) {
  LoadedResources out;

  std::optional<PreprocessConfig> pp;
  if (cfg.preprocess.empty()) {
    pp = PreprocessConfig::defaults();
  } else if (cfg.preprocess != "none") {
    pp = PreprocessConfig::from_json_file(cfg.preprocess);
  }

  for (const auto& [lang, ref] : cfg.corpora) {
    Dataset train, test;
    if (!ref.train_path.empty()) {
      train = load_corpus(ref.train_path, lang);
      test = load_corpus(ref.test_path, lang);
    } else {
      const Dataset full = load_corpus(ref.file_path, lang);
      Split sp = split(full, ref.n_train, ref.n_test, cfg.seed);
      train = std::move(sp.train);
      test = std::move(sp.test);
    }
    if (pp) {
      train = preprocess_dataset(train, *pp);
      test = preprocess_dataset(test, *pp);
    }
    out.train[lang] = std::move(train);
    out.test[lang] = std::move(test);
  }

  bool need_cnn = false;
  bool need_cross = false;
  bool need_rf = false;
  for (const auto& spec : /* matrix */ cfg.specs) {
    need_cnn |= spec.family == ModelFamily::cnn_mono ||
                spec.family == ModelFamily::cnn_crosslingual;
    need_cross |= spec.family == ModelFamily::cnn_crosslingual;
    need_rf |= spec.family == ModelFamily::rf_surface ||
               spec.family == ModelFamily::rf_full;
  }

  if (need_cnn) {
    for (const auto& [lang, path] : cfg.embeddings) {
      out.raw[lang] = load_embeddings(path, cfg.max_vocab);
    }
  }
  if (need_cross) {
    for (const auto& [lang, table] : out.raw) {
      out.normalized[lang] = normalize(table);
    }
    for (const auto& [pair, path] : cfg.maps) {
      const auto src_it = out.normalized.find(pair.first);
      if (src_it == out.normalized.end()) {
        fail(ErrorCode::invalid_argument,
             "matrix: map " + to_string(pair.first) + "->" +
                 to_string(pair.second) + " has no source embeddings");
      }
      LinearMap m = load_map(path);
      m.src_lang = to_string(pair.first);
      m.tgt_lang = to_string(pair.second);
      out.mapped[pair] = map_table(src_it->second, m);
    }
  }
  if (need_rf) {
    if (cfg.lexicon_dir.empty()) {
      fail(ErrorCode::invalid_argument,
           "matrix: RF experiments need a 'lexicons' directory");
    }
    for (const auto& [lang, ds] : out.train) {
      (void)ds;
      out.lexicons[lang] = load_lexicons(cfg.lexicon_dir, lang);
    }
  }
  return out;
}

void write_result(const std::string& out_dir, const ExperimentResult& r) {
  const fs::path dir = fs::path(out_dir) / r.spec.name;
  fs::create_directories(dir);
  write_text_file((dir / "predictions.csv").string(),
                  predictions_csv(r.predictions));
  write_text_file((dir / "metrics.json").string(),
                  metrics_json(r.spec, r.cm, r.metrics));
  std::string log;
  for (const auto& line : r.train_log) log += line + "\n";
  write_text_file((dir / "train_log.txt").string(), log);
}

}  // namespace

MatrixRunSummary run_matrix(const MatrixConfig& cfg, const std::string& out_dir,
                            int jobs) {
  for (const auto& spec : cfg.specs) spec.validate();
  const LoadedResources loaded = load_resources(cfg);

  PreparedResources res;
  for (const auto& [lang, ds] : loaded.train) res.train[lang] = &ds;
  for (const auto& [lang, t] : loaded.raw) res.raw[lang] = &t;
  for (const auto& [lang, t] : loaded.normalized) res.normalized[lang] = &t;
  for (const auto& [pair, t] : loaded.mapped) res.mapped[pair] = &t;
  for (const auto& [lang, lx] : loaded.lexicons) res.lexicons[lang] = &lx;
  res.cnn_cfg = cfg.cnn_cfg;
  res.rf_params = cfg.rf_params;
  res.test_source = [&loaded](Lang lang) -> const Dataset& {
    const auto it = loaded.test.find(lang);
    if (it == loaded.test.end()) {
      fail(ErrorCode::invalid_argument,
           "experiment: no test corpus for language '" + to_string(lang) + "'");
    }
    return it->second;
  };

  MatrixRunSummary summary;
  summary.results.resize(cfg.specs.size());
  const int n_jobs = std::max(1, jobs);
  if (n_jobs == 1) {
    for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
      summary.results[i] = run_experiment(cfg.specs[i], res);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(cfg.specs.size());
    for (int t = 0; t < n_jobs; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cfg.specs.size()) return;
          try {
            summary.results[i] = run_experiment(cfg.specs[i], res);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  fs::create_directories(out_dir);
  for (const auto& r : summary.results) write_result(out_dir, r);
  write_text_file((fs::path(out_dir) / "summary.csv").string(),
                  summary_csv(summary));
  return summary;
}

std::string summary_csv(const MatrixRunSummary& summary) {
  std::string out =
      "name,family,train,test,accuracy,precision_pos,recall_pos,f1_pos,"
      "precision_neg,recall_neg,f1_neg,macro_precision,macro_recall,macro_f1\n";
  for (const auto& r : summary.results) {
    const Metrics& m = r.metrics;
    out += csv::join_row(
        {r.spec.name, to_string(r.spec.family), langs_slug(r.spec.train_langs),
         langs_slug(r.spec.test_langs), format_pct(m.accuracy),
         format_pct(m.precision_pos), format_pct(m.recall_pos),
         format_pct(m.f1_pos), format_pct(m.precision_neg),
         format_pct(m.recall_neg), format_pct(m.f1_neg),
         format_pct(m.macro_precision), format_pct(m.macro_recall),
         format_pct(m.macro_f1)});
    out += "\n";
  }
  return out;
}

std::string render_report(const std::string& results_dir,
                          const std::string& format) {
  const fs::path summary_path = fs::path(results_dir) / "summary.csv";
  const std::string text = read_text_file(summary_path.string());
  if (format == "csv") return text;
  if (format != "txt") {
    fail(ErrorCode::invalid_argument,
         "report: unknown format '" + format + "' (want csv or txt)");
  }
  const auto rows = csv::parse(text);
  if (rows.size() < 2) {
    fail(ErrorCode::invalid_argument, "report: empty results in " + results_dir);
  }
  // Aligned table with the positive-class P/R next to macro-F, mirroring the
  // published layout; the full per-class breakdown stays in the CSV.
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-24s %-18s %6s %6s %6s %6s\n",
                "configuration", "family", "A", "P", "R", "F");
  out += line;
  out += std::string(24 + 1 + 18 + 4 * 7, '-') + "\n";
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() < 14) continue;
    const std::string config = r[2] + "->" + r[3];
    std::snprintf(line, sizeof(line), "%-24s %-18s %6s %6s %6s %6s\n",
                  config.c_str(), r[1].c_str(), r[4].c_str(), r[5].c_str(),
                  r[6].c_str(), r[13].c_str());
    out += line;
  }
  return out;
}

}  // namespace irony
