#include "pairlabel/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace pairlabel {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& what) {
  fail(path, "line " + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

long long parse_int(const std::string& path, std::size_t line,
                    const std::string& field) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(field, &used);
  } catch (const std::exception&) {
    fail_line(path, line, "expected an integer, got '" + field + "'");
  }
  if (used != field.size())
    fail_line(path, line, "trailing characters in integer '" + field + "'");
  return v;
}

double parse_double(const std::string& path, std::size_t line,
                    const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    fail_line(path, line, "expected a number, got '" + field + "'");
  }
  if (used != field.size())
    fail_line(path, line, "trailing characters in number '" + field + "'");
  return v;
}

json load_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(path, std::string("invalid JSON: ") + e.what());
  }
  return j;
}

GibbsConfig gibbs_from_json(const json& j, const GibbsConfig& defaults) {
  GibbsConfig g = defaults;
  g.burn_in = j.value("burn_in", g.burn_in);
  g.samples = j.value("samples", g.samples);
  g.thinning = j.value("thinning", g.thinning);
  g.seed = j.value("seed", g.seed);
  g.validate();
  return g;
}

PairKind pair_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "same_only") return PairKind::same_only;
  if (s == "same_and_different") return PairKind::same_and_different;
  fail(path, "unknown pair kind '" + s +
                 "' (expected same_only or same_and_different)");
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_label_matrix_csv(const std::string& path, const LabelMatrix& votes) {
  votes.validate();
  auto out = open_out(path);
  for (int j = 0; j < votes.m; ++j) out << (j ? "," : "") << "lf_" << (j + 1);
  out << "\n";
  for (int i = 0; i < votes.n; ++i) {
    for (int j = 0; j < votes.m; ++j) out << (j ? "," : "") << votes.vote(i, j);
    out << "\n";
  }
}

LabelMatrix read_label_matrix_csv(const std::string& path, int c) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  const auto header = split_csv_line(line);
  const int m = static_cast<int>(header.size());
  for (int j = 0; j < m; ++j)
    if (header[j] != "lf_" + std::to_string(j + 1))
      fail_line(path, 1, "expected header column 'lf_" + std::to_string(j + 1) +
                             "', got '" + header[j] + "'");

  std::vector<int> votes;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != m)
      fail_line(path, lineno, "expected " + std::to_string(m) +
                                  " columns, got " +
                                  std::to_string(fields.size()));
    for (const std::string& f : fields) {
      const long long v = parse_int(path, lineno, f);
      if (v < 0 || v > c)
        fail_line(path, lineno, "vote " + std::to_string(v) +
                                    " outside {0.." + std::to_string(c) + "}");
      votes.push_back(static_cast<int>(v));
    }
  }
  const int n = static_cast<int>(votes.size()) / m;
  if (n == 0) fail(path, "no data rows");
  LabelMatrix matrix(n, m, c, std::move(votes));
  matrix.validate();
  return matrix;
}

void write_labeling_csv(const std::string& path, const Labeling& labels) {
  auto out = open_out(path);
  out << "label\n";
  for (int v : labels.y) out << v << "\n";
}

Labeling read_labeling_csv(const std::string& path, int c) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  if (split_csv_line(line) != std::vector<std::string>{"label"})
    fail_line(path, 1, "expected header 'label'");
  Labeling labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const long long v = parse_int(path, lineno, split_csv_line(line)[0]);
    if (v < 1 || v > c)
      fail_line(path, lineno, "label " + std::to_string(v) + " outside {1.." +
                                  std::to_string(c) + "}");
    labels.y.push_back(static_cast<int>(v));
  }
  if (labels.y.empty()) fail(path, "no data rows");
  return labels;
}

void write_pair_source_csv(const std::string& path, const PairSource& src) {
  src.validate();
  auto out = open_out(path);
  out << "i,j,value\n";
  for (const PairEntry& e : src.entries)
    out << e.i << "," << e.j << "," << e.value << "\n";
}

PairSource read_pair_source_csv(const std::string& path, int n,
                                const std::string& name) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  if (split_csv_line(line) != std::vector<std::string>{"i", "j", "value"})
    fail_line(path, 1, "expected header 'i,j,value'");

  PairSource src;
  src.n = n;
  src.name = name;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      fail_line(path, lineno, "expected 3 columns, got " +
                                  std::to_string(fields.size()));
    PairEntry e;
    e.i = static_cast<int>(parse_int(path, lineno, fields[0]));
    e.j = static_cast<int>(parse_int(path, lineno, fields[1]));
    e.value = static_cast<int>(parse_int(path, lineno, fields[2]));
    if (e.i >= e.j)
      fail_line(path, lineno, "pair (" + std::to_string(e.i) + "," +
                                  std::to_string(e.j) +
                                  ") must satisfy i < j");
    src.entries.push_back(e);
  }
  try {
    src.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return src;
}

void write_posterior_csv(const std::string& path, const PosteriorEstimate& post) {
  auto out = open_out(path);
  out << "sample_id";
  for (int k = 1; k <= post.c; ++k) out << ",p_class_" << k;
  out << ",map_label\n";
  for (int i = 0; i < post.n; ++i) {
    out << i;
    for (int k = 1; k <= post.c; ++k) out << "," << format_double(post.marginal(i, k));
    out << "," << post.map_labels[i] << "\n";
  }
}

PosteriorEstimate read_posterior_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header.front() != "sample_id" ||
      header.back() != "map_label")
    fail_line(path, 1, "expected header sample_id,p_class_*,map_label");
  const int c = static_cast<int>(header.size()) - 2;
  for (int k = 1; k <= c; ++k)
    if (header[k] != "p_class_" + std::to_string(k))
      fail_line(path, 1, "expected column 'p_class_" + std::to_string(k) + "'");

  PosteriorEstimate post;
  post.c = c;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      fail_line(path, lineno, "wrong column count");
    for (int k = 0; k < c; ++k)
      post.marginals.push_back(parse_double(path, lineno, fields[k + 1]));
    post.map_labels.push_back(
        static_cast<int>(parse_int(path, lineno, fields.back())));
  }
  post.n = static_cast<int>(post.map_labels.size());
  if (post.n == 0) fail(path, "no data rows");
  return post;
}

void write_params(const std::string& path, const ModelParams& params) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < params.theta.size(); ++j)
    out << "theta_" << (j + 1) << " = " << format_double(params.theta[j]) << "\n";
  for (std::size_t k = 0; k < params.eta.size(); ++k)
    out << "eta_" << (k + 1) << " = " << format_double(params.eta[k]) << "\n";
}

ModelParams read_params(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  std::vector<std::pair<std::size_t, double>> thetas, etas;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail_line(path, lineno, "expected 'key = value'");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto strip = [](std::string& s) {
      while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
      while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    };
    strip(key);
    strip(value);
    std::vector<std::pair<std::size_t, double>>* dst = nullptr;
    std::size_t offset = 0;
    if (key.rfind("theta_", 0) == 0) {
      dst = &thetas;
      offset = 6;
    } else if (key.rfind("eta_", 0) == 0) {
      dst = &etas;
      offset = 4;
    } else {
      fail_line(path, lineno, "unknown key '" + key + "'");
    }
    const std::size_t idx =
        static_cast<std::size_t>(parse_int(path, lineno, key.substr(offset)));
    if (idx < 1) fail_line(path, lineno, "indices are 1-based");
    dst->emplace_back(idx - 1, parse_double(path, lineno, value));
  }

  auto assemble = [&](std::vector<std::pair<std::size_t, double>>& src,
                      const char* what) {
    std::vector<double> out;
    out.resize(src.size());
    std::vector<bool> seen(src.size(), false);
    for (const auto& [idx, v] : src) {
      if (idx >= out.size() || seen[idx])
        fail(path, std::string(what) + " indices must be dense and unique");
      out[idx] = v;
      seen[idx] = true;
    }
    return out;
  };
  ModelParams params;
  params.theta = assemble(thetas, "theta");
  params.eta = assemble(etas, "eta");
  return params;
}

void save_dataset(const std::string& dir, const SyntheticDataset& ds) {
  fs::create_directories(dir);
  write_labeling_csv((fs::path(dir) / "truth.csv").string(), ds.truth);
  write_label_matrix_csv((fs::path(dir) / "votes.csv").string(), ds.votes);
  for (const PairSource& src : ds.pair_sources)
    write_pair_source_csv((fs::path(dir) / ("pairs_" + src.name + ".csv")).string(),
                          src);

  json stats;
  stats["n"] = ds.votes.n;
  stats["m"] = ds.votes.m;
  stats["c"] = ds.votes.c;
  stats["seed"] = ds.seed;
  stats["lfs"] = json::array();
  for (std::size_t j = 0; j < ds.lf_specs.size(); ++j) {
    json lf;
    lf["target_class"] = ds.lf_specs[j].target_class;
    lf["target_precision"] = ds.lf_specs[j].target_precision;
    lf["target_recall"] = ds.lf_specs[j].target_recall;
    lf["jitter_sd"] = ds.lf_specs[j].jitter_sd;
    if (j < ds.lf_realized.size()) {
      lf["realized_precision"] = ds.lf_realized[j].precision;
      lf["realized_recall"] = ds.lf_realized[j].recall;
      lf["tp"] = ds.lf_realized[j].tp;
      lf["fp"] = ds.lf_realized[j].fp;
      lf["drawn_precision"] = ds.lf_realized[j].drawn_precision;
      lf["drawn_recall"] = ds.lf_realized[j].drawn_recall;
    }
    stats["lfs"].push_back(lf);
  }
  stats["pair_sources"] = json::array();
  for (std::size_t k = 0; k < ds.pair_sources.size(); ++k) {
    json ps;
    ps["name"] = ds.pair_sources[k].name;
    ps["count"] = ds.pair_sources[k].entries.size();
    if (k < ds.pair_realized.size()) {
      ps["realized_accuracy"] = ds.pair_realized[k].accuracy;
      ps["correct"] = ds.pair_realized[k].correct;
    }
    stats["pair_sources"].push_back(ps);
  }
  auto out = open_out((fs::path(dir) / "stats.json").string());
  out << stats.dump(2) << "\n";
}

LoadedDataset load_dataset(const std::string& dir) {
  const auto stats_path = (fs::path(dir) / "stats.json").string();
  const json stats = load_json(stats_path);
  if (!stats.contains("n") || !stats.contains("c"))
    fail(stats_path, "missing n or c");
  LoadedDataset ds;
  ds.c = stats["c"].get<int>();
  ds.truth = read_labeling_csv((fs::path(dir) / "truth.csv").string(), ds.c);
  ds.votes = read_label_matrix_csv((fs::path(dir) / "votes.csv").string(), ds.c);
  if (stats.contains("pair_sources"))
    for (const json& ps : stats["pair_sources"]) {
      const std::string name = ps["name"].get<std::string>();
      ds.pair_sources.push_back(read_pair_source_csv(
          (fs::path(dir) / ("pairs_" + name + ".csv")).string(), ds.votes.n,
          name));
    }
  return ds;
}

Corpus load_corpus(const std::string& path) {
  Corpus corpus;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) fail(path, "no .txt files in corpus directory");
    for (const auto& f : files) {
      auto in = open_in(f.string());
      std::ostringstream body;
      body << in.rdbuf();
      corpus.docs.push_back(body.str());
    }
    return corpus;
  }

  // CSV with header doc_id,text; text fields may be RFC-4180 quoted.
  auto in = open_in(path);
  std::string content;
  {
    std::ostringstream body;
    body << in.rdbuf();
    content = body.str();
  }
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t at = 0; at < content.size(); ++at) {
    const char ch = content[at];
    if (quoted) {
      if (ch == '"') {
        if (at + 1 < content.size() && content[at + 1] == '"') {
          cur.push_back('"');
          ++at;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      fields.push_back(cur);
      cur.clear();
      if (fields.size() > 1 || !fields[0].empty()) records.push_back(fields);
      fields.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty() || !fields.empty()) {
    fields.push_back(cur);
    records.push_back(fields);
  }
  if (records.empty()) fail(path, "empty corpus CSV");
  if (records[0].size() < 2 || records[0][0] != "doc_id" || records[0][1] != "text")
    fail(path, "expected header doc_id,text");
  corpus.docs.resize(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != 2) fail_line(path, r + 1, "expected 2 columns");
    const long long id = parse_int(path, r + 1, records[r][0]);
    if (id < 0 || id >= static_cast<long long>(corpus.docs.size()))
      fail_line(path, r + 1,
                "doc_id " + std::to_string(id) + " not dense in [0, n)");
    corpus.docs[static_cast<std::size_t>(id)] = records[r][1];
  }
  return corpus;
}

void write_result_csv(const std::string& path, const ResultTable& table) {
  auto out = open_out(path);
  out << "lf_precision,pair_accuracy,pair_count,repetition,variant,"
         "map_accuracy,majority_accuracy,mean_theta,mean_eta,error\n";
  for (const ResultRow& row : table) {
    out << format_double(row.lf_precision) << ","
        << format_double(row.pair_accuracy) << "," << row.pair_count << ","
        << row.repetition << "," << row.variant << ","
        << format_double(row.map_accuracy) << ","
        << format_double(row.majority_accuracy) << ","
        << format_double(row.mean_theta) << "," << format_double(row.mean_eta)
        << "," << row.error << "\n";
  }
}

ResultTable read_result_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  const std::string expected =
      "lf_precision,pair_accuracy,pair_count,repetition,variant,"
      "map_accuracy,majority_accuracy,mean_theta,mean_eta,error";
  if (line != expected && line != expected + "\r")
    fail_line(path, 1, "unexpected header");

  ResultTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 10)
      fail_line(path, lineno, "expected 10 columns, got " +
                                  std::to_string(fields.size()));
    ResultRow row;
    row.lf_precision = parse_double(path, lineno, fields[0]);
    row.pair_accuracy = parse_double(path, lineno, fields[1]);
    row.pair_count = parse_int(path, lineno, fields[2]);
    row.repetition = static_cast<int>(parse_int(path, lineno, fields[3]));
    row.variant = fields[4];
    row.map_accuracy = parse_double(path, lineno, fields[5]);
    row.majority_accuracy = parse_double(path, lineno, fields[6]);
    row.mean_theta = parse_double(path, lineno, fields[7]);
    row.mean_eta = parse_double(path, lineno, fields[8]);
    row.error = fields[9];
    table.push_back(std::move(row));
  }
  if (table.empty()) fail(path, "no data rows");
  return table;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
  auto out = open_out(path);
  out << "lf_precision,pair_accuracy,pair_count,variant,repetitions,"
         "mean_accuracy,sd_accuracy,delta_vs_baseline\n";
  for (const SummaryRow& row : rows) {
    out << format_double(row.lf_precision) << ","
        << format_double(row.pair_accuracy) << "," << row.pair_count << ","
        << row.variant << "," << row.repetitions << ","
        << format_double(row.mean_accuracy) << ","
        << format_double(row.sd_accuracy) << ","
        << format_double(row.delta_vs_baseline) << "\n";
  }
}

int load_class_count(const std::string& path) {
  const json j = load_json(path);
  if (!j.contains("c")) fail(path, "missing top-level key 'c'");
  const int c = j["c"].get<int>();
  if (c < 2) fail(path, "'c' must be >= 2");
  return c;
}

SimulateSpec load_simulate_config(const std::string& path) {
  const json root = load_json(path);
  if (!root.contains("simulate")) fail(path, "missing 'simulate' section");
  const json& j = root["simulate"];

  SimulateSpec spec;
  spec.c = load_class_count(path);
  if (!j.contains("n")) fail(path, "simulate: missing 'n'");
  spec.n = j["n"].get<int>();
  spec.seed = j.value("seed", std::uint64_t{0});

  if (j.contains("lfs")) {
    for (const json& lf : j["lfs"]) {
      LfSpec s;
      s.target_class = lf.at("target_class").get<int>();
      s.target_precision = lf.at("precision").get<double>();
      s.target_recall = lf.at("recall").get<double>();
      s.jitter_sd = lf.value("jitter_sd", 0.0);
      spec.lfs.push_back(s);
    }
  } else {
    const int per_class = j.value("lfs_per_class", 2);
    const double precision = j.value("lf_precision", 0.7);
    const double recall = j.value("lf_recall", 0.5);
    const double jitter = j.value("lf_jitter_sd", 0.05);
    for (int k = 1; k <= spec.c; ++k)
      for (int d = 0; d < per_class; ++d)
        spec.lfs.push_back(LfSpec{k, precision, recall, jitter});
  }
  if (spec.lfs.empty()) fail(path, "simulate: no labeling functions");

  if (j.contains("pairs"))
    for (const json& ps : j["pairs"]) {
      PairSpec s;
      s.name = ps.value("name", "pairs");
      s.count = ps.at("count").get<long long>();
      s.accuracy = ps.at("accuracy").get<double>();
      s.kind = pair_kind_from_string(ps.value("kind", "same_only"), path);
      spec.pairs.push_back(s);
    }
  return spec;
}

TrainConfig load_train_config(const std::string& path) {
  const json root = load_json(path);
  TrainConfig cfg;
  if (!root.contains("train")) return cfg;
  const json& j = root["train"];
  cfg.steps = j.value("steps", cfg.steps);
  cfg.step_size = j.value("step_size", cfg.step_size);
  cfg.l2 = j.value("l2", cfg.l2);
  cfg.init_theta = j.value("init_theta", cfg.init_theta);
  cfg.init_eta = j.value("init_eta", cfg.init_eta);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.exact_gradient = j.value("exact_gradient", cfg.exact_gradient);
  if (j.contains("gibbs")) cfg.gibbs = gibbs_from_json(j["gibbs"], cfg.gibbs);
  cfg.validate();
  return cfg;
}

GibbsConfig load_infer_gibbs_config(const std::string& path) {
  const json root = load_json(path);
  GibbsConfig cfg{500, 5000, 1, 0};
  if (root.contains("infer") && root["infer"].contains("gibbs"))
    cfg = gibbs_from_json(root["infer"]["gibbs"], cfg);
  return cfg;
}

ExperimentGrid load_grid_config(const std::string& path) {
  const json root = load_json(path);
  if (!root.contains("grid")) fail(path, "missing 'grid' section");
  const json& j = root["grid"];

  ExperimentGrid grid;
  grid.n = j.value("n", grid.n);
  grid.c = j.value("c", grid.c);
  grid.lfs_per_class = j.value("lfs_per_class", grid.lfs_per_class);
  grid.lf_recall = j.value("lf_recall", grid.lf_recall);
  grid.lf_jitter_sd = j.value("lf_jitter_sd", grid.lf_jitter_sd);
  if (j.contains("pair_kind"))
    grid.pair_kind = pair_kind_from_string(j["pair_kind"].get<std::string>(), path);
  grid.pair_source_name = j.value("pair_source_name", grid.pair_source_name);
  if (j.contains("axes")) {
    const json& axes = j["axes"];
    if (axes.contains("lf_precision"))
      grid.lf_precision_axis = axes["lf_precision"].get<std::vector<double>>();
    if (axes.contains("pair_accuracy"))
      grid.pair_accuracy_axis = axes["pair_accuracy"].get<std::vector<double>>();
    if (axes.contains("pair_count"))
      grid.pair_count_axis = axes["pair_count"].get<std::vector<long long>>();
  }
  grid.repetitions = j.value("repetitions", grid.repetitions);
  grid.base_seed = j.value("base_seed", grid.base_seed);
  if (j.contains("variants")) {
    grid.variants.clear();
    for (const json& v : j["variants"]) {
      GridVariant variant;
      variant.name = v.at("name").get<std::string>();
      if (v.contains("sources"))
        variant.sources = v["sources"].get<std::vector<std::string>>();
      grid.variants.push_back(std::move(variant));
    }
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    grid.train.steps = t.value("steps", grid.train.steps);
    grid.train.step_size = t.value("step_size", grid.train.step_size);
    grid.train.l2 = t.value("l2", grid.train.l2);
    grid.train.init_theta = t.value("init_theta", grid.train.init_theta);
    grid.train.init_eta = t.value("init_eta", grid.train.init_eta);
    grid.train.exact_gradient = t.value("exact_gradient", grid.train.exact_gradient);
    if (t.contains("gibbs"))
      grid.train.gibbs = gibbs_from_json(t["gibbs"], grid.train.gibbs);
  }
  if (j.contains("infer_gibbs"))
    grid.infer_gibbs = gibbs_from_json(j["infer_gibbs"], grid.infer_gibbs);
  grid.workers = j.value("workers", grid.workers);
  grid.validate();
  return grid;
}

}  // namespace pairlabel
