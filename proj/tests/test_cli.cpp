#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "anchor/corpus.hpp"

namespace fs = std::filesystem;

namespace {

struct Workdir {
  Workdir() {
    path = fs::temp_directory_path() / ("anchor_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~Workdir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  fs::path path;
};

struct Result {
  int code = -1;
  std::string out;
};

Result run(const Workdir& w, const std::string& args) {
  const std::string log = w / "last_output.txt";
  const std::string cmd = std::string(ANCHOR_BIN) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kSeeds = ANCHOR_DATA_DIR "/seeds.tsv";

}  // namespace

TEST_CASE("cli: synthetic pipeline end to end") {
  Workdir w;
  REQUIRE(run(w, "synth --seeds " + kSeeds + " --n 4000 --offensive-rate 0.2 --seed-emoji-rate 0.3 --seed 3 --out " +
                     (w / "raw.jsonl") + " --labels-out " + (w / "labels.tsv"))
              .code == 0);
  REQUIRE(run(w, "dedup --in " + (w / "raw.jsonl") + " --out " + (w / "dedup.jsonl") + " --dropped " +
                     (w / "dropped.tsv"))
              .code == 0);
  REQUIRE(run(w, "collect --in " + (w / "dedup.jsonl") + " --seeds " + kSeeds + " --out " + (w / "anchored.jsonl"))
              .code == 0);
  REQUIRE(run(w, "split --labels " + (w / "labels.tsv") + " --in " + (w / "dedup.jsonl") + " --seed 1 --out " +
                     (w / "split.txt"))
              .code == 0);
  REQUIRE(run(w, "train --in " + (w / "dedup.jsonl") + " --labels " + (w / "labels.tsv") + " --split " +
                     (w / "split.txt") + " --out " + (w / "model.tsv"))
              .code == 0);
  REQUIRE(run(w, "predict --model " + (w / "model.tsv") + " --in " + (w / "dedup.jsonl") + " --split " +
                     (w / "split.txt") + " --out " + (w / "preds.tsv"))
              .code == 0);
  const auto eval = run(w, "evaluate --labels " + (w / "labels.tsv") + " --predictions " + (w / "preds.tsv") +
                               " --out " + (w / "eval.txt"));
  REQUIRE(eval.code == 0);

  std::istringstream report(slurp(w / "eval.txt"));
  std::string line;
  double macro_f1 = -1;
  while (std::getline(report, line)) {
    if (line.rfind("macro_f1\t", 0) == 0) macro_f1 = std::stod(line.substr(9));
  }
  CHECK(macro_f1 >= 0.95);

  // Every command leaves a manifest describing its outputs.
  for (const auto& out : {"raw.jsonl", "dedup.jsonl", "anchored.jsonl", "split.txt", "model.tsv", "preds.tsv"}) {
    const auto path = (w / out) + ".manifest.json";
    REQUIRE(fs::exists(path));
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j.contains("config_hash"));
    CHECK(j.contains("tool_version"));
    CHECK(j["outputs"].size() >= 1);
  }
  CHECK(fs::exists(w / "eval.txt.manifest.json"));

  // Enrichment by the anchor filter.
  auto ratio = [](const std::vector<anchor::Document>& docs, const std::vector<anchor::LabelRecord>& labels) {
    std::set<std::string> off;
    for (const auto& l : labels) {
      if (l.offensive) off.insert(l.doc_id);
    }
    std::size_t n = 0;
    for (const auto& d : docs) n += off.count(d.id);
    return static_cast<double>(n) / static_cast<double>(docs.size());
  };
  const auto labels = anchor::load_labels(w / "labels.tsv");
  const auto before = ratio(anchor::load_corpus(w / "dedup.jsonl", anchor::CorpusFormat::jsonl), labels);
  const auto after = ratio(anchor::load_corpus(w / "anchored.jsonl", anchor::CorpusFormat::jsonl), labels);
  CHECK(after > before);

  // Idempotent: re-running produces identical bytes.
  const auto first = slurp(w / "model.tsv");
  REQUIRE(run(w, "train --in " + (w / "dedup.jsonl") + " --labels " + (w / "labels.tsv") + " --split " +
                     (w / "split.txt") + " --out " + (w / "model.tsv"))
              .code == 0);
  CHECK(slurp(w / "model.tsv") == first);
  CHECK_FALSE(fs::exists(w / "model.tsv.tmp"));

  // Downstream analysis commands.
  CHECK(run(w, "mine-lexicon --in " + (w / "dedup.jsonl") + " --labels " + (w / "labels.tsv") + " --out " +
                   (w / "lexicon.tsv"))
            .code == 0);
  CHECK(run(w, "emoji-stats --in " + (w / "dedup.jsonl") + " --labels " + (w / "labels.tsv") + " --seeds " + kSeeds +
                   " --out " + (w / "emoji.tsv"))
            .code == 0);
  CHECK(run(w, "match-violence --in " + (w / "dedup.jsonl") + " --out " + (w / "violence.tsv")).code == 0);
  CHECK(run(w, "report --labels " + (w / "labels.tsv") + " --emoji-stats " + (w / "emoji.tsv") + " --lexicon " +
                   (w / "lexicon.tsv") + " --eval " + (w / "eval.txt") + " --out " + (w / "report.txt"))
            .code == 0);
  const auto rep = slurp(w / "report.txt");
  CHECK(rep.find("macro_f1") != std::string::npos);

  const auto ex = run(w, "explain --model " + (w / "model.tsv") + " --text \"يا خنزير 🐷\" --seeds " + kSeeds +
                             " --samples 200 --out " + (w / "explain.tsv"));
  CHECK(ex.code == 0);
  CHECK(slurp(w / "explain.tsv").find("rank\ttoken\tweight") != std::string::npos);
}

TEST_CASE("cli: kappa of duplicated annotators is one") {
  Workdir w;
  std::ofstream j(w / "j.tsv");
  j << "doc_id\tannotator_id\tjob\tlabel\ttimestamp\n";
  for (int d = 0; d < 25; ++d) {
    for (const char* a : {"a1", "a2"}) j << "d" << d << '\t' << a << "\toffensive\t" << d % 3 % 2 << "\t2020\n";
  }
  j.close();
  const auto r = run(w, "kappa --judgments " + (w / "j.tsv"));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("kappa\t1.000000") != std::string::npos);
}

TEST_CASE("cli: exit codes") {
  Workdir w;
  CHECK(run(w, "").code == 1);
  CHECK(run(w, "no-such-command").code == 1);
  CHECK(run(w, "collect --in x.jsonl").code == 1);
  const auto missing = run(w, "collect --in " + (w / "absent.jsonl") + " --seeds " + kSeeds + " --out " + (w / "o.jsonl"));
  CHECK(missing.code == 2);
  CHECK(missing.out.find('\n') == missing.out.size() - 1);

  std::ofstream bad(w / "bad.jsonl");
  bad << "{\"id\":\"a\",\"text\":\"x\",\"created_at\":\"2020-01-01\"}\n{\"id\":\"b\"}\n";
  bad.close();
  const auto malformed = run(w, "collect --in " + (w / "bad.jsonl") + " --seeds " + kSeeds + " --out " + (w / "o.jsonl"));
  CHECK(malformed.code == 2);
  CHECK(malformed.out.find("line 2") != std::string::npos);
  CHECK_FALSE(fs::exists(w / "o.jsonl"));

  const auto help = run(w, "train --help");
  CHECK(help.code == 0);
  CHECK(help.out.find("--C") != std::string::npos);
}
