#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <CLI11.hpp>

#include "anchor/annotation.hpp"
#include "anchor/classifier.hpp"
#include "anchor/corpus.hpp"
#include "anchor/emoji.hpp"
#include "anchor/error.hpp"
#include "anchor/explain.hpp"
#include "anchor/lexicon.hpp"
#include "anchor/manifest.hpp"
#include "anchor/metrics.hpp"
#include "anchor/normalize.hpp"
#include "anchor/synth.hpp"
#include "anchor/violence.hpp"
#include "run_context.hpp"

namespace fs = std::filesystem;
using namespace anchor;
using anchor::cli::RunContext;

namespace {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::ifstream open_input(const fs::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + std::string(what) + " " + path.string());
  return in;
}

struct CorpusInput {
  std::string path;
  std::string format = "auto";

  void add(CLI::App* app) {
    app->add_option("--in", path, "Input corpus (JSONL, or TSV id/text/created_at/lang)")->required();
    app->add_option("--format", format, "Corpus format: auto, jsonl or tsv")
        ->check(CLI::IsMember({"auto", "jsonl", "tsv"}));
  }

  std::vector<Document> load(RunContext& run) const {
    const CorpusFormat f = format == "auto" ? guess_corpus_format(path) : parse_corpus_format(format);
    auto docs = load_corpus(path, f);
    run.input(path);
    return docs;
  }
};

// Normalization settings: defaults, then the --config file, then flags.
struct NormOptions {
  std::string config;
  std::optional<int> squash;
  std::optional<std::string> mention;
  std::optional<std::string> url;

  void add(CLI::App* app) {
    app->add_option("--config", config, "Normalization config file (key=value)");
    app->add_option("--squash-repeats-over", squash, "Cut letter runs longer than this (0 disables)");
    app->add_option("--mention-token", mention, "Replacement for @mentions");
    app->add_option("--url-token", url, "Replacement for links");
  }

  NormalizationConfig resolve(RunContext* run) const {
    NormalizationConfig cfg;
    if (!config.empty()) {
      auto in = open_input(config, "normalization config");
      cfg = parse_normalization_config(in);
      if (run != nullptr) run->input(config);
    }
    if (squash) cfg.squash_repeats_over = *squash;
    if (mention) cfg.replace_mentions_with = *mention;
    if (url) cfg.replace_urls_with = *url;
    cfg.validate();
    return cfg;
  }
};

std::vector<LabelRecord> load_labels_tracked(const std::string& path, RunContext& run) {
  auto labels = load_labels(path);
  run.input(path);
  return labels;
}

std::vector<std::string> split_part(const std::string& split_path, const std::string& part, RunContext& run) {
  auto in = open_input(split_path, "split file");
  const DatasetSplit split = parse_split(in);
  run.input(split_path);
  if (part == "train") return split.train;
  if (part == "dev") return split.dev;
  if (part == "test") return split.test;
  throw UsageError("--part must be train, dev or test");
}

// Documents restricted to the ids of a split part, in corpus order.
std::vector<Document> select_docs(std::vector<Document> docs, const std::vector<std::string>& ids) {
  std::unordered_set<std::string> keep(ids.begin(), ids.end());
  std::vector<Document> out;
  for (auto& d : docs) {
    if (keep.contains(d.id)) out.push_back(std::move(d));
  }
  if (out.size() != keep.size()) throw DataError("split references documents missing from the corpus");
  return out;
}

std::string config_text(const CLI::App* sub) { return sub->get_name() + "\n" + sub->config_to_str(true, false); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Emoji-anchored offensive-language corpus toolkit"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  std::function<void()> action;

  // collect
  {
    auto* sub = app.add_subcommand("collect", "Keep documents containing any seed emoji");
    static CorpusInput corpus;
    static std::string seeds, out;
    corpus.add(sub);
    sub->add_option("--seeds", seeds, "Seed emoji inventory TSV")->required();
    sub->add_option("--out", out, "Output corpus (JSONL)")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("collect", config_text(sub), 0);
        const auto docs = corpus.load(run);
        const auto inv = SeedInventory::load(seeds);
        run.input(seeds);
        const auto kept = filter_by_seeds(docs, inv);
        std::ostringstream s;
        write_corpus_jsonl(s, kept);
        run.output(out, s.str());
        run.finish();
        std::cerr << "collect: kept " << kept.size() << " of " << docs.size() << " documents\n";
      };
    });
  }

  // dedup
  {
    auto* sub = app.add_subcommand("dedup", "Drop very short, exact-duplicate and near-duplicate documents");
    static CorpusInput corpus;
    static NormOptions norm;
    static std::string out, dropped;
    static NearDupPolicy policy;
    corpus.add(sub);
    norm.add(sub);
    sub->add_option("--out", out, "Output corpus (JSONL)")->required();
    sub->add_option("--dropped", dropped, "Write dropped ids and reasons (TSV)");
    sub->add_option("--shingle-size", policy.shingle_size, "Token shingle size")->capture_default_str();
    sub->add_option("--jaccard", policy.jaccard_threshold, "Near-duplicate Jaccard threshold")->capture_default_str();
    sub->add_option("--min-tokens", policy.min_tokens, "Minimum content tokens")->capture_default_str();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("dedup", config_text(sub), 0);
        policy.normalization = norm.resolve(&run);
        const auto docs = corpus.load(run);
        const auto result = dedup(docs, policy);
        std::ostringstream s;
        write_corpus_jsonl(s, result.kept);
        run.output(out, s.str());
        if (!dropped.empty()) {
          std::ostringstream d;
          d << "doc_id\treason\n";
          for (const auto& [id, reason] : result.dropped) d << tsv_escape(id) << '\t' << to_string(reason) << '\n';
          run.output(dropped, d.str());
        }
        run.finish();
        std::size_t n_short = 0, n_exact = 0, n_near = 0;
        for (const auto& [id, reason] : result.dropped) {
          n_short += reason == DropReason::short_text;
          n_exact += reason == DropReason::exact;
          n_near += reason == DropReason::near;
        }
        std::cerr << "dedup: kept " << result.kept.size() << " of " << docs.size() << " (short " << n_short
                  << ", exact " << n_exact << ", near " << n_near << ")\n";
      };
    });
  }

  // normalize
  {
    auto* sub = app.add_subcommand("normalize", "Normalize document texts");
    static std::string in, format = "auto", out;
    static NormOptions norm;
    static bool print_defaults = false;
    sub->add_option("--in", in, "Input corpus");
    sub->add_option("--format", format, "Corpus format: auto, jsonl or tsv")
        ->check(CLI::IsMember({"auto", "jsonl", "tsv"}));
    sub->add_option("--out", out, "Output corpus (JSONL)");
    sub->add_flag("--print-defaults", print_defaults, "Print the default configuration and exit");
    norm.add(sub);
    sub->callback([sub, &action] {
      action = [sub] {
        if (print_defaults) {
          std::cout << to_config_text(NormalizationConfig{});
          return;
        }
        if (in.empty() || out.empty()) throw UsageError("normalize needs --in and --out (or --print-defaults)");
        RunContext run("normalize", config_text(sub), 0);
        const auto cfg = norm.resolve(&run);
        const CorpusFormat f = format == "auto" ? guess_corpus_format(in) : parse_corpus_format(format);
        auto docs = load_corpus(in, f);
        run.input(in);
        for (auto& d : docs) d.text = normalize(d.text, cfg);
        std::ostringstream s;
        write_corpus_jsonl(s, docs);
        run.output(out, s.str());
        run.finish();
      };
    });
  }

  // split
  {
    auto* sub = app.add_subcommand("split", "Stratified train/dev/test split on the offensive label");
    static std::string labels, out, in, format = "auto";
    static std::uint64_t seed = 0;
    static SplitRatios ratios;
    sub->add_option("--labels", labels, "Labels TSV")->required();
    sub->add_option("--in", in, "Only split labeled documents present in this corpus");
    sub->add_option("--format", format, "Corpus format: auto, jsonl or tsv")
        ->check(CLI::IsMember({"auto", "jsonl", "tsv"}));
    sub->add_option("--out", out, "Output split file")->required();
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    sub->add_option("--train", ratios.train, "Train ratio")->capture_default_str();
    sub->add_option("--dev", ratios.dev, "Dev ratio")->capture_default_str();
    sub->add_option("--test", ratios.test, "Test ratio")->capture_default_str();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("split", config_text(sub), seed);
        auto recs = load_labels_tracked(labels, run);
        if (!in.empty()) {
          const CorpusFormat f = format == "auto" ? guess_corpus_format(in) : parse_corpus_format(format);
          const auto docs = load_corpus(in, f);
          run.input(in);
          std::unordered_set<std::string> present;
          for (const auto& d : docs) present.insert(d.id);
          std::erase_if(recs, [&](const LabelRecord& r) { return !present.contains(r.doc_id); });
        }
        std::vector<std::string> warnings;
        const auto split = stratified_split(recs, ratios, seed, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
        std::ostringstream s;
        write_split(s, split);
        run.output(out, s.str());
        run.finish();
        std::cerr << "split: train " << split.train.size() << ", dev " << split.dev.size() << ", test "
                  << split.test.size() << '\n';
      };
    });
  }

  // mine-lexicon
  {
    auto* sub = app.add_subcommand("mine-lexicon", "Rank class-distinctive terms by valence score");
    static CorpusInput corpus;
    static NormOptions norm;
    static std::string labels, out, cls = "offensive", gazetteer, targets_out;
    static LexiconThresholds th;
    corpus.add(sub);
    norm.add(sub);
    sub->add_option("--labels", labels, "Labels TSV")->required();
    sub->add_option("--out", out, "Output lexicon TSV")->required();
    sub->add_option("--class", cls, "Positive class: offensive, hate, vulgar or violence")->capture_default_str();
    sub->add_option("--min-valence", th.min_valence, "Minimum valence")->capture_default_str();
    sub->add_option("--min-freq", th.min_freq, "Minimum total frequency")->capture_default_str();
    sub->add_option("--gazetteer", gazetteer, "Target-group gazetteer TSV");
    sub->add_option("--targets-out", targets_out, "Write hate target-group distribution TSV (needs --gazetteer)");
    sub->callback([sub, &action] {
      action = [sub] {
        if (gazetteer.empty() != targets_out.empty()) {
          throw UsageError("--gazetteer and --targets-out must be given together");
        }
        RunContext run("mine-lexicon", config_text(sub), 0);
        const auto cfg = norm.resolve(&run);
        const auto docs = corpus.load(run);
        const auto recs = load_labels_tracked(labels, run);
        const auto lex = mine_class_lexicon(docs, recs, parse_label_class(cls), cfg, th);
        std::ostringstream s;
        write_lexicon(s, lex);
        run.output(out, s.str());
        if (!gazetteer.empty()) {
          const auto gaz = load_gazetteer(gazetteer, cfg);
          run.input(gazetteer);
          std::ostringstream t;
          t << "group\tcount\tfraction\n";
          for (const auto& g : target_distribution(docs, recs, gaz, cfg)) {
            t << g.group << '\t' << g.count << '\t' << fmt6(g.fraction) << '\n';
          }
          run.output(targets_out, t.str());
        }
        run.finish();
        std::cerr << "mine-lexicon: " << lex.size() << " terms\n";
      };
    });
  }

  // emoji-stats
  {
    auto* sub = app.add_subcommand("emoji-stats", "Per-emoji offensive and hate rates");
    static CorpusInput corpus;
    static std::string labels, seeds, out;
    corpus.add(sub);
    sub->add_option("--labels", labels, "Labels TSV")->required();
    sub->add_option("--seeds", seeds, "Seed inventory (for the category column)");
    sub->add_option("--out", out, "Output TSV")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("emoji-stats", config_text(sub), 0);
        const auto docs = corpus.load(run);
        const auto recs = load_labels_tracked(labels, run);
        std::optional<SeedInventory> inv;
        if (!seeds.empty()) {
          inv = SeedInventory::load(seeds);
          run.input(seeds);
        }
        const auto stats = emoji_stats(docs, recs);
        std::ostringstream s;
        write_emoji_stats(s, stats, inv ? &*inv : nullptr);
        run.output(out, s.str());
        run.finish();
      };
    });
  }

  // sample
  {
    auto* sub = app.add_subcommand("sample", "Draw up to k documents per seed emoji");
    static CorpusInput corpus;
    static std::string seeds, out, since, until, lang;
    static std::size_t k = 200;
    static std::uint64_t seed = 0;
    corpus.add(sub);
    sub->add_option("--seeds", seeds, "Seed inventory TSV")->required();
    sub->add_option("--out", out, "Output TSV (base, doc_id, created_at, text)")->required();
    sub->add_option("-k,--k", k, "Documents per emoji")->capture_default_str();
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    sub->add_option("--since", since, "Only documents created at or after this ISO-8601 time");
    sub->add_option("--until", until, "Only documents created before this ISO-8601 time");
    sub->add_option("--lang", lang, "Only documents with this language tag");
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("sample", config_text(sub), seed);
        auto docs = corpus.load(run);
        const auto inv = SeedInventory::load(seeds);
        run.input(seeds);
        std::optional<std::int64_t> lo, hi;
        if (!since.empty()) lo = parse_iso8601(since);
        if (!until.empty()) hi = parse_iso8601(until);
        if (lo && hi && *lo >= *hi) throw UsageError("--since must be earlier than --until");
        std::erase_if(docs, [&](const Document& d) {
          return (lo && d.created_at < *lo) || (hi && d.created_at >= *hi) || (!lang.empty() && d.lang != lang);
        });
        const auto picked = sample_per_emoji(docs, inv, k, seed);
        std::ostringstream s;
        s << "base\tdoc_id\tcreated_at\ttext\n";
        for (const auto& [base, list] : picked) {
          for (const auto& d : list) {
            s << hex_key(base) << '\t' << tsv_escape(d.id) << '\t' << format_iso8601(d.created_at) << '\t'
              << tsv_escape(d.text) << '\n';
          }
        }
        run.output(out, s.str());
        run.finish();
      };
    });
  }

  // match-violence
  {
    auto* sub = app.add_subcommand("match-violence", "Find verb-target violence patterns");
    static CorpusInput corpus;
    static NormOptions norm;
    static std::string classes, rules, out;
    corpus.add(sub);
    norm.add(sub);
    sub->add_option("--classes", classes, "Lexical classes TSV (built-in table when omitted)");
    sub->add_option("--rules", rules, "Pattern rules TSV (built-in rules when omitted)");
    sub->add_option("--out", out, "Output TSV (doc_id, rule, first, last, span)")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("match-violence", config_text(sub), 0);
        const auto cfg = norm.resolve(&run);
        ClassTable table = default_classes();
        std::vector<PatternRule> rule_list = default_rules();
        if (!classes.empty()) {
          auto in = open_input(classes, "classes file");
          table = parse_classes(in);
          run.input(classes);
        }
        if (!rules.empty()) {
          auto in = open_input(rules, "rules file");
          rule_list = parse_rules(in);
          run.input(rules);
        }
        const ViolenceMatcher matcher(std::move(table), std::move(rule_list), ExpansionTable::defaults(), cfg);
        const auto docs = corpus.load(run);
        std::vector<std::vector<std::string>> tokens(docs.size());
        std::vector<std::vector<ViolenceMatch>> found(docs.size());
        const auto n = static_cast<std::int64_t>(docs.size());
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t i = 0; i < n; ++i) {
          tokens[i] = tokenize(normalize(docs[i].text, cfg));
          found[i] = matcher.match(tokens[i]);
        }
        std::ostringstream s;
        s << "doc_id\trule\tfirst\tlast\tspan\n";
        std::size_t n_docs = 0;
        for (std::size_t i = 0; i < docs.size(); ++i) {
          n_docs += found[i].empty() ? 0 : 1;
          for (const auto& m : found[i]) {
            std::string span;
            for (std::size_t t = m.first; t <= m.last; ++t) span += (t > m.first ? " " : "") + tokens[i][t];
            s << tsv_escape(docs[i].id) << '\t' << m.rule << '\t' << m.first << '\t' << m.last << '\t'
              << tsv_escape(span) << '\n';
          }
        }
        run.output(out, s.str());
        run.finish();
        std::cerr << "match-violence: " << n_docs << " of " << docs.size() << " documents matched\n";
      };
    });
  }

  // aggregate
  {
    auto* sub = app.add_subcommand("aggregate", "Majority-vote judgments into a labels file");
    static std::string judgments, out, test_answers, queue_out, overrides, gate_job = "offensive";
    static double threshold = 0.8;
    sub->add_option("--judgments", judgments, "Judgments TSV")->required();
    sub->add_option("--out", out, "Output labels TSV")->required();
    sub->add_option("--test-answers", test_answers, "Gold answers for test questions; failing annotators are dropped");
    sub->add_option("--threshold", threshold, "Test-question pass threshold")->capture_default_str();
    sub->add_option("--gate-job", gate_job, "Job whose test questions gate annotators")->capture_default_str();
    sub->add_option("--queue-out", queue_out, "Write the adjudication queue (non-unanimous items)");
    sub->add_option("--overrides", overrides, "Adjudicated queue file whose override column is applied");
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("aggregate", config_text(sub), 0);
        auto js = load_judgments(judgments);
        run.input(judgments);
        if (!test_answers.empty()) {
          auto in = open_input(test_answers, "test answers");
          QCGate gate{parse_test_answers(in), threshold};
          gate.validate();
          run.input(test_answers);
          const auto results = gate_all(js, gate_job, gate);
          std::unordered_set<std::string> failed;
          for (const auto& [annotator, r] : results) {
            if (!r.pass) failed.insert(annotator);
          }
          std::erase_if(js, [&](const Judgment& j) {
            return failed.contains(j.annotator_id) || gate.test_answers.contains(j.doc_id);
          });
          std::cerr << "aggregate: " << failed.size() << " of " << results.size() << " annotators failed the gate\n";
        }
        auto docs = aggregate(js);
        if (!queue_out.empty()) {
          std::ostringstream q;
          write_queue(q, adjudication_queue(docs));
          run.output(queue_out, q.str());
        }
        if (!overrides.empty()) {
          auto in = open_input(overrides, "overrides file");
          const auto items = parse_queue(in);
          run.input(overrides);
          const std::size_t changed = apply_overrides(docs, items);
          std::cerr << "aggregate: adjudication changed " << changed << " labels\n";
        }
        for (const auto job : {kJobOffensive, kJobHate, kJobVulgar, kJobViolence}) {
          const auto st = agreement_stats(docs, job);
          if (st.n_docs == 0) continue;
          std::cerr << "aggregate: " << job << " n=" << st.n_docs << " full=" << fmt6(st.full)
                    << " majority=" << fmt6(st.majority) << " tie=" << fmt6(st.tie) << '\n';
        }
        std::ostringstream s;
        write_labels(s, build_label_records(docs));
        run.output(out, s.str());
        run.finish();
      };
    });
  }

  // kappa
  {
    auto* sub = app.add_subcommand("kappa", "Average pairwise Cohen's kappa");
    static std::string judgments, out, job = "offensive";
    static std::size_t min_shared = 20;
    sub->add_option("--judgments", judgments, "Judgments TSV")->required();
    sub->add_option("--job", job, "Job to score")->capture_default_str();
    sub->add_option("--min-shared", min_shared, "Minimum shared documents per annotator pair")->capture_default_str();
    sub->add_option("--out", out, "Also write the result to this file");
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("kappa", config_text(sub), 0);
        const auto js = load_judgments(judgments);
        run.input(judgments);
        const auto k = avg_pairwise_kappa(js, job, min_shared);
        std::ostringstream s;
        s << "kappa\t" << fmt6(k.mean) << "\npairs\t" << k.n_pairs << "\nskipped_pairs\t" << k.n_skipped << '\n';
        std::cout << s.str();
        if (!out.empty()) {
          run.output(out, s.str());
          run.finish();
        }
      };
    });
  }

  // gate
  {
    auto* sub = app.add_subcommand("gate", "Score annotators on test questions");
    static std::string judgments, test_answers, out, job = "offensive";
    static double threshold = 0.8;
    sub->add_option("--judgments", judgments, "Judgments TSV")->required();
    sub->add_option("--test-answers", test_answers, "Gold answers TSV (doc_id, label)")->required();
    sub->add_option("--job", job, "Job of the test questions")->capture_default_str();
    sub->add_option("--threshold", threshold, "Pass threshold")->capture_default_str();
    sub->add_option("--out", out, "Output TSV")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("gate", config_text(sub), 0);
        const auto js = load_judgments(judgments);
        run.input(judgments);
        auto in = open_input(test_answers, "test answers");
        QCGate gate{parse_test_answers(in), threshold};
        gate.validate();
        run.input(test_answers);
        std::ostringstream s;
        s << "annotator_id\tn_test\tn_correct\taccuracy\tpass\n";
        for (const auto& [annotator, r] : gate_all(js, job, gate)) {
          s << tsv_escape(annotator) << '\t' << r.n_test << '\t' << r.n_correct << '\t' << fmt6(r.accuracy) << '\t'
            << (r.pass ? 1 : 0) << '\n';
        }
        run.output(out, s.str());
        run.finish();
      };
    });
  }

  // train
  {
    auto* sub = app.add_subcommand("train", "Fit tf-idf features and a linear SVM");
    static CorpusInput corpus;
    static NormOptions norm;
    static std::string labels, split, part = "train", task = "offensive", features = "char+word", out;
    static FeatureConfig fc;
    static TrainOptions opts;
    corpus.add(sub);
    norm.add(sub);
    sub->add_option("--labels", labels, "Labels TSV")->required();
    sub->add_option("--split", split, "Split file; only the --part ids are used");
    sub->add_option("--part", part, "Split part to train on")->capture_default_str();
    sub->add_option("--task", task, "Target: offensive, hate, vulgar or violence")->capture_default_str();
    sub->add_option("--features", features, "Feature mode: char, word or char+word")->capture_default_str();
    sub->add_option("--char-min", fc.char_min, "Smallest character n-gram")->capture_default_str();
    sub->add_option("--char-max", fc.char_max, "Largest character n-gram")->capture_default_str();
    sub->add_option("--word-min", fc.word_min, "Smallest word n-gram")->capture_default_str();
    sub->add_option("--word-max", fc.word_max, "Largest word n-gram")->capture_default_str();
    sub->add_option("--C", opts.C, "Regularization trade-off")->capture_default_str();
    sub->add_option("--max-epochs", opts.max_epochs, "Epoch limit")->capture_default_str();
    sub->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    sub->add_option("--out", out, "Output model file")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("train", config_text(sub), opts.seed);
        fc.mode = parse_feature_mode(features);
        fc.normalization = norm.resolve(&run);
        const LabelClass cls = parse_label_class(task);
        auto docs = corpus.load(run);
        const auto recs = load_labels_tracked(labels, run);
        if (!split.empty()) docs = select_docs(std::move(docs), split_part(split, part, run));
        const auto joined = join_labels(docs, recs);
        std::vector<std::string> texts;
        std::vector<int> y;
        for (std::size_t i = 0; i < docs.size(); ++i) {
          texts.push_back(docs[i].text);
          y.push_back(has_class(*joined[i], cls) ? 1 : 0);
        }
        const Classifier c = train_classifier(texts, y, fc, opts);
        std::ostringstream s;
        write_classifier(s, c);
        run.output(out, s.str());
        run.finish();
        std::cerr << "train: " << texts.size() << " documents, " << c.space.size() << " features, " << c.model.epochs
                  << " epochs" << (c.model.converged ? "" : " (epoch limit reached)") << ", objective "
                  << c.model.objective_value << '\n';
      };
    });
  }

  // predict
  {
    auto* sub = app.add_subcommand("predict", "Score documents with a trained model");
    static CorpusInput corpus;
    static std::string model, split, part = "test", out;
    corpus.add(sub);
    sub->add_option("--model", model, "Model file")->required();
    sub->add_option("--split", split, "Split file; only the --part ids are scored");
    sub->add_option("--part", part, "Split part to score")->capture_default_str();
    sub->add_option("--out", out, "Output predictions TSV (doc_id, label, score)")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("predict", config_text(sub), 0);
        const Classifier c = load_classifier(model);
        run.input(model);
        auto docs = corpus.load(run);
        if (!split.empty()) docs = select_docs(std::move(docs), split_part(split, part, run));
        std::vector<std::string> texts;
        for (const auto& d : docs) texts.push_back(d.text);
        const auto preds = c.predict_batch(texts);
        std::vector<PredictionRow> rows;
        for (std::size_t i = 0; i < docs.size(); ++i) rows.push_back({docs[i].id, preds[i].positive ? 1 : 0, preds[i].score});
        std::ostringstream s;
        write_predictions(s, rows);
        run.output(out, s.str());
        run.finish();
      };
    });
  }

  // evaluate
  {
    auto* sub = app.add_subcommand("evaluate", "Score a predictions file against gold labels");
    static std::string labels, predictions, task = "offensive", out;
    sub->add_option("--labels", labels, "Gold labels TSV covering exactly the predicted ids")->required();
    sub->add_option("--predictions", predictions, "Predictions TSV (doc_id, label, score)")->required();
    sub->add_option("--task", task, "Target: offensive, hate, vulgar or violence")->capture_default_str();
    sub->add_option("--out", out, "Also write the report to this file");
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("evaluate", config_text(sub), 0);
        // Gold may cover more documents than were predicted; restrict it first.
        auto gold = load_labels_tracked(labels, run);
        const auto preds = load_predictions(predictions);
        run.input(predictions);
        std::unordered_set<std::string> ids;
        for (const auto& p : preds) ids.insert(p.doc_id);
        std::erase_if(gold, [&](const LabelRecord& r) { return !ids.contains(r.doc_id); });
        const LabelClass cls = parse_label_class(task);
        std::unordered_map<std::string, const LabelRecord*> by_id;
        for (const auto& r : gold) by_id.emplace(r.doc_id, &r);
        std::vector<int> g, p;
        for (const auto& row : preds) {
          auto it = by_id.find(row.doc_id);
          if (it == by_id.end()) throw DataError("no gold label for predicted doc_id " + row.doc_id);
          g.push_back(has_class(*it->second, cls) ? 1 : 0);
          p.push_back(row.label);
        }
        const EvalReport r = evaluate(g, p);
        std::ostringstream s;
        write_report(s, r);
        std::cout << s.str();
        if (!out.empty()) {
          run.output(out, s.str());
          run.finish();
        }
      };
    });
  }

  // explain
  {
    auto* sub = app.add_subcommand("explain", "Per-token attributions for one text");
    static std::string model, text, in, id, seeds, out;
    static ExplainOptions opt;
    sub->add_option("--model", model, "Model file")->required();
    auto* text_opt = sub->add_option("--text", text, "Text to explain");
    auto* in_opt = sub->add_option("--in", in, "Corpus to take the text from (with --id)");
    sub->add_option("--id", id, "Document id within --in")->needs(in_opt);
    text_opt->excludes(in_opt);
    sub->add_option("--seeds", seeds, "Seed inventory providing emoji alias names");
    sub->add_option("--samples", opt.n_samples, "Perturbed samples")->capture_default_str();
    sub->add_option("--kernel-width", opt.kernel_width, "Kernel width")->capture_default_str();
    sub->add_option("--ridge", opt.ridge, "Ridge strength")->capture_default_str();
    sub->add_option("--top-k", opt.top_k, "Tokens to report")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    sub->add_option("--out", out, "Output TSV (rank, token, weight); stdout when omitted");
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("explain", config_text(sub), opt.seed);
        const Classifier c = load_classifier(model);
        run.input(model);
        std::string target = text;
        if (!in.empty()) {
          if (id.empty()) throw UsageError("--in needs --id");
          const auto docs = load_corpus(in, guess_corpus_format(in));
          run.input(in);
          auto it = std::find_if(docs.begin(), docs.end(), [](const Document& d) { return d.id == id; });
          if (it == docs.end()) throw DataError("document " + id + " not found in " + in);
          target = it->text;
        } else if (text.empty()) {
          throw UsageError("explain needs --text or --in with --id");
        }
        std::optional<SeedInventory> inv;
        if (!seeds.empty()) {
          inv = SeedInventory::load(seeds);
          run.input(seeds);
        }
        const Explanation e = explain(c, target, opt, inv ? &*inv : nullptr);
        std::ostringstream s;
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.6f", e.score_full);
        s << "# score\t" << buf << "\n# intercept\t" << fmt6(e.intercept) << "\n# r2\t" << fmt6(e.r2) << '\n';
        s << "rank\ttoken\tweight\n";
        for (std::size_t r = 0; r < e.top.size(); ++r) {
          s << r + 1 << '\t' << tsv_escape(e.tokens[e.top[r]]) << '\t' << fmt6(e.weights[e.top[r]]) << '\n';
        }
        if (out.empty()) {
          std::cout << s.str();
        } else {
          run.output(out, s.str());
          run.finish();
        }
      };
    });
  }

  // report
  {
    auto* sub = app.add_subcommand("report", "Summarize labels, emoji stats, lexicon and evaluation in one file");
    static std::string labels, stats, lexicon, eval, out;
    static std::size_t head = 20;
    sub->add_option("--labels", labels, "Labels TSV")->required();
    sub->add_option("--emoji-stats", stats, "emoji-stats output");
    sub->add_option("--lexicon", lexicon, "mine-lexicon output");
    sub->add_option("--eval", eval, "evaluate report file");
    sub->add_option("--head", head, "Rows shown from the emoji and lexicon tables")->capture_default_str();
    sub->add_option("--out", out, "Output text file")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("report", config_text(sub), 0);
        const auto recs = load_labels_tracked(labels, run);
        std::size_t off = 0, hate = 0, vulgar = 0, violence = 0;
        std::map<HateTarget, std::size_t> targets;
        for (const auto& r : recs) {
          off += r.offensive;
          hate += r.hate();
          vulgar += r.vulgar;
          violence += r.violence;
          for (auto t : r.hate_targets) ++targets[t];
        }
        const double n = recs.empty() ? 1.0 : static_cast<double>(recs.size());
        std::ostringstream s;
        s << "== class distribution ==\n";
        s << "documents\t" << recs.size() << '\n';
        auto line = [&](std::string_view name, std::size_t c) {
          s << name << '\t' << c << '\t' << fmt6(static_cast<double>(c) / n) << '\n';
        };
        line("offensive", off);
        line("clean", recs.size() - off);
        line("hate", hate);
        for (const auto& [t, c] : targets) line("hate:" + std::string(to_string(t)), c);
        line("vulgar", vulgar);
        line("violence", violence);
        auto table = [&](const std::string& path, std::string_view title) {
          if (path.empty()) return;
          auto in = open_input(path, std::string(title) + " file");
          run.input(path);
          s << "\n== " << title << " ==\n";
          std::string row;
          std::size_t k = 0;
          while (std::getline(in, row) && k <= head) {
            s << row << '\n';
            ++k;
          }
        };
        table(stats, "emoji stats");
        table(lexicon, "lexicon");
        if (!eval.empty()) {
          auto in = open_input(eval, "evaluation report");
          run.input(eval);
          s << "\n== evaluation ==\n" << in.rdbuf();
        }
        run.output(out, s.str());
        run.finish();
      };
    });
  }

  // synth
  {
    auto* sub = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
    static SynthOptions opt;
    static std::string seeds, out, labels_out;
    sub->add_option("--seeds", seeds, "Seed inventory TSV")->required();
    sub->add_option("--n", opt.n_docs, "Documents")->capture_default_str();
    sub->add_option("--offensive-rate", opt.offensive_rate, "Overall offensive rate")->capture_default_str();
    sub->add_option("--seed-emoji-rate", opt.seed_emoji_rate, "Share of documents with a seed emoji")
        ->capture_default_str();
    sub->add_option("--offensive-given-seed", opt.offensive_given_seed, "P(offensive | seed emoji)")
        ->capture_default_str();
    sub->add_option("--duplicate-rate", opt.duplicate_rate, "Exact duplicate rate")->capture_default_str();
    sub->add_option("--short-rate", opt.short_rate, "Very short document rate")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    sub->add_option("--out", out, "Output corpus (JSONL)")->required();
    sub->add_option("--labels-out", labels_out, "Output labels TSV")->required();
    sub->callback([sub, &action] {
      action = [sub] {
        RunContext run("synth", config_text(sub), opt.seed);
        const auto inv = SeedInventory::load(seeds);
        run.input(seeds);
        const auto corpus = generate_synthetic(opt, inv);
        std::ostringstream d, l;
        write_corpus_jsonl(d, corpus.docs);
        write_labels(l, corpus.labels);
        run.output(out, d.str());
        run.output(labels_out, l.str());
        run.finish();
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  }
  try {
    if (action) action();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
