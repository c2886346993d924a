#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "sememe/common/error.hpp"
#include "sememe/data/corpus.hpp"
#include "sememe/data/sgns.hpp"
#include "sememe/data/split.hpp"
#include "sememe/data/synth.hpp"
#include "sememe/data/utf8.hpp"
#include "sememe/data/vocab.hpp"
#include "sememe/nd/params.hpp"

namespace sememe::data {
namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sememe_data_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<Record> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_records(in, "mem");
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Corpus, ParsesRecordWithAbsentResource) {
  auto recs = parse(R"({"word":"w","descriptions":["ab",""],"labels":["s1","s2"]})" "\n");
  ASSERT_EQ(recs.size(), 1u);
  const auto vocabs = build_vocabs(recs);
  const auto ex = encode(recs[0], vocabs);
  ASSERT_EQ(ex.descriptions.size(), 2u);
  EXPECT_EQ(ex.descriptions[0].size(), 2u);
  EXPECT_TRUE(ex.descriptions[1].empty());
  EXPECT_EQ(ex.labels.size(), 2u);
  EXPECT_EQ(vocabs.labels.token(ex.labels[0]), "s1");
  EXPECT_EQ(vocabs.labels.token(ex.labels[1]), "s2");
}

TEST(Corpus, EmptyFileGivesEmptyCorpus) {
  const auto dir = temp_dir("empty");
  std::ofstream(dir / "e.jsonl").close();
  const auto corpus = load_corpus(dir / "e.jsonl");
  EXPECT_TRUE(corpus.examples.empty());
  EXPECT_EQ(corpus.vocabs.chars.size(), static_cast<std::size_t>(Vocab::kReserved));
  EXPECT_EQ(corpus.vocabs.labels.size(), static_cast<std::size_t>(Vocab::kReserved));
}

void expect_error_at_line(const std::string& text, int line) {
  try {
    parse(text);
    FAIL() << "expected DataError for: " << text;
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("mem:" + std::to_string(line)), std::string::npos) << e.what();
  }
}

TEST(Corpus, RejectsInvalidRecordsWithLineNumber) {
  const std::string ok = R"({"word":"w","descriptions":["ab"],"labels":["a"]})" "\n";
  expect_error_at_line(ok + R"({"word":"w","descriptions":["ab"],"labels":["a","a"]})" "\n", 2);
  expect_error_at_line(ok + ok + R"({"word":"w","descriptions":["",""],"labels":["a"]})" "\n", 3);
  expect_error_at_line(R"({"word":"w","descriptions":["ab"]})" "\n", 1);
  expect_error_at_line(R"({"word":"w","descriptions":["ab"],"labels":[]})" "\n", 1);
  expect_error_at_line(ok + "{not json\n", 2);
  expect_error_at_line(ok + R"({"word":"w","descriptions":["ab","c"],"labels":["a"]})" "\n", 2);
  expect_error_at_line(R"({"word":"w","descriptions":["ab"],"labels":["1","2","3","4","5","6","7","8","9"]})" "\n", 1);
}

TEST(Corpus, RoundTripThroughFile) {
  const auto dir = temp_dir("roundtrip");
  std::vector<Record> recs = {{"w1", {"héllo", ""}, {"x", "y"}}, {"w2", {"", "ab \"q\""}, {"z"}}};
  write_records(dir / "c.jsonl", recs);
  EXPECT_EQ(read_records(dir / "c.jsonl"), recs);
}

TEST(Vocab, CharactersAreUnicodeScalars) {
  auto recs = parse(R"({"word":"w","descriptions":["好a好"],"labels":["l"]})" "\n");
  const auto vocabs = build_vocabs(recs);
  EXPECT_EQ(vocabs.chars.size(), 3u + 2u);
  EXPECT_EQ(encode(recs[0], vocabs).descriptions[0].size(), 3u);
}

TEST(Vocab, EncodingDevNeverGrowsVocab) {
  auto train = parse(R"({"word":"w","descriptions":["ab"],"labels":["l1"]})" "\n");
  auto dev = parse(R"({"word":"v","descriptions":["abz"],"labels":["l1","l9"]})" "\n");
  const auto vocabs = build_vocabs(train);
  const auto chars = vocabs.chars.size();
  const auto labels = vocabs.labels.size();
  const auto ex = encode(dev[0], vocabs);
  EXPECT_EQ(vocabs.chars.size(), chars);
  EXPECT_EQ(vocabs.labels.size(), labels);
  EXPECT_EQ(ex.descriptions[0][2], Vocab::kUnk);
  EXPECT_EQ(ex.labels[1], Vocab::kUnk);
}

TEST(Vocab, ReservedIdsAndBijection) {
  Vocab v;
  EXPECT_EQ(v.size(), 3u);
  const int a = v.add("a");
  EXPECT_EQ(a, 3);
  EXPECT_EQ(v.add("a"), a);
  EXPECT_EQ(v.token(a), "a");
  EXPECT_EQ(v.id("nope"), Vocab::kUnk);
  const auto copy = Vocab::from_tokens(v.tokens());
  EXPECT_EQ(copy.tokens(), v.tokens());
}

TEST(Split, SizesFollowFloorArithmetic) {
  auto s = split_indices(100, 1);
  EXPECT_EQ(s.train.size(), 80u);
  EXPECT_EQ(s.dev.size(), 10u);
  EXPECT_EQ(s.test.size(), 10u);
  s = split_indices(10, 1);
  EXPECT_EQ(s.train.size(), 8u);
  EXPECT_EQ(s.dev.size(), 1u);
  EXPECT_EQ(s.test.size(), 1u);
  s = split_indices(2500, 3);
  EXPECT_EQ(s.train.size(), 2000u);
  EXPECT_EQ(s.dev.size(), 250u);
  EXPECT_EQ(s.test.size(), 250u);
  EXPECT_THROW(split_indices(9, 1), UsageError);
}

TEST(Split, DisjointExhaustiveDeterministic) {
  for (std::size_t n : {10u, 37u, 101u}) {
    const auto a = split_indices(n, 42);
    const auto b = split_indices(n, 42);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.dev, b.dev);
    EXPECT_EQ(a.test, b.test);
    std::vector<std::size_t> all = a.train;
    all.insert(all.end(), a.dev.begin(), a.dev.end());
    all.insert(all.end(), a.test.begin(), a.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(all[i], i);
  }
  EXPECT_NE(split_indices(100, 1).train, split_indices(100, 2).train);
}

SynthConfig small_config() {
  SynthConfig cfg;
  cfg.num_labels = 20;
  cfg.num_examples = 300;
  cfg.num_topics = 4;
  cfg.seed = 5;
  return cfg;
}

double micro_f1(const std::vector<std::vector<std::string>>& pred, const std::vector<Record>& gold) {
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::set<std::string> g(gold[i].labels.begin(), gold[i].labels.end());
    std::set<std::string> p(pred[i].begin(), pred[i].end());
    for (const auto& l : p) (g.count(l) ? tp : fp) += 1;
    for (const auto& l : g) fn += p.count(l) ? 0 : 1;
  }
  return 2 * tp / (2 * tp + fp + fn);
}

TEST(Synth, WritesSameBytesTwice) {
  const auto dir = temp_dir("det");
  const auto cfg = small_config();
  write_records(dir / "a.jsonl", generate_synthetic(cfg).records);
  write_records(dir / "b.jsonl", generate_synthetic(cfg).records);
  EXPECT_EQ(slurp(dir / "a.jsonl"), slurp(dir / "b.jsonl"));
  auto other = cfg;
  other.seed = 6;
  write_records(dir / "c.jsonl", generate_synthetic(other).records);
  EXPECT_NE(slurp(dir / "a.jsonl"), slurp(dir / "c.jsonl"));
}

TEST(Synth, RoundTripSatisfiesExampleInvariants) {
  const auto dir = temp_dir("inv");
  const auto corpus = generate_synthetic(small_config());
  write_records(dir / "c.jsonl", corpus.records);
  const auto loaded = load_corpus(dir / "c.jsonl");
  ASSERT_EQ(loaded.examples.size(), corpus.records.size());
  for (const auto& ex : loaded.examples) {
    EXPECT_TRUE(std::any_of(ex.descriptions.begin(), ex.descriptions.end(), [](const auto& d) { return !d.empty(); }));
    std::set<int> uniq(ex.labels.begin(), ex.labels.end());
    EXPECT_EQ(uniq.size(), ex.labels.size());
    EXPECT_GE(ex.labels.size(), 1u);
    EXPECT_LE(ex.labels.size(), kDefaultMaxLabels);
    for (int l : ex.labels) EXPECT_GE(l, Vocab::kReserved);
  }
}

TEST(Synth, GoldOrderIsCanonical) {
  const auto corpus = generate_synthetic(small_config());
  const auto& lex = corpus.lexicon;
  for (const auto& rec : corpus.records) {
    for (std::size_t i = 1; i < rec.labels.size(); ++i) {
      const auto a = std::find(lex.labels.begin(), lex.labels.end(), rec.labels[i - 1]) - lex.labels.begin();
      const auto b = std::find(lex.labels.begin(), lex.labels.end(), rec.labels[i]) - lex.labels.begin();
      EXPECT_LT(lex.canonical_rank[a], lex.canonical_rank[b]);
    }
  }
}

TEST(Synth, EveryLabelInTrainingSplit) {
  auto cfg = small_config();
  cfg.num_labels = 60;
  cfg.num_examples = 40;
  const auto corpus = generate_synthetic(cfg);
  const auto part = split_corpus(corpus.records, cfg.seed);
  std::set<std::string> seen;
  for (const auto& r : part.train) seen.insert(r.labels.begin(), r.labels.end());
  EXPECT_EQ(seen.size(), cfg.num_labels);
}

TEST(Synth, OracleIsExactWithoutNoise) {
  auto cfg = small_config();
  cfg.noise_rate = 0.0;
  cfg.resource_count = 1;
  cfg.resource_fractions = {1.0};
  const auto corpus = generate_synthetic(cfg);
  const SpanOracle oracle(corpus.lexicon);
  std::vector<std::vector<std::string>> pred;
  for (const auto& r : corpus.records) {
    pred.push_back(oracle.decode(r));
    EXPECT_EQ(pred.back(), r.labels);
  }
  EXPECT_EQ(micro_f1(pred, corpus.records), 1.0);
}

TEST(Synth, HalfSplitLimitsSingleResourceRecall) {
  auto cfg = small_config();
  cfg.num_examples = 1000;
  cfg.resource_fractions = {0.5, 0.5};
  const auto corpus = generate_synthetic(cfg);
  const SpanOracle oracle(corpus.lexicon);
  // Independent count of labels the first resource can reveal.
  std::set<std::string> first_half;
  for (std::size_t l = 0; l < cfg.num_labels / 2; ++l) first_half.insert(corpus.lexicon.labels[l]);
  double reachable = 0, total = 0, tp = 0;
  const std::size_t r1[] = {0};
  for (const auto& rec : corpus.records) {
    const auto pred = oracle.decode(rec, r1);
    for (const auto& l : rec.labels) {
      total += 1;
      reachable += first_half.count(l);
      tp += std::count(pred.begin(), pred.end(), l);
    }
    for (const auto& l : pred) EXPECT_TRUE(first_half.count(l)) << l;
  }
  EXPECT_EQ(tp, reachable);
  EXPECT_LE(tp / total, 0.5 + 0.05);
}

TEST(Synth, NoiseTokensAreNeverCueWords) {
  auto cfg = small_config();
  cfg.noise_rate = 0.5;
  const auto corpus = generate_synthetic(cfg);
  const SpanOracle oracle(corpus.lexicon);
  std::size_t tokens = 0, cues = 0, descriptions = 0;
  std::set<std::string> cue_words;
  for (const auto& words : corpus.lexicon.cue_words) cue_words.insert(words.begin(), words.end());
  for (const auto& rec : corpus.records) {
    EXPECT_EQ(oracle.decode(rec), rec.labels);
    for (const auto& d : rec.descriptions) {
      ++descriptions;
      std::istringstream in(d);
      std::string w;
      while (in >> w) {
        ++tokens;
        cues += cue_words.count(w);
      }
    }
  }
  // Each description draws noise until a cue draw finds no cue left, so at
  // rate 1/2 the expected noise count is cues + descriptions.
  const double noise = static_cast<double>(tokens - cues);
  EXPECT_NEAR(noise / static_cast<double>(cues + descriptions), 1.0, 0.05);
}

TEST(Synth, RejectsInvalidConfig) {
  auto cfg = small_config();
  cfg.num_labels = 1;
  EXPECT_THROW(generate_synthetic(cfg), UsageError);
  cfg = small_config();
  cfg.num_examples = 5;
  EXPECT_THROW(generate_synthetic(cfg), UsageError);
  cfg = small_config();
  cfg.noise_rate = 1.0;
  EXPECT_THROW(generate_synthetic(cfg), UsageError);
  cfg = small_config();
  cfg.resource_fractions = {0.3, 0.3};
  EXPECT_THROW(generate_synthetic(cfg), UsageError);
}

TEST(Synth, ConfigRoundTrip) {
  auto cfg = small_config();
  cfg.noise_rate = 0.35;
  const auto back = SynthConfig::from_config(cfg.to_config());
  EXPECT_EQ(back.num_labels, cfg.num_labels);
  EXPECT_EQ(back.noise_rate, cfg.noise_rate);
  EXPECT_EQ(back.resource_fractions, cfg.resource_fractions);
  EXPECT_EQ(back.seed, cfg.seed);
}

TEST(Synth, LexiconRoundTrip) {
  const auto dir = temp_dir("lex");
  const auto corpus = generate_synthetic(small_config());
  write_lexicon(dir / "lexicon.json", corpus.lexicon);
  const auto lex = read_lexicon(dir / "lexicon.json");
  EXPECT_EQ(lex.labels, corpus.lexicon.labels);
  EXPECT_EQ(lex.cue_words, corpus.lexicon.cue_words);
  EXPECT_EQ(lex.revealed, corpus.lexicon.revealed);
  EXPECT_EQ(lex.canonical_rank, corpus.lexicon.canonical_rank);
}

double cosine(const nd::Tensor& emb, int a, int b) {
  const std::size_t d = emb.dim(1);
  double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < d; ++k) {
    dot += emb.at(a, k) * emb.at(b, k);
    na += emb.at(a, k) * emb.at(a, k);
    nb += emb.at(b, k) * emb.at(b, k);
  }
  return dot / std::sqrt(na * nb);
}

// Labels 3 and 4 keep the same company (7, 8); 5 and 6 have disjoint
// company (9, 10 versus 11, 12).
std::vector<Example> cooccurrence_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> filler(13, 16);
  const std::vector<std::vector<int>> groups = {{3, 7, 8}, {4, 7, 8}, {5, 9, 10}, {6, 11, 12}};
  std::vector<Example> out;
  for (int i = 0; i < 500; ++i) {
    Example ex;
    ex.descriptions = {{3}};
    ex.labels = groups[static_cast<std::size_t>(i % 4)];
    ex.labels.push_back(filler(rng));
    out.push_back(ex);
  }
  return out;
}

TEST(Sgns, LabelsWithSharedCompanyAreCloser) {
  int wins = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto corpus = cooccurrence_corpus(seed);
    SgnsConfig cfg;
    cfg.seed = seed;
    const auto emb = pretrain_label_embeddings(corpus, 17, cfg);
    if (cosine(emb, 3, 4) > cosine(emb, 5, 6)) ++wins;
  }
  EXPECT_GE(wins, 2);
}

TEST(Sgns, ShapeAndZeroEpochs) {
  const auto corpus = cooccurrence_corpus(1);
  SgnsConfig cfg;
  cfg.dim = 16;
  const auto emb = pretrain_label_embeddings(corpus, 17, cfg);
  EXPECT_EQ(emb.shape(), (nd::Shape{17, 16}));
  EXPECT_TRUE(emb.all_finite());
  cfg.epochs = 0;
  const auto init = pretrain_label_embeddings(corpus, 17, cfg);
  nd::Rng rng(cfg.seed);
  const auto expected = nd::uniform({17, 16}, nd::kInitBound, rng, false);
  for (std::size_t i = 0; i < init.size(); ++i) EXPECT_EQ(init.at(i), expected.at(i));
}

TEST(Utf8, RejectsInvalidBytes) {
  EXPECT_EQ(utf8_scalars("a好").size(), 2u);
  EXPECT_THROW(utf8_scalars(std::string("\xff")), DataError);
}

}  // namespace
}  // namespace sememe::data
