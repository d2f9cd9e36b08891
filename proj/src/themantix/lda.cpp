#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/themantix.hpp"

namespace scholarscope::themantix {

TopicModel lda_topics(const Corpus& corpus, const LdaOptions& options) {
  const int k = options.k;
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (options.iterations < 1) throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 1");
  const double alpha = options.alpha.value_or(50.0 / k);
  const double beta = options.beta;
  if (!(alpha > 0.0) || !(beta > 0.0)) throw Error(ErrorCode::kInvalidArgument, "alpha and beta must be positive");

  std::vector<std::vector<std::string>> raw;
  std::map<std::string, int> vocab_index;
  for (const auto& r : corpus.records()) {
    raw.push_back(document_tokens(r));
    for (const auto& t : raw.back()) vocab_index.emplace(t, 0);
  }
  if (vocab_index.empty()) throw Error(ErrorCode::kEmptyVocabulary, "no tokens left after stop-word filtering");
  const auto non_empty = std::count_if(raw.begin(), raw.end(), [](const auto& d) { return !d.empty(); });
  if (non_empty < k)
    throw Error(ErrorCode::kTooFewDocuments, fmt::format("{} non-empty documents for k = {}", non_empty, k));

  TopicModel model;
  model.k = k;
  model.seed = options.seed;
  model.iterations = options.iterations;
  model.alpha = alpha;
  model.beta = beta;
  for (auto& [term, idx] : vocab_index) {
    idx = static_cast<int>(model.vocabulary.size());
    model.vocabulary.push_back(term);
  }
  const auto v_size = model.vocabulary.size();
  const auto kk = static_cast<size_t>(k);

  std::vector<std::vector<int>> docs(raw.size());
  for (size_t d = 0; d < raw.size(); ++d)
    for (const auto& t : raw[d]) docs[d].push_back(vocab_index.at(t));

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<int>> z(docs.size());
  std::vector<std::vector<int>> n_dk(docs.size(), std::vector<int>(kk, 0));
  std::vector<std::vector<int>> n_kw(kk, std::vector<int>(v_size, 0));
  std::vector<int> n_k(kk, 0);
  for (size_t d = 0; d < docs.size(); ++d) {
    for (int w : docs[d]) {
      auto t = static_cast<size_t>(std::min(static_cast<int>(unit(rng) * k), k - 1));
      z[d].push_back(static_cast<int>(t));
      ++n_dk[d][t];
      ++n_kw[t][static_cast<size_t>(w)];
      ++n_k[t];
    }
  }

  const double v_beta = static_cast<double>(v_size) * beta;
  std::vector<double> p(kk);
  for (int it = 0; it < options.iterations; ++it) {
    for (size_t d = 0; d < docs.size(); ++d) {
      for (size_t i = 0; i < docs[d].size(); ++i) {
        const auto w = static_cast<size_t>(docs[d][i]);
        auto t = static_cast<size_t>(z[d][i]);
        --n_dk[d][t];
        --n_kw[t][w];
        --n_k[t];
        double total = 0.0;
        for (size_t j = 0; j < kk; ++j) {
          total += (n_dk[d][j] + alpha) * (n_kw[j][w] + beta) / (n_k[j] + v_beta);
          p[j] = total;
        }
        const double u = unit(rng) * total;
        t = static_cast<size_t>(std::upper_bound(p.begin(), p.end(), u) - p.begin());
        if (t >= kk) t = kk - 1;
        z[d][i] = static_cast<int>(t);
        ++n_dk[d][t];
        ++n_kw[t][w];
        ++n_k[t];
      }
    }
  }

  model.topic_word.assign(kk, std::vector<double>(v_size));
  for (size_t t = 0; t < kk; ++t)
    for (size_t w = 0; w < v_size; ++w) model.topic_word[t][w] = (n_kw[t][w] + beta) / (n_k[t] + v_beta);
  for (size_t d = 0; d < docs.size(); ++d) {
    const double n_d = static_cast<double>(docs[d].size());
    std::vector<double> row(kk);
    for (size_t t = 0; t < kk; ++t) row[t] = (n_dk[d][t] + alpha) / (n_d + k * alpha);
    model.doc_topic.push_back(std::move(row));
    model.doc_ids.push_back(corpus[d].id);
  }
  return model;
}

namespace {

std::vector<size_t> top_terms(const TopicModel& model, size_t t, size_t top) {
  std::vector<size_t> idx(model.vocabulary.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto& row = model.topic_word[t];
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return row[a] > row[b]; });
  if (idx.size() > top) idx.resize(top);
  return idx;
}

}  // namespace

std::string topic_terms_csv(const TopicModel& model, size_t top) {
  std::vector<csv::Row> rows = {{"topic", "rank", "term", "weight"}};
  for (size_t t = 0; t < static_cast<size_t>(model.k); ++t) {
    size_t rank = 1;
    for (size_t w : top_terms(model, t, top))
      rows.push_back({std::to_string(t), std::to_string(rank++), model.vocabulary[w],
                      fmt::format("{}", model.topic_word[t][w])});
  }
  return csv::write(rows);
}

std::string doc_topic_csv(const TopicModel& model) {
  csv::Row header = {"record"};
  for (int t = 0; t < model.k; ++t) header.push_back(fmt::format("topic_{}", t));
  std::vector<csv::Row> rows = {header};
  for (size_t d = 0; d < model.doc_topic.size(); ++d) {
    csv::Row row = {model.doc_ids[d]};
    for (double x : model.doc_topic[d]) row.push_back(fmt::format("{}", x));
    rows.push_back(std::move(row));
  }
  return csv::write(rows);
}

AnalysisResult topic_model_result(const TopicModel& model, size_t top) {
  AnalysisResult res;
  res.kind = "topic_model";
  res.label_column = "record";
  for (int t = 0; t < model.k; ++t) res.columns.push_back(fmt::format("topic_{}", t));
  for (size_t d = 0; d < model.doc_topic.size(); ++d) res.rows.push_back({model.doc_ids[d], model.doc_topic[d]});
  nlohmann::json topics = nlohmann::json::array();
  for (size_t t = 0; t < static_cast<size_t>(model.k); ++t) {
    nlohmann::json terms = nlohmann::json::array();
    for (size_t w : top_terms(model, t, top)) terms.push_back({{"term", model.vocabulary[w]}, {"weight", model.topic_word[t][w]}});
    topics.push_back(terms);
  }
  res.meta["topics"] = topics.dump();
  res.meta["analysis"] = "lda_topics";
  res.meta["alpha"] = fmt::format("{}", model.alpha);
  res.meta["beta"] = fmt::format("{}", model.beta);
  res.meta["seed"] = std::to_string(model.seed);
  res.meta["iterations"] = std::to_string(model.iterations);
  res.meta["aggregation"] = "none";
  return res;
}

}  // namespace scholarscope::themantix
