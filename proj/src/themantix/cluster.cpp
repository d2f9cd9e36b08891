#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <fmt/format.h>

#include "scholarscope/error.hpp"
#include "scholarscope/text.hpp"
#include "scholarscope/themantix.hpp"

namespace scholarscope::themantix {
namespace {

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct Docs {
  std::vector<std::vector<std::string>> tokens;
  std::vector<std::string> content;  // sorted token multiset, for order-free tie-breaks
};

Docs collect(const Corpus& corpus) {
  Docs docs;
  const auto& stop = StopWords::bundled();
  for (const auto& r : corpus.records()) {
    auto tokens = document_tokens(r, stop);
    for (const auto& k : distinct_keywords(r)) {
      auto more = filter_tokens(text::tokenize(k), stop);
      tokens.insert(tokens.end(), more.begin(), more.end());
    }
    auto sorted = tokens;
    std::sort(sorted.begin(), sorted.end());
    docs.content.push_back(text::join(sorted, " "));
    docs.tokens.push_back(std::move(tokens));
  }
  return docs;
}

SparseRows tfidf(const Docs& docs) {
  std::map<std::string, int> vocab;
  for (const auto& d : docs.tokens)
    for (const auto& t : d) vocab.emplace(t, 0);
  int next = 0;
  for (auto& [t, i] : vocab) i = next++;
  const auto n_docs = static_cast<double>(docs.tokens.size());
  std::vector<double> df(vocab.size(), 0.0);
  std::vector<std::map<int, double>> tf(docs.tokens.size());
  for (size_t d = 0; d < docs.tokens.size(); ++d) {
    for (const auto& t : docs.tokens[d]) tf[d][vocab.at(t)] += 1.0;
    for (const auto& [w, _] : tf[d]) df[static_cast<size_t>(w)] += 1.0;
  }
  std::vector<Eigen::Triplet<double>> trips;
  for (size_t d = 0; d < tf.size(); ++d) {
    double norm = 0.0;
    std::vector<std::pair<int, double>> row;
    for (const auto& [w, c] : tf[d]) {
      const double x = c * (std::log((1.0 + n_docs) / (1.0 + df[static_cast<size_t>(w)])) + 1.0);
      row.push_back({w, x});
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (const auto& [w, x] : row) trips.emplace_back(static_cast<int>(d), w, x / norm);
  }
  SparseRows m(static_cast<Eigen::Index>(docs.tokens.size()), static_cast<Eigen::Index>(vocab.size()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

std::vector<int> spherical_kmeans(const SparseRows& x, const Docs& docs, int k, std::uint64_t seed) {
  const auto n = static_cast<size_t>(x.rows());
  std::vector<std::uint64_t> key(n);
  for (size_t i = 0; i < n; ++i) key[i] = fnv1a(docs.content[i], fnv1a(std::to_string(seed)));
  auto before = [&](size_t a, size_t b) {
    return key[a] != key[b] ? key[a] < key[b] : docs.content[a] < docs.content[b];
  };

  std::vector<size_t> chosen;
  size_t first = 0;
  for (size_t i = 1; i < n; ++i)
    if (before(i, first)) first = i;
  chosen.push_back(first);
  std::vector<double> best_sim(n, -2.0);
  while (chosen.size() < static_cast<size_t>(k)) {
    const Eigen::VectorXd c = x.row(static_cast<Eigen::Index>(chosen.back())).transpose();
    const Eigen::VectorXd sims = x * c;
    for (size_t i = 0; i < n; ++i) best_sim[i] = std::max(best_sim[i], sims(static_cast<Eigen::Index>(i)));
    size_t pick = n;
    for (size_t i = 0; i < n; ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      if (pick == n || best_sim[i] < best_sim[pick] - 1e-12 ||
          (std::abs(best_sim[i] - best_sim[pick]) <= 1e-12 && before(i, pick)))
        pick = i;
    }
    chosen.push_back(pick);
  }

  Eigen::MatrixXd centers(x.cols(), k);
  for (int c = 0; c < k; ++c) centers.col(c) = x.row(static_cast<Eigen::Index>(chosen[static_cast<size_t>(c)])).transpose();
  std::vector<int> assign(n, -1);
  for (int it = 0; it < 100; ++it) {
    const Eigen::MatrixXd sims = x * centers;
    bool changed = false;
    for (size_t i = 0; i < n; ++i) {
      int best = 0;
      for (int c = 1; c < k; ++c)
        if (sims(static_cast<Eigen::Index>(i), c) > sims(static_cast<Eigen::Index>(i), best) + 1e-12) best = c;
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    for (int c = 0; c < k; ++c) {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(x.cols());
      bool any = false;
      for (size_t i = 0; i < n; ++i) {
        if (assign[i] != c) continue;
        sum += x.row(static_cast<Eigen::Index>(i)).transpose();
        any = true;
      }
      if (any && sum.norm() > 0.0) centers.col(c) = sum / sum.norm();
    }
  }
  return assign;
}

// Two leading principal components by subspace iteration on the centered
// covariance, applied implicitly so the TF-IDF matrix stays sparse.
Eigen::MatrixXd pca2(const SparseRows& x) {
  const auto n = x.rows();
  const auto v = x.cols();
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(n, 2);
  if (n < 2 || v == 0) return coords;
  const Eigen::RowVectorXd mean = (Eigen::RowVectorXd::Ones(n) * x) / static_cast<double>(n);
  auto xc_times = [&](const Eigen::MatrixXd& q) -> Eigen::MatrixXd {
    Eigen::MatrixXd out = x * q;
    out.rowwise() -= mean * q;
    return out;
  };
  auto xct_times = [&](const Eigen::MatrixXd& y) -> Eigen::MatrixXd {
    Eigen::MatrixXd out = x.transpose() * y;
    out -= mean.transpose() * y.colwise().sum();
    return out;
  };
  const auto block = std::min<Eigen::Index>(4, v);
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXd q(v, block);
  for (Eigen::Index i = 0; i < v; ++i)
    for (Eigen::Index j = 0; j < block; ++j) q(i, j) = unit(rng);
  for (int it = 0; it < 300; ++it) {
    Eigen::MatrixXd z = xct_times(xc_times(q));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
    Eigen::MatrixXd next = qr.householderQ() * Eigen::MatrixXd::Identity(v, block);
    const double delta = (next * (next.transpose() * q) - q).norm();
    q = next;
    if (delta < 1e-12) break;
  }
  const Eigen::MatrixXd y = xc_times(q);
  const Eigen::MatrixXd small = y.transpose() * y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(small);
  for (Eigen::Index c = 0; c < std::min<Eigen::Index>(2, block); ++c) {
    Eigen::VectorXd col = y * eig.eigenvectors().col(block - 1 - c);
    Eigen::Index arg = 0;
    col.cwiseAbs().maxCoeff(&arg);
    if (col(arg) < 0) col = -col;
    coords.col(c) = col;
  }
  return coords;
}

}  // namespace

AnalysisResult cluster_documents(const Corpus& corpus, int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (static_cast<size_t>(k) > corpus.size())
    throw Error(ErrorCode::kKExceedsDocuments, fmt::format("k = {} exceeds {} documents", k, corpus.size()));
  const auto docs = collect(corpus);
  const auto x = tfidf(docs);
  std::vector<int> assign;
  if (static_cast<size_t>(k) == corpus.size()) {
    assign.resize(corpus.size());
    std::iota(assign.begin(), assign.end(), 0);
  } else {
    assign = spherical_kmeans(x, docs, k, seed);
  }
  // Number clusters by first member in record order.
  std::map<int, int> relabel;
  for (int& a : assign) a = relabel.try_emplace(a, static_cast<int>(relabel.size())).first->second;
  const auto coords = pca2(x);

  AnalysisResult res;
  res.kind = "clusters";
  res.label_column = "record";
  res.columns = {"cluster", "x", "y"};
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    // Round away solver noise so exported coordinates are stable.
    auto clean = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    res.rows.push_back({corpus[i].id, {static_cast<double>(assign[i]), clean(coords(r, 0)), clean(coords(r, 1))}});
  }
  res.meta["analysis"] = "cluster_documents";
  res.meta["k"] = std::to_string(k);
  res.meta["seed"] = std::to_string(seed);
  res.meta["projection"] = "pca";
  res.meta["aggregation"] = "none";
  return res;
}

}  // namespace scholarscope::themantix
