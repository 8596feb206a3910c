#pragma once

// Test-only oracles. None of these call into the dn/metrics implementation;
// they restate the rules directly so the two can be compared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

struct CharacterParams {
  double reciprocity_init = 0.95;
  double reciprocity_decay = 2.0 / 3.0;
};

struct RuleSet {
  double end_probability = 0.2;
  double centrality_init = 1.0;
  double centrality_increment = 1.0;
  double loyalty_boost = 0.5;
  std::uint32_t max_lines = 200;
  std::vector<CharacterParams> characters = std::vector<CharacterParams>(3);
};

/// Straightforward re-simulation of the turn-taking rules, returning the
/// exchange lengths of one dialogue. Uses std::mt19937 and the standard
/// distributions, so its random stream is unrelated to the engine's.
inline std::vector<int> simulate_exchanges(const RuleSet& rules, std::mt19937& gen) {
  const int n = static_cast<int>(rules.characters.size());
  std::vector<double> lines(n, 0.0);
  // loyalty[a][b], self entry held at 0
  std::vector<std::vector<double>> loyalty(n, std::vector<double>(n, 1.0 / (n - 1)));
  for (int a = 0; a < n; ++a) loyalty[a][a] = 0.0;
  std::vector<double> recip(n);
  for (int a = 0; a < n; ++a) recip[a] = rules.characters[a].reciprocity_init;

  std::vector<int> exchanges;
  int total = 0;
  while (true) {
    std::vector<double> centrality(n);
    for (int a = 0; a < n; ++a) {
      centrality[a] = rules.centrality_init + rules.centrality_increment * lines[a];
    }
    int speaker = std::discrete_distribution<int>(centrality.begin(), centrality.end())(gen);
    int listener = std::discrete_distribution<int>(loyalty[speaker].begin(), loyalty[speaker].end())(gen);
    int length = 0;
    while (true) {
      ++length;
      ++total;
      lines[speaker] += 1.0;
      loyalty[speaker][listener] += rules.loyalty_boost;
      double sum = 0.0;
      for (double w : loyalty[speaker]) sum += w;
      for (double& w : loyalty[speaker]) w /= sum;

      if (std::bernoulli_distribution(rules.end_probability)(gen) ||
          total >= static_cast<int>(rules.max_lines)) {
        exchanges.push_back(length);
        return exchanges;
      }
      if (std::bernoulli_distribution(recip[listener])(gen)) {
        recip[speaker] *= rules.characters[speaker].reciprocity_decay;
        recip[listener] *= rules.characters[listener].reciprocity_decay;
        std::swap(speaker, listener);
      } else {
        recip[speaker] = rules.characters[speaker].reciprocity_init;
        recip[listener] = rules.characters[listener].reciprocity_init;
        exchanges.push_back(length);
        break;
      }
    }
  }
}

/// Exact exchange-length pmf for identical characters by enumerating the
/// gated process: after line k of an exchange the exchange continues with
/// probability (1 - p_end) * r0 * d^(k-1). Entries 1..max_len; the remaining
/// tail mass is folded into the last entry.
inline std::vector<double> exchange_length_pmf(double p_end, double r0, double d, int max_len) {
  std::vector<double> pmf(max_len + 1, 0.0);
  double survive = 1.0;  // P(length >= k)
  for (int k = 1; k <= max_len; ++k) {
    const double cont = (1.0 - p_end) * r0 * std::pow(d, k - 1);
    if (k == max_len) {
      pmf[k] = survive;
    } else {
      pmf[k] = survive * (1.0 - cont);
      survive *= cont;
    }
  }
  return pmf;
}

/// Counts histogram of values (index = value).
inline std::vector<double> histogram(const std::vector<int>& values, int max_value) {
  std::vector<double> h(max_value + 1, 0.0);
  for (int v : values) ++h[std::min(v, max_value)];
  return h;
}

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double critical = 0.0;  // at the requested alpha
  bool pass = false;
};

/// Goodness of fit of observed counts (bins 1..) against probabilities,
/// merging tail bins until every expected count is at least 5.
inline ChiSquareResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& probs,
                                      double alpha) {
  double n = 0.0;
  for (std::size_t k = 1; k < observed.size(); ++k) n += observed[k];
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double o_acc = 0.0;
  double e_acc = 0.0;
  for (std::size_t k = 1; k < observed.size(); ++k) {
    o_acc += observed[k];
    e_acc += n * probs[k];
    if (e_acc >= 5.0) {
      bins.emplace_back(o_acc, e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (bins.empty()) {
      bins.emplace_back(o_acc, e_acc);
    } else {
      bins.back().first += o_acc;
      bins.back().second += e_acc;
    }
  }
  ChiSquareResult r;
  for (const auto& [o, e] : bins) r.statistic += (o - e) * (o - e) / e;
  r.dof = static_cast<int>(bins.size()) - 1;
  r.critical = boost::math::quantile(boost::math::chi_squared(r.dof), 1.0 - alpha);
  r.pass = r.statistic <= r.critical;
  return r;
}

/// Two-sample chi-square homogeneity test on count histograms (bins 1..),
/// merging tail bins until each pooled bin has at least 10 observations.
inline ChiSquareResult chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                                             double alpha) {
  const std::size_t size = std::max(a.size(), b.size());
  auto at = [](const std::vector<double>& v, std::size_t k) { return k < v.size() ? v[k] : 0.0; };
  std::vector<std::pair<double, double>> bins;
  double a_acc = 0.0;
  double b_acc = 0.0;
  for (std::size_t k = 1; k < size; ++k) {
    a_acc += at(a, k);
    b_acc += at(b, k);
    if (a_acc + b_acc >= 10.0) {
      bins.emplace_back(a_acc, b_acc);
      a_acc = b_acc = 0.0;
    }
  }
  if (a_acc + b_acc > 0.0) {
    bins.back().first += a_acc;
    bins.back().second += b_acc;
  }
  double na = 0.0;
  double nb = 0.0;
  for (const auto& [x, y] : bins) {
    na += x;
    nb += y;
  }
  ChiSquareResult r;
  for (const auto& [x, y] : bins) {
    const double total = x + y;
    const double ea = total * na / (na + nb);
    const double eb = total * nb / (na + nb);
    r.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
  }
  r.dof = static_cast<int>(bins.size()) - 1;
  r.critical = boost::math::quantile(boost::math::chi_squared(r.dof), 1.0 - alpha);
  r.pass = r.statistic <= r.critical;
  return r;
}

/// Independent recount of words / distinct 1-grams / distinct 2-grams.
struct Counts {
  std::size_t words = 0;
  std::size_t unigrams = 0;
  std::size_t bigrams = 0;
};

inline Counts recount(const std::vector<std::string>& tokens) {
  Counts c;
  c.words = tokens.size();
  std::map<std::string, int> uni;
  for (const auto& t : tokens) uni[t]++;
  c.unigrams = uni.size();
  std::set<std::string> bi;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) bi.insert(tokens[i] + '\x1f' + tokens[i + 1]);
  c.bigrams = bi.size();
  return c;
}

}  // namespace oracle
