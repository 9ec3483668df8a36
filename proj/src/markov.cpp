#include "fhn/markov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "fhn/errors.hpp"

namespace fhn {

namespace {

double rayleigh_lambda(const std::vector<std::vector<double>>& m,
                       const std::vector<double>& v) {
  // ratio of L1 norms under one application of m^T (v is a left vector)
  std::size_t n = m.size();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) w[j] += v[i] * m[i][j];
  double num = std::accumulate(w.begin(), w.end(), 0.0);
  double den = std::accumulate(v.begin(), v.end(), 0.0);
  return num / den;
}

}  // namespace

EigenTriple principal_eigen(const std::vector<std::vector<double>>& m) {
  std::size_t n = m.size();
  if (n == 0) throw FhnError(ErrorCode::OutOfDomain, "principal_eigen: empty matrix");
  for (const auto& row : m) {
    if (row.size() != n)
      throw FhnError(ErrorCode::OutOfDomain, "principal_eigen: matrix not square");
    double s = 0.0;
    for (double x : row) {
      if (x < 0.0) throw FhnError(ErrorCode::OutOfDomain, "principal_eigen: negative entry");
      s += x;
    }
    if (s > 1.0 + 1e-12)
      throw FhnError(ErrorCode::OutOfDomain, "principal_eigen: row sum exceeds 1");
  }

  EigenTriple out;
  std::vector<double> pi(n, 1.0 / n), h(n, 1.0), tmp(n);
  double lambda_prev = 0.0;
  bool converged = false;
  for (long it = 0; it < 100000; ++it) {
    // left vector: pi <- pi m
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double pi_i = pi[i];
      if (pi_i == 0.0) continue;
      const auto& row = m[i];
      for (std::size_t j = 0; j < n; ++j) tmp[j] += pi_i * row[j];
    }
    double s = std::accumulate(tmp.begin(), tmp.end(), 0.0);
    if (s <= 0.0) {
      // fully absorbing estimate: lambda0 = 0, uniform conventions
      out.lambda0 = 0.0;
      out.pi0.assign(n, 1.0 / n);
      out.h0.assign(n, 1.0);
      return out;
    }
    for (std::size_t j = 0; j < n; ++j) pi[j] = tmp[j] / s;
    if (std::abs(s - lambda_prev) < 1e-10 && it > 2) {
      converged = true;
      break;
    }
    lambda_prev = s;
  }
  if (!converged)
    throw FhnError(ErrorCode::NotConverged, "principal_eigen: left iteration stalled");
  out.lambda0 = rayleigh_lambda(m, pi);

  // right vector: h <- m h
  lambda_prev = 0.0;
  converged = false;
  for (long it = 0; it < 100000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      const auto& row = m[i];
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * h[j];
      tmp[i] = acc;
    }
    double s = std::accumulate(tmp.begin(), tmp.end(), 0.0) / n;
    if (s <= 0.0) {
      h.assign(n, 1.0);
      converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) h[i] = tmp[i] / s;
    if (std::abs(s - lambda_prev) < 1e-10 && it > 2) {
      converged = true;
      break;
    }
    lambda_prev = s;
  }
  if (!converged)
    throw FhnError(ErrorCode::NotConverged, "principal_eigen: right iteration stalled");

  // normalizations: sum pi = 1 (already), pi . h = 1
  double ph = 0.0;
  for (std::size_t i = 0; i < n; ++i) ph += pi[i] * h[i];
  if (ph > 0.0)
    for (auto& x : h) x /= ph;
  out.pi0 = std::move(pi);
  out.h0 = std::move(h);
  return out;
}

KernelEstimate estimate_kernel(const DerivedParams& d, const Chart& chart,
                               int n_bins, int samples_per_bin,
                               std::uint64_t master_seed, int n_threads,
                               const EngineConfig& cfg) {
  if (n_bins < 2) throw FhnError(ErrorCode::ConfigError, "estimate_kernel: n_bins >= 2");
  if (samples_per_bin < 1)
    throw FhnError(ErrorCode::ConfigError, "estimate_kernel: samples_per_bin >= 1");
  chart.validate();

  KernelEstimate k;
  k.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
  for (int i = 0; i <= n_bins; ++i)
    k.bin_edges[static_cast<std::size_t>(i)] = static_cast<double>(i) / n_bins;
  k.matrix.assign(static_cast<std::size_t>(n_bins),
                  std::vector<double>(static_cast<std::size_t>(n_bins), 0.0));
  k.counts.assign(static_cast<std::size_t>(n_bins), 0);
  k.horizon_failures.assign(static_cast<std::size_t>(n_bins), 0);

  // per-row outcome lists (bin index or -1 for absorption) for the bootstrap
  std::vector<std::vector<int>> outcomes(static_cast<std::size_t>(n_bins));

  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  std::atomic<int> next_row{0};
  auto worker = [&]() {
    while (true) {
      int i = next_row.fetch_add(1);
      if (i >= n_bins) return;
      double r = (i + 0.5) / n_bins;
      auto& row_outcomes = outcomes[static_cast<std::size_t>(i)];
      row_outcomes.reserve(static_cast<std::size_t>(samples_per_bin));
      for (int s = 0; s < samples_per_bin; ++s) {
        RngStream stream = make_rng_stream(
            master_seed, (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(s));
        try {
          SaoOutcome o = count_saos_once(d, chart, r, stream, cfg);
          if (o.kind == SaoKind::Spike) {
            row_outcomes.push_back(-1);
          } else {
            int j = std::min(n_bins - 1,
                             static_cast<int>(o.r_exit * n_bins));
            row_outcomes.push_back(j);
          }
        } catch (const FhnError& e) {
          if (e.code() == ErrorCode::HorizonExceeded) {
            ++k.horizon_failures[static_cast<std::size_t>(i)];
          } else {
            throw;
          }
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(n_threads, n_bins); ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (int i = 0; i < n_bins; ++i) {
    const auto& row_outcomes = outcomes[static_cast<std::size_t>(i)];
    long n = static_cast<long>(row_outcomes.size());
    k.counts[static_cast<std::size_t>(i)] = n;
    if (n == 0) continue;
    for (int j : row_outcomes)
      if (j >= 0) k.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += 1.0 / n;
  }

  EigenTriple e = principal_eigen(k.matrix);
  k.lambda0 = e.lambda0;
  k.pi0 = e.pi0;
  k.h0 = e.h0;

  // bootstrap over per-row outcome lists
  const int n_boot = 100;
  std::vector<double> lambdas;
  lambdas.reserve(n_boot);
  RngStream boot_rng = make_rng_stream(master_seed, 0xB007B007ULL);
  std::vector<std::vector<double>> bm(static_cast<std::size_t>(n_bins),
                                      std::vector<double>(static_cast<std::size_t>(n_bins)));
  for (int b = 0; b < n_boot; ++b) {
    for (int i = 0; i < n_bins; ++i) {
      auto& row = bm[static_cast<std::size_t>(i)];
      std::fill(row.begin(), row.end(), 0.0);
      const auto& src = outcomes[static_cast<std::size_t>(i)];
      if (src.empty()) continue;
      double w = 1.0 / src.size();
      for (std::size_t s = 0; s < src.size(); ++s) {
        std::size_t pick = static_cast<std::size_t>(boot_rng.next_uniform() * src.size());
        if (pick >= src.size()) pick = src.size() - 1;
        int j = src[pick];
        if (j >= 0) row[static_cast<std::size_t>(j)] += w;
      }
    }
    try {
      lambdas.push_back(principal_eigen(bm).lambda0);
    } catch (const FhnError&) {
      // degenerate resample; skip
    }
  }
  if (lambdas.size() > 1) {
    double mean = std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / lambdas.size();
    double var = 0.0;
    for (double l : lambdas) var += (l - mean) * (l - mean);
    k.lambda0_se = std::sqrt(var / (lambdas.size() - 1));
  }
  return k;
}

TailEstimate geometric_tail(const std::vector<int>& n_samples) {
  if (n_samples.empty())
    throw FhnError(ErrorCode::OutOfDomain, "geometric_tail: no samples");
  TailEstimate t;
  int n_max = *std::max_element(n_samples.begin(), n_samples.end());
  for (int n = 1; n < n_max; ++n) {
    long survivors = 0, stops = 0;
    for (int v : n_samples) {
      if (v > n) ++survivors;
      if (v == n + 1) ++stops;
    }
    if (survivors == 0) continue;
    double p = static_cast<double>(stops) / survivors;
    t.n.push_back(n);
    t.p.push_back(p);
    t.se.push_back(std::sqrt(std::max(p * (1.0 - p), 1e-12) / survivors));
  }
  return t;
}

std::vector<int> qsd_replay(const KernelEstimate& k, int n_chains,
                            std::uint64_t master_seed) {
  int n = k.n_bins();
  if (n == 0 || k.pi0.empty())
    throw FhnError(ErrorCode::OutOfDomain, "qsd_replay: invalid estimate");
  // cumulative pi0 and per-row cumulative transition masses
  std::vector<double> cpi(k.pi0.begin(), k.pi0.end());
  for (int i = 1; i < n; ++i) cpi[static_cast<std::size_t>(i)] += cpi[static_cast<std::size_t>(i - 1)];
  std::vector<std::vector<double>> crow(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    crow[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      acc += k.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      crow[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
    }
  }
  std::vector<int> out(static_cast<std::size_t>(n_chains));
  RngStream rng = make_rng_stream(master_seed, 0x05D0ULL);
  for (int c = 0; c < n_chains; ++c) {
    double u = rng.next_uniform();
    int state = static_cast<int>(std::lower_bound(cpi.begin(), cpi.end(), u) - cpi.begin());
    if (state >= n) state = n - 1;
    int steps = 1;
    while (true) {
      double v = rng.next_uniform();
      const auto& row = crow[static_cast<std::size_t>(state)];
      if (v > row.back()) break;  // absorbed: spike
      int nxt = static_cast<int>(std::lower_bound(row.begin(), row.end(), v) - row.begin());
      if (nxt >= n) nxt = n - 1;
      state = nxt;
      ++steps;
      if (steps > 100000000)
        throw FhnError(ErrorCode::NotConverged, "qsd_replay: runaway chain");
    }
    out[static_cast<std::size_t>(c)] = steps;
  }
  return out;
}

}  // namespace fhn
