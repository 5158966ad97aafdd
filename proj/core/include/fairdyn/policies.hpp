#pragma once

#include "fairdyn/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace fairdyn {

/// I(j) = w_j / sum of alive weights. Shares sum to exactly 1.
ShareMap weighted_shares(const std::vector<std::pair<JobId, BigInt>>& alive);

/// Cobb-Douglas substitutability exponents per job; each vector sums
/// to exactly 1.
struct CobbDouglasProfile {
  std::map<JobId, std::vector<Frac>> alpha;
  int dimensions = 0;

  void add(JobId id, std::vector<Frac> a);
};

/// Proportionally fair Cobb-Douglas shares: per dimension d,
/// x_{jd} = alpha_{jd} / sum_k alpha_{kd}. The implied rate
/// y_j = prod_d x^{alpha} is irrational in general and is only ever
/// reported in log space; correctness runs on per-dimension shares.
std::vector<ShareMap> cobb_douglas_shares(const CobbDouglasProfile& profile,
                                          const std::vector<JobId>& alive);

/// Weighted dominant resource fairness input/output on plain vectors;
/// templated on the exact rational type so exhaustive oracles can run
/// on int64 fractions. Rates y_j satisfy
///   sum_j r_{jd} y_j <= 1 for all d, with equality in >= 1 dimension,
///   w_j y_j max_d r_{jd} identical across jobs (the common value is
///   lambda, computed in closed form as min_d 1 / sum_j r_{jd}/(w_j max r_j)).
template <typename Rat>
struct DrfSolution {
  Rat lambda;
  std::vector<Rat> rate;                 // y_j
  std::vector<std::vector<Rat>> share;   // share[j][d] = r_{jd} * y_j
  int saturated_dim = -1;                // one exactly saturated dimension
};

template <typename Rat>
DrfSolution<Rat> drf_water_fill(const std::vector<Rat>& weight,
                                const std::vector<std::vector<Rat>>& req) {
  const std::size_t n = weight.size();
  if (n == 0) throw std::invalid_argument("drf_water_fill: no alive jobs");
  const std::size_t dims = req.at(0).size();
  if (dims == 0) throw std::invalid_argument("drf_water_fill: zero dimensions");

  std::vector<Rat> dominant(n);  // w_j * max_d r_{jd}
  for (std::size_t j = 0; j < n; ++j) {
    Rat m = req[j][0];
    for (std::size_t d = 1; d < dims; ++d) m = std::max(m, req[j][d]);
    if (!(m > Rat(0))) throw std::invalid_argument("drf_water_fill: nonpositive demand");
    dominant[j] = weight[j] * m;
  }

  DrfSolution<Rat> out;
  // Dimension-d load per unit lambda: sum_j r_{jd} / dominant_j.
  Rat max_load{0};
  for (std::size_t d = 0; d < dims; ++d) {
    Rat load{0};
    for (std::size_t j = 0; j < n; ++j) load = load + req[j][d] / dominant[j];
    if (d == 0 || load > max_load) {
      max_load = load;
      out.saturated_dim = static_cast<int>(d);
    }
  }
  out.lambda = Rat(1) / max_load;
  out.rate.resize(n);
  out.share.assign(n, std::vector<Rat>(dims));
  for (std::size_t j = 0; j < n; ++j) {
    out.rate[j] = out.lambda / dominant[j];
    for (std::size_t d = 0; d < dims; ++d) out.share[j][d] = req[j][d] * out.rate[j];
  }
  return out;
}

struct DrfProfile {
  std::map<JobId, std::pair<BigInt, std::vector<Frac>>> jobs;  // weight, requirements
  int dimensions = 0;

  void add(JobId id, BigInt weight, std::vector<Frac> req);
};

struct DrfShares {
  Frac lambda;
  std::map<JobId, Frac> rate;
  std::vector<ShareMap> per_dimension;  // I_d(j) = r_{jd} * y_j
  int saturated_dim = -1;
};

DrfShares drf_shares(const DrfProfile& profile, const std::vector<JobId>& alive);

/// The adaptive monotone fair-share adversary: after each allocator
/// response it lowers the imposed share of every job whose allocation
/// changed to (new allocation)/c, certifying feasibility and
/// c-approximation along the way. Imposed shares never increase.
struct MonotoneAdversaryState {
  Frac c{2};
  ShareMap imposed;
  AllocMap last_alloc;
};

struct Certification {
  bool ok = true;
  std::string reason;
};

/// Verifies the response against the current imposed shares, then
/// applies the share update rule. `updated` receives the ids whose
/// imposed share was lowered (drives the next share-update round).
Certification monotone_adversary_step(MonotoneAdversaryState& state,
                                      const AllocMap& response,
                                      std::vector<JobId>* updated = nullptr);

}  // namespace fairdyn
