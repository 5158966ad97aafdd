#include "fairdyn/policies.hpp"

namespace fairdyn {

ShareMap weighted_shares(const std::vector<std::pair<JobId, BigInt>>& alive) {
  if (alive.empty()) throw std::invalid_argument("weighted_shares: no alive jobs");
  BigInt total{0};
  for (const auto& [id, w] : alive) {
    if (w < 1) throw std::invalid_argument("weighted_shares: weight must be >= 1");
    total += w;
  }
  ShareMap shares;
  for (const auto& [id, w] : alive) shares[id] = make_frac(w, total);
  return shares;
}

void CobbDouglasProfile::add(JobId id, std::vector<Frac> a) {
  if (dimensions == 0) dimensions = static_cast<int>(a.size());
  if (static_cast<int>(a.size()) != dimensions)
    throw std::invalid_argument("CobbDouglasProfile: dimension mismatch");
  Frac total{0};
  for (const auto& x : a) {
    if (x <= 0) throw std::invalid_argument("CobbDouglasProfile: exponents must be positive");
    total += x;
  }
  if (total != 1) throw std::invalid_argument("CobbDouglasProfile: exponents must sum to 1");
  alpha[id] = std::move(a);
}

std::vector<ShareMap> cobb_douglas_shares(const CobbDouglasProfile& profile,
                                          const std::vector<JobId>& alive) {
  if (alive.empty()) throw std::invalid_argument("cobb_douglas_shares: no alive jobs");
  const int dims = profile.dimensions;
  std::vector<Frac> totals(static_cast<std::size_t>(dims), Frac(0));
  for (JobId id : alive) {
    const auto& a = profile.alpha.at(id);
    for (int d = 0; d < dims; ++d) totals[d] += a[d];
  }
  std::vector<ShareMap> out(static_cast<std::size_t>(dims));
  for (JobId id : alive) {
    const auto& a = profile.alpha.at(id);
    for (int d = 0; d < dims; ++d) out[d][id] = a[d] / totals[d];
  }
  return out;
}

void DrfProfile::add(JobId id, BigInt weight, std::vector<Frac> req) {
  if (dimensions == 0) dimensions = static_cast<int>(req.size());
  if (static_cast<int>(req.size()) != dimensions)
    throw std::invalid_argument("DrfProfile: dimension mismatch");
  for (const auto& r : req)
    if (r <= 0) throw std::invalid_argument("DrfProfile: requirements must be positive");
  jobs[id] = {std::move(weight), std::move(req)};
}

DrfShares drf_shares(const DrfProfile& profile, const std::vector<JobId>& alive) {
  if (alive.empty()) throw std::invalid_argument("drf_shares: no alive jobs");
  std::vector<Frac> weight;
  std::vector<std::vector<Frac>> req;
  weight.reserve(alive.size());
  for (JobId id : alive) {
    const auto& [w, r] = profile.jobs.at(id);
    weight.emplace_back(w);
    req.push_back(r);
  }
  const auto sol = drf_water_fill<Frac>(weight, req);
  DrfShares out;
  out.lambda = sol.lambda;
  out.saturated_dim = sol.saturated_dim;
  out.per_dimension.assign(static_cast<std::size_t>(profile.dimensions), ShareMap{});
  for (std::size_t j = 0; j < alive.size(); ++j) {
    out.rate[alive[j]] = sol.rate[j];
    for (int d = 0; d < profile.dimensions; ++d)
      out.per_dimension[static_cast<std::size_t>(d)][alive[j]] =
          sol.share[j][static_cast<std::size_t>(d)];
  }
  return out;
}

Certification monotone_adversary_step(MonotoneAdversaryState& state,
                                      const AllocMap& response,
                                      std::vector<JobId>* updated) {
  Frac total{0};
  for (const auto& [id, share] : state.imposed) {
    auto it = response.find(id);
    if (it == response.end() || it->second <= 0)
      return {false, "missing or nonpositive allocation for job " + std::to_string(id)};
    if (it->second * state.c < share)
      return {false, "c-approximation violated for job " + std::to_string(id)};
  }
  for (const auto& [id, a] : response) total += a;
  if (total > 1) return {false, "infeasible: allocations sum to " + fraction_string(total)};

  for (const auto& [id, a] : response) {
    auto prev = state.last_alloc.find(id);
    const bool changed = prev == state.last_alloc.end() || prev->second != a;
    if (changed) {
      const Frac lowered = a / state.c;
      auto& share = state.imposed[id];
      if (share == 0 || lowered < share) {
        share = lowered;
        if (updated) updated->push_back(id);
      }
    }
  }
  state.last_alloc = response;
  return {};
}

}  // namespace fairdyn
