#include "fairdyn/allocators.hpp"

#include <algorithm>

namespace fairdyn {

namespace {

// floor_log2(total / weight) via bit lengths: the quotient lies in
// [2^(d-1), 2^(d+1)) for d = msb(total) - msb(weight), so one shifted
// comparison settles it without a full big-integer division.
std::int64_t ratio_log2(const BigInt& total, const BigInt& weight) {
  const std::int64_t d = floor_log2(total) - floor_log2(weight);
  if (d <= 0) return 0;
  return (weight << static_cast<unsigned>(d)) <= total ? d : d - 1;
}

}  // namespace

Frac logstar_allocate(const TowerTable& table, std::size_t group_index, const BigInt& group_weight,
                      const BigInt& total_weight) {
  if (group_weight < 1 || total_weight < group_weight)
    throw std::invalid_argument("logstar_allocate: need W_t >= w_i >= 1");
  // 12 * 2^i * w as (3w) << (i+2): avoids a multiplication of two
  // wide integers when both the group index and the weight are large.
  if ((BigInt(3) * group_weight) << static_cast<unsigned>(group_index + 2) < total_weight)
    return Frac(1, BigInt(12) << static_cast<unsigned>(group_index));  // frozen floor
  const std::int64_t ratio_bits = ratio_log2(total_weight, group_weight);
  const int k = g_floor_inverse(table, ratio_bits);
  return Frac(1, BigInt(12) << static_cast<unsigned>(table.log2_g(k)));
}

LogStarAllocator::LogStarAllocator(TowerTable table, bool guess_and_double, bool track_values)
    : table_(std::move(table)), guess_and_double_(guess_and_double), track_values_(track_values) {}

Frac LogStarAllocator::pad_reserved() const {
  if (!groups_.has_open()) return 0;
  const auto& open = groups_.groups.back();
  return group_alloc_.back() * Frac(groups_.pad_weight(), open.treated_weight);
}

void LogStarAllocator::note_change(JobId id, const Frac& value) {
  auto it = allocs_.find(id);
  if (it == allocs_.end()) {
    allocs_.emplace(id, value);
    alloc_sum_ += value;
    if (id != arriving_) changed_.push_back(id);
    return;
  }
  if (it->second == value) return;
  alloc_sum_ += value - it->second;
  it->second = value;
  if (id != arriving_) changed_.push_back(id);
}

void LogStarAllocator::note_changed_id(JobId id) {
  if (id != arriving_) changed_.push_back(id);
}

void LogStarAllocator::refresh_member(std::size_t gi, std::size_t slot) {
  const auto& group = groups_.groups[gi];
  const auto& member = group.members[slot];
  auto& slices = slices_[member.id];
  auto it = std::find_if(slices.begin(), slices.end(),
                         [&](const Slice& s) { return s.group == gi && s.slot == slot; });
  if (it == slices.end()) return;  // job not registered yet (mid-arrival)
  const Frac contribution =
      group_alloc_[gi] * Frac(member.amount, group.treated_weight);
  if (contribution == it->contribution) return;
  it->contribution = contribution;
  Frac total{0};
  for (const auto& s : slices) total += s.contribution;
  note_change(member.id, total);
}

void LogStarAllocator::scale_member(std::size_t gi, std::size_t slot, const Frac& factor) {
  const auto& member = groups_.groups[gi].members[slot];
  auto& slices = slices_[member.id];
  auto it = std::find_if(slices.begin(), slices.end(),
                         [&](const Slice& s) { return s.group == gi && s.slot == slot; });
  if (it == slices.end()) return;
  it->contribution *= factor;
  Frac total{0};
  for (const auto& s : slices) total += s.contribution;
  note_change(member.id, total);
}

void LogStarAllocator::schedule_next_event(std::size_t gi) {
  const auto& group = groups_.groups[gi];
  if (!group.closed) return;  // open group's rate is fixed until it closes
  const BigInt& w = group.treated_weight;
  const BigInt floor_point = (BigInt(3) * w) << static_cast<unsigned>(gi + 2);
  const BigInt effective = groups_.effective_total();
  if (floor_point < effective) return;  // floored; the share only falls from here
  BigInt next = floor_point + 1;
  const std::int64_t ratio_bits = ratio_log2(effective, w);
  const int k = g_floor_inverse(table_, ratio_bits);
  if (k < table_.k_cap() && table_.log2_g(k + 1) <= table_.bit_budget()) {
    const BigInt step_point = w << static_cast<unsigned>(table_.log2_g(k + 1));
    next = std::min(next, step_point);
  }
  events_.emplace(std::move(next), gi);
}

void LogStarAllocator::recompute_group(std::size_t gi, bool reshaped) {
  const auto& group = groups_.groups[gi];
  const Frac alloc = logstar_allocate(table_, gi, group.treated_weight, groups_.effective_total());
  const Frac old = group_alloc_[gi];
  group_alloc_[gi] = alloc;
  // Each member's value is alloc * amount / treated. Group allocations
  // only ever move by power-of-two factors while a reshape moves the
  // treated weight by a factor (2^m - 1)/1 or similar that is never a
  // power of two, so the two changes cannot cancel: member values
  // changed exactly when the allocation or the treated weight did.
  const bool treated_changed = group_treated_[gi] != group.treated_weight;
  if (treated_changed) group_treated_[gi] = group.treated_weight;
  const bool value_changed = alloc != old || treated_changed;
  if (track_values_) {
    if (reshaped) {
      for (std::size_t s = 0; s < group.members.size(); ++s) refresh_member(gi, s);
    } else if (alloc != old && old != 0) {
      const Frac factor = alloc / old;
      for (std::size_t s = 0; s < group.members.size(); ++s) scale_member(gi, s, factor);
    }
  } else if (value_changed) {
    for (const auto& member : group.members) note_changed_id(member.id);
  }
  schedule_next_event(gi);
}

void LogStarAllocator::drain_events() {
  const BigInt effective = groups_.effective_total();
  while (!events_.empty() && events_.begin()->first <= effective) {
    const std::size_t gi = events_.begin()->second;
    events_.erase(events_.begin());
    recompute_group(gi, false);
  }
}

const AllocMap& LogStarAllocator::on_arrival(const Job& job, const ShareMap&) {
  changed_.clear();
  arriving_ = job.id;
  ++jobs_seen_;
  if (guess_and_double_ && jobs_seen_ > guess_) guess_ <<= 1;

  const std::size_t old_group_count = groups_.groups.size();
  const BigInt effective_before = groups_.effective_total();
  const auto ingest = logstar_group_ingest(groups_, job);
  group_alloc_.resize(groups_.groups.size(), Frac(0));
  group_treated_.resize(groups_.groups.size(), BigInt(0));

  if (track_values_) {
    auto& slices = slices_[job.id];
    for (const auto& [gi, slot] : ingest.placements) slices.push_back({gi, slot, Frac(0)});
  }

  std::vector<std::size_t> targets = ingest.reshaped;
  for (std::size_t gi = old_group_count; gi < groups_.groups.size(); ++gi) targets.push_back(gi);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (std::size_t gi : targets) recompute_group(gi, true);
  if (track_values_)
    for (const auto& [gi, slot] : ingest.placements) refresh_member(gi, slot);
  if (groups_.effective_total() > effective_before) drain_events();

  std::sort(changed_.begin(), changed_.end());
  changed_.erase(std::unique(changed_.begin(), changed_.end()), changed_.end());
  arriving_ = -1;
  return allocs_;
}

const AllocMap& LogStarAllocator::on_departure(JobId, const ShareMap&) {
  throw std::logic_error("LogStarAllocator handles arrival-only streams");
}

const AllocMap& LogStarAllocator::on_share_update(const ShareMap&) {
  throw std::logic_error("LogStarAllocator derives allocations from weights");
}

ThresholdResetAllocator::ThresholdResetAllocator(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  // T = (2^63 + u) / 2^64 with u uniform in [0, 2^63): an exact dyadic
  // rational uniform on [1/2, 1) at 2^-64 granularity.
  const std::uint64_t u = rng() >> 1;
  threshold_ = Frac(BigInt(u) + (BigInt(1) << 63), BigInt(1) << 64);
}

ThresholdResetAllocator::ThresholdResetAllocator(Frac threshold_base)
    : threshold_(std::move(threshold_base)) {
  if (threshold_ < Frac(1, 2) || threshold_ >= 1)
    throw std::invalid_argument("threshold base must lie in [1/2, 1)");
}

bool ThresholdResetAllocator::crosses(const BigInt& lo, const BigInt& hi) const {
  if (lo == 0) return true;
  const BigInt p = frac_num(threshold_);
  const BigInt q = frac_den(threshold_);
  // Smallest k with 2^k * T > lo, then test 2^k * T <= hi.
  const std::int64_t k = floor_log2(BigInt(lo * q / p)) + 1;
  return (p << static_cast<unsigned>(k)) <= hi * q;
}

void ThresholdResetAllocator::reset_all() {
  ++resets_;
  const BigInt double_total = total_ << 1;
  for (const auto& [id, w] : weights_) {
    Frac value(w, double_total);
    auto it = allocs_.find(id);
    if (it == allocs_.end()) {
      allocs_.emplace(id, std::move(value));
    } else if (it->second != value) {
      it->second = std::move(value);
      changed_.push_back(id);
    }
  }
}

const AllocMap& ThresholdResetAllocator::on_arrival(const Job& job, const ShareMap&) {
  changed_.clear();
  const BigInt before = total_;
  total_ += job.weight;
  weights_[job.id] = job.weight;
  if (crosses(before, total_)) {
    reset_all();
  } else {
    allocs_[job.id] = Frac(job.weight, total_ << 1);
  }
  return allocs_;
}

const AllocMap& ThresholdResetAllocator::on_departure(JobId id, const ShareMap&) {
  changed_.clear();
  auto it = weights_.find(id);
  if (it == weights_.end()) throw std::invalid_argument("departure of unknown job");
  const BigInt before = total_;
  total_ -= it->second;
  weights_.erase(it);
  allocs_.erase(id);
  if (total_ > 0 && crosses(total_, before)) reset_all();
  return allocs_;
}

const AllocMap& ThresholdResetAllocator::on_share_update(const ShareMap&) {
  throw std::logic_error("ThresholdResetAllocator derives allocations from weights");
}

LightHeavyAllocator::LightHeavyAllocator(Frac epsilon, std::int64_t declared_n)
    : epsilon_(std::move(epsilon)), doubling_(false) {
  if (epsilon_ <= 0) throw std::invalid_argument("epsilon must be positive");
  if (declared_n < 1) throw std::invalid_argument("declared n must be >= 1");
  one_plus_eps_ = 1 + epsilon_;
  reset_factor_ = 1 + epsilon_ / 2;
  light_threshold_ = epsilon_ / (2 * Frac(declared_n));
}

LightHeavyAllocator::LightHeavyAllocator(Frac epsilon)
    : epsilon_(std::move(epsilon)), doubling_(true) {
  if (epsilon_ <= 0) throw std::invalid_argument("epsilon must be positive");
  one_plus_eps_ = 1 + epsilon_;
  reset_factor_ = 1 + epsilon_ / 2;
  light_threshold_ = epsilon_ / 2;  // guess = 1
}

void LightHeavyAllocator::apply_update(JobId id, const Frac& share) {
  auto prev = shares_.find(id);
  if (prev == shares_.end()) throw std::invalid_argument("share update for unknown job");
  if (share > prev->second) throw std::invalid_argument("policy not monotone");
  prev->second = share;
  if (light_.count(id)) return;  // frozen
  auto& alloc = allocs_.at(id);
  if (share < reset_factor_ * alloc) {
    alloc = share / one_plus_eps_;
    changed_.push_back(id);
  }
  if (share <= light_threshold_) light_[id] = true;
}

void LightHeavyAllocator::rebuild_for_guess() {
  light_threshold_ = epsilon_ / (2 * Frac(guess_));
  light_.clear();
  for (auto& [id, alloc] : allocs_) {
    const Frac& share = shares_.at(id);
    const Frac fresh = share / one_plus_eps_;
    if (alloc != fresh) {
      alloc = fresh;
      changed_.push_back(id);
    }
    if (share <= light_threshold_) light_[id] = true;
  }
}

const AllocMap& LightHeavyAllocator::on_arrival(const Job& job, const ShareMap& shares) {
  changed_.clear();
  auto it = shares.find(job.id);
  if (it == shares.end()) throw std::invalid_argument("arrival without a fair share");
  shares_[job.id] = it->second;
  allocs_[job.id] = it->second / one_plus_eps_;
  if (it->second <= light_threshold_) light_[job.id] = true;
  for (const auto& [id, s] : shares)
    if (id != job.id) apply_update(id, s);
  if (doubling_ && BigInt(static_cast<std::int64_t>(allocs_.size())) > guess_) {
    guess_ <<= 1;
    rebuild_for_guess();
  }
  std::sort(changed_.begin(), changed_.end());
  changed_.erase(std::unique(changed_.begin(), changed_.end()), changed_.end());
  return allocs_;
}

const AllocMap& LightHeavyAllocator::on_departure(JobId, const ShareMap&) {
  throw std::logic_error("LightHeavyAllocator handles arrival-only streams");
}

const AllocMap& LightHeavyAllocator::on_share_update(const ShareMap& shares) {
  changed_.clear();
  for (const auto& [id, s] : shares) apply_update(id, s);
  return allocs_;
}

const AllocMap& ExactAllocator::assign(const ShareMap& shares, JobId arriving) {
  changed_.clear();
  for (auto it = allocs_.begin(); it != allocs_.end();) {
    if (shares.count(it->first) == 0)
      it = allocs_.erase(it);  // departed; removal is not a disruption
    else
      ++it;
  }
  for (const auto& [id, s] : shares) {
    auto it = allocs_.find(id);
    if (it == allocs_.end()) {
      allocs_.emplace(id, s);
    } else if (it->second != s) {
      it->second = s;
      if (id != arriving) changed_.push_back(id);
    }
  }
  return allocs_;
}

const AllocMap& ExactAllocator::on_arrival(const Job& job, const ShareMap& shares) {
  return assign(shares, job.id);
}

const AllocMap& ExactAllocator::on_departure(JobId, const ShareMap& shares) {
  return assign(shares, -1);
}

const AllocMap& ExactAllocator::on_share_update(const ShareMap& shares) {
  return assign(shares, -1);
}

MultiDimAllocator::MultiDimAllocator(const AllocatorFactory& factory, int dimensions) {
  if (dimensions < 1) throw std::invalid_argument("dimension count must be >= 1");
  for (int d = 0; d < dimensions; ++d) dims_.push_back(factory());
  last_maps_.resize(dims_.size(), nullptr);
  needs_shares_ = dims_.front()->needs_shares();
}

void MultiDimAllocator::collect_changes() {
  changed_.clear();
  for (const auto& dim : dims_)
    changed_.insert(changed_.end(), dim->last_changed().begin(), dim->last_changed().end());
  std::sort(changed_.begin(), changed_.end());
  changed_.erase(std::unique(changed_.begin(), changed_.end()), changed_.end());
}

void MultiDimAllocator::on_arrival(const Job& job, const std::vector<ShareMap>& shares) {
  if (!job.dim_weights.empty() && job.dim_weights.size() != dims_.size())
    throw std::invalid_argument("per-dimension weight count mismatch");
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    Job dim_job = job;
    if (!job.dim_weights.empty()) dim_job.weight = job.dim_weights[d];
    last_maps_[d] = &dims_[d]->on_arrival(dim_job, shares.at(d));
  }
  collect_changes();
}

void MultiDimAllocator::on_departure(JobId id, const std::vector<ShareMap>& shares) {
  for (std::size_t d = 0; d < dims_.size(); ++d)
    last_maps_[d] = &dims_[d]->on_departure(id, shares.at(d));
  collect_changes();
}

void MultiDimAllocator::on_share_update(const std::vector<ShareMap>& shares) {
  for (std::size_t d = 0; d < dims_.size(); ++d)
    last_maps_[d] = &dims_[d]->on_share_update(shares.at(d));
  collect_changes();
}

}  // namespace fairdyn
