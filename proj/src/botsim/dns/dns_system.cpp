#include "dns/dns_system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace botsim {

PoolDispatch auth_pool_dispatch(const std::vector<PoolServer>& servers,
                                double offered_qps) {
  if (servers.empty()) {
    throw std::invalid_argument("auth pool needs at least one server");
  }
  if (!(offered_qps >= 0.0)) {
    throw std::invalid_argument("negative offered query rate");
  }
  PoolDispatch out;
  out.per_server_qps.assign(servers.size(), 0.0);
  double remaining = offered_qps;
  for (std::size_t i = 0; i < servers.size(); ++i) {
    double take = std::min(remaining, servers[i].capacity_qps);
    out.per_server_qps[i] = take;
    remaining -= take;
  }
  out.dropped_qps = remaining;
  return out;
}

std::vector<double> anycast_rebalance(const std::vector<double>& capacities,
                                      double offered_qps) {
  if (capacities.empty()) {
    throw std::invalid_argument("anycast rebalance needs at least one pop");
  }
  double total = 0.0;
  for (double c : capacities) total += c;
  std::vector<double> loads(capacities.size(), 0.0);
  if (total <= 0.0) return loads;
  for (std::size_t i = 0; i < capacities.size(); ++i) {
    loads[i] = offered_qps * capacities[i] / total;
  }
  return loads;
}

double retry_multiplier(int retries, double fail_fraction) {
  return 1.0 + retries * fail_fraction;
}

DnsSystem::DnsSystem(const DnsConfig& config,
                     std::vector<ResolverSetup> resolvers,
                     std::vector<ZoneSetup> zones)
    : config_(config), zones_(std::move(zones)) {
  if (config_.retry.count < 0) {
    throw std::invalid_argument("retry count must be >= 0");
  }
  if (!(config_.retry.spacing_s > 0.0) || !(config_.load_tick_s > 0.0)) {
    throw std::invalid_argument("retry spacing and load tick must be > 0");
  }
  for (auto& r : resolvers) {
    resolvers_.push_back(ResolverState{std::move(r), {}, 0.0, -1.0});
  }
  zone_states_.resize(zones_.size());
  for (std::size_t z = 0; z < zones_.size(); ++z) {
    if (zones_[z].servers.empty()) {
      throw std::invalid_argument("zone " + zones_[z].domain.render() +
                                  " has no authoritative servers");
    }
    zone_states_[z].window_start.assign(zones_[z].servers.size(), -1.0);
    zone_states_[z].tokens.assign(zones_[z].servers.size(), 0.0);
  }
  last_stats_.resize(zones_.size());
}

DnsSystem::ResolverState* DnsSystem::resolver_for(const std::string& region) {
  for (auto& r : resolvers_) {
    if (r.setup.region == region) return &r;
  }
  return nullptr;
}

bool DnsSystem::has_resolver(const std::string& region) const {
  for (const auto& r : resolvers_) {
    if (r.setup.region == region) return true;
  }
  return false;
}

std::optional<std::size_t> DnsSystem::zone_for(const DomainName& name) const {
  for (std::size_t z = 0; z < zones_.size(); ++z) {
    if (name.ends_with(zones_[z].domain)) return z;
  }
  return std::nullopt;
}

double DnsSystem::zone_legit_baseline(std::size_t zone) const {
  double total = 0.0;
  for (const auto& [region, qps] : zones_[zone].legit_qps) total += qps;
  return total;
}

namespace {

// Serving order for a region: servers listing it, in pool order; a region
// nobody lists falls back to the whole pool (failover order).
std::vector<std::size_t> serving_order(const ZoneSetup& zone,
                                       const std::string& region,
                                       bool rebalanced) {
  std::vector<std::size_t> order;
  if (!rebalanced) {
    for (std::size_t i = 0; i < zone.servers.size(); ++i) {
      const auto& serves = zone.servers[i].serves;
      if (std::find(serves.begin(), serves.end(), region) != serves.end()) {
        order.push_back(i);
      }
    }
  }
  if (order.empty()) {
    for (std::size_t i = 0; i < zone.servers.size(); ++i) order.push_back(i);
  }
  return order;
}

}  // namespace

bool DnsSystem::admit_discrete(SimTime now, std::size_t zone,
                               const std::string& region) {
  ZoneState& state = zone_states_[zone];
  state.discrete_arrivals++;
  const double window = std::floor(now);
  for (std::size_t i : serving_order(zones_[zone], region, state.rebalanced)) {
    if (state.window_start[i] != window) {
      state.window_start[i] = window;
      // Rate-carried load reserves its share of the capacity; discrete
      // queries compete for the remainder of this one-second window.
      double rate_load = last_stats_[zone].per_server_reserved.empty()
                             ? 0.0
                             : last_stats_[zone].per_server_reserved[i];
      state.tokens[i] =
          std::max(0.0, zones_[zone].servers[i].capacity_qps - rate_load);
    }
    if (state.tokens[i] >= 1.0) {
      state.tokens[i] -= 1.0;
      return true;
    }
  }
  return false;
}

ResolutionResult DnsSystem::resolve(SimTime now,
                                    const std::string& resolver_region,
                                    const DnsQuery& query) {
  ResolverState* res = resolver_for(resolver_region);
  if (res == nullptr) {
    throw std::invalid_argument("no recursive resolver in region " +
                                resolver_region);
  }
  const std::string name = query.name.render();

  auto cached = res->cache_expiry.find(name);
  if (cached != res->cache_expiry.end()) {
    if (cached->second > now) {
      cache_hits_++;
      if (query.torture) cache_hits_torture_++;
      return {ResolutionResult::Outcome::Hit, 0, 0.0};
    }
    res->cache_expiry.erase(cached);  // expired answers are never served
  }

  // Recursion capacity of the resolver itself, one-second windows.
  const double window = std::floor(now);
  if (res->tokens < 0.0 || res->window_start != window) {
    res->window_start = window;
    res->tokens = res->setup.capacity_qps;
  }
  if (res->tokens < 1.0) {
    discrete_failures_++;
    return {ResolutionResult::Outcome::Failed, 0, config_.tier_rtt_s};
  }
  res->tokens -= 1.0;

  // Root and TLD tiers answer with effectively infinite capacity; only a
  // configured victim pool can saturate.
  auto zone = zone_for(query.name);
  if (!zone.has_value()) {
    res->cache_expiry[name] = now + config_.cache_ttl_s;
    return {ResolutionResult::Outcome::Recursed, 3, 3 * config_.tier_rtt_s};
  }
  if (!admit_discrete(now, *zone, resolver_region)) {
    discrete_failures_++;
    return {ResolutionResult::Outcome::Failed, 3, 3 * config_.tier_rtt_s};
  }
  res->cache_expiry[name] = now + config_.cache_ttl_s;
  return {ResolutionResult::Outcome::Recursed, 3, 3 * config_.tier_rtt_s};
}

void DnsSystem::set_torture_rate(const std::string& emitter_id,
                                 std::size_t zone, const std::string& region,
                                 double qps) {
  rate_sources_[emitter_id] = RateSource{zone, region, qps, true};
}

void DnsSystem::set_direct_rate(const std::string& emitter_id,
                                std::size_t zone, const std::string& region,
                                double qps) {
  rate_sources_[emitter_id] = RateSource{zone, region, qps, false};
}

double DnsSystem::resolver_forwarded_torture(const ResolverState& res,
                                             double offered) const {
  return std::min(offered, res.setup.capacity_qps);
}

const std::vector<ZoneTickStats>& DnsSystem::step_load(SimTime now) {
  (void)now;
  const double dt = config_.load_tick_s;

  // Clip torture rates at each region's resolver before they reach a pool:
  // the resolver is an amplifying intermediary with a finite recursion rate.
  std::map<std::string, double> torture_by_region;
  for (const auto& [id, src] : rate_sources_) {
    if (src.via_resolver) torture_by_region[src.region] += src.qps;
  }
  std::map<std::string, double> torture_scale;
  for (const auto& [region, offered] : torture_by_region) {
    double cap = 1e18;
    for (const auto& r : resolvers_) {
      if (r.setup.region == region) cap = r.setup.capacity_qps;
    }
    torture_scale[region] = offered > cap ? cap / offered : 1.0;
  }

  for (std::size_t z = 0; z < zones_.size(); ++z) {
    const ZoneSetup& zone = zones_[z];
    ZoneState& state = zone_states_[z];
    ZoneTickStats stats;

    // Offered components per region label.
    std::map<std::string, double> legit = zone.legit_qps;
    std::map<std::string, double> attack;
    for (const auto& [id, src] : rate_sources_) {
      if (src.zone != z) continue;
      double rate = src.qps;
      if (src.via_resolver) rate *= torture_scale[src.region];
      rate *= src.via_resolver ? state.torture_pass : state.direct_pass;
      attack[src.region] += rate;
    }

    // Retry echo of failed original lookups returns to the region whose
    // lookups failed; those users hit the same serving pops again.
    for (auto& [region, ring] : state.retry_rings) {
      if (ring.empty()) continue;
      double due = ring.front();
      ring.pop_front();
      if (due > 0.0) legit[region] += due;
    }

    std::vector<double> remaining(zone.servers.size());
    for (std::size_t i = 0; i < zone.servers.size(); ++i) {
      remaining[i] = zone.servers[i].capacity_qps;
    }
    stats.per_server_reserved.assign(zone.servers.size(), 0.0);

    std::map<std::string, double> offered_by_region;
    for (const auto& [region, qps] : legit) offered_by_region[region] += qps;
    for (const auto& [region, qps] : attack) offered_by_region[region] += qps;

    if (!state.rebalanced) {
      for (const auto& [region, offered] : offered_by_region) {
        double left = offered;
        for (std::size_t i : serving_order(zone, region, false)) {
          double take = std::min(left, remaining[i]);
          remaining[i] -= take;
          stats.per_server_reserved[i] += take;
          left -= take;
        }
        stats.offered_qps += offered;
        stats.dropped_qps += left;
        stats.region_fail_fraction[region] =
            offered > 0.0 ? left / offered : 0.0;
      }
    } else {
      double offered_total = 0.0;
      for (const auto& [region, offered] : offered_by_region) {
        offered_total += offered;
      }
      std::vector<double> caps;
      for (const auto& s : zone.servers) caps.push_back(s.capacity_qps);
      std::vector<double> loads = anycast_rebalance(caps, offered_total);
      double dropped_total = 0.0;
      for (std::size_t i = 0; i < loads.size(); ++i) {
        double served = std::min(loads[i], caps[i]);
        stats.per_server_reserved[i] = served;
        dropped_total += loads[i] - served;
      }
      double fail = offered_total > 0.0 ? dropped_total / offered_total : 0.0;
      for (const auto& [region, offered] : offered_by_region) {
        stats.region_fail_fraction[region] = fail;
      }
      stats.offered_qps = offered_total;
      stats.dropped_qps = dropped_total;
    }
    stats.served_qps = stats.offered_qps - stats.dropped_qps;

    // Weighted failure fraction over the legitimate share, and the retry
    // echo it produces. Only original lookups spawn retries.
    double legit_failed = 0.0;
    double legit_offered = 0.0;
    for (const auto& [region, qps] : legit) {
      legit_offered += qps;
      legit_failed += qps * stats.region_fail_fraction[region];
    }
    stats.legit_fail_fraction =
        legit_offered > 0.0 ? legit_failed / legit_offered : 0.0;

    if (config_.retry.count > 0) {
      for (const auto& [region, qps] : zone.legit_qps) {
        const double orig_failed = qps * stats.region_fail_fraction[region];
        if (orig_failed <= 0.0) continue;
        auto& ring = state.retry_rings[region];
        for (int k = 1; k <= config_.retry.count; ++k) {
          auto slot = static_cast<std::size_t>(std::max<long long>(
              1, std::llround(k * config_.retry.spacing_s / dt)));
          if (ring.size() < slot) ring.resize(slot, 0.0);
          ring[slot - 1] += orig_failed;
        }
      }
    }

    last_stats_[z] = std::move(stats);
  }
  return last_stats_;
}

void DnsSystem::rebalance_zone(std::size_t zone) {
  zone_states_.at(zone).rebalanced = true;
}

void DnsSystem::set_zone_scrub(std::size_t zone, double torture_pass,
                               double direct_pass) {
  zone_states_.at(zone).torture_pass = torture_pass;
  zone_states_.at(zone).direct_pass = direct_pass;
}

double DnsSystem::lookup_fail_fraction(std::size_t zone) const {
  return last_stats_[zone].legit_fail_fraction;
}

double DnsSystem::lookup_fail_fraction(std::size_t zone,
                                       const std::string& region) const {
  const auto& frac = last_stats_[zone].region_fail_fraction;
  auto it = frac.find(region);
  return it == frac.end() ? 0.0 : it->second;
}

std::uint64_t DnsSystem::pool_arrivals(std::size_t zone) const {
  return zone_states_.at(zone).discrete_arrivals;
}

}  // namespace botsim
