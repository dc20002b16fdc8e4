#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dns/name.hpp"
#include "engine/engine.hpp"
#include "net/network.hpp"

namespace botsim {

struct RetryPolicy {
  int count = 0;         // follow-up queries per failed original lookup
  double spacing_s = 1.0;
};

struct PoolServer {
  std::string name;            // service-node name, for reporting
  NodeId node = kNoNode;
  double capacity_qps = 0.0;
  std::vector<std::string> serves;  // region labels with affinity here
};

struct PoolDispatch {
  std::vector<double> per_server_qps;
  double dropped_qps = 0.0;
};

// Failover waterfall: load fills servers in their configured order up to
// each server's capacity; the remainder after the last server is dropped.
PoolDispatch auth_pool_dispatch(const std::vector<PoolServer>& servers,
                                double offered_qps);

// Capacity-proportional split of offered load across points of presence.
std::vector<double> anycast_rebalance(const std::vector<double>& capacities,
                                      double offered_qps);

// Expected offered-load multiplier when a fraction of original lookups fail
// and each failure schedules `retries` follow-ups.
double retry_multiplier(int retries, double fail_fraction);

struct ZoneSetup {
  DomainName domain;
  std::vector<PoolServer> servers;
  // Baseline legitimate load already expressed at the pool, per region.
  std::map<std::string, double> legit_qps;
};

struct ResolverSetup {
  std::string region;
  NodeId node = kNoNode;
  double capacity_qps = 1e12;
};

struct DnsConfig {
  double cache_ttl_s = 300.0;
  double tier_rtt_s = 0.03;
  RetryPolicy retry;
  double load_tick_s = 1.0;
  double resolver_capacity_qps = 1e12;  // default for region resolvers
};

struct DnsQuery {
  DomainName name;
  NodeId origin = kNoNode;
  SimTime issued_at = 0.0;
  int retries_remaining = 0;
  bool torture = false;  // attack-generated random-prefix query
};

struct ResolutionResult {
  enum class Outcome { Hit, Recursed, Failed };
  Outcome outcome = Outcome::Failed;
  int auth_queries = 0;
  double latency_s = 0.0;
};

struct ZoneTickStats {
  double offered_qps = 0.0;
  double served_qps = 0.0;
  double dropped_qps = 0.0;
  // Rate-layer load each pool server is carrying this tick.
  std::vector<double> per_server_reserved;
  // Failure fraction experienced by original legitimate lookups, overall
  // and per region label.
  double legit_fail_fraction = 0.0;
  std::map<std::string, double> region_fail_fraction;
};

// Recursive-resolution model: per-region resolvers with exact-match caches,
// authoritative pools with failover order, and a fluid load ledger that
// carries baseline legitimate traffic, attack query rates, and the retry
// echo of failed lookups. Discrete queries and rate components share the
// same per-tick pool capacity.
class DnsSystem {
 public:
  DnsSystem(const DnsConfig& config, std::vector<ResolverSetup> resolvers,
            std::vector<ZoneSetup> zones);

  // --- discrete path -----------------------------------------------------
  ResolutionResult resolve(SimTime now, const std::string& resolver_region,
                           const DnsQuery& query);
  bool has_resolver(const std::string& region) const;

  // --- rate path ----------------------------------------------------------
  // Water-torture query rate entering the given region's resolver for a
  // zone; replaces the emitter's previous rate.
  void set_torture_rate(const std::string& emitter_id, std::size_t zone,
                        const std::string& region, double qps);
  // Junk queries aimed straight at the pool (masked port-53 style floods).
  void set_direct_rate(const std::string& emitter_id, std::size_t zone,
                       const std::string& region, double qps);
  // Advances the fluid ledger by one tick and returns per-zone stats.
  const std::vector<ZoneTickStats>& step_load(SimTime now);

  void rebalance_zone(std::size_t zone);  // anycast: pool load by capacity
  // Mitigation stand-in for provider-side filtering: fraction of attack
  // query rate that still reaches the pool, per attack kind.
  void set_zone_scrub(std::size_t zone, double torture_pass,
                      double direct_pass);

  std::size_t zone_count() const { return zones_.size(); }
  std::optional<std::size_t> zone_for(const DomainName& name) const;
  const ZoneSetup& zone(std::size_t i) const { return zones_[i]; }
  const std::vector<ZoneTickStats>& last_stats() const { return last_stats_; }
  double zone_legit_baseline(std::size_t zone) const;
  const DnsConfig& config() const { return config_; }

  // Availability hook: failure fraction seen by new legitimate sessions
  // resolving this zone (0 when the zone is healthy).
  double lookup_fail_fraction(std::size_t zone) const;
  double lookup_fail_fraction(std::size_t zone,
                              const std::string& region) const;

  // --- counters -----------------------------------------------------------
  std::uint64_t cache_hits() const { return cache_hits_; }
  std::uint64_t cache_hits_torture() const { return cache_hits_torture_; }
  std::uint64_t pool_arrivals(std::size_t zone) const;
  std::uint64_t discrete_failures() const { return discrete_failures_; }

 private:
  struct ResolverState {
    ResolverSetup setup;
    std::unordered_map<std::string, double> cache_expiry;
    double window_start = 0.0;
    double tokens = 0.0;
  };

  struct RateSource {
    std::size_t zone;
    std::string region;
    double qps;
    bool via_resolver;
  };

  struct ZoneState {
    bool rebalanced = false;
    double torture_pass = 1.0;
    double direct_pass = 1.0;
    std::uint64_t discrete_arrivals = 0;
    // Retry echoes scheduled for future ticks (slot 0 = next tick), kept
    // per region: users who failed retry against the same serving pops.
    std::map<std::string, std::deque<double>> retry_rings;
    // Per-server token windows for discrete admission.
    std::vector<double> window_start;
    std::vector<double> tokens;
  };

  ResolverState* resolver_for(const std::string& region);
  bool admit_discrete(SimTime now, std::size_t zone,
                      const std::string& region);
  double resolver_forwarded_torture(const ResolverState& res,
                                    double offered) const;

  DnsConfig config_;
  std::vector<ResolverState> resolvers_;
  std::vector<ZoneSetup> zones_;
  std::vector<ZoneState> zone_states_;
  std::map<std::string, RateSource> rate_sources_;
  std::vector<ZoneTickStats> last_stats_;
  std::uint64_t cache_hits_ = 0;
  std::uint64_t cache_hits_torture_ = 0;
  std::uint64_t discrete_failures_ = 0;
};

}  // namespace botsim
