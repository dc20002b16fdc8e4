#include "scenario/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>

#include "attack/traffic.hpp"
#include "botnet/lifecycle.hpp"
#include "dns/dns_system.hpp"
#include "engine/engine.hpp"
#include "engine/rng.hpp"

namespace botsim {

namespace {

struct CommandRuntime {
  const TimelineAttack* def = nullptr;
  std::uint32_t index = 0;
  bool active = false;
  std::vector<DeviceIndex> tasked;
};

struct TargetRuntime {
  NodeId node = kNoNode;
  std::string name;
  std::optional<std::size_t> zone;
  double overload_threshold_bps = 0.0;
  double check_interval_s = 10.0;
  bool online = true;
};

// Whole-run state shared by the event handlers.
class Run {
 public:
  Run(const ScenarioSpec& spec, std::uint64_t seed)
      : spec_(spec), seed_(seed), topo_(build(spec)) {}

  RunResult execute(double horizon);

 private:
  static BuiltTopology build(const ScenarioSpec& spec) {
    TopologySpec topo = spec.topology;
    for (auto& region : topo.regions) {
      auto it = spec.devices.find(region.name);
      if (it == spec.devices.end() || !it->second.uplink_dist.has_value()) {
        continue;
      }
      region.device_uplinks.resize(region.devices);
      for (std::uint32_t i = 0; i < region.devices; ++i) {
        region.device_uplinks[i] = it->second.uplink_dist->draw(
            spec.seed, "uplink:" + region.name, i);
      }
    }
    return build_topology(topo);
  }

  void build_population();
  void build_dns();
  void schedule_timelines(double horizon);
  void schedule_metrics(double horizon);
  void apply_defense(const DefenseAction& action);
  std::vector<DeviceIndex> resolve_selector(const DeviceSelector& sel);
  void start_command(std::size_t idx);
  void end_command(std::size_t idx);
  void refresh_dns_rates();
  void torture_query(std::size_t cmd_idx, DeviceIndex bot, double qps,
                     std::uint64_t seq, double end_s);
  void sample_metrics();
  std::uint16_t credential_index(const CredentialPair& pair);

  const ScenarioSpec& spec_;
  std::uint64_t seed_;
  BuiltTopology topo_;

  Engine engine_;
  std::unique_ptr<DevicePopulation> pop_;
  std::unique_ptr<BotnetSystem> botnet_;
  std::unique_ptr<TrafficSystem> traffic_;
  std::unique_ptr<DnsSystem> dns_;
  MetricsHub metrics_;

  std::vector<CredentialPair> credential_catalog_;
  std::vector<CommandRuntime> commands_;
  std::vector<TargetRuntime> targets_;
  // Recurring handlers live here so scheduled thunks only capture `this`.
  std::function<void()> dns_tick_;
  std::function<void()> metric_tick_;
  std::vector<std::function<void()>> target_ticks_;
  double horizon_ = 0.0;
  std::set<NodeId> flood_targets_;
  std::uint64_t torture_queries_ = 0;
  double metric_interval_ = 1.0;
};

std::uint16_t Run::credential_index(const CredentialPair& pair) {
  for (std::size_t i = 0; i < credential_catalog_.size(); ++i) {
    if (credential_catalog_[i] == pair) return static_cast<std::uint16_t>(i);
  }
  credential_catalog_.push_back(pair);
  if (credential_catalog_.size() > 64) {
    throw std::invalid_argument("credential catalog exceeds 64 entries");
  }
  return static_cast<std::uint16_t>(credential_catalog_.size() - 1);
}

void Run::build_population() {
  // Credential catalog covers population draws, dictionaries, and the
  // replacement credentials defense actions may introduce.
  for (const auto& [region, devices] : spec_.devices) {
    for (const auto& entry : devices.credentials) {
      credential_index(entry.pair);
    }
  }
  std::vector<MalwareSpec> malware;
  for (const auto& entry : spec_.malware) {
    MalwareSpec m = entry.spec;
    m.dictionary_mask = 0;
    for (const auto& pair : m.dictionary) {
      m.dictionary_mask |= 1ULL << credential_index(pair);
    }
    m.entry_mask = spec_.service_mask(m.entry_services);
    m.exploit_mask = 0;
    for (const std::string& vuln : m.exploit_ids) {
      m.exploit_mask |= spec_.vuln_bit(vuln);
    }
    malware.push_back(std::move(m));
  }
  for (const auto& action : spec_.defenses) {
    if (action.kind == DefenseAction::Kind::ChangeCredentials) {
      credential_index(action.credential);
    }
  }

  std::vector<DeviceProfile> profiles(topo_.devices.size());
  for (std::size_t d = 0; d < topo_.devices.size(); ++d) {
    const std::string& region = topo_.region_names[topo_.device_region[d]];
    auto it = spec_.devices.find(region);
    DeviceProfile& profile = profiles[d];
    NodeId node = topo_.devices[d];
    profile.uplink_bps = topo_.net
                             .link(topo_.net.find_link(
                                 node, topo_.net.node(node).parent))
                             .capacity_bps;
    if (it == spec_.devices.end()) continue;
    const RegionDevices& tmpl = it->second;
    profile.services = spec_.service_mask(tmpl.services);
    profile.patchable = tmpl.patchable;
    // Per-device draws are keyed by the global device index so population
    // edits never reshuffle other devices.
    std::vector<double> weights;
    for (const auto& c : tmpl.credentials) weights.push_back(c.weight);
    double mark = keyed_unit(seed_, "device-cred", d);
    double total = 0.0;
    for (double w : weights) total += w;
    double acc = 0.0;
    std::size_t pick = weights.size() - 1;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i] / total;
      if (mark < acc) {
        pick = i;
        break;
      }
    }
    profile.credential = credential_index(tmpl.credentials[pick].pair);
    for (const auto& [vuln, fraction] : tmpl.vulns) {
      if (keyed_unit(seed_, "device-vuln:" + vuln, d) < fraction) {
        profile.vulns |= spec_.vuln_bit(vuln);
      }
    }
  }

  pop_ = std::make_unique<DevicePopulation>(std::move(profiles),
                                            std::move(malware));
  double space = spec_.address_space > 0.0
                     ? spec_.address_space
                     : std::max<double>(1.0, topo_.devices.size());
  botnet_ = std::make_unique<BotnetSystem>(engine_, *pop_, seed_,
                                           spec_.timings, space,
                                           spec_.service_catalog);
  traffic_ = std::make_unique<TrafficSystem>(topo_, seed_);

  botnet_->set_interrupt_hook([this](DeviceIndex d) {
    traffic_->drop_bot_flows(d);
    refresh_dns_rates();
  });

  for (std::size_t m = 0; m < spec_.malware.size(); ++m) {
    const MalwareEntry& entry = spec_.malware[m];
    auto idx = static_cast<std::uint8_t>(m);
    if (entry.external_scanner.has_value()) {
      botnet_->set_external_scanner(idx, *entry.external_scanner);
    }
    if (entry.initial_infected == 0) continue;
    std::vector<DeviceIndex> eligible;
    for (DeviceIndex d = 0; d < topo_.devices.size(); ++d) {
      if (entry.seed_region.empty() ||
          topo_.region_names[topo_.device_region[d]] == entry.seed_region) {
        eligible.push_back(d);
      }
    }
    if (entry.initial_infected > eligible.size()) {
      throw std::invalid_argument("malware " + entry.spec.name +
                                  " seeds more devices than exist");
    }
    RngStream shuffle(seed_, "seed:" + entry.spec.name);
    for (std::size_t i = 0; i < entry.initial_infected; ++i) {
      std::size_t j = i + static_cast<std::size_t>(
                              shuffle.below(eligible.size() - i));
      std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(entry.initial_infected);
    botnet_->seed_infected(idx, eligible);
  }
  botnet_->start();
}

void Run::build_dns() {
  if (!spec_.has_dns) return;
  std::vector<ResolverSetup> resolvers;
  for (std::size_t r = 0; r < topo_.region_names.size(); ++r) {
    if (topo_.region_resolver[r] == kNoNode) continue;
    resolvers.push_back(ResolverSetup{topo_.region_names[r],
                                      topo_.region_resolver[r],
                                      spec_.dns.resolver_capacity_qps});
  }
  std::vector<ZoneSetup> zones = spec_.zones;
  for (auto& zone : zones) {
    for (auto& server : zone.servers) {
      server.node = topo_.service(server.name);
    }
  }
  dns_ = std::make_unique<DnsSystem>(spec_.dns, std::move(resolvers),
                                     std::move(zones));
  if (dns_->zone_count() == 0) return;
  const double tick_s = spec_.dns.load_tick_s;
  dns_tick_ = [this, tick_s] {
    dns_->step_load(engine_.now());
    engine_.schedule(engine_.now() + tick_s, EventKind::DnsLoadTick,
                     [this] { dns_tick_(); });
  };
  engine_.schedule(0.0, EventKind::DnsLoadTick, [this] { dns_tick_(); });
}

std::vector<DeviceIndex> Run::resolve_selector(const DeviceSelector& sel) {
  std::vector<DeviceIndex> out;
  for (DeviceIndex d = 0; d < topo_.devices.size(); ++d) {
    bool match = false;
    switch (sel.kind) {
      case DeviceSelector::Kind::All:
        match = true;
        break;
      case DeviceSelector::Kind::Crashed:
        match = pop_->runtime(d).state == DeviceState::Crashed;
        break;
      case DeviceSelector::Kind::InfectedBy:
        match = pop_->runtime(d).state == DeviceState::Infected &&
                pop_->malware(pop_->runtime(d).resident).name == sel.arg;
        break;
      case DeviceSelector::Kind::Region:
        match = topo_.region_names[topo_.device_region[d]] == sel.arg;
        break;
      case DeviceSelector::Kind::Sample:
        match = keyed_unit(seed_, "defense-sample", d) < sel.fraction;
        break;
    }
    if (match) out.push_back(d);
  }
  return out;
}

void Run::apply_defense(const DefenseAction& action) {
  switch (action.kind) {
    case DefenseAction::Kind::EnableBcp38:
      traffic_->enable_bcp38(action.region);
      break;
    case DefenseAction::Kind::Reboot:
      for (DeviceIndex d : resolve_selector(action.devices)) {
        botnet_->reboot_device(d);
      }
      break;
    case DefenseAction::Kind::ChangeCredentials: {
      std::uint16_t cred = credential_index(action.credential);
      for (DeviceIndex d : resolve_selector(action.devices)) {
        botnet_->change_credential(d, cred);
      }
      break;
    }
    case DefenseAction::Kind::Patch: {
      std::uint32_t bit = spec_.vuln_bit(action.vuln);
      for (DeviceIndex d : resolve_selector(action.devices)) {
        botnet_->patch_device(d, bit);
      }
      break;
    }
    case DefenseAction::Kind::AttachScrubber: {
      // A zone-domain target stands in for provider-side DNS filtering.
      if (dns_) {
        for (std::size_t z = 0; z < dns_->zone_count(); ++z) {
          if (dns_->zone(z).domain.render() == action.target) {
            dns_->set_zone_scrub(
                z, action.policy.attack_pass_fraction(VectorTag::WaterTorture),
                action.policy.attack_pass_fraction(VectorTag::DnsDirect));
            return;
          }
        }
      }
      NodeId target = topo_.service(action.target);
      NodeId scrubber = topo_.service(action.scrubber);
      if (action.policy.capacity_bps > 0.0) {
        NodeId attach = topo_.net.node(scrubber).parent;
        topo_.net.set_link_capacity(topo_.net.find_link(attach, scrubber),
                                    action.policy.capacity_bps);
        topo_.net.set_link_capacity(topo_.net.find_link(scrubber, attach),
                                    action.policy.capacity_bps);
      }
      traffic_->attach_scrubber(target, scrubber, action.policy);
      break;
    }
    case DefenseAction::Kind::AnycastRebalance:
      if (dns_) {
        for (std::size_t z = 0; z < dns_->zone_count(); ++z) {
          if (dns_->zone(z).domain.render() == action.zone) {
            dns_->rebalance_zone(z);
          }
        }
      }
      break;
    case DefenseAction::Kind::C2Takedown:
      botnet_->c2_takedown(pop_->malware_index(action.malware));
      break;
  }
}

void Run::refresh_dns_rates() {
  if (!dns_) return;
  for (CommandRuntime& rt : commands_) {
    const AttackCommand& cmd = rt.def->command;
    const bool rate_mode =
        (cmd.vector == VectorTag::WaterTorture &&
         cmd.emission == AttackCommand::Emission::Rate) ||
        cmd.vector == VectorTag::DnsDirect;
    if (!rate_mode) continue;
    auto zone = dns_->zone_for(DomainName::parse(cmd.target));
    if (!zone.has_value()) continue;
    std::map<std::string, double> by_region;
    if (rt.active) {
      std::uint8_t m = pop_->malware_index(cmd.malware);
      for (DeviceIndex d : rt.tasked) {
        const DeviceRuntime& dev = pop_->runtime(d);
        if (dev.state != DeviceState::Infected || dev.resident != m ||
            dev.mode != BotMode::Attacking) {
          continue;
        }
        by_region[topo_.region_names[topo_.device_region[d]]] +=
            cmd.per_bot.draw(seed_, "cmd-qps:" + cmd.id, d);
      }
    }
    for (const std::string& region : topo_.region_names) {
      std::string emitter = "cmd:" + cmd.id + ":" + region;
      auto it = by_region.find(region);
      double qps = it == by_region.end() ? 0.0 : it->second;
      if (cmd.vector == VectorTag::WaterTorture) {
        dns_->set_torture_rate(emitter, *zone, region, qps);
      } else {
        dns_->set_direct_rate(emitter, *zone, region, qps);
      }
    }
  }
}

void Run::torture_query(std::size_t cmd_idx, DeviceIndex bot, double qps,
                        std::uint64_t seq, double end_s) {
  CommandRuntime& rt = commands_[cmd_idx];
  if (!rt.active || engine_.now() >= end_s) return;
  const AttackCommand& cmd = rt.def->command;
  std::uint8_t m = pop_->malware_index(cmd.malware);
  const DeviceRuntime& dev = pop_->runtime(bot);
  if (dev.state != DeviceState::Infected || dev.resident != m ||
      dev.mode != BotMode::Attacking) {
    return;
  }
  const std::string& region = topo_.region_names[topo_.device_region[bot]];
  DnsQuery query;
  query.name = DomainName::parse(
      torture_prefix(seed_, cmd.id, bot, seq) + "." + cmd.target);
  query.origin = topo_.devices[bot];
  query.issued_at = engine_.now();
  query.torture = true;
  dns_->resolve(engine_.now(), region, query);
  torture_queries_++;
  engine_.schedule(engine_.now() + 1.0 / qps, EventKind::DnsQuery,
                   [this, cmd_idx, bot, qps, seq, end_s] {
                     torture_query(cmd_idx, bot, qps, seq + 1, end_s);
                   });
}

void Run::start_command(std::size_t idx) {
  CommandRuntime& rt = commands_[idx];
  const TimelineAttack& attack = *rt.def;
  const AttackCommand& cmd = attack.command;
  std::uint8_t m = pop_->malware_index(cmd.malware);

  BotnetSystem::BotFilter filter;
  if (!attack.bot_region.empty()) {
    std::uint32_t region = topo_.region_index(attack.bot_region);
    filter = [this, region](DeviceIndex d) {
      return topo_.device_region[d] == region;
    };
  }
  rt.tasked = botnet_->broadcast(m, attack.bot_fraction, filter);
  rt.active = true;

  switch (cmd.vector) {
    case VectorTag::WaterTorture:
      if (cmd.emission == AttackCommand::Emission::PerQuery) {
        for (DeviceIndex bot : rt.tasked) {
          double qps = cmd.per_bot.draw(seed_, "cmd-qps:" + cmd.id, bot);
          if (qps <= 0.0) continue;
          // Stagger bots across their first query interval.
          double phase =
              keyed_unit(seed_, "cmd-phase:" + cmd.id, bot) / qps;
          double end_s = cmd.start_s + cmd.duration_s;
          engine_.schedule(engine_.now() + phase, EventKind::DnsQuery,
                           [this, idx, bot, qps, end_s] {
                             torture_query(idx, bot, qps, 0, end_s);
                           });
        }
      } else {
        refresh_dns_rates();
      }
      break;
    case VectorTag::DnsDirect:
      refresh_dns_rates();
      break;
    default:
      for (DeviceIndex bot : rt.tasked) {
        traffic_->start_flood(cmd, rt.index, bot);
      }
      break;
  }
}

void Run::end_command(std::size_t idx) {
  CommandRuntime& rt = commands_[idx];
  if (!rt.active) return;
  rt.active = false;
  const AttackCommand& cmd = rt.def->command;
  traffic_->end_command(rt.index);
  botnet_->end_attack(pop_->malware_index(cmd.malware), rt.tasked);
  rt.tasked.clear();
  refresh_dns_rates();
}

void Run::sample_metrics() {
  const double now = engine_.now();
  auto& infected = metrics_.series("infected_total", "devices");
  infected.record(now, static_cast<double>(pop_->infected_total()));
  for (std::size_t m = 0; m < pop_->malware_count(); ++m) {
    metrics_
        .series("infected." + pop_->malware(static_cast<std::uint8_t>(m)).name,
                "devices")
        .record(now, static_cast<double>(
                         pop_->bots(static_cast<std::uint8_t>(m)).size()));
  }
  metrics_.series("offline_fraction", "fraction")
      .record(now, pop_->size() == 0
                       ? 0.0
                       : static_cast<double>(pop_->offline_total()) /
                             static_cast<double>(pop_->size()));

  double attack_total = 0.0;
  for (NodeId target : flood_targets_) {
    std::string label;
    for (const auto& [name, id] : topo_.service_nodes) {
      if (id == target) label = name;
    }
    double attack = traffic_->ingress(target, FlowClass::Attack);
    double legit = traffic_->ingress(target, FlowClass::Legitimate);
    attack_total += attack;
    metrics_.series("target." + label + ".attack_bps", "bps")
        .record(now, attack);
    metrics_.series("target." + label + ".legit_delivered_bps", "bps")
        .record(now, legit);
    metrics_.series("target." + label + ".ingress_utilization", "fraction")
        .record(now, traffic_->ingress_link_utilization(target));
    for (VectorTag v :
         {VectorTag::Reflection, VectorTag::GreIp, VectorTag::Udp}) {
      double by_vector = traffic_->ingress_for_vector(target, v);
      metrics_
          .series(std::string("target.") + label + ".attack." + to_string(v) +
                      "_bps",
                  "bps")
          .record(now, by_vector);
    }

    // Availability needs the target's DNS health and overload state.
    double offered = traffic_->offered_legit(target);
    double fail = 0.0;
    bool online = true;
    for (const TargetRuntime& behavior : targets_) {
      if (behavior.node != target) continue;
      online = behavior.online;
      if (behavior.zone.has_value() && dns_) {
        fail = dns_->lookup_fail_fraction(*behavior.zone);
      }
    }
    auto sample = availability_sample(offered, legit, fail, online);
    if (sample.has_value()) {
      metrics_.series("availability." + label, "fraction")
          .record(now, *sample);
    }
  }
  metrics_.series("attack_ingress_total_bps", "bps").record(now, attack_total);
  metrics_.series("max_link_utilization", "fraction")
      .record(now, traffic_->max_link_utilization());

  if (dns_) {
    double offered_total = 0.0;
    for (std::size_t z = 0; z < dns_->zone_count(); ++z) {
      const auto& stats = dns_->last_stats()[z];
      std::string domain = dns_->zone(z).domain.render();
      metrics_.series("dns." + domain + ".offered_qps", "qps")
          .record(now, stats.offered_qps);
      metrics_.series("dns." + domain + ".dropped_qps", "qps")
          .record(now, stats.dropped_qps);
      offered_total += stats.offered_qps;
      for (const auto& [region, fail] : stats.region_fail_fraction) {
        if (dns_->zone(z).legit_qps.contains(region)) {
          metrics_.series("availability.dns." + domain + "." + region,
                          "fraction")
              .record(now, 1.0 - fail);
        }
      }
    }
    metrics_.series("dns.offered_total_qps", "qps").record(now, offered_total);
  }
}

void Run::schedule_timelines(double horizon) {
  commands_.resize(spec_.attacks.size());
  for (std::size_t i = 0; i < spec_.attacks.size(); ++i) {
    commands_[i].def = &spec_.attacks[i];
    commands_[i].index = static_cast<std::uint32_t>(i);
    const AttackCommand& cmd = spec_.attacks[i].command;
    if (cmd.start_s > horizon) continue;
    engine_.schedule(cmd.start_s, EventKind::FlowStart,
                     [this, i] { start_command(i); });
    engine_.schedule(std::min(cmd.start_s + cmd.duration_s, horizon),
                     EventKind::FlowEnd, [this, i] { end_command(i); });
  }
  for (const DefenseAction& action : spec_.defenses) {
    if (action.at > horizon) continue;
    engine_.schedule(action.at, EventKind::DefenseAction,
                     [this, &action] { apply_defense(action); });
  }

  // Overload-triggered self-reboots (fail-safe controllers).
  for (const TargetBehavior& behavior : spec_.target_behavior) {
    TargetRuntime rt;
    rt.node = topo_.service(behavior.name);
    rt.name = behavior.name;
    rt.overload_threshold_bps = behavior.overload_threshold_bps;
    rt.check_interval_s = behavior.check_interval_s;
    if (!behavior.domain.empty() && dns_) {
      rt.zone = dns_->zone_for(DomainName::parse(behavior.domain));
    }
    targets_.push_back(rt);
  }
  target_ticks_.resize(targets_.size());
  for (std::size_t t = 0; t < targets_.size(); ++t) {
    if (!(targets_[t].overload_threshold_bps > 0.0)) continue;
    target_ticks_[t] = [this, t] {
      TargetRuntime& rt = targets_[t];
      if (rt.online &&
          traffic_->ingress(rt.node, FlowClass::Attack) >
              rt.overload_threshold_bps) {
        rt.online = false;
        engine_.schedule(engine_.now() + spec_.timings.reboot_delay_s,
                         EventKind::RebootComplete,
                         [this, t] { targets_[t].online = true; });
      }
      engine_.schedule(engine_.now() + rt.check_interval_s,
                       EventKind::TargetCheck,
                       [this, t] { target_ticks_[t](); });
    };
    engine_.schedule(targets_[t].check_interval_s, EventKind::TargetCheck,
                     [this, t] { target_ticks_[t](); });
  }
}

void Run::schedule_metrics(double horizon) {
  metric_interval_ = spec_.metric_interval_s;
  if (dns_) {
    metrics_.series("dns.baseline_qps", "qps").record(0.0, [this] {
      double total = 0.0;
      for (std::size_t z = 0; z < dns_->zone_count(); ++z) {
        total += dns_->zone_legit_baseline(z);
      }
      return total;
    }());
  }
  horizon_ = horizon;
  metric_tick_ = [this] {
    sample_metrics();
    double next = engine_.now() + metric_interval_;
    if (next <= horizon_) {
      engine_.schedule(next, EventKind::MetricSample,
                       [this] { metric_tick_(); });
    }
  };
  engine_.schedule(0.0, EventKind::MetricSample, [this] { metric_tick_(); });
}

RunResult Run::execute(double horizon) {
  const auto wall_start = std::chrono::steady_clock::now();
  build_population();
  build_dns();
  for (const LegitFlowSpec& flow : spec_.legit_flows) {
    NodeId src = flow.from_region.empty()
                     ? topo_.first_core
                     : topo_.region_first_bras[topo_.region_index(
                           flow.from_region)];
    traffic_->add_legit_flow(src, topo_.service(flow.target), flow.bps);
  }
  for (const TimelineAttack& attack : spec_.attacks) {
    const AttackCommand& cmd = attack.command;
    if (cmd.vector != VectorTag::WaterTorture &&
        cmd.vector != VectorTag::DnsDirect) {
      flood_targets_.insert(topo_.service(cmd.target));
    }
  }
  for (const LegitFlowSpec& flow : spec_.legit_flows) {
    flood_targets_.insert(topo_.service(flow.target));
  }
  schedule_timelines(horizon);
  schedule_metrics(horizon);

  engine_.run_until(horizon);

  RunResult result;
  result.metrics = std::move(metrics_);
  result.summary = summarize(result.metrics);
  result.summary.annotations["scenario"] = spec_.name;
  result.summary.annotations["seed"] = std::to_string(seed_);
  for (const auto& [key, value] : spec_.annotations) {
    result.summary.annotations[key] = value;
  }
  result.events_processed = engine_.processed_total();
  result.torture_queries = torture_queries_;
  if (dns_) {
    result.torture_cache_hits = dns_->cache_hits_torture();
    for (std::size_t z = 0; z < dns_->zone_count(); ++z) {
      result.pool_arrivals += dns_->pool_arrivals(z);
    }
  }
  result.final_infected = pop_->infected_total();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();
  return result;
}

}  // namespace

RunResult run_scenario(const ScenarioSpec& spec, const RunOptions& opts) {
  std::uint64_t seed = opts.seed.value_or(spec.seed);
  double horizon = opts.until.value_or(spec.horizon_s);
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("run horizon must be positive");
  }
  ScenarioSpec effective = spec;
  effective.seed = seed;
  Run run(effective, seed);
  RunResult result = run.execute(horizon);

  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    if (opts.format == RunOptions::Format::Csv) {
      result.metrics.export_csv(opts.out_dir);
    }
    write_summary(opts.out_dir + "/summary.txt", result.summary);
  }
  return result;
}

}  // namespace botsim
