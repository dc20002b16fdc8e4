#include "net/topology_build.hpp"

#include <stdexcept>

namespace botsim {

NodeId BuiltTopology::service(const std::string& name) const {
  for (const auto& [n, id] : service_nodes) {
    if (n == name) return id;
  }
  throw std::invalid_argument("unknown service node: " + name);
}

std::uint32_t BuiltTopology::region_index(const std::string& name) const {
  for (std::uint32_t i = 0; i < region_names.size(); ++i) {
    if (region_names[i] == name) return i;
  }
  throw std::invalid_argument("unknown region: " + name);
}

namespace {

// Balanced contiguous assignment of child i (of n) to one of m parents.
std::uint32_t parent_of(std::uint32_t i, std::uint32_t n, std::uint32_t m) {
  return static_cast<std::uint32_t>(
      (static_cast<std::uint64_t>(i) * m) / n);
}

void check_positive(double v, const char* what, const std::string& region) {
  if (!(v > 0.0)) {
    throw std::invalid_argument(std::string(what) +
                                " must be positive in region " + region);
  }
}

}  // namespace

BuiltTopology build_topology(const TopologySpec& spec) {
  BuiltTopology out;
  Network& net = out.net;

  if (spec.core_routers == 0) {
    throw std::invalid_argument("topology needs at least one core router");
  }
  if (!(spec.core_link_bps > 0.0)) {
    throw std::invalid_argument("core link capacity must be positive");
  }

  std::vector<NodeId> cores;
  for (std::uint32_t i = 0; i < spec.core_routers; ++i) {
    cores.push_back(net.add_node(NodeKind::CoreRouter, kCoreRegion));
  }
  out.first_core = cores[0];
  for (std::uint32_t i = 0; i < cores.size(); ++i) {
    for (std::uint32_t j = i + 1; j < cores.size(); ++j) {
      net.add_duplex(cores[i], cores[j], spec.core_link_bps,
                     spec.core_latency_s);
    }
  }

  for (std::uint32_t r = 0; r < spec.regions.size(); ++r) {
    const AccessRegionSpec& reg = spec.regions[r];
    if (reg.brases == 0 || reg.dslams == 0 || reg.cpes == 0) {
      throw std::invalid_argument("region " + reg.name +
                                  " must have at least one BRAS/DSLAM/CPE");
    }
    check_positive(reg.device_uplink_bps, "device uplink", reg.name);
    check_positive(reg.cpe_uplink_bps, "CPE uplink", reg.name);
    check_positive(reg.dslam_uplink_bps, "DSLAM uplink", reg.name);
    check_positive(reg.bras_uplink_bps, "BRAS uplink", reg.name);
    const std::uint32_t worst_bras_sessions =
        (reg.cpes + reg.brases - 1) / reg.brases;
    if (worst_bras_sessions > kBrasSessionCap) {
      throw std::invalid_argument(
          "region " + reg.name + " puts " +
          std::to_string(worst_bras_sessions) +
          " CPE sessions on one BRAS (cap " +
          std::to_string(kBrasSessionCap) + ")");
    }

    const RegionId rid = static_cast<RegionId>(r);
    NodeId core_attach = cores[r % cores.size()];
    out.region_bras_core.push_back(core_attach);
    out.region_names.push_back(reg.name);

    std::vector<NodeId> brases, dslams, cpes;
    for (std::uint32_t i = 0; i < reg.brases; ++i) {
      NodeId b = net.add_node(NodeKind::Bras, rid, core_attach);
      net.add_duplex(b, core_attach, reg.bras_uplink_bps, spec.core_latency_s);
      brases.push_back(b);
    }
    out.region_first_bras.push_back(brases[0]);
    for (std::uint32_t i = 0; i < reg.dslams; ++i) {
      NodeId parent = brases[parent_of(i, reg.dslams, reg.brases)];
      NodeId d = net.add_node(NodeKind::Dslam, rid, parent);
      net.add_duplex(d, parent, reg.dslam_uplink_bps, reg.access_latency_s);
      dslams.push_back(d);
    }
    for (std::uint32_t i = 0; i < reg.cpes; ++i) {
      NodeId parent = dslams[parent_of(i, reg.cpes, reg.dslams)];
      NodeId c = net.add_node(NodeKind::CpeRouter, rid, parent);
      net.add_duplex(c, parent, reg.cpe_uplink_bps, reg.access_latency_s);
      cpes.push_back(c);
    }
    if (!reg.device_uplinks.empty() &&
        reg.device_uplinks.size() != reg.devices) {
      throw std::invalid_argument("region " + reg.name +
                                  ": device_uplinks size mismatch");
    }
    for (std::uint32_t i = 0; i < reg.devices; ++i) {
      NodeId parent = cpes[parent_of(i, reg.devices, reg.cpes)];
      NodeId d = net.add_node(NodeKind::IotDevice, rid, parent);
      const double uplink = reg.device_uplinks.empty()
                                ? reg.device_uplink_bps
                                : reg.device_uplinks[i];
      if (!(uplink > 0.0)) {
        throw std::invalid_argument("region " + reg.name +
                                    ": device uplink must be positive");
      }
      net.add_duplex(d, parent, uplink, reg.access_latency_s);
      out.devices.push_back(d);
      out.device_region.push_back(r);
    }

    if (reg.has_resolver) {
      check_positive(reg.resolver_link_bps, "resolver link", reg.name);
      NodeId res = net.add_node(NodeKind::RecursiveDns, rid, core_attach);
      net.add_duplex(res, core_attach, reg.resolver_link_bps,
                     spec.core_latency_s);
      out.region_resolver.push_back(res);
    } else {
      out.region_resolver.push_back(kNoNode);
    }
  }

  for (const ServiceNodeSpec& svc : spec.services) {
    if (!(svc.ingress_bps > 0.0)) {
      throw std::invalid_argument("service " + svc.name +
                                  " has non-positive ingress capacity");
    }
    RegionId rid = kCoreRegion;
    NodeId attach = cores[0];
    if (!svc.region.empty()) {
      std::uint32_t r = out.region_index(svc.region);
      rid = static_cast<RegionId>(r);
      attach = out.region_bras_core[r];
    }
    NodeId id = net.add_node(svc.kind, rid, attach);
    net.add_duplex(id, attach, svc.ingress_bps, svc.latency_s);
    out.service_nodes.emplace_back(svc.name, id);
  }

  net.finalize();
  return out;
}

}  // namespace botsim
