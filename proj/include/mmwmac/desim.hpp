#pragma once

// Discrete-event emulator of a planar directional network: aligned links,
// line-segment obstacles, constant-bit-rate traffic and four channel access
// schemes (slotted ALOHA, TDMA, CSMA, CSMA/CA).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mmwmac/geometry.hpp"
#include "mmwmac/model.hpp"

namespace mmwmac {

struct Region {
  double width = 10.0;
  double height = 10.0;

  double area() const { return width * height; }
  bool contains(Point p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
};

struct Link {
  Point tx;
  Point rx;
  double tx_axis = 0.0;  // direction tx -> rx
  double rx_axis = 0.0;  // direction rx -> tx
  std::uint32_t receiver_id = 0;

  double length() const { return distance(tx, rx); }
};

// How obstacles decide line of sight. kSegments is the physical emulator;
// kCoherenceSectors applies the receiver-centric coherence-angle rule (an
// obstacle center shadows everything behind it within the same sector of the
// receiver's beam) so that simulated topologies follow the analytic model.
enum class BlockageModel { kSegments, kCoherenceSectors };

struct PlanarTopology {
  std::vector<Link> links;
  std::vector<Segment> obstacles;
  Region region;
  double beamwidth = deg_to_rad(20.0);
  double dmax = 15.0;
  double coherence_angle = deg_to_rad(5.0);
  BlockageModel blockage = BlockageModel::kSegments;
};

/// Poisson(lambda_t * area) links with uniform transmitters, uniform beam
/// directions and lengths drawn from 2l/dmax^2; a link whose receiver leaves
/// the region is drawn again. Poisson(lambda_o * area) obstacle segments with
/// uniform centers, orientations in [0, pi) and lengths in [0, 1] m.
PlanarTopology build_topology(const Scenario& s, const Region& region, std::uint64_t seed,
                              BlockageModel blockage = BlockageModel::kSegments);

/// Whether a signal from `from` reaches the receiver of `victim` unobstructed
/// under the topology's blockage model.
bool reaches_receiver(const PlanarTopology& topo, const Link& victim, Point from);

/// The intended transmitter of `link` has line of sight to its receiver.
bool link_unblocked(const PlanarTopology& topo, const Link& link);

/// Transmitter of `other` would cause a collision at the receiver of
/// `victim`: mutual main lobes, within dmax and line of sight, or the same
/// receiver is targeted.
bool interferes(const PlanarTopology& topo, const Link& victim, const Link& other);

/// True iff some other active link collides at the receiver of link
/// `receiver`. `active` lists link indices (may include `receiver`).
bool collision_check(const PlanarTopology& topo, std::size_t receiver,
                     std::span<const std::size_t> active);

enum class MacKind { kSlottedAloha, kTdma, kCsma, kCsmaCa };

struct MacConfig {
  MacKind protocol = MacKind::kSlottedAloha;
  double tx_prob = 1.0;           // slotted ALOHA
  int cw_min = 16;                // CSMA, CSMA/CA backoff window [0, cw)
  int cw_max = 1024;
  double slot_us = 50.0;
  double backoff_slot_us = 5.0;
  double packet_bytes = 10000.0;
  double data_rate_bps = 1.5e9;   // nominal; one data packet occupies one slot
  double control_rate_bps = 27.7e6;
  double sifs_us = 2.5;
  double difs_us = 5.5;
  double control_frame_bytes = 30.0;
  double cbr_bps = 384e6;
  bool saturated = false;         // every queue is always backlogged
  bool include_ack = false;

  void validate() const;
  double control_airtime_us() const { return control_frame_bytes * 8.0 / control_rate_bps * 1e6; }
};

const char* to_string(MacKind kind);
MacKind mac_kind_from_string(const std::string& name);

/// RTS/CTS reservation overhead per data packet:
/// DIFS + RTS + SIFS + CTS + SIFS (+ SIFS + ACK).
double csma_ca_cycle_us(const MacConfig& mac);

/// Fraction of channel time carrying data for one contention-free CSMA/CA
/// exchange.
double csma_ca_utilization(const MacConfig& mac, double data_airtime_us);

struct LinkStats {
  std::uint64_t generated = 0;
  std::uint64_t attempts = 0;
  std::uint64_t delivered = 0;
  std::uint64_t collided = 0;
  std::uint64_t blocked = 0;
  double mean_delay_slots = 0.0;  // over delivered packets; 0 if none
  std::uint64_t max_queue = 0;
};

struct SimStats {
  std::vector<LinkStats> per_link;
  double slots = 0.0;                // simulated duration in slots
  double per_link_throughput = 0.0;  // mean over links, packets/slot
  double network_throughput = 0.0;   // packets/slot
  double ase = 0.0;                  // packets/slot/m^2
  std::vector<double> delay_samples;  // slots, per delivered packet
  // Per delivered packet: failed channel opportunities before success. For
  // slotted ALOHA every slot at the head of the queue is one opportunity.
  std::vector<std::uint32_t> retransmissions;
  std::vector<std::uint32_t> sample_link;  // link index of each delivered packet
};

/// Runs one replication. Deterministic in (topology, mac, duration, seed).
SimStats run(const PlanarTopology& topo, const MacConfig& mac, double duration_s,
             std::uint64_t seed);

}  // namespace mmwmac
