#include "mmwmac/desim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>

#include "mmwmac/error.hpp"
#include "mmwmac/rng.hpp"

namespace mmwmac {

namespace {

using Ns = std::int64_t;

constexpr std::uint32_t kNoLink = std::numeric_limits<std::uint32_t>::max();
// Link random streams start here so they never meet the topology streams.
constexpr std::uint64_t kLinkStreamBase = std::uint64_t{1} << 32;

Ns to_ns(double us) { return static_cast<Ns>(std::llround(us * 1000.0)); }

enum class EventKind : std::uint8_t { kArrival = 0, kTxEnd = 1, kAttempt = 2, kSlot = 3 };

struct Event {
  Ns time;
  std::uint32_t link;
  EventKind kind;
  std::uint64_t seq;
};

// Min-heap order on (time, link, kind, seq). Slot ticks carry kNoLink so
// they run after every per-link event at the same instant.
struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    if (a.link != b.link) return a.link > b.link;
    if (a.kind != b.kind) return a.kind > b.kind;
    return a.seq > b.seq;
  }
};

class EventQueue {
 public:
  void push(Ns time, std::uint32_t link, EventKind kind) {
    heap_.push({time, link, kind, seq_++});
  }
  bool empty() const { return heap_.empty(); }
  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t seq_ = 0;
};

// Precomputed pairwise relation: kills(i, j) when the transmitter of link j
// causes a collision at the receiver of link i.
class ConflictMap {
 public:
  explicit ConflictMap(const PlanarTopology& topo) : n_(topo.links.size()), bits_(n_ * n_, 0) {
    killers_.resize(n_);
    unblocked_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      unblocked_[i] = link_unblocked(topo, topo.links[i]);
      for (std::size_t j = 0; j < n_; ++j) {
        if (i != j && interferes(topo, topo.links[i], topo.links[j])) {
          bits_[i * n_ + j] = 1;
          killers_[i].push_back(static_cast<std::uint32_t>(j));
        }
      }
    }
  }

  bool kills(std::size_t victim, std::size_t other) const { return bits_[victim * n_ + other]; }
  const std::vector<std::uint32_t>& killers(std::size_t victim) const { return killers_[victim]; }
  bool unblocked(std::size_t i) const { return unblocked_[i]; }

 private:
  std::size_t n_;
  std::vector<char> bits_;
  std::vector<std::vector<std::uint32_t>> killers_;
  std::vector<char> unblocked_;
};

// Head-of-line bookkeeping shared by all protocols.
struct LinkState {
  std::deque<Ns> queue;     // admission times
  Ns saturated_head = 0;    // admission time of the head under saturation
  std::uint32_t failures = 0;  // failed opportunities of the head packet
  Ns next_arrival = 0;
  std::uint64_t arrivals = 0;
  Ns phase = 0;
};

class Engine {
 public:
  Engine(const PlanarTopology& topo, const MacConfig& mac, double duration_s, std::uint64_t seed)
      : topo_(topo),
        mac_(mac),
        conflicts_(topo),
        horizon_(static_cast<Ns>(std::llround(duration_s * 1e9))),
        slot_(to_ns(mac.slot_us)),
        interval_(mac.packet_bytes * 8.0 / mac.cbr_bps * 1e9),
        links_(topo.links.size()) {
    rngs_.reserve(links_.size());
    for (std::size_t i = 0; i < links_.size(); ++i) rngs_.emplace_back(seed, kLinkStreamBase + i);
    stats_.per_link.resize(links_.size());
    delay_sums_.assign(links_.size(), 0.0);
  }

  SimStats run() {
    start_traffic();
    switch (mac_.protocol) {
      case MacKind::kSlottedAloha:
      case MacKind::kTdma:
        run_slotted();
        break;
      case MacKind::kCsma:
      case MacKind::kCsmaCa:
        run_contention();
        break;
    }
    return finish();
  }

 private:
  bool has_packet(std::size_t i) const {
    return mac_.saturated || !links_[i].queue.empty();
  }

  Ns head_admission(std::size_t i) const {
    return mac_.saturated ? links_[i].saturated_head : links_[i].queue.front();
  }

  void start_traffic() {
    if (mac_.saturated) return;
    for (std::size_t i = 0; i < links_.size(); ++i) {
      links_[i].phase = static_cast<Ns>(rngs_[i].uniform() * interval_);
      schedule_arrival(i);
    }
  }

  void schedule_arrival(std::size_t i) {
    LinkState& ls = links_[i];
    ls.next_arrival =
        ls.phase + static_cast<Ns>(std::llround(static_cast<double>(ls.arrivals) * interval_));
    ++ls.arrivals;
    if (ls.next_arrival <= horizon_) {
      events_.push(ls.next_arrival, static_cast<std::uint32_t>(i), EventKind::kArrival);
    }
  }

  // Adds the packet that arrived now; `admit` is its admission time.
  void enqueue(std::size_t i, Ns admit) {
    LinkState& ls = links_[i];
    ls.queue.push_back(admit);
    LinkStats& st = stats_.per_link[i];
    ++st.generated;
    st.max_queue = std::max<std::uint64_t>(st.max_queue, ls.queue.size());
  }

  void deliver(std::size_t i, Ns now) {
    LinkState& ls = links_[i];
    const double delay = static_cast<double>(now - head_admission(i)) / static_cast<double>(slot_);
    stats_.delay_samples.push_back(delay);
    stats_.retransmissions.push_back(ls.failures);
    stats_.sample_link.push_back(static_cast<std::uint32_t>(i));
    delay_sums_[i] += delay;
    ++stats_.per_link[i].delivered;
    ls.failures = 0;
    if (mac_.saturated) {
      ls.saturated_head = now;
    } else {
      ls.queue.pop_front();
    }
  }

  // ---- slotted ALOHA and TDMA ---------------------------------------------

  void run_slotted() {
    const Ns slots = horizon_ / slot_;
    if (slots > 0) events_.push(0, kNoLink, EventKind::kSlot);
    transmitting_.assign(links_.size(), 0);
    while (!events_.empty()) {
      const Event e = events_.pop();
      if (e.kind == EventKind::kArrival) {
        // Packets join the queue at the next slot boundary.
        const Ns admit = (e.time + slot_ - 1) / slot_ * slot_;
        enqueue(e.link, admit);
        schedule_arrival(e.link);
        continue;
      }
      const Ns index = e.time / slot_;
      if (mac_.protocol == MacKind::kSlottedAloha) {
        aloha_slot(e.time);
      } else {
        tdma_slot(index, e.time);
      }
      if (index + 1 < slots) events_.push(e.time + slot_, kNoLink, EventKind::kSlot);
    }
  }

  void aloha_slot(Ns start) {
    const Ns end = start + slot_;
    active_.clear();
    for (std::size_t i = 0; i < links_.size(); ++i) {
      transmitting_[i] = 0;
      if (!has_packet(i)) continue;
      if (rngs_[i].uniform() < mac_.tx_prob) {
        transmitting_[i] = 1;
        active_.push_back(i);
      } else {
        ++links_[i].failures;
      }
    }
    for (std::size_t i : active_) {
      LinkStats& st = stats_.per_link[i];
      ++st.attempts;
      if (!conflicts_.unblocked(i)) {
        ++st.blocked;
        ++links_[i].failures;
        continue;
      }
      const auto& killers = conflicts_.killers(i);
      const bool collided = std::any_of(killers.begin(), killers.end(),
                                        [&](std::uint32_t j) { return transmitting_[j] != 0; });
      if (collided) {
        ++st.collided;
        ++links_[i].failures;
      } else {
        deliver(i, end);
      }
    }
  }

  void tdma_slot(Ns index, Ns start) {
    if (links_.empty()) return;
    const std::size_t i = static_cast<std::size_t>(index % static_cast<Ns>(links_.size()));
    if (!has_packet(i)) return;
    LinkStats& st = stats_.per_link[i];
    ++st.attempts;
    if (!conflicts_.unblocked(i)) {
      ++st.blocked;
      ++links_[i].failures;
      return;
    }
    deliver(i, start + slot_);
  }

  // ---- CSMA and CSMA/CA ---------------------------------------------------

  struct Tx {
    Ns start = 0;
    Ns end = 0;
    bool on_air = false;
    bool collided = false;
    bool blocked = false;
  };

  enum class Phase { kIdle, kWaiting, kOnAir };

  bool with_handshake() const { return mac_.protocol == MacKind::kCsmaCa; }

  // The transmission of `other` and a new attempt by `self` cannot coexist.
  bool conflict(std::size_t self, std::size_t other) const {
    if (conflicts_.kills(self, other)) return true;
    return with_handshake() && conflicts_.kills(other, self);
  }

  Ns backoff(std::size_t i) {
    const auto draw = static_cast<Ns>(rngs_[i].uniform() * cw_[i]);
    return draw * to_ns(mac_.backoff_slot_us);
  }

  void schedule_attempt(std::size_t i, Ns at) {
    phase_[i] = Phase::kWaiting;
    if (at <= horizon_) events_.push(at, static_cast<std::uint32_t>(i), EventKind::kAttempt);
  }

  void run_contention() {
    const std::size_t n = links_.size();
    tx_.assign(n, Tx{});
    phase_.assign(n, Phase::kIdle);
    cw_.assign(n, mac_.cw_min);
    on_air_.clear();
    difs_ = to_ns(mac_.difs_us);
    sifs_ = to_ns(mac_.sifs_us);
    control_ = to_ns(mac_.control_airtime_us());
    if (mac_.saturated) {
      for (std::size_t i = 0; i < n; ++i) schedule_attempt(i, difs_ + backoff(i));
    }
    while (!events_.empty()) {
      const Event e = events_.pop();
      const std::size_t i = e.link;
      switch (e.kind) {
        case EventKind::kArrival:
          enqueue(i, e.time);
          schedule_arrival(i);
          if (phase_[i] == Phase::kIdle) schedule_attempt(i, e.time + difs_);
          break;
        case EventKind::kAttempt:
          attempt(i, e.time);
          break;
        case EventKind::kTxEnd:
          if (tx_[i].on_air && tx_[i].end == e.time) finish_tx(i, e.time);
          break;
        case EventKind::kSlot:
          break;
      }
    }
  }

  void attempt(std::size_t i, Ns now) {
    // Sense: anything already on the air that this attempt would clash with.
    Ns busy_until = -1;
    for (std::size_t j : on_air_) {
      const Tx& t = tx_[j];
      if (t.start < now && t.end > now && conflict(i, j)) busy_until = std::max(busy_until, t.end);
    }
    if (busy_until >= 0) {
      schedule_attempt(i, busy_until + difs_ + backoff(i));
      return;
    }

    Tx& mine = tx_[i];
    mine = Tx{};
    mine.start = now;
    mine.on_air = true;
    ++stats_.per_link[i].attempts;
    const Ns timeout = control_ + sifs_ + control_;
    if (with_handshake()) {
      mine.end = now + timeout + sifs_ + slot_;
      if (mac_.include_ack) mine.end += sifs_ + control_;
      if (!conflicts_.unblocked(i)) {
        mine.blocked = true;
        mine.end = now + timeout;
      }
      for (std::size_t j : on_air_) {
        Tx& other = tx_[j];
        // Sensing rules out everything older, so only simultaneous
        // handshakes can clash; both then time out.
        if (other.end <= now || other.start != now || !conflict(i, j)) continue;
        mine.collided = true;
        if (!other.collided && !other.blocked) {
          other.collided = true;
          other.end = other.start + timeout;
          events_.push(other.end, static_cast<std::uint32_t>(j), EventKind::kTxEnd);
        }
      }
      if (mine.collided) mine.end = now + timeout;
    } else {
      mine.end = now + slot_;
      mine.blocked = !conflicts_.unblocked(i);
      for (std::size_t j : on_air_) {
        Tx& other = tx_[j];
        if (other.end <= now) continue;
        if (conflicts_.kills(i, j)) mine.collided = true;
        if (conflicts_.kills(j, i)) other.collided = true;
      }
    }
    on_air_.push_back(i);
    phase_[i] = Phase::kOnAir;
    events_.push(mine.end, static_cast<std::uint32_t>(i), EventKind::kTxEnd);
  }

  void finish_tx(std::size_t i, Ns now) {
    Tx& t = tx_[i];
    t.on_air = false;
    on_air_.erase(std::find(on_air_.begin(), on_air_.end(), i));
    LinkStats& st = stats_.per_link[i];
    if (t.blocked || t.collided) {
      if (t.blocked) {
        ++st.blocked;
      } else {
        ++st.collided;
      }
      ++links_[i].failures;
      cw_[i] = std::min(2 * cw_[i], mac_.cw_max);
      schedule_attempt(i, now + difs_ + backoff(i));
      return;
    }
    deliver(i, now);
    cw_[i] = mac_.cw_min;
    if (has_packet(i)) {
      schedule_attempt(i, now + difs_ + backoff(i));
    } else {
      phase_[i] = Phase::kIdle;
    }
  }

  SimStats finish() {
    const double slots = static_cast<double>(horizon_) / static_cast<double>(slot_);
    stats_.slots = slots;
    double total = 0.0;
    for (std::size_t i = 0; i < links_.size(); ++i) {
      LinkStats& st = stats_.per_link[i];
      if (st.delivered > 0) st.mean_delay_slots = delay_sums_[i] / static_cast<double>(st.delivered);
      total += static_cast<double>(st.delivered);
    }
    if (slots > 0.0) {
      stats_.network_throughput = total / slots;
      if (!links_.empty()) {
        stats_.per_link_throughput = stats_.network_throughput / static_cast<double>(links_.size());
      }
    }
    stats_.ase = stats_.network_throughput / topo_.region.area();
    return std::move(stats_);
  }

  const PlanarTopology& topo_;
  const MacConfig& mac_;
  ConflictMap conflicts_;
  Ns horizon_;
  Ns slot_;
  double interval_;  // ns between CBR arrivals
  std::vector<LinkState> links_;
  std::vector<CounterRng> rngs_;
  EventQueue events_;
  SimStats stats_;
  std::vector<double> delay_sums_;

  // Slotted state.
  std::vector<char> transmitting_;
  std::vector<std::size_t> active_;

  // Contention state.
  std::vector<Tx> tx_;
  std::vector<Phase> phase_;
  std::vector<int> cw_;
  std::vector<std::size_t> on_air_;
  Ns difs_ = 0;
  Ns sifs_ = 0;
  Ns control_ = 0;
};

void require_config(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void MacConfig::validate() const {
  require_config(tx_prob >= 0.0 && tx_prob <= 1.0, "tx_prob must lie in [0, 1]");
  require_config(cw_min >= 1 && cw_max >= cw_min, "need 1 <= cw_min <= cw_max");
  require_config(slot_us > 0.0 && backoff_slot_us > 0.0 && sifs_us > 0.0 && difs_us > 0.0,
                 "durations must be positive");
  require_config(packet_bytes > 0.0 && control_frame_bytes > 0.0, "frame sizes must be positive");
  require_config(data_rate_bps > 0.0 && control_rate_bps > 0.0 && cbr_bps > 0.0,
                 "rates must be positive");
  require_config(std::isfinite(slot_us + backoff_slot_us + sifs_us + difs_us + packet_bytes +
                               control_frame_bytes + data_rate_bps + control_rate_bps + cbr_bps),
                 "timing parameters must be finite");
  // Nanosecond event clock.
  require_config(to_ns(slot_us) >= 1 && to_ns(backoff_slot_us) >= 1,
                 "slot and backoff slot must be at least 1 ns");
}

const char* to_string(MacKind kind) {
  switch (kind) {
    case MacKind::kSlottedAloha:
      return "slotted_aloha";
    case MacKind::kTdma:
      return "tdma";
    case MacKind::kCsma:
      return "csma";
    case MacKind::kCsmaCa:
      return "csma_ca";
  }
  return "unknown";
}

MacKind mac_kind_from_string(const std::string& name) {
  for (MacKind k : {MacKind::kSlottedAloha, MacKind::kTdma, MacKind::kCsma, MacKind::kCsmaCa}) {
    if (name == to_string(k)) return k;
  }
  throw ConfigError("unknown protocol '" + name +
                    "' (expected slotted_aloha, tdma, csma or csma_ca)");
}

double csma_ca_cycle_us(const MacConfig& mac) {
  mac.validate();
  const double control = mac.control_airtime_us();
  double cycle = mac.difs_us + control + mac.sifs_us + control + mac.sifs_us;
  if (mac.include_ack) cycle += mac.sifs_us + control;
  return cycle;
}

double csma_ca_utilization(const MacConfig& mac, double data_airtime_us) {
  if (!(data_airtime_us > 0.0)) throw ConfigError("data airtime must be positive");
  return data_airtime_us / (data_airtime_us + csma_ca_cycle_us(mac));
}

SimStats run(const PlanarTopology& topo, const MacConfig& mac, double duration_s,
             std::uint64_t seed) {
  mac.validate();
  if (!(duration_s > 0.0 && std::isfinite(duration_s))) {
    throw ConfigError("simulated duration must be positive");
  }
  if (!(topo.region.area() > 0.0)) throw DomainError("region must have positive area");
  Engine engine(topo, mac, duration_s, seed);
  return engine.run();
}

}  // namespace mmwmac
