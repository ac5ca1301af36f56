#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "secchain/sim_time.hpp"

namespace secchain {

enum class Direction : uint8_t { External = 0, Internal = 1 };

inline const char* direction_name(Direction d) {
  return d == Direction::External ? "external" : "internal";
}

// Attack classes a packet can carry. Order is canonical: workload generation
// draws against the attack mix cumulatively in this order, and detection
// reporting uses it for stable output.
enum class AttackTag : uint8_t {
  SYNFLOOD = 0,
  DDOS,
  SQLI,
  XSS,
  SPAM,
  MALWARE,
  VIRUSMAIL,
  NONE,
};

inline constexpr int kAttackTagCount = 7;

const char* attack_tag_name(AttackTag t);
bool parse_attack_tag(const std::string& s, AttackTag* out);

struct FiveTuple {
  uint32_t src_ip = 0;
  uint16_t src_port = 0;
  uint32_t dst_ip = 0;
  uint16_t dst_port = 0;
  uint8_t proto = 6;

  bool operator==(const FiveTuple& o) const {
    return src_ip == o.src_ip && src_port == o.src_port && dst_ip == o.dst_ip &&
           dst_port == o.dst_port && proto == o.proto;
  }
  bool operator<(const FiveTuple& o) const {
    auto k = [](const FiveTuple& t) {
      return std::array<uint64_t, 3>{
          (uint64_t(t.src_ip) << 16) | t.src_port,
          (uint64_t(t.dst_ip) << 16) | t.dst_port, uint64_t(t.proto)};
    };
    return k(*this) < k(o);
  }

  // Direction-canonical form: endpoints sorted so both directions of a
  // session map to the same key (required for session affinity).
  FiveTuple canonical() const {
    uint64_t a = (uint64_t(src_ip) << 16) | src_port;
    uint64_t b = (uint64_t(dst_ip) << 16) | dst_port;
    if (a <= b) return *this;
    return FiveTuple{dst_ip, dst_port, src_ip, src_port, proto};
  }

  std::string to_string() const;
};

// FNV-1a over the canonical tuple bytes with a splitmix finalizer; stable
// across platforms so golden bucket values hold everywhere.
uint64_t tuple_hash(const FiveTuple& canonical_tuple);

struct TupleHash {
  size_t operator()(const FiveTuple& t) const {
    return static_cast<size_t>(tuple_hash(t));
  }
};

// Symbolic packet traversing the simulation; no byte-level payload.
struct PacketDescriptor {
  FiveTuple tuple;
  int service = -1;
  Direction direction = Direction::External;
  int bucket = 0;
  int64_t size_bytes = 1500;
  AttackTag tag = AttackTag::NONE;
  bool encrypted = false;
  Tick timestamp = 0;
  // Position of this packet within its session's stream; a non-first packet
  // arriving at a node without the session entry counts as a re-establishment.
  int64_t session_packet_index = 0;
};

}  // namespace secchain
