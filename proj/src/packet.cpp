#include "secchain/packet.hpp"

namespace secchain {

const char* attack_tag_name(AttackTag t) {
  switch (t) {
    case AttackTag::SYNFLOOD: return "SYNFLOOD";
    case AttackTag::DDOS: return "DDOS";
    case AttackTag::SQLI: return "SQLI";
    case AttackTag::XSS: return "XSS";
    case AttackTag::SPAM: return "SPAM";
    case AttackTag::MALWARE: return "MALWARE";
    case AttackTag::VIRUSMAIL: return "VIRUSMAIL";
    case AttackTag::NONE: return "NONE";
  }
  return "NONE";
}

bool parse_attack_tag(const std::string& s, AttackTag* out) {
  for (int i = 0; i < kAttackTagCount; ++i) {
    auto t = static_cast<AttackTag>(i);
    if (s == attack_tag_name(t)) {
      *out = t;
      return true;
    }
  }
  return false;
}

std::string FiveTuple::to_string() const {
  auto ip = [](uint32_t v) {
    return std::to_string((v >> 24) & 255) + "." + std::to_string((v >> 16) & 255) +
           "." + std::to_string((v >> 8) & 255) + "." + std::to_string(v & 255);
  };
  return ip(src_ip) + ":" + std::to_string(src_port) + ">" + ip(dst_ip) + ":" +
         std::to_string(dst_port) + "/" + std::to_string(proto);
}

uint64_t tuple_hash(const FiveTuple& t) {
  uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
  auto mix = [&h](uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(t.src_ip, 4);
  mix(t.src_port, 2);
  mix(t.dst_ip, 4);
  mix(t.dst_port, 2);
  mix(t.proto, 1);
  // splitmix64 finalizer for good low-bit diffusion under modulo.
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ull;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebull;
  h ^= h >> 31;
  return h;
}

}  // namespace secchain
