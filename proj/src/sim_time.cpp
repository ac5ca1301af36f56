#include "secchain/sim_time.hpp"

#include <charconv>

namespace secchain {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // avoid "-0"
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace secchain
