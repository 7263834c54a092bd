#include "eventaug/seed.hpp"

namespace eventaug {

std::uint64_t derive_seed(std::uint64_t master, std::string_view key) noexcept {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return derive_seed(master, h);
}

} // namespace eventaug
