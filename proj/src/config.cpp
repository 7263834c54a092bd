#include "eventaug/config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>

#include "eventaug/error.hpp"
#include "eventaug/io.hpp"

namespace eventaug {

void AugConfig::validate() const {
  if (base_slices == 0)
    throw InvalidArgument("base_T must be at least 1");
  if (msti.n == 0 || msti.m == 0)
    throw InvalidArgument("msti.n and msti.m must be at least 1");
  if (msti.enabled)
    MstiSpec{base_slices, msti.n, msti.m}.validate();
  if (!(ssem.r >= 0.0 && ssem.r <= 1.0))
    throw InvalidArgument("ssem.r must lie in [0, 1]");
  if (ssem.patch_size == 0)
    throw InvalidArgument("ssem.patch_size must be at least 1");
  if (!(tsem.p >= 0.0 && tsem.p <= 1.0))
    throw InvalidArgument("tsem.p must lie in [0, 1]");
  if (tsem.scope.kind == DropScope::Kind::TopFraction &&
      !(tsem.scope.fraction > 0.0 && tsem.scope.fraction <= 1.0))
    throw InvalidArgument("tsem.q must lie in (0, 1]");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_value(std::string_view v, bool &out) {
  if (v == "true" || v == "1" || v == "yes" || v == "on")
    out = true;
  else if (v == "false" || v == "0" || v == "no" || v == "off")
    out = false;
  else
    return false;
  return true;
}

template <typename Num> bool parse_value(std::string_view v, Num &out) {
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  return ec == std::errc{} && ptr == v.data() + v.size();
}

using Setter = std::function<bool(AugConfig &, std::string_view)>;

template <typename T> Setter field(T AugConfig::*member) {
  return [member](AugConfig &c, std::string_view v) { return parse_value(v, c.*member); };
}

template <typename Sub, typename T> Setter field(Sub AugConfig::*sub, T Sub::*member) {
  return [sub, member](AugConfig &c, std::string_view v) {
    return parse_value(v, (c.*sub).*member);
  };
}

const std::map<std::string, Setter, std::less<>> &setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"base_T", field(&AugConfig::base_slices)},
      {"seed", field(&AugConfig::seed)},
      {"polarity_encoding",
       [](AugConfig &c, std::string_view v) {
         if (v == "neg-one/one")
           c.polarity = PolarityEncoding::NegOneOne;
         else if (v == "zero/one")
           c.polarity = PolarityEncoding::ZeroOne;
         else
           return false;
         return true;
       }},
      {"msti.enabled", field(&AugConfig::msti, &MstiOptions::enabled)},
      {"msti.n", field(&AugConfig::msti, &MstiOptions::n)},
      {"msti.m", field(&AugConfig::msti, &MstiOptions::m)},
      {"ssem.enabled", field(&AugConfig::ssem, &SsemOptions::enabled)},
      {"ssem.r", field(&AugConfig::ssem, &SsemOptions::r)},
      {"ssem.patch_size", field(&AugConfig::ssem, &SsemOptions::patch_size)},
      {"ssem.per_frame", field(&AugConfig::ssem, &SsemOptions::per_frame)},
      {"tsem.enabled", field(&AugConfig::tsem, &TsemOptions::enabled)},
      {"tsem.p", field(&AugConfig::tsem, &TsemOptions::p)},
      {"tsem.scope",
       [](AugConfig &c, std::string_view v) {
         if (v == "all")
           c.tsem.scope.kind = DropScope::Kind::AllSlices;
         else if (v == "top")
           c.tsem.scope.kind = DropScope::Kind::TopFraction;
         else
           return false;
         return true;
       }},
      {"tsem.q",
       [](AugConfig &c, std::string_view v) { return parse_value(v, c.tsem.scope.fraction); }},
  };
  return table;
}

std::string format_double(double v) {
  // Shortest representation that parses back to the same value.
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

} // namespace

AugConfig parse_config(std::string_view text) {
  AugConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw FormatError("expected 'key = value'", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
      throw FormatError("unknown config key '" + std::string(key) + "'", line_no);
    if (!it->second(config, value))
      throw FormatError("invalid value '" + std::string(value) + "' for " +
                            std::string(key),
                        line_no);
  }
  config.validate();
  return config;
}

AugConfig load_config(const std::filesystem::path &path) {
  const Bytes bytes = read_file(path);
  return parse_config(
      std::string_view(reinterpret_cast<const char *>(bytes.data()), bytes.size()));
}

std::string format_config(const AugConfig &c) {
  auto b = [](bool v) { return v ? "true" : "false"; };
  std::string out;
  out += "base_T = " + std::to_string(c.base_slices) + "\n";
  out += "seed = " + std::to_string(c.seed) + "\n";
  out += std::string("polarity_encoding = ") +
         (c.polarity == PolarityEncoding::ZeroOne ? "zero/one" : "neg-one/one") + "\n";
  out += std::string("msti.enabled = ") + b(c.msti.enabled) + "\n";
  out += "msti.n = " + std::to_string(c.msti.n) + "\n";
  out += "msti.m = " + std::to_string(c.msti.m) + "\n";
  out += std::string("ssem.enabled = ") + b(c.ssem.enabled) + "\n";
  out += "ssem.r = " + format_double(c.ssem.r) + "\n";
  out += "ssem.patch_size = " + std::to_string(c.ssem.patch_size) + "\n";
  out += std::string("ssem.per_frame = ") + b(c.ssem.per_frame) + "\n";
  out += std::string("tsem.enabled = ") + b(c.tsem.enabled) + "\n";
  out += "tsem.p = " + format_double(c.tsem.p) + "\n";
  out += std::string("tsem.scope = ") +
         (c.tsem.scope.kind == DropScope::Kind::TopFraction ? "top" : "all") + "\n";
  out += "tsem.q = " + format_double(c.tsem.scope.fraction) + "\n";
  return out;
}

} // namespace eventaug
