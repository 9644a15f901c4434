#include "rwmm/errors.hpp"
#include "rwmm/random.hpp"
#include "rwmm/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <sstream>

namespace rwmm {

namespace {

std::string join_issues(const std::vector<ConfigIssue>& issues) {
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out << "; ";
    if (issues[i].line) out << "line " << issues[i].line << ": ";
    out << issues[i].message;
  }
  return out.str();
}

BigInt parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw InputError("invalid number '" + std::string(whole) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') throw InputError("invalid number '" + std::string(whole) + "'");
  }
  return BigInt(std::string(digits));
}

}  // namespace

ConfigError::ConfigError(std::string message)
    : ConfigError(std::vector<ConfigIssue>{{0, std::move(message)}}) {}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

std::size_t enumeration_cap() {
  const char* env = std::getenv("RWMM_ENUM_CAP");
  if (!env || !*env) return kDefaultEnumerationCap;
  std::size_t value = 0;
  std::string_view text(env);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    throw ConfigError("RWMM_ENUM_CAP must be a positive integer, got '" + std::string(text) + "'");
  }
  return value;
}

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(body.substr(0, slash), text);
    BigInt den = parse_integer(body.substr(slash + 1), text);
    if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    value = Rational(num, den);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) throw InputError("invalid number '" + std::string(text) + "'");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt w = whole.empty() ? BigInt(0) : parse_integer(whole, text);
    BigInt f = frac.empty() ? BigInt(0) : parse_integer(frac, text);
    value = Rational(w * scale + f, scale);
  } else {
    value = Rational(parse_integer(body, text));
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  const auto num = boost::multiprecision::numerator(value);
  const auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::uint64_t state = seed;
  std::uint64_t a = splitmix64(state);
  state = a ^ (static_cast<std::uint64_t>(stream) * 0xd1b54a32d192ed03ULL);
  std::uint64_t b = splitmix64(state);
  state = b ^ (index * 0x8cb92ba72f3d8dd7ULL + 0x632be59bd9b4e019ULL);
  return splitmix64(state);
}

}  // namespace rwmm
