#include "sumprod/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sumprod::model {

namespace {

constexpr long long kMaxExplicitSpan = 100'000'000;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

long long param_or(const Coloring::RuleParams& p, const std::string& k,
                   long long dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : it->second;
}

}  // namespace

Coloring::RuleParams parse_rule_params(const std::string& text) {
  Coloring::RuleParams out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) {
    if (cur.empty()) continue;
    auto eq = cur.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("rule parameter '" + cur + "' is not k=v");
    out[cur.substr(0, eq)] = std::stoll(cur.substr(eq + 1));
  }
  return out;
}

Coloring Coloring::explicit_bits(long long lo, std::vector<bool> bits) {
  if (bits.empty()) throw std::invalid_argument("empty coloring");
  if (lo < 1) throw std::invalid_argument("coloring lo must be >= 1");
  Coloring c;
  c.lo_ = lo;
  c.hi_ = lo + static_cast<long long>(bits.size()) - 1;
  c.bits_ = std::move(bits);
  return c;
}

Coloring Coloring::from_rule(const std::string& name, const RuleParams& params,
                             long long lo, long long hi) {
  if (lo < 1 || lo > hi) throw std::invalid_argument("bad rule coloring interval");
  Coloring c;
  c.lo_ = lo;
  c.hi_ = hi;
  c.rule_name_ = name;
  c.rule_params_ = params;
  if (name == "const") {
    long long v = param_or(params, "c", 0);
    if (v != 0 && v != 1) throw std::runtime_error("const rule: c must be 0 or 1");
  } else if (name == "threshold") {
    param_or(params, "t", 10);
  } else if (name == "parity") {
    // color = v mod 2
  } else if (name == "geoblocks") {
    long long L = param_or(params, "L", 10);
    if (L < 2) throw std::runtime_error("geoblocks rule: L must be >= 2");
  } else if (name == "blocks") {
    // `count` noise blocks of length L plus `noise` single points, all
    // pseudo-randomly placed below `cutoff`; the complement is the thick
    // class. cls is the label of the noise class.
    long long L = param_or(params, "L", 16);
    long long seed = param_or(params, "seed", 1);
    long long count = param_or(params, "count", 2);
    long long noise = param_or(params, "noise", 6);
    long long cutoff = param_or(params, "cutoff", 20000);
    long long cls = param_or(params, "cls", 1);
    if (L < 1 || count < 0 || noise < 0) throw std::runtime_error("blocks rule: bad parameters");
    if (cls != 0 && cls != 1) throw std::runtime_error("blocks rule: cls must be 0 or 1");
    if (cutoff < L + 3) throw std::runtime_error("blocks rule: cutoff too small");
    c.noise_class_ = static_cast<int>(cls);
    for (long long j = 0; j < count; ++j) {
      long long start =
          2 + static_cast<long long>(splitmix64(static_cast<uint64_t>(seed) * 0x51ed2701ULL + j) %
                                     static_cast<uint64_t>(cutoff - L - 1));
      c.noise_blocks_.emplace_back(start, start + L);
    }
    for (long long j = 0; j < noise; ++j) {
      long long p =
          2 + static_cast<long long>(splitmix64(static_cast<uint64_t>(seed) * 0x2545f491ULL + 1000 + j) %
                                     static_cast<uint64_t>(cutoff - 1));
      c.noise_points_.push_back(p);
    }
    std::sort(c.noise_blocks_.begin(), c.noise_blocks_.end());
    std::sort(c.noise_points_.begin(), c.noise_points_.end());
  } else {
    throw std::runtime_error("unknown coloring rule '" + name + "'");
  }
  return c;
}

Coloring Coloring::parse_spec(const std::string& spec, long long lo, long long hi) {
  if (spec.rfind("file:", 0) == 0) return load(spec.substr(5));
  if (spec.rfind("rule:", 0) == 0) {
    std::string rest = spec.substr(5);
    auto colon = rest.find(':');
    std::string name = colon == std::string::npos ? rest : rest.substr(0, colon);
    RuleParams params = colon == std::string::npos
                            ? RuleParams{}
                            : parse_rule_params(rest.substr(colon + 1));
    if (lo == 0 && hi == 0)
      throw std::runtime_error("rule coloring needs --lo/--hi bounds");
    return from_rule(name, params, lo, hi);
  }
  throw std::runtime_error("coloring spec must start with file: or rule:");
}

Coloring Coloring::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coloring file: " + path);
  long long lo, hi;
  if (!(in >> lo >> hi)) throw std::runtime_error("coloring file: bad header");
  std::string bits;
  if (!(in >> bits)) throw std::runtime_error("coloring file: missing bits");
  if (static_cast<long long>(bits.size()) != hi - lo + 1)
    throw std::runtime_error("coloring file: bit string length " +
                             std::to_string(bits.size()) + " != interval size " +
                             std::to_string(hi - lo + 1));
  std::vector<bool> v;
  v.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1')
      throw std::runtime_error("coloring file: bits must be 0/1");
    v.push_back(ch == '1');
  }
  return explicit_bits(lo, std::move(v));
}

int Coloring::rule_color(long long v) const {
  if (rule_name_ == "const") return static_cast<int>(param_or(rule_params_, "c", 0));
  if (rule_name_ == "threshold")
    return v >= param_or(rule_params_, "t", 10) ? 1 : 0;
  if (rule_name_ == "parity") return static_cast<int>(v % 2);
  if (rule_name_ == "geoblocks") {
    long long L = param_or(rule_params_, "L", 10);
    int k = 0;
    long long p = 1;
    while (p <= v / L) {
      p *= L;
      ++k;
    }
    return k % 2;
  }
  // blocks
  for (auto [s, e] : noise_blocks_)
    if (v >= s && v < e) return noise_class_;
  if (std::binary_search(noise_points_.begin(), noise_points_.end(), v))
    return noise_class_;
  return 1 - noise_class_;
}

int Coloring::color_of(long long v) const {
  if (v < lo_ || v > hi_)
    throw DomainError("value " + std::to_string(v) + " outside coloring domain [" +
                      std::to_string(lo_) + "," + std::to_string(hi_) + "]");
  if (!bits_.empty()) return bits_[static_cast<std::size_t>(v - lo_)] ? 1 : 0;
  return rule_color(v);
}

int Coloring::color_of(const BigInt& v) const {
  auto s = to_i64(v);
  if (!s)
    throw DomainError("value " + sumprod::to_string(v) +
                      " outside coloring domain [" + std::to_string(lo_) + "," +
                      std::to_string(hi_) + "]");
  return color_of(*s);
}

std::optional<int> Coloring::monochromatic_color(const InstanceValues& vals) const {
  int first = color_of(vals.values.front());
  for (const auto& v : vals.values)
    if (color_of(v) != first) return std::nullopt;
  return first;
}

std::optional<int> Coloring::monochromatic_color(const std::vector<long long>& vals) const {
  int first = color_of(vals.front());
  for (long long v : vals)
    if (color_of(v) != first) return std::nullopt;
  return first;
}

std::string Coloring::describe() const {
  if (is_explicit()) return "explicit[" + std::to_string(lo_) + "," + std::to_string(hi_) + "]";
  std::string s = "rule:" + rule_name_;
  char sep = ':';
  for (const auto& [k, v] : rule_params_) {
    s += sep + k + "=" + std::to_string(v);
    sep = ',';
  }
  return s;
}

std::optional<long long> Coloring::class_upper_bound(int cls) const {
  if (rule_name_ == "const") {
    long long c = param_or(rule_params_, "c", 0);
    if (cls != c) return 0;  // empty class
    return std::nullopt;
  }
  if (rule_name_ == "threshold") {
    long long t = param_or(rule_params_, "t", 10);
    if (cls == 0) return t - 1;
    return std::nullopt;
  }
  if (rule_name_ == "blocks") {
    if (cls == noise_class_) {
      long long m = 0;
      for (auto [s, e] : noise_blocks_) m = std::max(m, e - 1);
      for (long long p : noise_points_) m = std::max(m, p);
      return m;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

Coloring Coloring::restricted(long long lo2, long long hi2) const {
  if (lo2 < lo_ || hi2 > hi_ || lo2 > hi2)
    throw std::invalid_argument("restriction not nested in coloring domain");
  Coloring c = *this;
  if (!bits_.empty()) {
    c.bits_.assign(bits_.begin() + (lo2 - lo_), bits_.begin() + (hi2 - lo_ + 1));
  }
  c.lo_ = lo2;
  c.hi_ = hi2;
  return c;
}

std::string Coloring::to_file_string() const {
  if (hi_ - lo_ + 1 > kMaxExplicitSpan)
    throw CapError("coloring too large to serialize");
  std::ostringstream ss;
  ss << lo_ << ' ' << hi_ << '\n';
  for (long long v = lo_; v <= hi_; ++v) ss << (color_of(v) ? '1' : '0');
  ss << '\n';
  return ss.str();
}

void Coloring::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write coloring file: " + path);
  out << to_file_string();
}

}  // namespace sumprod::model
