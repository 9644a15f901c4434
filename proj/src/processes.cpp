#include "rwmm/processes.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

namespace rwmm {

namespace {

std::vector<double> cumulative(const std::vector<Rational>& probs) {
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += to_double(probs[i]);
    cdf[i] = acc;
  }
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

std::vector<std::size_t> reachable(const std::vector<std::vector<Rational>>& m, bool reverse) {
  const std::size_t n = m.size();
  std::vector<std::size_t> level(n, n);
  std::queue<std::size_t> todo;
  level[0] = 0;
  todo.push(0);
  while (!todo.empty()) {
    const std::size_t u = todo.front();
    todo.pop();
    for (std::size_t v = 0; v < n; ++v) {
      const bool edge = reverse ? m[v][u] > 0 : m[u][v] > 0;
      if (edge && level[v] == n) {
        level[v] = level[u] + 1;
        todo.push(v);
      }
    }
  }
  return level;
}

void require_waypoints(std::span<const Cell> waypoints, std::size_t needed, const PathAlphabet& alphabet) {
  if (waypoints.size() < needed) {
    throw InputError("need at least " + std::to_string(needed) + " waypoints, got " + std::to_string(waypoints.size()));
  }
  for (Cell c : waypoints.first(needed)) {
    if (!alphabet.grid().contains(c)) throw InputError("waypoint outside the grid");
  }
}

class EnumerationBudget {
 public:
  explicit EnumerationBudget(std::size_t cap) : cap_(cap) {}
  void spend(std::size_t n = 1) {
    used_ += n;
    if (used_ > cap_) {
      throw CapacityError("cylinder enumeration exceeded the cap of " + std::to_string(cap_));
    }
  }

 private:
  std::size_t cap_;
  std::size_t used_ = 0;
};

// Sums the channel product over every fill of the free positions, pruning
// branches whose symbol falls outside its family.
Rational pattern_sum(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                     std::span<const std::optional<PathId>> pattern, std::size_t at, EnumerationBudget& budget) {
  if (at == pattern.size()) return Rational(1);
  const Cell from = waypoints[at];
  const Cell to = waypoints[at + 1];
  const Rational weight(1, static_cast<long long>(alphabet.family_size(from, to)));
  if (pattern[at]) {
    budget.spend();
    const PathId id = *pattern[at];
    if (id >= alphabet.size()) throw InputError("path index " + std::to_string(id) + " outside the alphabet");
    if (!alphabet.in_family(id, from, to)) return Rational(0);
    Rational rest = pattern_sum(alphabet, waypoints, pattern, at + 1, budget);
    return rest == 0 ? rest : Rational(weight * rest);
  }
  Rational total(0);
  budget.spend(alphabet.size());
  for (PathId id = 0; id < alphabet.size(); ++id) {
    if (!alphabet.in_family(id, from, to)) continue;
    total += weight * pattern_sum(alphabet, waypoints, pattern, at + 1, budget);
  }
  return total;
}

std::size_t checked_product(std::span<const std::size_t> sizes, std::size_t cap, const char* what) {
  std::size_t total = 1;
  for (std::size_t s : sizes) {
    if (s != 0 && total > cap / s) {
      throw CapacityError(std::string(what) + " enumeration exceeds the cap of " + std::to_string(cap));
    }
    total *= s;
  }
  if (total > cap) throw CapacityError(std::string(what) + " enumeration exceeds the cap of " + std::to_string(cap));
  return total;
}

// Visits every sequence whose i-th element is drawn from choices[i].
template <class Fn>
void for_each_product(const std::vector<std::vector<PathId>>& choices, Fn&& fn) {
  std::vector<std::size_t> digit(choices.size(), 0);
  std::vector<PathId> current(choices.size());
  for (const auto& c : choices) {
    if (c.empty()) return;
  }
  while (true) {
    for (std::size_t i = 0; i < choices.size(); ++i) current[i] = choices[i][digit[i]];
    fn(std::span<const PathId>(current));
    std::size_t i = choices.size();
    while (i > 0) {
      --i;
      if (++digit[i] < choices[i].size()) break;
      digit[i] = 0;
      if (i == 0) return;
    }
    if (choices.empty()) return;
  }
}

}  // namespace

WaypointProcessSpec WaypointProcessSpec::iid_uniform(const GridSpec& grid) {
  grid.validate();
  WaypointProcessSpec spec;
  spec.kind_ = Kind::kIidUniform;
  spec.grid_ = grid;
  const std::size_t n = grid.cell_count();
  spec.initial_.assign(n, Rational(1, static_cast<long long>(n)));
  spec.initial_cdf_ = cumulative(spec.initial_);
  return spec;
}

WaypointProcessSpec WaypointProcessSpec::markov(const GridSpec& grid, std::vector<std::vector<Rational>> transition,
                                                std::vector<Rational> initial) {
  grid.validate();
  const std::size_t n = grid.cell_count();
  std::vector<ConfigIssue> issues;
  if (transition.size() != n) {
    issues.push_back({0, "transition matrix needs " + std::to_string(n) + " rows, got " + std::to_string(transition.size())});
  }
  if (initial.size() != n) {
    issues.push_back({0, "initial distribution needs " + std::to_string(n) + " entries, got " + std::to_string(initial.size())});
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));

  for (std::size_t i = 0; i < n; ++i) {
    if (transition[i].size() != n) {
      issues.push_back({0, "transition row " + std::to_string(i) + " has " + std::to_string(transition[i].size()) + " entries"});
      continue;
    }
    Rational sum(0);
    for (const auto& v : transition[i]) {
      if (v < 0) issues.push_back({0, "negative transition probability in row " + std::to_string(i)});
      sum += v;
    }
    if (sum != 1) issues.push_back({0, "transition row " + std::to_string(i) + " sums to " + to_string(sum) + ", not 1"});
  }
  Rational init_sum(0);
  for (const auto& v : initial) {
    if (v < 0) issues.push_back({0, "negative initial probability"});
    init_sum += v;
  }
  if (init_sum != 1) issues.push_back({0, "initial distribution sums to " + to_string(init_sum) + ", not 1"});
  if (!issues.empty()) throw ConfigError(std::move(issues));

  const auto forward = reachable(transition, false);
  const auto backward = reachable(transition, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (forward[i] == n || backward[i] == n) throw ConfigError("markov waypoint chain is not irreducible");
  }
  std::size_t period = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (transition[u][v] > 0) {
        const long long diff = static_cast<long long>(forward[u]) + 1 - static_cast<long long>(forward[v]);
        period = std::gcd(period, static_cast<std::size_t>(diff < 0 ? -diff : diff));
      }
    }
  }
  if (period != 1) throw ConfigError("markov waypoint chain is periodic with period " + std::to_string(period));

  WaypointProcessSpec spec;
  spec.kind_ = Kind::kMarkov;
  spec.grid_ = grid;
  spec.transition_ = std::move(transition);
  spec.initial_ = std::move(initial);
  spec.initial_cdf_ = cumulative(spec.initial_);
  spec.transition_cdf_.reserve(n);
  for (const auto& row : spec.transition_) spec.transition_cdf_.push_back(cumulative(row));
  return spec;
}

Rational WaypointProcessSpec::initial(std::size_t from) const { return initial_.at(from); }

Rational WaypointProcessSpec::transition(std::size_t from, std::size_t to) const {
  if (kind_ == Kind::kIidUniform) return initial_.at(to);
  return transition_.at(from).at(to);
}

std::vector<Rational> WaypointProcessSpec::marginal(std::size_t k) const {
  std::vector<Rational> dist = initial_;
  if (kind_ == Kind::kIidUniform) return dist;
  const std::size_t n = dist.size();
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<Rational> next(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) next[j] += dist[i] * transition_[i][j];
    }
    dist = std::move(next);
  }
  return dist;
}

WaypointProcessSpec make_local_markov(const GridSpec& grid) {
  grid.validate();
  const std::size_t n = grid.cell_count();
  std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Cell a = grid.cell(i);
    long long total = 0;
    std::vector<long long> weight(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Cell b = grid.cell(j);
      const bool near = std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1;
      weight[j] = near ? 2 : 1;
      total += weight[j];
    }
    for (std::size_t j = 0; j < n; ++j) matrix[i][j] = Rational(weight[j], total);
  }
  std::vector<Rational> initial(n, Rational(1, static_cast<long long>(n)));
  return WaypointProcessSpec::markov(grid, std::move(matrix), std::move(initial));
}

Rational waypoint_cylinder_prob(const WaypointProcessSpec& spec, const WaypointCylinder& ev) {
  if (ev.symbols.empty()) throw InputError("cylinder must fix at least one symbol");
  const GridSpec& grid = spec.grid();
  for (Cell c : ev.symbols) {
    if (!grid.contains(c)) throw InputError("waypoint cylinder symbol outside the grid");
  }
  if (spec.kind() == WaypointProcessSpec::Kind::kIidUniform) {
    return Rational(BigInt(1), boost::multiprecision::pow(BigInt(spec.symbol_count()), static_cast<unsigned>(ev.symbols.size())));
  }
  Rational prob = spec.marginal(ev.start)[grid.index(ev.symbols.front())];
  for (std::size_t i = 1; i < ev.symbols.size() && prob != 0; ++i) {
    prob *= spec.transition(grid.index(ev.symbols[i - 1]), grid.index(ev.symbols[i]));
  }
  return prob;
}

Rational channel_cylinder_prob(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                               std::span<const PathId> paths) {
  require_waypoints(waypoints, paths.size() + 1, alphabet);
  BigInt denominator = 1;
  bool supported = true;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths[i] >= alphabet.size()) {
      throw InputError("path index " + std::to_string(paths[i]) + " outside alphabet of size " + std::to_string(alphabet.size()));
    }
    if (!alphabet.in_family(paths[i], waypoints[i], waypoints[i + 1])) {
      supported = false;
      continue;
    }
    denominator *= alphabet.family_size(waypoints[i], waypoints[i + 1]);
  }
  if (!supported) return Rational(0);
  return Rational(BigInt(1), denominator);
}

Rational channel_pattern_prob(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                              std::span<const std::optional<PathId>> pattern, std::size_t cap) {
  require_waypoints(waypoints, pattern.size() + 1, alphabet);
  EnumerationBudget budget(cap);
  return pattern_sum(alphabet, waypoints, pattern, 0, budget);
}

StationarityResult check_channel_stationarity(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                                              std::size_t horizon, std::size_t cap) {
  if (horizon == 0) throw InputError("stationarity horizon must be at least 1");
  require_waypoints(waypoints, horizon + 2, alphabet);

  std::vector<std::vector<PathId>> choices(horizon);
  std::vector<std::size_t> sizes(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    for (const auto& fam : {alphabet.family(waypoints[i], waypoints[i + 1]),
                            alphabet.family(waypoints[i + 1], waypoints[i + 2])}) {
      choices[i].insert(choices[i].end(), fam.begin(), fam.end());
    }
    std::sort(choices[i].begin(), choices[i].end());
    choices[i].erase(std::unique(choices[i].begin(), choices[i].end()), choices[i].end());
    sizes[i] = choices[i].size();
  }
  checked_product(sizes, cap, "stationarity cylinder");

  const auto shifted_waypoints = waypoints.subspan(1);
  StationarityResult result{Rational(0), 0};
  std::vector<std::optional<PathId>> pulled_back(horizon + 1);
  for_each_product(choices, [&](std::span<const PathId> cylinder) {
    const Rational lhs = channel_cylinder_prob(alphabet, shifted_waypoints, cylinder);
    pulled_back[0].reset();
    for (std::size_t i = 0; i < horizon; ++i) pulled_back[i + 1] = cylinder[i];
    const Rational rhs = channel_pattern_prob(alphabet, waypoints, pulled_back, cap);
    const Rational diff = abs(Rational(lhs - rhs));
    if (diff > result.max_discrepancy) result.max_discrepancy = diff;
    ++result.cylinders_checked;
  });
  return result;
}

MixingResult check_output_mixing(const PathAlphabet& alphabet, std::span<const Cell> waypoints,
                                 std::span<const PathId> a, std::span<const PathId> b, std::size_t tau,
                                 std::size_t cap) {
  if (a.empty() || b.empty()) throw InputError("mixing events must fix at least one path");
  const std::size_t span = std::max(b.size(), tau + a.size());
  require_waypoints(waypoints, span + 1, alphabet);

  std::vector<std::optional<PathId>> shifted(tau + a.size());
  for (std::size_t i = 0; i < a.size(); ++i) shifted[tau + i] = a[i];

  std::vector<std::optional<PathId>> joint(span);
  bool disjoint = false;
  for (std::size_t i = 0; i < b.size(); ++i) joint[i] = b[i];
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto& slot = joint[tau + i];
    if (slot && *slot != a[i]) disjoint = true;
    slot = a[i];
  }

  MixingResult result;
  result.premise_met = tau >= b.size();
  result.shifted = channel_pattern_prob(alphabet, waypoints, shifted, cap);
  result.base = channel_cylinder_prob(alphabet, waypoints, b);
  result.joint = disjoint ? Rational(0) : channel_pattern_prob(alphabet, waypoints, joint, cap);
  result.discrepancy = abs(Rational(result.joint - result.shifted * result.base));
  return result;
}

Rational channel_normalization(const PathAlphabet& alphabet, std::span<const Cell> waypoints, std::size_t horizon,
                               std::size_t cap) {
  require_waypoints(waypoints, horizon + 1, alphabet);
  std::vector<std::vector<PathId>> choices(horizon);
  std::vector<std::size_t> sizes(horizon);
  for (std::size_t i = 0; i < horizon; ++i) {
    auto fam = alphabet.family(waypoints[i], waypoints[i + 1]);
    choices[i].assign(fam.begin(), fam.end());
    sizes[i] = fam.size();
  }
  checked_product(sizes, cap, "admissible cylinder");
  Rational total(0);
  for_each_product(choices, [&](std::span<const PathId> cylinder) {
    total += channel_cylinder_prob(alphabet, waypoints, cylinder);
  });
  return total;
}

Rational path_process_prob(const WaypointProcessSpec& spec, const PathAlphabet& alphabet, const PathCylinder& ev,
                           std::size_t horizon, std::size_t cap) {
  if (ev.symbols.empty()) throw InputError("cylinder must fix at least one symbol");
  if (!(spec.grid() == alphabet.grid())) throw InputError("waypoint process and alphabet use different grids");
  if (horizon < ev.end() + 1) {
    throw InputError("horizon " + std::to_string(horizon) + " too short: event needs " + std::to_string(ev.end() + 1) +
                     " waypoints");
  }
  const std::size_t symbols = spec.symbol_count();
  std::vector<std::size_t> sizes(horizon, symbols);
  const std::size_t prefixes = checked_product(sizes, cap, "waypoint prefix");

  std::vector<std::optional<PathId>> pattern(ev.end());
  for (std::size_t i = 0; i < ev.symbols.size(); ++i) pattern[ev.start + i] = ev.symbols[i];

  const GridSpec& grid = spec.grid();
  std::vector<std::size_t> digit(horizon, 0);
  std::vector<Cell> prefix(horizon);
  Rational total(0);
  for (std::size_t count = 0; count < prefixes; ++count) {
    for (std::size_t i = 0; i < horizon; ++i) prefix[i] = grid.cell(digit[i]);
    const Rational weight = waypoint_cylinder_prob(spec, WaypointCylinder{0, prefix});
    if (weight != 0) {
      const Rational nu = channel_pattern_prob(alphabet, prefix, pattern, cap);
      if (nu != 0) total += weight * nu;
    }
    for (std::size_t i = horizon; i-- > 0;) {
      if (++digit[i] < symbols) break;
      digit[i] = 0;
    }
  }
  return total;
}

WaypointSampler::WaypointSampler(const WaypointProcessSpec& spec, std::uint64_t seed)
    : spec_(&spec), rng_(make_rng(seed, Stream::kWaypoints)) {}

Cell WaypointSampler::next() {
  std::size_t symbol;
  if (spec_->kind() == WaypointProcessSpec::Kind::kIidUniform) {
    symbol = std::uniform_int_distribution<std::size_t>(0, spec_->symbol_count() - 1)(rng_);
  } else if (!last_) {
    symbol = draw(spec_->initial_cdf(), rng_);
  } else {
    symbol = draw(spec_->transition_cdf(*last_), rng_);
  }
  last_ = symbol;
  return spec_->grid().cell(symbol);
}

PathSampler::PathSampler(const PathAlphabet& alphabet, std::uint64_t seed)
    : alphabet_(&alphabet), rng_(make_rng(seed, Stream::kPaths)) {}

PathId PathSampler::next(Cell from, Cell to) {
  const auto family = alphabet_->family(from, to);
  if (family.size() == 1) return family.front();
  return family[std::uniform_int_distribution<std::size_t>(0, family.size() - 1)(rng_)];
}

std::vector<Cell> sample_waypoints(const WaypointProcessSpec& spec, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw InputError("waypoint count must be at least 1");
  WaypointSampler sampler(spec, seed);
  std::vector<Cell> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

std::vector<PathId> sample_paths(const PathAlphabet& alphabet, std::span<const Cell> waypoints, std::uint64_t seed) {
  PathSampler sampler(alphabet, seed);
  std::vector<PathId> out;
  if (waypoints.size() < 2) return out;
  out.reserve(waypoints.size() - 1);
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    if (!alphabet.grid().contains(waypoints[i]) || !alphabet.grid().contains(waypoints[i + 1])) {
      throw InputError("waypoint outside the grid");
    }
    out.push_back(sampler.next(waypoints[i], waypoints[i + 1]));
  }
  return out;
}

}  // namespace rwmm
