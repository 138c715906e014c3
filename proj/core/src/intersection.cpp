#include "jlab/intersection.hpp"

#include "jlab/errors.hpp"

#include <algorithm>
#include <set>

namespace jlab {

SymmetricTable::SymmetricTable(int arity, int rank) : arity_(arity), rank_(rank) {
  if (arity < 0 || rank < 0) throw ArgumentError("symmetric table: negative arity or rank");
}

void SymmetricTable::set(std::vector<int> index, const Rational& value) {
  if (static_cast<int>(index.size()) != arity_) {
    throw ArgumentError("symmetric table: index has wrong arity");
  }
  for (int i : index) {
    if (i < 0 || i >= rank_) throw ArgumentError("symmetric table: index out of range");
  }
  std::sort(index.begin(), index.end());
  if (value == 0) {
    entries_.erase(index);
  } else {
    entries_[index] = value;
  }
}

Rational SymmetricTable::at(std::vector<int> index) const {
  std::sort(index.begin(), index.end());
  auto it = entries_.find(index);
  return it == entries_.end() ? Rational(0) : it->second;
}

Rational SymmetricTable::evaluate(std::span<const ClassVector> classes) const {
  if (static_cast<int>(classes.size()) != arity_) {
    throw ArgumentError("expected " + std::to_string(arity_) + " classes, got " +
                        std::to_string(classes.size()));
  }
  for (const auto& c : classes) {
    if (static_cast<int>(c.size()) != rank_) {
      throw ArgumentError("class vector has wrong dimension");
    }
  }
  if (arity_ == 0) return at({});
  // Sum over stored sorted tuples, expanding each into its distinct permutations.
  Rational total = 0;
  for (const auto& [index, value] : entries_) {
    std::vector<int> perm = index;
    Rational sum = 0;
    do {
      Rational term = 1;
      for (int k = 0; k < arity_ && term != 0; ++k) term *= classes[k][perm[k]];
      sum += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    total += value * sum;
  }
  return total;
}

bool SymmetricTable::operator==(const SymmetricTable& other) const {
  return arity_ == other.arity_ && rank_ == other.rank_ && entries_ == other.entries_;
}

GeometryModel::GeometryModel(int n, std::vector<std::string> basis, SymmetricTable top,
                             std::vector<SubvarietyRecord> subvarieties,
                             std::vector<CurveRecord> curves, std::optional<ClassVector> canonical)
    : n_(n),
      basis_(std::move(basis)),
      top_(std::move(top)),
      subvarieties_(std::move(subvarieties)),
      curves_(std::move(curves)),
      canonical_(std::move(canonical)) {
  if (n_ < 1) throw ValidationError("geometry: dimension must be at least 1");
  if (basis_.empty()) throw ValidationError("geometry: empty basis");
  if (top_.arity() != n_ || top_.rank() != rank()) {
    throw ValidationError("geometry: top form must be " + std::to_string(n_) + "-linear on the basis");
  }
  std::set<std::string> names;
  for (const auto& z : subvarieties_) {
    if (z.m < 1 || z.m >= n_) {
      throw ValidationError("geometry: subvariety '" + z.name + "' must have 1 <= m < n");
    }
    if (z.cap.arity() != z.m || z.cap.rank() != rank()) {
      throw ValidationError("geometry: cap table of '" + z.name + "' has wrong shape");
    }
    if (!names.insert(z.name).second) {
      throw ValidationError("geometry: duplicate subvariety name '" + z.name + "'");
    }
  }
  for (const auto& c : curves_) {
    if (static_cast<int>(c.dual.size()) != rank()) {
      throw ValidationError("geometry: curve '" + c.name + "' has wrong dimension");
    }
    for (const auto& z : subvarieties_) {
      if (z.name != c.name) continue;
      if (z.m != 1) throw ValidationError("geometry: curve '" + c.name + "' listed with m != 1");
      for (int i = 0; i < rank(); ++i) {
        if (z.cap.at({i}) != c.dual[static_cast<std::size_t>(i)]) {
          throw ValidationError("geometry: curve '" + c.name +
                                "' disagrees with its subvariety record");
        }
      }
    }
  }
  if (canonical_) check_class(*canonical_, "K_X");
}

GeometryModel GeometryModel::with_subvarieties(std::vector<SubvarietyRecord> subvarieties) const {
  return GeometryModel(n_, basis_, top_, std::move(subvarieties), curves_, canonical_);
}

void GeometryModel::check_class(const ClassVector& c, const char* what) const {
  if (static_cast<int>(c.size()) != rank()) {
    throw ArgumentError(std::string(what) + " has " + std::to_string(c.size()) +
                        " coefficients, basis has " + std::to_string(rank()));
  }
}

Rational intersect(const GeometryModel& geometry, std::span<const ClassVector> classes) {
  if (static_cast<int>(classes.size()) != geometry.n()) {
    throw ArgumentError("intersect: expected " + std::to_string(geometry.n()) + " classes");
  }
  return geometry.top().evaluate(classes);
}

Rational cap(const GeometryModel& geometry, const SubvarietyRecord& z,
             std::span<const ClassVector> classes) {
  if (static_cast<int>(classes.size()) != z.m) {
    throw ArgumentError("cap: '" + z.name + "' expects " + std::to_string(z.m) + " classes");
  }
  for (const auto& c : classes) geometry.check_class(c, "class");
  return z.cap.evaluate(classes);
}

namespace {

std::vector<ClassVector> repeat(const ClassVector& a, int k, const ClassVector& b, int l) {
  if (k < 0 || l < 0) throw ArgumentError("mixed_power: negative exponent");
  std::vector<ClassVector> out(static_cast<std::size_t>(k), a);
  out.insert(out.end(), static_cast<std::size_t>(l), b);
  return out;
}

}  // namespace

Rational mixed_power(const GeometryModel& geometry, const ClassVector& alpha, int k,
                     const ClassVector& beta, int l) {
  return intersect(geometry, repeat(alpha, k, beta, l));
}

Rational mixed_power(const GeometryModel& geometry, const SubvarietyRecord& z,
                     const ClassVector& alpha, int k, const ClassVector& beta, int l) {
  return cap(geometry, z, repeat(alpha, k, beta, l));
}

Rational normalization_ratio(const GeometryModel& geometry, const ClassVector& alpha,
                             const ClassVector& beta) {
  geometry.check_class(alpha, "alpha");
  geometry.check_class(beta, "beta");
  const int n = geometry.n();
  const Rational volume = mixed_power(geometry, alpha, n, beta, 0);
  if (volume == 0) throw DegenerateClassError("normalization_ratio: alpha^n = 0");
  return mixed_power(geometry, alpha, n - 1, beta, 1) / volume;
}

bool normalization_bound_holds(const GeometryModel& geometry, const ClassVector& alpha,
                               const ClassVector& beta) {
  return normalization_ratio(geometry, alpha, beta) <= 1;
}

bool kahler_test(const GeometryModel& geometry, const ClassVector& alpha) {
  geometry.check_class(alpha, "class");
  if (mixed_power(geometry, alpha, geometry.n(), alpha, 0) <= 0) return false;
  for (const auto& c : geometry.curves()) {
    Rational pairing = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) pairing += alpha[i] * c.dual[i];
    if (pairing <= 0) return false;
  }
  return true;
}

bool nef_test(const GeometryModel& geometry, const ClassVector& beta) {
  geometry.check_class(beta, "class");
  for (const auto& c : geometry.curves()) {
    Rational pairing = 0;
    for (std::size_t i = 0; i < beta.size(); ++i) pairing += beta[i] * c.dual[i];
    if (pairing < 0) return false;
  }
  return true;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::kUniformlyJPositive: return "uniformly-J-positive";
    case Classification::kJPositive: return "J-positive";
    case Classification::kJNef: return "J-nef";
    case Classification::kFails: return "fails";
  }
  return "fails";
}

Verdict j_verdict(const GeometryModel& geometry, const ClassVector& alpha, const ClassVector& beta,
                  const Rational& epsilon) {
  if (epsilon < 0) throw ArgumentError("j_verdict: epsilon must be non-negative");
  if (!kahler_test(geometry, alpha)) throw DomainError("j_verdict: alpha is not Kahler");
  if (!nef_test(geometry, beta)) throw DomainError("j_verdict: beta is not nef");
  const int n = geometry.n();

  Verdict v;
  v.epsilon = epsilon;
  v.c = normalization_ratio(geometry, alpha, beta);
  if (v.c <= 0) throw DomainError("j_verdict: alpha^{n-1}.beta must be positive");
  v.global_slope = n * v.c;
  const Rational uniform_bound = (n - epsilon) * v.c;

  bool strict = true;
  bool weak = true;
  bool uniform = true;
  for (const auto& z : geometry.subvarieties()) {
    SlopeEntry e;
    e.name = z.name;
    e.m = z.m;
    const Rational volume = mixed_power(geometry, z, alpha, z.m, beta, 0);
    if (volume <= 0) {
      e.kahler_violation = true;
      strict = weak = uniform = false;
      if (!v.witness) v.witness = z.name;
    } else {
      const Rational slope = z.m * mixed_power(geometry, z, alpha, z.m - 1, beta, 1) / volume;
      e.slope = slope;
      e.margin = v.global_slope - slope;
      if (slope >= v.global_slope) strict = false;
      if (slope > uniform_bound) uniform = false;
      if (slope > v.global_slope) {
        weak = false;
        if (!v.witness) {
          v.witness = z.name;
          v.witness_slope = slope;
        }
      }
    }
    v.per_z.push_back(std::move(e));
  }
  if (epsilon > 0) v.uniform = uniform;
  if (epsilon > 0 && uniform) {
    v.classification = Classification::kUniformlyJPositive;
  } else if (strict) {
    v.classification = Classification::kJPositive;
  } else if (weak) {
    v.classification = Classification::kJNef;
    for (const auto& e : v.per_z) {
      if (e.slope && *e.slope == v.global_slope) {
        v.witness = e.name;
        v.witness_slope = e.slope;
        break;
      }
    }
  } else {
    v.classification = Classification::kFails;
  }
  return v;
}

CsckVerdict csck_slope_test(const GeometryModel& geometry, const ClassVector& gamma,
                            const Rational& epsilon, const std::optional<Rational>& alpha_invariant) {
  if (!geometry.canonical()) throw ConfigurationError("csck_slope_test: geometry has no K_X");
  if (epsilon < 0) throw ArgumentError("csck_slope_test: epsilon must be non-negative");
  if (!kahler_test(geometry, gamma)) throw DomainError("csck_slope_test: gamma is not Kahler");
  const ClassVector& k = *geometry.canonical();
  const int n = geometry.n();

  CsckVerdict v;
  v.epsilon = epsilon;
  v.ratio = mixed_power(geometry, gamma, n - 1, k, 1) / mixed_power(geometry, gamma, n, k, 0);
  v.passes = true;
  for (const auto& z : geometry.subvarieties()) {
    CsckEntry e;
    e.name = z.name;
    e.m = z.m;
    e.rhs = (n + (n - z.m) * epsilon) * v.ratio;
    const Rational volume = mixed_power(geometry, z, gamma, z.m, k, 0);
    if (volume <= 0) {
      e.kahler_violation = true;
    } else {
      e.lhs = z.m * mixed_power(geometry, z, gamma, z.m - 1, k, 1) / volume;
    }
    if (!e.lhs || *e.lhs > e.rhs) {
      if (v.passes) v.witness = z.name;
      v.passes = false;
    }
    v.per_z.push_back(std::move(e));
  }
  if (alpha_invariant) v.alpha_gate = epsilon < Rational(n + 1, n) * *alpha_invariant;
  return v;
}

CsckSweep csck_sweep(const GeometryModel& geometry, const ClassVector& gamma, const Rational& t_lo,
                     const Rational& t_hi, const Rational& epsilon, int iterations) {
  if (!geometry.canonical()) throw ConfigurationError("csck_sweep: geometry has no K_X");
  if (!(t_lo < t_hi)) throw ArgumentError("csck_sweep: requires t_lo < t_hi");
  if (iterations < 0) throw ArgumentError("csck_sweep: negative iteration count");
  const ClassVector& k = *geometry.canonical();
  CsckSweep out;
  auto passes = [&](const Rational& t) {
    ++out.evaluations;
    const ClassVector g = add(k, scale(gamma, t));
    if (!kahler_test(geometry, g)) return false;
    return csck_slope_test(geometry, g, epsilon).passes;
  };
  if (passes(t_hi)) {
    out.largest_passing = t_hi;
    return out;
  }
  out.smallest_failing = t_hi;
  if (!passes(t_lo)) {
    out.smallest_failing = t_lo;
    return out;
  }
  Rational lo = t_lo;
  Rational hi = t_hi;
  for (int i = 0; i < iterations; ++i) {
    const Rational mid = (lo + hi) / 2;
    if (passes(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.largest_passing = lo;
  out.smallest_failing = hi;
  return out;
}

ClassVector add(const ClassVector& a, const ClassVector& b) {
  if (a.size() != b.size()) throw ArgumentError("class dimension mismatch");
  ClassVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

ClassVector scale(const ClassVector& a, const Rational& t) {
  ClassVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * t;
  return out;
}

}  // namespace jlab
